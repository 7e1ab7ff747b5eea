#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "nhrmt/ensembles.hpp"
#include "nhrmt/spectra.hpp"

using nhrmt::DegeneracyError;
using nhrmt::ParameterError;
using nhrmt::SymmetryClass;
using nhrmt::ensembles::EnsembleSpec;
using namespace nhrmt::spectra;

namespace {

EnsembleSpec make_spec(SymmetryClass cls, int n_half, double g, std::uint64_t seed,
                       std::uint64_t r = 0) {
    EnsembleSpec s;
    s.cls = cls;
    s.n_half = n_half;
    s.width = g;
    s.seed = seed;
    s.realization_index = r;
    return s;
}

std::vector<std::complex<double>> sorted(std::vector<std::complex<double>> v) {
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return v;
}

}  // namespace

TEST_SUITE("spectra") {

TEST_CASE("eigenvalues of a companion matrix recover known polynomial roots") {
    // p(z) = (z - r1)(z - r2)(z - r3) with non-trivial complex roots.
    const std::complex<double> r1(0.7, -1.3), r2(-2.0, 0.25), r3(1.5, 2.0);
    // z^3 - e1 z^2 + e2 z - e3
    const auto e1 = r1 + r2 + r3;
    const auto e2 = r1 * r2 + r1 * r3 + r2 * r3;
    const auto e3 = r1 * r2 * r3;
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(3, 3);
    c(0, 0) = e1;
    c(0, 1) = -e2;
    c(0, 2) = e3;
    c(1, 0) = 1.0;
    c(2, 1) = 1.0;
    const auto got = sorted(eigenvalues(c).eigenvalues);
    const auto want = sorted({r1, r2, r3});
    REQUIRE(got.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(got[i] - want[i]) < 1e-12);
}

TEST_CASE("eigenvalue product equals an independent cofactor determinant") {
    const Eigen::MatrixXcd h =
        nhrmt::ensembles::sample(make_spec(SymmetryClass::A, 3, 1.5, 21));
    // 3x3 determinant by cofactor expansion, no linear algebra library.
    const auto det = h(0, 0) * (h(1, 1) * h(2, 2) - h(1, 2) * h(2, 1)) -
                     h(0, 1) * (h(1, 0) * h(2, 2) - h(1, 2) * h(2, 0)) +
                     h(0, 2) * (h(1, 0) * h(2, 1) - h(1, 1) * h(2, 0));
    const auto ev = eigenvalues(h).eigenvalues;
    std::complex<double> prod(1.0, 0.0);
    for (const auto& z : ev) prod *= z;
    CHECK(std::abs(prod - det) < 1e-12 * std::abs(det) + 1e-14);
}

TEST_CASE("self-dual spectra are twofold degenerate and dedup halves them") {
    for (int n_half : {2, 20, 200}) {
        const EnsembleSpec spec = make_spec(SymmetryClass::AIIdagger, n_half, 2.0, 5);
        const ComplexSpectrum full = eigenvalues(nhrmt::ensembles::sample(spec), spec);
        REQUIRE(static_cast<int>(full.eigenvalues.size()) == 2 * n_half);
        const KramersDedupResult d = kramers_dedup(full);
        CHECK(static_cast<int>(d.spectrum.eigenvalues.size()) == n_half);
        const double scale = nhrmt::ensembles::spectral_radius(SymmetryClass::AIIdagger,
                                                               n_half, 2.0);
        CHECK(d.max_pair_distance < 1e-8 * scale);
        // Representatives keep provenance for downstream weighting.
        REQUIRE(d.spectrum.source.has_value());
        CHECK(d.spectrum.source->cls == SymmetryClass::AIIdagger);
    }
}

TEST_CASE("kramers_dedup rejects foreign or odd input") {
    const EnsembleSpec a = make_spec(SymmetryClass::A, 4, 1.0, 3);
    const ComplexSpectrum sa = eigenvalues(nhrmt::ensembles::sample(a), a);
    CHECK_THROWS_AS(kramers_dedup(sa), ParameterError);

    ComplexSpectrum odd;
    odd.eigenvalues = {{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}};
    odd.source = make_spec(SymmetryClass::AIIdagger, 2, 1.0, 0);
    CHECK_THROWS_AS(kramers_dedup(odd), ParameterError);

    // Genuinely split "pairs" trip the degeneracy guard.
    ComplexSpectrum split;
    split.eigenvalues = {{0.0, 0.0}, {0.5, 0.0}, {3.0, 0.0}, {3.5, 0.0}};
    split.source = make_spec(SymmetryClass::AIIdagger, 2, 1.0, 0);
    CHECK_THROWS_AS(kramers_dedup(split), DegeneracyError);
}

TEST_CASE("radial density integrates back to the matrix dimension") {
    const EnsembleSpec spec = make_spec(SymmetryClass::AIIdagger, 30, 2.0, 11);
    const double radius =
        nhrmt::ensembles::spectral_radius(SymmetryClass::AIIdagger, 30, 2.0);
    std::vector<double> edges;
    for (int k = 0; k <= 24; ++k) edges.push_back(1.5 * radius * k / 24.0);
    RadialDensityAccum acc(edges);
    const int n_real = 4;
    for (int r = 0; r < n_real; ++r) {
        const EnsembleSpec sr = spec.with_realization(static_cast<std::uint64_t>(r));
        acc.add(eigenvalues(nhrmt::ensembles::sample(sr), sr));
    }
    const HistogramEstimate h = acc.estimate();
    REQUIRE(h.n_samples == n_real);
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        const double area = M_PI * (edges[k + 1] * edges[k + 1] - edges[k] * edges[k]);
        total += h.counts[k] * area;
    }
    // All 60 eigenvalues of every realization lie inside 1.5x the radius.
    CHECK(total == doctest::Approx(60.0).epsilon(1e-12));
}

TEST_CASE("merging accumulators matches one-shot accumulation bitwise") {
    const EnsembleSpec spec = make_spec(SymmetryClass::A, 25, 1.0, 2);
    std::vector<double> edges{0.0, 2.0, 4.0, 6.0, 8.0};
    RadialDensityAccum one(edges), left(edges), right(edges);
    for (int r = 0; r < 6; ++r) {
        const EnsembleSpec sr = spec.with_realization(static_cast<std::uint64_t>(r));
        const ComplexSpectrum s = eigenvalues(nhrmt::ensembles::sample(sr), sr);
        one.add(s);
        (r < 3 ? left : right).add(s);
    }
    left.merge(right);
    const HistogramEstimate a = one.estimate();
    const HistogramEstimate b = left.estimate();
    REQUIRE(a.counts.size() == b.counts.size());
    for (std::size_t k = 0; k < a.counts.size(); ++k) {
        CHECK(a.counts[k] == b.counts[k]);
        CHECK(a.std_errors[k] == b.std_errors[k]);
    }
}

TEST_CASE("disk set covariance: exact endpoints and total pair area") {
    const double w = 1.7;
    CHECK(disk_set_covariance_fraction(0.0, w) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(disk_set_covariance_fraction(2.0 * w, w) == doctest::Approx(0.0).epsilon(1e-14));
    // Integrating gamma(r) * 2 pi r dr over [0, 2w] gives the window area.
    double total = 0.0;
    const int nb = 37;
    for (int k = 0; k < nb; ++k) {
        total += effective_pair_bin_area(2.0 * w * k / nb, 2.0 * w * (k + 1) / nb, w);
    }
    CHECK(total == doctest::Approx(M_PI * w * w).epsilon(1e-12));
    // And matches a direct numeric integral of the fraction on one bin.
    const double lo = 0.4, hi = 0.9;
    double num = 0.0;
    const int m = 20000;
    for (int i = 0; i < m; ++i) {
        const double r = lo + (hi - lo) * (i + 0.5) / m;
        num += disk_set_covariance_fraction(r, w) * 2.0 * M_PI * r * (hi - lo) / m;
    }
    CHECK(effective_pair_bin_area(lo, hi, w) == doctest::Approx(num).epsilon(1e-6));
}

TEST_CASE("pair estimator is flat for uniform uncorrelated points") {
    // K i.i.d. uniform points in the window disk: the expected estimate is
    // K(K-1)/(pi w^2)^2 in every separation bin once the effective pair area
    // is used. This is exactly the calibration the naive annulus norm fails.
    const double w = 1.0;
    const int K = 40;
    const int n_real = 3000;
    std::vector<double> edges;
    for (int k = 0; k <= 10; ++k) edges.push_back(2.0 * w * k / 10.0);
    PairCorrelationAccum acc(w, edges);
    std::mt19937_64 gen(12345);
    std::uniform_real_distribution<double> unif(-w, w);
    std::vector<std::complex<double>> pts;
    for (int r = 0; r < n_real; ++r) {
        pts.clear();
        while (static_cast<int>(pts.size()) < K) {
            const double x = unif(gen), y = unif(gen);
            if (x * x + y * y <= w * w) pts.emplace_back(x, y);
        }
        acc.add_points(pts);
    }
    const HistogramEstimate h = acc.estimate();
    const double expect = K * (K - 1.0) / (M_PI * w * w * M_PI * w * w);
    for (std::size_t k = 0; k < h.counts.size(); ++k) {
        INFO("bin ", k, " value ", h.counts[k], " se ", h.std_errors[k]);
        CHECK(std::abs(h.counts[k] - expect) < 4.5 * h.std_errors[k] + 1e-12);
    }
}

TEST_CASE("spacing rejects anything but two distinct levels") {
    ComplexSpectrum one;
    one.eigenvalues = {{1.0, 0.0}};
    CHECK_THROWS_AS(spacing_sample(one), ParameterError);
    ComplexSpectrum three;
    three.eigenvalues = {{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}};
    CHECK_THROWS_AS(spacing_sample(three), ParameterError);
    ComplexSpectrum eq;
    eq.eigenvalues = {{1.0, 2.0}, {1.0, 2.0}};
    CHECK_THROWS_AS(spacing_sample(eq), ParameterError);
    ComplexSpectrum ok;
    ok.eigenvalues = {{0.5, 1.0}, {-0.5, 2.0}};
    CHECK(spacing_sample(ok) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("spacing_samples deduplicates self-dual sources automatically") {
    std::vector<ComplexSpectrum> specs;
    for (int r = 0; r < 8; ++r) {
        const EnsembleSpec sr =
            make_spec(SymmetryClass::AIIdagger, 2, 1.0, 77, static_cast<std::uint64_t>(r));
        specs.push_back(eigenvalues(nhrmt::ensembles::sample(sr), sr));
        REQUIRE(specs.back().eigenvalues.size() == 4);
    }
    const std::vector<double> s = spacing_samples(specs);
    REQUIRE(s.size() == specs.size());
    for (double v : s) CHECK(v > 0.0);
}

}  // TEST_SUITE
