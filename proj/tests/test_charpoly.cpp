#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "nhrmt/charpoly.hpp"
#include "nhrmt/ensembles.hpp"

using nhrmt::SymmetryClass;
using nhrmt::ensembles::EnsembleSpec;
using namespace nhrmt::charpoly;

namespace {

EnsembleSpec make_spec(SymmetryClass cls, int n_half, double g, std::uint64_t seed) {
    EnsembleSpec s;
    s.cls = cls;
    s.n_half = n_half;
    s.width = g;
    s.seed = seed;
    s.realization_index = 0;
    return s;
}

std::complex<double> det3(const Eigen::MatrixXcd& m) {
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

}  // namespace

TEST_SUITE("charpoly") {

TEST_CASE("log determinant against a cofactor expansion") {
    const Eigen::MatrixXcd h =
        nhrmt::ensembles::sample(make_spec(SymmetryClass::AIdagger, 3, 1.0, 31));
    for (const std::complex<double> z :
         {std::complex<double>(0.4, 0.0), std::complex<double>(-1.2, 0.8),
          std::complex<double>(2.5, -0.3)}) {
        Eigen::MatrixXcd m = -h;
        for (int i = 0; i < 3; ++i) m(i, i) += z;
        const double want = std::log(std::abs(det3(m)));
        INFO("z = ", z.real(), " + ", z.imag(), "i");
        CHECK(log_abs_det(z, h) == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("log determinant of an exactly singular matrix is -infinity") {
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(4, 4);
    CHECK(std::isinf(log_abs_det({1.0, 0.0}, id)));
    CHECK(log_abs_det({1.0, 0.0}, id) < 0.0);
    CHECK(std::isfinite(log_abs_det({1.5, 0.0}, id)));
}

TEST_CASE("hessenberg grid path agrees with per-point LU") {
    const Eigen::MatrixXcd h =
        nhrmt::ensembles::sample(make_spec(SymmetryClass::A, 40, 1.5, 7));
    const std::vector<std::complex<double>> zs{
        {0.0, 0.0}, {0.3, 0.0}, {2.0, 0.0}, {-1.5, 0.4}, {7.0, -7.0}};
    const std::vector<double> grid = log_abs_det_grid(zs, h);
    REQUIRE(grid.size() == zs.size());
    for (std::size_t i = 0; i < zs.size(); ++i) {
        INFO("grid point ", i);
        CHECK(grid[i] == doctest::Approx(log_abs_det(zs[i], h)).epsilon(1e-10));
    }
}

TEST_CASE("conjugation invariance of the absolute determinant") {
    const Eigen::MatrixXcd h =
        nhrmt::ensembles::sample(make_spec(SymmetryClass::AIIdagger, 15, 2.0, 9));
    const std::complex<double> z(0.8, -0.6);
    CHECK(log_abs_det(z, h) ==
          doctest::Approx(log_abs_det(std::conj(z), h.adjoint())).epsilon(1e-9));
}

TEST_CASE("moment estimator against a linear-domain brute-force average") {
    // dim 2, n = 1: E|det(z - H)|^2 fits comfortably in double, so average
    // it directly and compare with the log-sum-exp block machinery.
    const EnsembleSpec spec = make_spec(SymmetryClass::A, 2, 1.0, 17);
    const std::complex<double> z(0.9, 0.0);
    const std::int64_t n_samples = 400;
    double mean = 0.0;
    for (std::int64_t r = 0; r < n_samples; ++r) {
        const Eigen::MatrixXcd h =
            nhrmt::ensembles::sample(spec.with_realization(static_cast<std::uint64_t>(r)));
        const std::complex<double> det =
            (z - h(0, 0)) * (z - h(1, 1)) - h(0, 1) * h(1, 0);
        mean += std::norm(det);
    }
    mean /= static_cast<double>(n_samples);
    const MomentEstimate est = z1_moment_mc(spec, 1, z, n_samples);
    CHECK(est.n_samples == n_samples);
    CHECK(est.n_dropped == 0);
    CHECK(est.log_mean == doctest::Approx(std::log(mean)).epsilon(1e-12));
    CHECK(est.std_error_rel > 0.0);
}

TEST_CASE("replica index zero gives the unit moment exactly") {
    const EnsembleSpec spec = make_spec(SymmetryClass::AIdagger, 4, 2.0, 3);
    const MomentEstimate est = z1_moment_mc(spec, 0, {1.0, 0.0}, 50);
    CHECK(est.log_mean == 0.0);
    const MomentCurve curve = z1_moment_curve(spec, 0, {0.0, 1.0, 2.0}, 50);
    for (double v : curve.normalized) CHECK(v == 1.0);
}

TEST_CASE("coincident two-point moment equals the doubled one-point moment") {
    // |det(z-H)|^2 |det(z-H)|^2 with n = 1 is |det(z-H)|^4, i.e. n = 2:
    // identical samples, identical block fold, bitwise-equal results.
    const EnsembleSpec spec = make_spec(SymmetryClass::AIIdagger, 3, 1.0, 23);
    const std::complex<double> z(0.7, 0.0);
    const MomentEstimate two = z2_moment_mc(spec, 1, z, z, 300);
    const MomentEstimate one = z1_moment_mc(spec, 2, z, 300);
    CHECK(two.log_mean == one.log_mean);
    CHECK(two.std_error_rel == one.std_error_rel);
}

TEST_CASE("results are bitwise independent of the thread count") {
    const EnsembleSpec spec = make_spec(SymmetryClass::AIdagger, 6, 2.0, 41);
    const std::vector<double> grid{0.0, 0.8, 1.6, 2.4};
    const MomentCurve a = z1_moment_curve(spec, 2, grid, 500, 1);
    const MomentCurve b = z1_moment_curve(spec, 2, grid, 500, 3);
    const MomentCurve c = z1_moment_curve(spec, 2, grid, 500, 8);
    REQUIRE(a.normalized.size() == grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        CHECK(a.normalized[k] == b.normalized[k]);
        CHECK(a.normalized[k] == c.normalized[k]);
        CHECK(a.normalized_se[k] == b.normalized_se[k]);
        CHECK(a.normalized_se[k] == c.normalized_se[k]);
    }
    CHECK(a.raw_at_zero.log_mean == b.raw_at_zero.log_mean);
}

TEST_CASE("curve bookkeeping and raw moment growth") {
    const EnsembleSpec spec = make_spec(SymmetryClass::AIIdagger, 5, 2.0, 13);
    const std::vector<double> grid{0.0, 1.0, 3.0};
    const MomentCurve curve = z1_moment_curve(spec, 1, grid, 200);
    CHECK(curve.grid_abs == grid);
    CHECK(curve.n_samples + curve.n_dropped == 200);
    CHECK(curve.n_dropped == 0);
    REQUIRE(curve.raw.size() == 3);
    // Far outside the spectrum the determinant must dominate the z = 0 one.
    CHECK(curve.raw[2].log_mean > curve.raw_at_zero.log_mean);
    // The normalized curve starts at exactly 1 (the z = 0 point normalizes
    // itself; the Gaussian factor is 1 at z = 0).
    CHECK(curve.normalized[0] == doctest::Approx(1.0).epsilon(1e-14));
    for (std::size_t k = 0; k < grid.size(); ++k) CHECK(curve.normalized_se[k] >= 0.0);
}

TEST_CASE("jackknife error shrinks with the sample count") {
    const EnsembleSpec spec = make_spec(SymmetryClass::A, 4, 1.0, 29);
    const MomentEstimate small = z1_moment_mc(spec, 1, {0.5, 0.0}, 200);
    const MomentEstimate large = z1_moment_mc(spec, 1, {0.5, 0.0}, 5000);
    CHECK(large.std_error_rel < 0.5 * small.std_error_rel);
}

}  // TEST_SUITE
