#include "nhrmt/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <complex>
#define LAPACK_COMPLEX_CPP
#include <lapacke.h>

namespace nhrmt::spectra {

namespace {

std::string source_tag(const std::optional<ensembles::EnsembleSpec>& source) {
    if (!source) return "(no source)";
    return std::string("(class ") + nhrmt::to_string(source->cls) +
           ", realization " + std::to_string(source->realization_index) + ")";
}

}  // namespace

ComplexSpectrum eigenvalues(const Eigen::MatrixXcd& h) {
    ComplexSpectrum out;
    const Eigen::Index d = h.rows();
    if (d != h.cols()) throw ParameterError("eigenvalues: matrix must be square");
    if (!h.allFinite()) throw ParameterError("eigenvalues: matrix has non-finite entries");
    out.eigenvalues.resize(static_cast<std::size_t>(d));
    if (d == 0) return out;

    // zgeev overwrites its input; work on a copy. Eigen's default storage is
    // column-major, matching LAPACK_COL_MAJOR directly.
    Eigen::MatrixXcd a = h;
    const lapack_int n = static_cast<lapack_int>(d);
    const lapack_int info = LAPACKE_zgeev(
        LAPACK_COL_MAJOR, 'N', 'N', n,
        reinterpret_cast<lapack_complex_double*>(a.data()), n,
        reinterpret_cast<lapack_complex_double*>(out.eigenvalues.data()),
        nullptr, 1, nullptr, 1);
    if (info != 0) {
        throw ComputationError("eigenvalues: zgeev failed with info=" + std::to_string(info));
    }
    return out;
}

ComplexSpectrum eigenvalues(const Eigen::MatrixXcd& h, const ensembles::EnsembleSpec& source) {
    try {
        ComplexSpectrum s = eigenvalues(h);
        s.source = source;
        return s;
    } catch (const ComputationError& e) {
        throw ComputationError(std::string(e.what()) + " " + source_tag(source));
    }
}

KramersDedupResult kramers_dedup(const ComplexSpectrum& spec) {
    if (spec.source && spec.source->cls != SymmetryClass::AIIdagger) {
        throw ParameterError("kramers_dedup: source is not class AIIdagger");
    }
    const std::size_t n = spec.eigenvalues.size();
    if (n % 2 != 0) throw ParameterError("kramers_dedup: eigenvalue count must be even");

    // Sort for determinism, then greedily match each earliest unpaired value
    // with its nearest unpaired partner. Exact degeneracy is split only by
    // eigensolver roundoff, so greedy matching is unambiguous in practice.
    std::vector<std::complex<double>> ev = spec.eigenvalues;
    std::sort(ev.begin(), ev.end(), [](const std::complex<double>& a, const std::complex<double>& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });

    double scale = 0.0;
    if (spec.source) {
        scale = ensembles::spectral_radius(spec.source->cls, spec.source->n_half,
                                           spec.source->width);
    } else {
        for (const auto& z : ev) scale = std::max(scale, std::abs(z));
        if (scale == 0.0) scale = 1.0;
    }

    KramersDedupResult out;
    out.spectrum.source = spec.source;
    out.spectrum.eigenvalues.reserve(n / 2);
    std::vector<bool> used(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (used[i]) continue;
        used[i] = true;
        std::size_t best = n;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = i + 1; j < n; ++j) {
            if (used[j]) continue;
            const double d = std::abs(ev[i] - ev[j]);
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        // n is even and i is the earliest unmatched index, so a partner exists.
        used[best] = true;
        out.spectrum.eigenvalues.push_back(ev[i]);
        out.max_pair_distance = std::max(out.max_pair_distance, best_d);
    }
    if (out.max_pair_distance > 1e-6 * scale) {
        throw DegeneracyError("kramers_dedup: pairing residual " +
                              std::to_string(out.max_pair_distance) +
                              " exceeds 1e-6 * " + std::to_string(scale) + " " +
                              source_tag(spec.source));
    }
    return out;
}

const char* to_string(HistogramKind k) {
    switch (k) {
        case HistogramKind::radial_density: return "radial_density";
        case HistogramKind::pair_correlation: return "pair_correlation";
        case HistogramKind::spacing: return "spacing";
    }
    return "?";
}

namespace {

void check_edges(const std::vector<double>& edges) {
    if (edges.size() < 2) throw ParameterError("histogram: need at least one bin");
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (!(edges[i] < edges[i + 1])) {
            throw ParameterError("histogram: bin edges must be strictly increasing");
        }
    }
}

// Index of the bin containing x, or -1 if outside [edges.front(), edges.back()).
int bin_of(const std::vector<double>& edges, double x) {
    if (x < edges.front() || x >= edges.back()) return -1;
    const auto it = std::upper_bound(edges.begin(), edges.end(), x);
    return static_cast<int>(it - edges.begin()) - 1;
}

// Folds one realization's per-bin counts into (sum, sum of squares).
void fold_counts(const std::vector<double>& counts, std::vector<double>& sum,
                 std::vector<double>& sumsq) {
    for (std::size_t k = 0; k < counts.size(); ++k) {
        sum[k] += counts[k];
        sumsq[k] += counts[k] * counts[k];
    }
}

// Realization-level standard error of the mean count in one bin.
double se_of_mean(double sum, double sumsq, std::int64_t n) {
    if (n < 2) return 0.0;
    const double mean = sum / static_cast<double>(n);
    double var = (sumsq - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1);
    if (var < 0.0) var = 0.0;
    return std::sqrt(var / static_cast<double>(n));
}

}  // namespace

RadialDensityAccum::RadialDensityAccum(std::vector<double> bin_edges)
    : edges_(std::move(bin_edges)) {
    check_edges(edges_);
    if (edges_.front() < 0.0) throw ParameterError("radial bins must start at r >= 0");
    sum_.assign(edges_.size() - 1, 0.0);
    sumsq_.assign(edges_.size() - 1, 0.0);
}

void RadialDensityAccum::add(const ComplexSpectrum& spec) {
    std::vector<double> counts(sum_.size(), 0.0);
    for (const auto& z : spec.eigenvalues) {
        const int k = bin_of(edges_, std::abs(z));
        if (k >= 0) counts[static_cast<std::size_t>(k)] += 1.0;
    }
    fold_counts(counts, sum_, sumsq_);
    ++n_samples_;
}

void RadialDensityAccum::merge(const RadialDensityAccum& other) {
    if (other.edges_ != edges_) throw ParameterError("merge: bin edges differ");
    for (std::size_t k = 0; k < sum_.size(); ++k) {
        sum_[k] += other.sum_[k];
        sumsq_[k] += other.sumsq_[k];
    }
    n_samples_ += other.n_samples_;
}

HistogramEstimate RadialDensityAccum::estimate() const {
    if (n_samples_ == 0) throw ParameterError("radial_density: empty spectrum stream");
    HistogramEstimate h;
    h.kind = HistogramKind::radial_density;
    h.bin_edges = edges_;
    h.n_samples = n_samples_;
    h.normalization =
        "R1(|z|) = counts / (n_samples * annulus area); eigenvalues counted with multiplicity";
    h.counts.resize(sum_.size());
    h.std_errors.resize(sum_.size());
    for (std::size_t k = 0; k < sum_.size(); ++k) {
        const double area =
            M_PI * (edges_[k + 1] * edges_[k + 1] - edges_[k] * edges_[k]);
        h.counts[k] = sum_[k] / (static_cast<double>(n_samples_) * area);
        h.std_errors[k] = se_of_mean(sum_[k], sumsq_[k], n_samples_) / area;
    }
    return h;
}

double disk_set_covariance_fraction(double r, double window_radius) {
    if (window_radius <= 0.0) throw ParameterError("window radius must be positive");
    double rho = r / (2.0 * window_radius);
    if (rho <= 0.0) return 1.0;
    if (rho >= 1.0) return 0.0;
    return (2.0 / M_PI) * (std::acos(rho) - rho * std::sqrt(1.0 - rho * rho));
}

namespace {

// Antiderivative F(rho) with F'(rho) = rho*acos(rho) - rho^2 sqrt(1-rho^2);
// the effective bin area is 16 w^2 (F(rho_hi) - F(rho_lo)).
double pair_area_antiderivative(double rho) {
    if (rho <= 0.0) return 0.0;
    if (rho > 1.0) rho = 1.0;
    const double s = std::sqrt(std::max(0.0, 1.0 - rho * rho));
    const double as = std::asin(std::min(1.0, rho));
    return 0.5 * rho * rho * std::acos(std::min(1.0, rho)) + 0.25 * (as - rho * s) -
           (rho * s * (2.0 * rho * rho - 1.0) + as) / 8.0;
}

}  // namespace

double effective_pair_bin_area(double r_lo, double r_hi, double window_radius) {
    if (window_radius <= 0.0) throw ParameterError("window radius must be positive");
    if (!(r_lo < r_hi) || r_lo < 0.0) throw ParameterError("invalid pair bin");
    const double w2 = 2.0 * window_radius;
    return 16.0 * window_radius * window_radius *
           (pair_area_antiderivative(r_hi / w2) - pair_area_antiderivative(r_lo / w2));
}

PairCorrelationAccum::PairCorrelationAccum(double window_radius,
                                           std::vector<double> omega_bin_edges)
    : window_(window_radius), edges_(std::move(omega_bin_edges)) {
    if (window_ <= 0.0) throw ParameterError("pair_correlation: window radius must be positive");
    check_edges(edges_);
    if (edges_.front() < 0.0) throw ParameterError("pair bins must start at |omega| >= 0");
    for (std::size_t k = 0; k + 1 < edges_.size(); ++k) {
        if (effective_pair_bin_area(edges_[k], edges_[k + 1], window_) <= 0.0) {
            throw ParameterError("pair bin beyond the window diameter has zero acceptance");
        }
    }
    sum_.assign(edges_.size() - 1, 0.0);
    sumsq_.assign(edges_.size() - 1, 0.0);
}

void PairCorrelationAccum::add(const ComplexSpectrum& spec) {
    double weight = 1.0;
    const std::vector<std::complex<double>>* evs = &spec.eigenvalues;
    ComplexSpectrum reps;
    if (spec.source && spec.source->cls == SymmetryClass::AIIdagger) {
        // Collapse Kramers doublets (excluding intra-doublet pairs, which would
        // put a spurious delta at omega = 0) and restore the multiplicity-2
        // convention of the full R2: each of the two ordered slots carries a
        // factor 2 -> weight 4 per representative pair.
        reps = kramers_dedup(spec).spectrum;
        evs = &reps.eigenvalues;
        weight = 4.0;
    }
    std::vector<std::complex<double>> pts;
    pts.reserve(evs->size());
    for (const auto& z : *evs) {
        if (std::abs(z) <= window_) pts.push_back(z);
    }
    add_points(pts, weight);
}

void PairCorrelationAccum::add_points(const std::vector<std::complex<double>>& points,
                                      double weight) {
    std::vector<double> counts(sum_.size(), 0.0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            const int k = bin_of(edges_, std::abs(points[i] - points[j]));
            if (k >= 0) counts[static_cast<std::size_t>(k)] += 2.0 * weight;  // ordered pairs
        }
    }
    fold_counts(counts, sum_, sumsq_);
    ++n_samples_;
}

void PairCorrelationAccum::merge(const PairCorrelationAccum& other) {
    if (other.edges_ != edges_ || other.window_ != window_) {
        throw ParameterError("merge: pair-correlation accumulators differ");
    }
    for (std::size_t k = 0; k < sum_.size(); ++k) {
        sum_[k] += other.sum_[k];
        sumsq_[k] += other.sumsq_[k];
    }
    n_samples_ += other.n_samples_;
}

HistogramEstimate PairCorrelationAccum::estimate() const {
    if (n_samples_ == 0) throw ParameterError("pair_correlation: empty spectrum stream");
    HistogramEstimate h;
    h.kind = HistogramKind::pair_correlation;
    h.bin_edges = edges_;
    h.n_samples = n_samples_;
    h.normalization =
        "R2(|omega|) = ordered in-window pairs / (n_samples * window area * effective bin "
        "area); disk set-covariance corrected; AII+ doublets collapsed, pairs weighted x4";
    h.counts.resize(sum_.size());
    h.std_errors.resize(sum_.size());
    const double warea = M_PI * window_ * window_;
    for (std::size_t k = 0; k < sum_.size(); ++k) {
        const double norm =
            static_cast<double>(n_samples_) * warea *
            effective_pair_bin_area(edges_[k], edges_[k + 1], window_);
        h.counts[k] = sum_[k] / norm;
        h.std_errors[k] = se_of_mean(sum_[k], sumsq_[k], n_samples_) *
                          static_cast<double>(n_samples_) / norm;
    }
    return h;
}

double spacing_sample(const ComplexSpectrum& spec) {
    if (spec.eigenvalues.size() != 2 || spec.eigenvalues[0] == spec.eigenvalues[1]) {
        throw ParameterError("spacing_sample: expected exactly two distinct eigenvalues " +
                             source_tag(spec.source));
    }
    return std::abs(spec.eigenvalues[0] - spec.eigenvalues[1]);
}

std::vector<double> spacing_samples(const std::vector<ComplexSpectrum>& specs) {
    std::vector<double> out;
    out.reserve(specs.size());
    for (const auto& s : specs) {
        if (s.source && s.source->cls == SymmetryClass::AIIdagger) {
            out.push_back(spacing_sample(kramers_dedup(s).spectrum));
        } else {
            out.push_back(spacing_sample(s));
        }
    }
    return out;
}

}  // namespace nhrmt::spectra
