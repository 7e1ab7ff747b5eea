#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nhrmt/common.hpp"
#include "nhrmt/ensembles.hpp"

namespace nhrmt::spectra {

// Full spectrum of one matrix, with provenance when it came from an ensemble.
struct ComplexSpectrum {
    std::vector<std::complex<double>> eigenvalues;
    std::optional<ensembles::EnsembleSpec> source;
};

// Dense general complex eigenvalues (eigenvalues-only LAPACK driver).
// Throws ComputationError on non-convergence, carrying the realization index
// when `source` is provided.
ComplexSpectrum eigenvalues(const Eigen::MatrixXcd& h);
ComplexSpectrum eigenvalues(const Eigen::MatrixXcd& h,
                            const ensembles::EnsembleSpec& source);

struct KramersDedupResult {
    ComplexSpectrum spectrum;       // one representative per degenerate pair
    double max_pair_distance = 0.0; // diagnostic: worst intra-pair separation
};

// Collapses the twofold-degenerate spectrum of a self-dual (AII+) matrix to
// one representative per pair via greedy nearest-neighbour matching.
// Throws DegeneracyError if any matched pair is separated by more than
// 1e-6 * spectral_radius(source) (or 1e-6 * max|eigenvalue| without source).
KramersDedupResult kramers_dedup(const ComplexSpectrum& spec);

enum class HistogramKind { radial_density, pair_correlation, spacing };

const char* to_string(HistogramKind k);

// Binned estimate of a spectral observable. `counts` holds the normalized
// per-bin estimator values (a density, not raw tallies); `normalization`
// records the estimator convention in words so exported data is
// self-describing.
struct HistogramEstimate {
    HistogramKind kind = HistogramKind::radial_density;
    std::vector<double> bin_edges;  // size = len(counts) + 1, increasing
    std::vector<double> counts;     // normalized estimate per bin, >= 0
    std::vector<double> std_errors; // realization-level standard error per bin
    std::int64_t n_samples = 0;
    std::string normalization;
};

// Streaming estimator of the radial density R1(|z|): eigenvalue count in the
// annulus [r_k, r_k+1), divided by (n_samples * annulus area). Eigenvalues
// are counted with multiplicity (no Kramers dedup), so for AII+ the bulk
// value is 2/(pi*g) and the estimate integrates to the full matrix dimension
// 2N. Partial accumulators merge additively (order-independent).
class RadialDensityAccum {
public:
    explicit RadialDensityAccum(std::vector<double> bin_edges);

    void add(const ComplexSpectrum& spec);
    void merge(const RadialDensityAccum& other);
    HistogramEstimate estimate() const;

private:
    std::vector<double> edges_;
    std::vector<double> sum_;    // per-bin sum over realizations of counts
    std::vector<double> sumsq_;  // per-bin sum of squared per-realization counts
    std::int64_t n_samples_ = 0;
};

// Fraction of the disk-window pair area surviving at pair separation r:
// the set covariance of a disk of radius w evaluated at r, normalized by the
// disk area. gamma = (2/pi) * (acos(rho) - rho*sqrt(1-rho^2)), rho = r/(2w);
// 1 at r=0, 0 at r=2w.
double disk_set_covariance_fraction(double r, double window_radius);

// Effective annulus area of [r_lo, r_hi) for pairs inside a disk window:
// integral over the bin of gamma(r) * 2*pi*r dr. This replaces the naive
// annulus area so that an uncorrelated (Poisson) input yields a flat
// estimate; without it a disk window undercounts wide separations simply
// because both points must fit inside the window.
double effective_pair_bin_area(double r_lo, double r_hi, double window_radius);

// Streaming estimator of the full two-point function R2(|omega|) from
// ordered eigenvalue pairs (i != j) with both members inside the disk window
// |z| <= window_radius, binned by separation. Normalized per bin by
// (n_samples * window area * effective_pair_bin_area), so the estimate
// approaches R1^2 at large separation (pi^2 R2 -> 4 for AI+ at g=1).
//
// AII+ sources are Kramers-deduplicated first and intra-doublet pairs are
// excluded; the remaining representative pairs are weighted x4 to restore
// the multiplicity convention of the full R2 (each doublet counts twice in
// R1).
class PairCorrelationAccum {
public:
    PairCorrelationAccum(double window_radius, std::vector<double> omega_bin_edges);

    void add(const ComplexSpectrum& spec);
    // Adds a pre-extracted point set lying in the window (used by the Poisson
    // calibration check); `weight` is the per-ordered-pair multiplicity.
    void add_points(const std::vector<std::complex<double>>& points, double weight = 1.0);
    void merge(const PairCorrelationAccum& other);
    HistogramEstimate estimate() const;

    double window_radius() const { return window_; }

private:
    double window_ = 0.0;
    std::vector<double> edges_;
    std::vector<double> sum_;
    std::vector<double> sumsq_;
    std::int64_t n_samples_ = 0;
};

// Level spacing s = |z_+ - z_-| of a two-level spectrum. The input must hold
// exactly two distinct eigenvalues (2x2 class-A/AI+ spectra, or 4x4 AII+
// spectra after kramers_dedup); anything else is a ParameterError.
double spacing_sample(const ComplexSpectrum& spec);

// Batch helper: applies kramers_dedup automatically for AII+ sources.
std::vector<double> spacing_samples(const std::vector<ComplexSpectrum>& specs);

}  // namespace nhrmt::spectra
