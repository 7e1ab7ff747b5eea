#include "nhrmt/charpoly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nhrmt/threadpool.hpp"

namespace nhrmt::charpoly {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double log_abs_det(std::complex<double> z, const Eigen::MatrixXcd& h) {
    if (h.rows() != h.cols()) throw ParameterError("log_abs_det: matrix must be square");
    Eigen::MatrixXcd a = -h;
    a.diagonal().array() += z;
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    double ld = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        const double p = std::abs(lu.matrixLU()(i, i));
        if (p == 0.0) return -kInf;
        ld += std::log(p);
    }
    return ld;
}

namespace {

// ln|det(z - T)| for an upper Hessenberg T: O(d^2) elimination with adjacent
// row pivoting (row swaps change only the determinant's sign, which the
// absolute value discards).
double log_abs_det_hessenberg(std::complex<double> z, const Eigen::MatrixXcd& t,
                              Eigen::MatrixXcd& scratch) {
    const Eigen::Index d = t.rows();
    scratch = -t;
    scratch.diagonal().array() += z;
    double ld = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) {
        if (k + 1 < d && std::abs(scratch(k + 1, k)) > std::abs(scratch(k, k))) {
            scratch.row(k).tail(d - k).swap(scratch.row(k + 1).tail(d - k));
        }
        const std::complex<double> piv = scratch(k, k);
        const double ap = std::abs(piv);
        if (ap == 0.0) return -kInf;
        ld += std::log(ap);
        if (k + 1 < d) {
            const std::complex<double> mult = scratch(k + 1, k) / piv;
            scratch.row(k + 1).tail(d - k - 1) -= mult * scratch.row(k).tail(d - k - 1);
        }
    }
    return ld;
}

}  // namespace

std::vector<double> log_abs_det_grid(const std::vector<std::complex<double>>& zs,
                                     const Eigen::MatrixXcd& h) {
    if (h.rows() != h.cols()) throw ParameterError("log_abs_det_grid: matrix must be square");
    const Eigen::HessenbergDecomposition<Eigen::MatrixXcd> hd(h);
    const Eigen::MatrixXcd t = hd.matrixH();
    Eigen::MatrixXcd scratch(h.rows(), h.cols());
    std::vector<double> out;
    out.reserve(zs.size());
    for (const auto& z : zs) out.push_back(log_abs_det_hessenberg(z, t, scratch));
    return out;
}

namespace {

// Exact partial log-sum-exp state: log of (sum of e^{x_i}) = m + ln(s).
struct Lse {
    double m = -kInf;
    double s = 0.0;
    void add(double e) {
        if (e == -kInf) return;
        if (e <= m) {
            s += std::exp(e - m);
        } else {
            s = s * std::exp(m - e) + 1.0;
            m = e;
        }
    }
    void fold(const Lse& o) {  // deterministic in call order
        if (o.s == 0.0) return;
        if (o.m <= m) {
            s += o.s * std::exp(o.m - m);
        } else {
            s = s * std::exp(m - o.m) + o.s;
            m = o.m;
        }
    }
    double log() const { return s > 0.0 ? m + std::log(s) : -kInf; }
};

struct BlockState {
    std::vector<Lse> point;  // one per evaluation point
    std::int64_t n_used = 0;
    std::int64_t n_dropped = 0;
};

// log-mean over all blocks except `skip` (-1 for none) at point k.
double block_log_mean(const std::vector<BlockState>& states, std::size_t k, int skip,
                      std::int64_t n_eff) {
    Lse total;
    for (std::size_t b = 0; b < states.size(); ++b) {
        if (static_cast<int>(b) == skip) continue;
        total.fold(states[b].point[k]);
    }
    if (n_eff <= 0 || total.s <= 0.0) return -kInf;
    return total.log() - std::log(static_cast<double>(n_eff));
}

double jackknife_se(const std::vector<double>& x) {
    const std::size_t b = x.size();
    if (b < 2) return 0.0;
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(b);
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return std::sqrt(ss * static_cast<double>(b - 1) / static_cast<double>(b));
}

// Shared Monte Carlo driver. For every realization it evaluates
// ln|det(z - H)| on `eval_z` and turns those into per-point log moment
// contributions; a realization with any exactly singular shift is dropped
// from every point, keeping all points on a common sample set.
struct CurveRun {
    std::vector<BlockState> states;
    std::int64_t n_eff = 0;
    std::int64_t n_dropped = 0;
    std::vector<double> log_mean;                 // per point
    std::vector<std::vector<double>> log_mean_b;  // [point][block] leave-one-out
    std::vector<std::int64_t> n_eff_b;            // leave-one-out sample counts
};

CurveRun run_moment_mc(const ensembles::EnsembleSpec& spec,
                       const std::vector<std::complex<double>>& eval_z,
                       const std::function<void(const std::vector<double>&,
                                                std::vector<double>&)>& contributions,
                       std::size_t n_points, std::int64_t n_samples, int n_threads) {
    ensembles::validate(spec);
    if (n_samples < 1) throw ParameterError("moment mc: require n_samples >= 1");
    if (n_threads < 1) n_threads = threads::default_thread_count();

    const int n_blocks = static_cast<int>(std::min<std::int64_t>(200, n_samples));
    const std::vector<threads::Block> blocks = threads::make_blocks(n_samples, n_blocks);

    CurveRun run;
    run.states.assign(blocks.size(), BlockState{});
    for (auto& st : run.states) st.point.assign(n_points, Lse{});

    threads::run_blocks(blocks, n_threads, [&](const threads::Block& blk) {
        BlockState& st = run.states[static_cast<std::size_t>(blk.index)];
        std::vector<double> ld;
        std::vector<double> contrib(n_points);
        for (std::int64_t r = blk.first; r < blk.last; ++r) {
            const Eigen::MatrixXcd h = ensembles::sample(spec.with_realization(r));
            ld = log_abs_det_grid(eval_z, h);
            bool singular = false;
            for (double v : ld) {
                if (v == -kInf) {
                    singular = true;
                    break;
                }
            }
            if (singular) {
                ++st.n_dropped;
                continue;
            }
            contributions(ld, contrib);
            for (std::size_t k = 0; k < n_points; ++k) st.point[k].add(contrib[k]);
            ++st.n_used;
        }
    });

    for (const auto& st : run.states) {
        run.n_eff += st.n_used;
        run.n_dropped += st.n_dropped;
    }
    if (run.n_eff == 0) {
        throw ComputationError("moment mc: every realization was dropped as singular");
    }

    run.log_mean.resize(n_points);
    run.log_mean_b.assign(n_points, std::vector<double>(run.states.size(), 0.0));
    run.n_eff_b.resize(run.states.size());
    for (std::size_t b = 0; b < run.states.size(); ++b) {
        run.n_eff_b[b] = run.n_eff - run.states[b].n_used;
    }
    for (std::size_t k = 0; k < n_points; ++k) {
        run.log_mean[k] = block_log_mean(run.states, k, -1, run.n_eff);
        for (std::size_t b = 0; b < run.states.size(); ++b) {
            run.log_mean_b[k][b] =
                block_log_mean(run.states, k, static_cast<int>(b), run.n_eff_b[b]);
        }
    }
    return run;
}

MomentEstimate point_estimate(const CurveRun& run, std::size_t k) {
    MomentEstimate est;
    est.log_mean = run.log_mean[k];
    est.n_samples = run.n_eff;
    est.n_dropped = run.n_dropped;
    if (run.states.size() >= 2) {
        std::vector<double> rho;
        rho.reserve(run.states.size());
        for (std::size_t b = 0; b < run.states.size(); ++b) {
            if (run.n_eff_b[b] <= 0) continue;
            rho.push_back(std::exp(run.log_mean_b[k][b] - run.log_mean[k]));
        }
        est.std_error_rel = jackknife_se(rho);
    }
    return est;
}

}  // namespace

MomentEstimate z1_moment_mc(const ensembles::EnsembleSpec& spec, int n,
                            std::complex<double> z, std::int64_t n_samples, int n_threads) {
    if (n < 0) throw ParameterError("z1_moment_mc: require n >= 0");
    const std::vector<std::complex<double>> eval_z{z};
    const double two_n = 2.0 * n;
    const CurveRun run = run_moment_mc(
        spec, eval_z,
        [two_n](const std::vector<double>& ld, std::vector<double>& c) {
            c[0] = two_n * ld[0];
        },
        1, n_samples, n_threads);
    return point_estimate(run, 0);
}

MomentEstimate z2_moment_mc(const ensembles::EnsembleSpec& spec, int n,
                            std::complex<double> z1, std::complex<double> z2,
                            std::int64_t n_samples, int n_threads) {
    if (n < 0) throw ParameterError("z2_moment_mc: require n >= 0");
    const std::vector<std::complex<double>> eval_z{z1, z2};
    const double two_n = 2.0 * n;
    const CurveRun run = run_moment_mc(
        spec, eval_z,
        [two_n](const std::vector<double>& ld, std::vector<double>& c) {
            c[0] = two_n * (ld[0] + ld[1]);
        },
        1, n_samples, n_threads);
    return point_estimate(run, 0);
}

namespace {

MomentCurve finish_curve(const CurveRun& run, const std::vector<double>& grid,
                         const std::vector<double>& gauss_shift) {
    // Points are laid out grid first, normalization point last.
    const std::size_t n_grid = grid.size();
    const std::size_t den = n_grid;
    MomentCurve curve;
    curve.grid_abs = grid;
    curve.n_samples = run.n_eff;
    curve.n_dropped = run.n_dropped;
    curve.raw_at_zero = point_estimate(run, den);
    curve.raw.reserve(n_grid);
    curve.normalized.resize(n_grid);
    curve.normalized_se.assign(n_grid, 0.0);
    for (std::size_t k = 0; k < n_grid; ++k) {
        curve.raw.push_back(point_estimate(run, k));
        curve.normalized[k] = std::exp(run.log_mean[k] - run.log_mean[den] - gauss_shift[k]);
        if (run.states.size() >= 2) {
            std::vector<double> eta;
            eta.reserve(run.states.size());
            for (std::size_t b = 0; b < run.states.size(); ++b) {
                if (run.n_eff_b[b] <= 0) continue;
                eta.push_back(std::exp(run.log_mean_b[k][b] - run.log_mean_b[den][b] -
                                       gauss_shift[k]));
            }
            curve.normalized_se[k] = jackknife_se(eta);
        }
    }
    return curve;
}

std::vector<double> gaussian_shifts(const std::vector<double>& grid, int n, double g) {
    std::vector<double> s(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        s[k] = 2.0 * n * grid[k] * grid[k] / g;
    }
    return s;
}

}  // namespace

MomentCurve z1_moment_curve(const ensembles::EnsembleSpec& spec, int n,
                            const std::vector<double>& abs_grid, std::int64_t n_samples,
                            int n_threads) {
    if (n < 0) throw ParameterError("z1_moment_curve: require n >= 0");
    if (abs_grid.empty()) throw ParameterError("z1_moment_curve: empty grid");
    for (double a : abs_grid) {
        if (a < 0.0) throw ParameterError("z1_moment_curve: require |z| >= 0");
    }
    std::vector<std::complex<double>> eval_z;
    eval_z.reserve(abs_grid.size() + 1);
    for (double a : abs_grid) eval_z.emplace_back(a, 0.0);
    eval_z.emplace_back(0.0, 0.0);
    const std::size_t n_points = eval_z.size();
    const double two_n = 2.0 * n;
    const CurveRun run = run_moment_mc(
        spec, eval_z,
        [two_n, n_points](const std::vector<double>& ld, std::vector<double>& c) {
            for (std::size_t k = 0; k < n_points; ++k) c[k] = two_n * ld[k];
        },
        n_points, n_samples, n_threads);
    return finish_curve(run, abs_grid, gaussian_shifts(abs_grid, n, spec.width));
}

MomentCurve z2_moment_curve(const ensembles::EnsembleSpec& spec, int n,
                            const std::vector<double>& abs_z2_grid, std::int64_t n_samples,
                            int n_threads) {
    if (n < 0) throw ParameterError("z2_moment_curve: require n >= 0");
    if (abs_z2_grid.empty()) throw ParameterError("z2_moment_curve: empty grid");
    for (double a : abs_z2_grid) {
        if (a < 0.0) throw ParameterError("z2_moment_curve: require |z2| >= 0");
    }
    // Evaluation points: the |z2| grid, then the fixed z1 = 0 (also the
    // normalization point, where Z^(2)(0, 0) = Z at coincident arguments).
    std::vector<std::complex<double>> eval_z;
    eval_z.reserve(abs_z2_grid.size() + 1);
    for (double a : abs_z2_grid) eval_z.emplace_back(a, 0.0);
    eval_z.emplace_back(0.0, 0.0);
    const std::size_t n_grid = abs_z2_grid.size();
    const double two_n = 2.0 * n;
    const CurveRun run = run_moment_mc(
        spec, eval_z,
        [two_n, n_grid](const std::vector<double>& ld, std::vector<double>& c) {
            const double ld0 = ld[n_grid];
            for (std::size_t k = 0; k < n_grid; ++k) c[k] = two_n * (ld0 + ld[k]);
            c[n_grid] = two_n * (ld0 + ld0);
        },
        n_grid + 1, n_samples, n_threads);
    return finish_curve(run, abs_z2_grid, gaussian_shifts(abs_z2_grid, n, spec.width));
}

}  // namespace nhrmt::charpoly
