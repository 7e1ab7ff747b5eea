#include "nhrmt/nlsm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace nhrmt::nlsm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Streaming log-sum-exp with a running max shift.
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
    double log() const { return s > 0.0 ? m + std::log(s) : -kInf; }
};

double log_factorial(int m) { return std::lgamma(static_cast<double>(m) + 1.0); }

GaussRule golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& subdiag,
                       double mu0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, subdiag, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) throw ComputationError("golub_welsch: eigensolve failed");
    const int m = static_cast<int>(diag.size());
    GaussRule r;
    r.x.resize(static_cast<std::size_t>(m));
    r.w.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        r.x[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
        const double v = es.eigenvectors()(0, i);
        r.w[static_cast<std::size_t>(i)] = mu0 * v * v;
    }
    return r;
}

}  // namespace

GaussRule gauss_laguerre(int m, double alpha) {
    if (m < 1) throw ParameterError("gauss_laguerre: require m >= 1");
    if (!(alpha > -1.0)) throw ParameterError("gauss_laguerre: require alpha > -1");
    Eigen::VectorXd a(m), b(std::max(0, m - 1));
    for (int k = 0; k < m; ++k) a(k) = 2.0 * k + alpha + 1.0;
    for (int k = 1; k < m; ++k) b(k - 1) = std::sqrt(k * (k + alpha));
    return golub_welsch(a, b, std::tgamma(1.0 + alpha));
}

GaussRule gauss_legendre(int m) {
    if (m < 1) throw ParameterError("gauss_legendre: require m >= 1");
    Eigen::VectorXd a = Eigen::VectorXd::Zero(m), b(std::max(0, m - 1));
    for (int k = 1; k < m; ++k) b(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
    return golub_welsch(a, b, 2.0);
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

namespace detail {

double selberg_laguerre_log_general(int m, double t, double alpha, double beta) {
    if (m < 1) throw ParameterError("selberg_laguerre: require m >= 1");
    if (!(t > 0.0)) throw ParameterError("selberg_laguerre: require t > 0");
    if (!(alpha > -1.0) || !(beta > 0.0)) {
        throw ParameterError("selberg_laguerre: require alpha > -1, beta > 0");
    }
    const double md = static_cast<double>(m);
    double lg = -(md * (alpha + 1.0) + beta * md * (md - 1.0) / 2.0) * std::log(t);
    for (int j = 0; j < m; ++j) {
        lg += std::lgamma(alpha + 1.0 + j * beta / 2.0) +
              std::lgamma(1.0 + (j + 1) * beta / 2.0) - std::lgamma(1.0 + beta / 2.0);
    }
    return lg;
}

double selberg_jacobi_log(int m, double a, double b, double c) {
    if (m < 1) throw ParameterError("selberg_jacobi: require m >= 1");
    if (!(a > 0.0) || !(b > 0.0) || !(c >= 0.0)) {
        throw ParameterError("selberg_jacobi: require a, b > 0 and c >= 0");
    }
    double lg = 0.0;
    for (int j = 0; j < m; ++j) {
        lg += std::lgamma(a + j * c) + std::lgamma(b + j * c) + std::lgamma(1.0 + (j + 1) * c) -
              std::lgamma(a + b + (m + j - 1) * c) - std::lgamma(1.0 + c);
    }
    return lg;
}

}  // namespace detail

double selberg_laguerre(int m, double t, double alpha, double beta) {
    const bool half = (alpha == -0.5 && beta == 1.0);
    const bool quad = (alpha == 1.0 && beta == 4.0);
    if (!half && !quad) {
        throw ParameterError(
            "selberg_laguerre: supported measures are (alpha, beta) = (-1/2, 1) and (+1, 4)");
    }
    return std::exp(detail::selberg_laguerre_log_general(m, t, alpha, beta));
}

double rescale_zsq(double zsq, double g) {
    if (!(g > 0.0)) throw ParameterError("rescale_zsq: require g > 0");
    return zsq / g;
}

// ---------------------------------------------------------------------------
// Shared quadrature scaffolding
// ---------------------------------------------------------------------------

namespace {

const GaussRule& gl24() {
    static const GaussRule r = gauss_legendre(24);
    return r;
}

const GaussRule& gl16() {
    static const GaussRule r = gauss_legendre(16);
    return r;
}

QuadratureResult make_result(double log_value, double rel_err, std::int64_t n_nodes,
                             std::string method) {
    QuadratureResult q;
    q.log_value = log_value;
    q.value = std::exp(log_value);
    q.abs_error_est = std::isfinite(q.value) ? std::abs(q.value) * rel_err : kInf;
    q.n_nodes = n_nodes;
    q.method = std::move(method);
    return q;
}

QuadratureResult trivial_one(const char* method) {
    QuadratureResult q;
    q.value = 1.0;
    q.log_value = 0.0;
    q.abs_error_est = 0.0;
    q.n_nodes = 0;
    q.method = method;
    return q;
}

// One-dimensional problem description for the |Delta|-type measures: a
// log-weight and an increasing map phi on [lo, hi].
struct MappedWeight {
    double lo = 0.0;
    double hi = 1.0;
    std::function<double(double)> lw;   // log weight incl. map Jacobian, raw coordinate
    std::function<double(double)> phi;  // Vandermonde variable
};

struct DomainScan {
    double hi = 0.0;        // possibly truncated upper end
    double w_max = 0.0;     // max of lw over the probe grid
    double centroid = 0.0;  // weight centroid of phi
};

// Probes lw on midpoints; optionally truncates the domain where the weight
// has fallen 120 e-folds below its peak (the |Delta| polynomial factors are
// negligible against that at every scale used here).
DomainScan scan_domain(const MappedWeight& pb, bool truncate) {
    constexpr int kProbe = 8192;
    DomainScan s;
    s.w_max = -kInf;
    const double step = (pb.hi - pb.lo) / kProbe;
    std::vector<double> lw(kProbe);
    int arg = 0;
    for (int i = 0; i < kProbe; ++i) {
        const double u = pb.lo + step * (i + 0.5);
        lw[static_cast<std::size_t>(i)] = pb.lw(u);
        if (lw[static_cast<std::size_t>(i)] > s.w_max) {
            s.w_max = lw[static_cast<std::size_t>(i)];
            arg = i;
        }
    }
    if (!std::isfinite(s.w_max)) throw ComputationError("quadrature: weight peak not finite");
    s.hi = pb.hi;
    if (truncate) {
        int last = kProbe - 1;
        for (int i = arg; i < kProbe; ++i) {
            if (lw[static_cast<std::size_t>(i)] > s.w_max - 120.0) last = i;
        }
        s.hi = std::min(pb.hi, pb.lo + step * (last + 2));
    }
    double num = 0.0, den = 0.0;
    for (int i = 0; i < kProbe; ++i) {
        const double u = pb.lo + step * (i + 0.5);
        if (u > s.hi) break;
        const double v = std::exp(lw[static_cast<std::size_t>(i)] - s.w_max);
        num += v * pb.phi(u);
        den += v;
    }
    s.centroid = num / den;
    return s;
}

// ---------------------------------------------------------------------------
// beta = 1 engine: de Bruijn / Pfaffian reduction
// ---------------------------------------------------------------------------
//
// m! * Integral over the ordered simplex of prod w(u_i) * Delta(phi(u)) equals
// m! * Pf[A] with A_jk = M_jk - M_kj, M_jk = double integral over {x < y} of
// psi_j(x) psi_k(y), psi_j(u) = (phi(u) - c)^{j-1} w(u); for odd m the matrix
// is bordered by b_j = integral of psi_j. Every Pfaffian term carries exactly
// m weight factors, so shifting lw by its max W rescales the result by
// e^{-mW} uniformly.

struct PfPieces {
    Eigen::MatrixXd m;  // M_jk
    Eigen::VectorXd b;  // single integrals
};

PfPieces pfaffian_pieces(const MappedWeight& pb, int m, double hi, double w_shift,
                         double centroid, int panels, std::int64_t& evals) {
    const GaussRule& g = gl24();
    const int q24 = static_cast<int>(g.x.size());
    PfPieces out;
    out.m = Eigen::MatrixXd::Zero(m, m);
    out.b = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd prefix = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd by(m), inner(m), bx(m), v(m);
    Eigen::MatrixXd tri(m, m);
    const double width = (hi - pb.lo) / panels;
    for (int q = 0; q < panels; ++q) {
        const double a = pb.lo + width * q;
        const double mid = a + 0.5 * width;
        const double half = 0.5 * width;
        v.setZero();
        tri.setZero();
        for (int i = 0; i < q24; ++i) {
            const double y = mid + half * g.x[static_cast<std::size_t>(i)];
            const double wy = half * g.w[static_cast<std::size_t>(i)];
            const double vy = std::exp(pb.lw(y) - w_shift);
            ++evals;
            const double py = pb.phi(y) - centroid;
            double p = 1.0;
            for (int j = 0; j < m; ++j) {
                by(j) = p;
                p *= py;
            }
            v += (wy * vy) * by;
            // inner integral over x in (a, y)
            const double len = y - a;
            inner.setZero();
            for (int s = 0; s < q24; ++s) {
                const double x = a + len * 0.5 * (g.x[static_cast<std::size_t>(s)] + 1.0);
                const double wx = len * 0.5 * g.w[static_cast<std::size_t>(s)];
                const double vx = std::exp(pb.lw(x) - w_shift);
                ++evals;
                const double px = pb.phi(x) - centroid;
                double pp = 1.0;
                for (int j = 0; j < m; ++j) {
                    bx(j) = pp;
                    pp *= px;
                }
                inner += (wx * vx) * bx;
            }
            tri += (wy * vy) * (inner * by.transpose());
        }
        out.m += prefix * v.transpose();
        out.m += tri;
        prefix += v;
    }
    out.b = prefix;
    return out;
}

double pfaffian_value(const PfPieces& p, int m) {
    const Eigen::MatrixXd a = p.m - p.m.transpose();
    switch (m) {
        case 1: return p.b(0);
        case 2: return a(0, 1);
        case 3: return a(0, 1) * p.b(2) - a(0, 2) * p.b(1) + a(1, 2) * p.b(0);
        case 4: return a(0, 1) * a(2, 3) - a(0, 2) * a(1, 3) + a(0, 3) * a(1, 2);
        default: throw ParameterError("pfaffian reduction supports m in [1, 4]");
    }
}

struct EngineResult {
    double log_value = 0.0;
    double rel_err = 0.0;
    std::int64_t n_evals = 0;
};

EngineResult beta1_pfaffian(const MappedWeight& pb, int m, bool truncate) {
    if (m < 1 || m > 4) throw ParameterError("pfaffian reduction supports m in [1, 4]");
    const DomainScan dom = scan_domain(pb, truncate);
    EngineResult r;
    double prev = -kInf;
    for (int panels = 48; panels <= 3072; panels *= 2) {
        const PfPieces pieces =
            pfaffian_pieces(pb, m, dom.hi, dom.w_max, dom.centroid, panels, r.n_evals);
        const double pf = pfaffian_value(pieces, m);
        if (!(pf > 0.0) || !std::isfinite(pf)) {
            throw ComputationError("pfaffian quadrature produced a non-positive value");
        }
        const double lv = std::log(pf) + log_factorial(m) + m * dom.w_max;
        if (std::isfinite(prev)) {
            r.rel_err = std::abs(std::expm1(lv - prev));
            r.log_value = lv;
            if (r.rel_err < 1e-11) return r;
        }
        prev = lv;
    }
    r.log_value = prev;
    return r;
}

// ---------------------------------------------------------------------------
// Nested ordered-simplex reference path (any beta)
// ---------------------------------------------------------------------------

struct SimplexEngine {
    const MappedWeight& pb;
    double beta;
    int m;
    double hi;
    double w_shift;
    int panels;
    std::int64_t evals = 0;
    std::vector<double> outer_phi;  // mapped coordinates of the enclosing levels

    // Integral over u in (lo_k, hi) of w(u) * prod_{i<k} (phi(u) -
    // outer_phi[i])^beta * (next level).
    double level(int k, double lo_k) {
        const GaussRule& g = gl16();
        const int q = static_cast<int>(g.x.size());
        const double width = (hi - lo_k) / panels;
        double total = 0.0;
        for (int p = 0; p < panels; ++p) {
            const double a = lo_k + width * p;
            const double mid = a + 0.5 * width;
            const double half = 0.5 * width;
            for (int i = 0; i < q; ++i) {
                const double u = mid + half * g.x[static_cast<std::size_t>(i)];
                const double wu = half * g.w[static_cast<std::size_t>(i)];
                double f = std::exp(pb.lw(u) - w_shift);
                ++evals;
                const double pu = pb.phi(u);
                for (int o = 0; o < k; ++o) {
                    f *= std::pow(pu - outer_phi[static_cast<std::size_t>(o)], beta);
                }
                if (k + 1 < m) {
                    outer_phi[static_cast<std::size_t>(k)] = pu;
                    f *= level(k + 1, u);
                }
                total += wu * f;
            }
        }
        return total;
    }
};

EngineResult nested_simplex(const MappedWeight& pb, int m, double beta, double tol,
                            bool truncate) {
    if (m < 1) throw ParameterError("ordered simplex: require m >= 1");
    if (m > 4) throw ParameterError("ordered simplex: m > 4 is not practical");
    const DomainScan dom = scan_domain(pb, truncate);
    EngineResult r;
    double prev = -kInf;
    const int p_start = m == 4 ? 3 : 4;
    const int p_max = m <= 2 ? 64 : (m == 3 ? 16 : 6);
    for (int panels = p_start; panels <= p_max; panels *= 2) {
        SimplexEngine eng{pb, beta, m, dom.hi, dom.w_max, panels, 0,
                          std::vector<double>(static_cast<std::size_t>(m), 0.0)};
        const double v = eng.level(0, pb.lo);
        r.n_evals += eng.evals;
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw ComputationError("ordered simplex quadrature produced a non-positive value");
        }
        const double lv = std::log(v) + log_factorial(m) + m * dom.w_max;
        if (std::isfinite(prev)) {
            r.rel_err = std::abs(std::expm1(lv - prev));
            r.log_value = lv;
            if (r.rel_err < tol) return r;
        }
        prev = lv;
    }
    r.log_value = prev;
    return r;
}

std::function<double(double)> map_phi(SimplexMap map) {
    switch (map) {
        case SimplexMap::identity: return [](double u) { return u; };
        case SimplexMap::square: return [](double u) { return u * u; };
        case SimplexMap::sine_squared:
            return [](double u) {
                const double s = std::sin(u);
                return s * s;
            };
    }
    throw ParameterError("unknown simplex map");
}

// Mapped weights of the production integrals ------------------------------

MappedWeight one_point_self_dual_weight(int N, double zsq) {
    MappedWeight pb;
    pb.lo = 0.0;
    pb.hi = std::sqrt(3.0 * (N + zsq) + 170.0);
    pb.lw = [N, zsq](double u) {
        return std::log(2.0) - u * u + N * std::log(u * u + zsq);
    };
    pb.phi = map_phi(SimplexMap::square);
    return pb;
}

MappedWeight two_point_self_dual_weight(double t) {
    MappedWeight pb;
    pb.lo = 0.0;
    pb.hi = M_PI / 2.0;
    pb.lw = [t](double u) {
        const double s = std::sin(u);
        return std::log(2.0) - t * s * s;
    };
    pb.phi = map_phi(SimplexMap::sine_squared);
    return pb;
}

MappedWeight selberg_weight(double t, double alpha) {
    MappedWeight pb;
    pb.lo = 0.0;
    if (alpha == -0.5) {
        pb.hi = std::sqrt(170.0 / t);
        pb.lw = [t](double u) { return std::log(2.0) - t * u * u; };
        pb.phi = map_phi(SimplexMap::square);
    } else {  // alpha = +1, smooth weight, identity map
        pb.hi = 175.0 / t;
        pb.lw = [t, alpha](double y) { return alpha * std::log(y) - t * y; };
        pb.phi = map_phi(SimplexMap::identity);
    }
    return pb;
}

// ---------------------------------------------------------------------------
// beta = 4 tensor engines
// ---------------------------------------------------------------------------

// Symmetric tensor cubature in the log domain: sum over strictly increasing
// node combinations (coincident tuples vanish with the Vandermonde factor),
// times n!.
template <typename PairLog>
double log_symmetric_sum(int n, int q, const std::vector<double>& axis_log,
                         const PairLog& pair_log) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    Lse acc;
    while (true) {
        double e = 0.0;
        for (int a = 0; a < n; ++a) {
            e += axis_log[static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])];
            for (int b = a + 1; b < n; ++b) {
                e += pair_log(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
            }
        }
        acc.add(e);
        // next combination
        int a = n - 1;
        while (a >= 0 && idx[static_cast<std::size_t>(a)] == q - n + a) --a;
        if (a < 0) break;
        ++idx[static_cast<std::size_t>(a)];
        for (int b = a + 1; b < n; ++b) {
            idx[static_cast<std::size_t>(b)] = idx[static_cast<std::size_t>(b - 1)] + 1;
        }
    }
    return acc.log() + log_factorial(n);
}

// log of the mu-integral for the transpose-symmetric one-point function with
// M Gauss-Laguerre nodes.
double z1_aidag_log(int n, int N, double g, double zsq, int M, std::int64_t& evals) {
    const GaussRule rule = gauss_laguerre(M, 0.0);
    std::vector<double> axis(static_cast<std::size_t>(M));
    for (int i = 0; i < M; ++i) {
        const double x = rule.x[static_cast<std::size_t>(i)];
        axis[static_cast<std::size_t>(i)] =
            std::log(rule.w[static_cast<std::size_t>(i)]) + std::log(x) +
            N * std::log(zsq + 0.5 * g * x);
    }
    evals += M;
    auto pair = [&rule](int i, int j) {
        return 4.0 * std::log(std::abs(rule.x[static_cast<std::size_t>(j)] -
                                       rule.x[static_cast<std::size_t>(i)]));
    };
    return log_symmetric_sum(n, M, axis, pair) +
           2.0 * n * n * std::log(0.5 * g);
}

// log of the [0,1]^n integral of prod lambda(1-lambda) e^{-2 w2 lambda} Delta^4
// with `panels` composite 16-node Gauss-Legendre panels per axis.
double z2_aidag_log(int n, double omega_sq, int panels, std::int64_t& evals) {
    const GaussRule& g16 = gl16();
    const int q = static_cast<int>(g16.x.size()) * panels;
    std::vector<double> nodes(static_cast<std::size_t>(q)), axis(static_cast<std::size_t>(q));
    const double width = 1.0 / panels;
    int k = 0;
    for (int p = 0; p < panels; ++p) {
        const double mid = width * (p + 0.5);
        const double half = 0.5 * width;
        for (std::size_t i = 0; i < g16.x.size(); ++i, ++k) {
            const double x = mid + half * g16.x[i];
            nodes[static_cast<std::size_t>(k)] = x;
            axis[static_cast<std::size_t>(k)] = std::log(half * g16.w[i]) + std::log(x) +
                                                std::log1p(-x) - 2.0 * omega_sq * x;
        }
    }
    evals += q;
    auto pair = [&nodes](int i, int j) {
        return 4.0 * std::log(std::abs(nodes[static_cast<std::size_t>(j)] -
                                       nodes[static_cast<std::size_t>(i)]));
    };
    return log_symmetric_sum(n, q, axis, pair);
}

}  // namespace

// ---------------------------------------------------------------------------
// Public replica integrals
// ---------------------------------------------------------------------------

QuadratureResult z1_integral_aidag(int n, int N, double g, double zsq) {
    if (n == 0) return trivial_one("closed_form");
    if (n < 0 || n > 4) throw ParameterError("z1_integral_aidag: require n in [0, 4]");
    if (N < 1) throw ParameterError("z1_integral_aidag: require N >= 1");
    if (!(g > 0.0)) throw ParameterError("z1_integral_aidag: require g > 0");
    if (zsq < 0.0) throw ParameterError("z1_integral_aidag: require zsq >= 0");
    const int M = (N + 2 + 4 * (n - 1) + 1) / 2 + 2;  // ceil + 2 safety nodes
    std::int64_t evals = 0;
    const double l1 = z1_aidag_log(n, N, g, zsq, M, evals);
    const double l2 = z1_aidag_log(n, N, g, zsq, M + 2, evals);
    QuadratureResult q = make_result(l2, std::abs(std::expm1(l1 - l2)), evals, "tensor_gauss");
    return q;
}

QuadratureResult z1_integral_aiidag(int n, int N, double zsq) {
    if (n == 0) return trivial_one("closed_form");
    if (n < 0 || n > 2) throw ParameterError("z1_integral_aiidag: require n in [0, 2]");
    if (N < 1) throw ParameterError("z1_integral_aiidag: require N >= 1");
    if (zsq < 0.0) throw ParameterError("z1_integral_aiidag: require zsq >= 0");
    const MappedWeight pb = one_point_self_dual_weight(N, zsq);
    const EngineResult r = beta1_pfaffian(pb, 2 * n, /*truncate=*/true);
    return make_result(r.log_value, r.rel_err, r.n_evals, "ordered_simplex_pfaffian");
}

QuadratureResult z2_integral_aidag(int n, double omega_sq, double zsq) {
    if (n == 0) return trivial_one("closed_form");
    if (n < 0 || n > 3) throw ParameterError("z2_integral_aidag: require n in [0, 3]");
    if (omega_sq < 0.0 || zsq < 0.0) {
        throw ParameterError("z2_integral_aidag: require omega_sq, zsq >= 0");
    }
    std::int64_t evals = 0;
    double prev = -kInf, lv = 0.0, rel = 0.0;
    const int p0 = std::max(4, static_cast<int>(std::ceil(omega_sq / 8.0)));
    const int p_cap = std::max(8 * p0, 64);
    for (int panels = p0; panels <= p_cap; panels *= 2) {
        lv = z2_aidag_log(n, omega_sq, panels, evals);
        if (std::isfinite(prev)) {
            rel = std::abs(std::expm1(lv - prev));
            if (rel < 1e-10) break;
        }
        prev = lv;
    }
    const double pref = 4.0 * n * zsq + n * omega_sq;
    return make_result(lv + pref, rel, evals, "tensor_gauss");
}

QuadratureResult z2_integral_aiidag(int n, double t, double zsq) {
    if (n == 0) return trivial_one("closed_form");
    if (n < 0 || n > 2) throw ParameterError("z2_integral_aiidag: require n in [0, 2]");
    if (t < 0.0 || zsq < 0.0) throw ParameterError("z2_integral_aiidag: require t, zsq >= 0");
    const MappedWeight pb = two_point_self_dual_weight(t);
    const EngineResult r = beta1_pfaffian(pb, 2 * n, /*truncate=*/false);
    const double pref = 4.0 * n * zsq + n * t;
    return make_result(r.log_value + pref, r.rel_err, r.n_evals, "ordered_simplex_pfaffian");
}

// ---------------------------------------------------------------------------
// Public reference paths
// ---------------------------------------------------------------------------

QuadratureResult ordered_simplex_quadrature(const SimplexSpec& spec,
                                            const std::function<double(double)>& log_weight) {
    if (!(spec.hi > spec.lo)) throw ParameterError("ordered simplex: require hi > lo");
    if (!(spec.beta > 0.0)) throw ParameterError("ordered simplex: require beta > 0");
    if (!(spec.tol > 0.0)) throw ParameterError("ordered simplex: require tol > 0");
    MappedWeight pb;
    pb.lo = spec.lo;
    pb.hi = spec.hi;
    pb.lw = log_weight;
    pb.phi = map_phi(spec.map);
    const EngineResult r = nested_simplex(pb, spec.m, spec.beta, spec.tol, /*truncate=*/false);
    return make_result(r.log_value, r.rel_err, r.n_evals, "ordered_simplex_adaptive");
}

QuadratureResult z1_integral_aiidag_simplex(int n, int N, double zsq, double tol) {
    if (n < 1 || n > 2) throw ParameterError("z1_integral_aiidag_simplex: require n in [1, 2]");
    if (N < 1) throw ParameterError("z1_integral_aiidag_simplex: require N >= 1");
    if (zsq < 0.0) throw ParameterError("z1_integral_aiidag_simplex: require zsq >= 0");
    const MappedWeight pb = one_point_self_dual_weight(N, zsq);
    const EngineResult r = nested_simplex(pb, 2 * n, 1.0, tol, /*truncate=*/true);
    return make_result(r.log_value, r.rel_err, r.n_evals, "ordered_simplex_adaptive");
}

QuadratureResult z2_integral_aiidag_simplex(int n, double t, double zsq, double tol) {
    if (n < 1 || n > 2) throw ParameterError("z2_integral_aiidag_simplex: require n in [1, 2]");
    if (t < 0.0 || zsq < 0.0) {
        throw ParameterError("z2_integral_aiidag_simplex: require t, zsq >= 0");
    }
    const MappedWeight pb = two_point_self_dual_weight(t);
    const EngineResult r = nested_simplex(pb, 2 * n, 1.0, tol, /*truncate=*/false);
    const double pref = 4.0 * n * zsq + n * t;
    return make_result(r.log_value + pref, r.rel_err, r.n_evals, "ordered_simplex_adaptive");
}

QuadratureResult selberg_quadrature_simplex(int m, double t, double alpha, double beta,
                                            double tol) {
    const bool half = (alpha == -0.5 && beta == 1.0);
    const bool quad = (alpha == 1.0 && beta == 4.0);
    if (!half && !quad) {
        throw ParameterError(
            "selberg_quadrature_simplex: supported measures are (-1/2, 1) and (+1, 4)");
    }
    if (!(t > 0.0)) throw ParameterError("selberg_quadrature_simplex: require t > 0");
    const MappedWeight pb = selberg_weight(t, alpha);
    const EngineResult r = nested_simplex(pb, m, beta, tol, /*truncate=*/true);
    return make_result(r.log_value, r.rel_err, r.n_evals, "ordered_simplex_adaptive");
}

}  // namespace nhrmt::nlsm
