#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nhrmt/common.hpp"

namespace nhrmt::nlsm {

// Deterministic quadrature value. `value` may overflow to +inf for large N
// or replica index (the integrands reach ~1e300); `log_value` is always
// finite for a positive integral and is what ratio-based consumers use.
struct QuadratureResult {
    double value = 0.0;
    double log_value = 0.0;      // ln(value)
    double abs_error_est = 0.0;  // estimated absolute error of `value`
    std::int64_t n_nodes = 0;    // integrand evaluations
    std::string method;          // tensor_gauss | ordered_simplex_adaptive |
                                 // ordered_simplex_pfaffian | closed_form
};

// --- Gauss rules (Golub-Welsch on the Jacobi matrix) ---------------------

struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

// Nodes/weights for weight x^alpha e^-x on [0, inf), alpha > -1.
GaussRule gauss_laguerre(int m, double alpha);
// Nodes/weights for weight 1 on [-1, 1].
GaussRule gauss_legendre(int m);

// --- Replica integrals ----------------------------------------------------

// One-point integral, transpose-symmetric class (beta = 4 measure):
//   integral over [0,inf)^n of  prod_a  e^{-2 lambda_a / g}
//   (zsq + lambda_a)^N lambda_a  * Delta(lambda)^4.
// Exact tensor Gauss-Laguerre after lambda -> (g/2) mu: the non-exponential
// factor is a polynomial of per-axis degree N + 1 + 4(n-1), integrated
// exactly by ceil((N + 2 + 4(n-1))/2) + 2 nodes per axis. n in [1, 4]
// (n = 0 returns 1).
QuadratureResult z1_integral_aidag(int n, int N, double g, double zsq);

// One-point integral, self-dual class (beta = 1 measure, g = 1 units):
//   integral over [0,inf)^(2n) of  prod_a  e^{-lambda_a}
//   (lambda_a + zsq)^N lambda_a^(-1/2)  * |Delta(lambda)|.
// n in [1, 2]. For general width pass rescale_zsq(zsq, g); normalized
// ratios to zsq = 0 are then width-correct (overall Jacobian powers of g
// cancel).
QuadratureResult z1_integral_aiidag(int n, int N, double zsq);

// Two-point integral, transpose-symmetric class (g = 1 units):
//   e^{4 n zsq} e^{n omega_sq} * integral over [0,1]^n of
//   prod_i lambda_i (1 - lambda_i) e^{-2 omega_sq sum lambda}  * Delta^4.
// n in [1, 3]. zsq = |(z1+z2)/2|^2, omega_sq = |z1-z2|^2.
QuadratureResult z2_integral_aidag(int n, double omega_sq, double zsq);

// Two-point integral, self-dual class (g = 1 units):
//   e^{4 n zsq} e^{n t} * I_{2n}(t),
//   I_m(t) = integral over [0,1]^m of prod_i (lambda_i(1-lambda_i))^(-1/2)
//            e^{-t sum lambda} * |Delta(lambda)|.
// n in [1, 2], t = |z1-z2|^2.
QuadratureResult z2_integral_aiidag(int n, double t, double zsq);

// Width rescaling for the g = 1-unit integrals: squared spectral arguments
// scale with the ensemble width, so pass zsq/g (and t -> t/g) to the g = 1
// forms. Normalized ratios to the zero argument are then width-correct.
double rescale_zsq(double zsq, double g);

// --- Closed forms and cross-validation paths ------------------------------

// Closed-form value of integral over [0,inf)^m of
//   prod_i y_i^alpha e^{-t y_i} * |Delta(y)|^beta
// for the two measure exponents used here: (alpha, beta) = (-1/2, 1) and
// (+1, 4). Anything else is a ParameterError.
double selberg_laguerre(int m, double t, double alpha, double beta);

// I_m(t = 0) of the two-point self-dual measure and its transpose-symmetric
// counterpart, used as exact anchors for the [0,1]-domain quadratures.
namespace detail {

// General Laguerre Selberg product (any alpha > -1, beta > 0), used as an
// internal oracle; the public selberg_laguerre restricts to the two
// supported measures.
double selberg_laguerre_log_general(int m, double t, double alpha, double beta);

// Selberg's [0,1] integral: integral over [0,1]^m of
//   prod_i x_i^(a-1) (1-x_i)^(b-1) * |Delta(x)|^(2c).
double selberg_jacobi_log(int m, double a, double b, double c);

}  // namespace detail

// Nested ordered-simplex adaptive quadrature over the |Delta|^beta measures
// -- the reference evaluation path. Cost grows exponentially with the number
// of variables (usable for m <= 3, m = 4 at coarse tolerance only), so the
// Pfaffian reduction is the default production path for beta = 1. `map`
// selects the variable substitution that removes an endpoint singularity of
// the weight: the integration runs in the raw coordinate u while the
// Vandermonde differences are taken in phi(u) (phi = u, u^2, or sin^2 u).
enum class SimplexMap { identity, square, sine_squared };

struct SimplexSpec {
    int m = 1;
    double lo = 0.0;
    double hi = 1.0;
    SimplexMap map = SimplexMap::identity;
    double beta = 1.0;   // exponent on prod_{i<j} (phi(u_j) - phi(u_i))
    double tol = 1e-8;   // relative tolerance (the integrands are positive)
};

// Returns m! * integral over {lo < u_1 < ... < u_m < hi} of
//   prod_i exp(log_weight(u_i)) * prod_{i<j} (phi(u_j) - phi(u_i))^beta,
// i.e. the symmetric |Delta|^beta-measure integral in the mapped variable.
// log_weight receives the raw coordinate and must already include the map's
// Jacobian.
QuadratureResult ordered_simplex_quadrature(const SimplexSpec& spec,
                                            const std::function<double(double)>& log_weight);

// Reference evaluations of the self-dual integrals via the nested method
// (small m / small N only; used for cross-validation).
QuadratureResult z1_integral_aiidag_simplex(int n, int N, double zsq, double tol = 1e-8);
QuadratureResult z2_integral_aiidag_simplex(int n, double t, double zsq, double tol = 1e-8);
// Selberg-measure quadrature (weight y^alpha e^{-t y}, |Delta|^beta) via the
// nested method, for the oracle suite. (alpha, beta) in {(-1/2, 1), (+1, 4)}.
QuadratureResult selberg_quadrature_simplex(int m, double t, double alpha, double beta,
                                            double tol = 1e-8);

}  // namespace nhrmt::nlsm
