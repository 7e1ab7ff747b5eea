#pragma once

#include <cstdint>

#include "nhrmt/common.hpp"

namespace nhrmt::asymptotics {

// --- Edge density of states -----------------------------------------------
//
// The closed forms live in fixed width conventions: g = 2 for the
// transpose-symmetric class, g = 1 for the self-dual class. u is the
// distance from the spectral edge in those units (u = sqrt(N) - |z| for
// both, since both conventions put the edge at sqrt(N)).

// pi * R1 near the edge, in the formula's native units.
//   AI+ (g = 2): 1 - 1/(4u^2) - sqrt(2/(pi N)) e^{-2u^2}/(16 u^4)
//                  - e^{-2u^2}/(16 sqrt(2 pi) u^5)
//   AII+ (g = 1): 2 + 1/(4u^2) - sqrt(2 pi) e^{-2u^2} (u + 1/(4u) + 1/(8u^3))
//                  - e^{-4u^2}/(8 sqrt(pi) u^3)
// N enters only the AI+ subleading term. u <= 0 or class A -> ParameterError.
double dos_edge(SymmetryClass cls, double u, std::int64_t N);

// Conversion between a measurement at arbitrary width g and the formula's
// native units. For a measured radial point |z| of an (N, g) ensemble:
//   u          -- edge coordinate to feed dos_edge
//   pi_r1_scale -- multiply the *measured* pi*R1 by this to land in formula
//                  units (density carries 1/length^2 = 1/g).
struct EdgeUnits {
    double u = 0.0;
    double pi_r1_scale = 1.0;
    double g_formula = 1.0;  // width convention the class formula assumes
};
EdgeUnits edge_units(SymmetryClass cls, double z_abs, std::int64_t N, double g);

// --- Bulk two-point function ----------------------------------------------

// pi^2 R2 at separation |omega|, width restored by dimensional analysis:
//   AI+ : 4 g^-2 (1 - e^{-2 g^-1 |omega|^2} / (g^-2 |omega|^4))
//   AII+: g^-2 (4 - pi g^-1 |omega|^2 e^{-g^-1 |omega|^2})
// Truncated large-separation forms; valid for |omega|^2 >> g. Class A is a
// ParameterError (no closed form implemented).
double r2_bulk(SymmetryClass cls, double omega_abs, double g);

// --- Small-replica expansion of the saddle-point integral ------------------

// Y_n(nu) = 1 + c1 nu ... expanded as 1 + n c1(nu) + n^2 c2(nu) + O(n^3),
// nu = g^-1 |omega|^2. Additive constants in c2 are dropped (they vanish
// under the omega derivatives that extract R2).
struct SmallNCoefficients {
    double c1 = 0.0;
    double c2 = 0.0;
};

// Sign choice for the e^{-2 nu}/(4 nu^4) term of the self-dual c2. The
// analytic continuation from real argument leaves its sign ambiguous; the
// default is the sign consistent with the directly derived two-point
// expansion (positive). The alternative is exposed for sensitivity analysis.
enum class SelfDualTailSign { standard, alternative };

// c1(nu) = nu for both classes.
// c2(nu): AI+ : nu^2/2 - 2 ln nu - e^{-2 nu}/(4 nu^4)
//         AII+: nu^2/2 - 2 ln nu - pi e^{-nu}/nu +- e^{-2 nu}/(4 nu^4)
SmallNCoefficients yn_smalln(SymmetryClass cls, double nu,
                             SelfDualTailSign sign = SelfDualTailSign::standard);

// Radial part of the biharmonic-type operator that extracts R2 from c2:
// for f(nu), nu = |omega|^2,  d^2/d omega^2 d^2/d conj-omega^2 f =
// nu^2 f'''' + 4 nu f''' + 2 f''. Evaluated analytically for c2; satisfies
// pi^2 R2 = 2 + (this) up to the truncation of r2_bulk. Exposed for the
// finite-difference consistency test.
double c2_biharmonic(SymmetryClass cls, double nu,
                     SelfDualTailSign sign = SelfDualTailSign::standard);

// --- Small-matrix (surmise) formulas ---------------------------------------

// Modified Bessel function K0, |relative error| < 1e-14 on (0, 700).
double bessel_k0(double x);

// Radial factor of the small-matrix two-point function: R2(z1, z2) =
// delta(z1+z2) * (this), evaluated at |z1|:
//   AI+ : (2/pi) 16 C^4 |z1|^2 K0(4 C^2 |z1|^2)
//   A   : (2/pi) 16 C^4 |z1|^2 e^{-4 C^2 |z1|^2}
//   AII+: (2/pi) (16 C^4 |z1|^2 / 3)(1 + 4 C^2 |z1|^2) e^{-4 C^2 |z1|^2}
// Returns 0 at |z1| = 0 (the |z1|^2 prefactor beats the K0 divergence).
double r2_small(SymmetryClass cls, double z1_abs, double C);

// Two-level spacing density p_s(s), normalized to 1 for any C > 0:
//   AI+ : 2 C^4 s^3 K0(C^2 s^2)
//   A   : 2 C^4 s^3 e^{-C^2 s^2}
//   AII+: (2/3) C^4 s^3 (1 + C^2 s^2) e^{-C^2 s^2}
double surmise_spacing(SymmetryClass cls, double s, double C);

// Cumulative distribution of surmise_spacing (x = C^2 s^2):
//   AI+ : 1 - x K1(x);  A: 1 - (1+x) e^{-x};  AII+: 1 - e^{-x}(x^2+3x+3)/3.
double surmise_spacing_cdf(SymmetryClass cls, double s, double C);

// Mean spacing of the surmise:
//   AI+ : sqrt(2) Gamma(5/4)^2 / C;  A: (3/4) sqrt(pi) / C;
//   AII+: (7/8) sqrt(pi) / C.
double surmise_mean_spacing(SymmetryClass cls, double C);

}  // namespace nhrmt::asymptotics
