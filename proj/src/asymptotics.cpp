#include "nhrmt/asymptotics.hpp"

#include <cmath>
#include <string>

namespace nhrmt::asymptotics {

namespace {

[[noreturn]] void bad_class(const char* op) {
    throw ParameterError(std::string(op) + ": unsupported symmetry class");
}

}  // namespace

double dos_edge(SymmetryClass cls, double u, std::int64_t N) {
    if (!(u > 0.0)) throw ParameterError("dos_edge: require u > 0");
    if (N < 1) throw ParameterError("dos_edge: require N >= 1");
    const double u2 = u * u;
    switch (cls) {
        case SymmetryClass::AIdagger: {
            const double e = std::exp(-2.0 * u2);
            return 1.0 - 1.0 / (4.0 * u2) -
                   std::sqrt(2.0 / (M_PI * static_cast<double>(N))) * e / (16.0 * u2 * u2) -
                   e / (16.0 * std::sqrt(2.0 * M_PI) * u2 * u2 * u);
        }
        case SymmetryClass::AIIdagger: {
            const double e2 = std::exp(-2.0 * u2);
            const double e4 = std::exp(-4.0 * u2);
            return 2.0 + 1.0 / (4.0 * u2) -
                   std::sqrt(2.0 * M_PI) * e2 * (u + 1.0 / (4.0 * u) + 1.0 / (8.0 * u2 * u)) -
                   e4 / (8.0 * std::sqrt(M_PI) * u2 * u);
        }
        case SymmetryClass::A: break;
    }
    bad_class("dos_edge");
}

EdgeUnits edge_units(SymmetryClass cls, double z_abs, std::int64_t N, double g) {
    if (z_abs < 0.0) throw ParameterError("edge_units: require |z| >= 0");
    if (!(g > 0.0)) throw ParameterError("edge_units: require g > 0");
    if (N < 1) throw ParameterError("edge_units: require N >= 1");
    EdgeUnits out;
    // Lengths scale as sqrt(g), densities as 1/g; both formulas put the edge
    // at sqrt(N) in their own conventions.
    switch (cls) {
        case SymmetryClass::AIdagger:
            out.g_formula = 2.0;
            out.u = (std::sqrt(g * static_cast<double>(N) / 2.0) - z_abs) / std::sqrt(g / 2.0);
            out.pi_r1_scale = g / 2.0;
            return out;
        case SymmetryClass::AIIdagger:
            out.g_formula = 1.0;
            out.u = (std::sqrt(g * static_cast<double>(N)) - z_abs) / std::sqrt(g);
            out.pi_r1_scale = g;
            return out;
        case SymmetryClass::A: break;
    }
    bad_class("edge_units");
}

double r2_bulk(SymmetryClass cls, double omega_abs, double g) {
    if (!(omega_abs > 0.0)) throw ParameterError("r2_bulk: require |omega| > 0");
    if (!(g > 0.0)) throw ParameterError("r2_bulk: require g > 0");
    const double nu = omega_abs * omega_abs / g;  // g^-1 |omega|^2
    const double gi2 = 1.0 / (g * g);
    switch (cls) {
        case SymmetryClass::AIdagger:
            return 4.0 * gi2 * (1.0 - std::exp(-2.0 * nu) / (nu * nu));
        case SymmetryClass::AIIdagger:
            return gi2 * (4.0 - M_PI * nu * std::exp(-nu));
        case SymmetryClass::A: break;
    }
    bad_class("r2_bulk");
}

namespace {

double tail_sign(SelfDualTailSign sign) {
    return sign == SelfDualTailSign::standard ? 1.0 : -1.0;
}

}  // namespace

SmallNCoefficients yn_smalln(SymmetryClass cls, double nu, SelfDualTailSign sign) {
    if (!(nu > 0.0)) throw ParameterError("yn_smalln: require nu > 0");
    SmallNCoefficients c;
    c.c1 = nu;
    const double nu4 = nu * nu * nu * nu;
    switch (cls) {
        case SymmetryClass::AIdagger:
            c.c2 = 0.5 * nu * nu - 2.0 * std::log(nu) - std::exp(-2.0 * nu) / (4.0 * nu4);
            return c;
        case SymmetryClass::AIIdagger:
            c.c2 = 0.5 * nu * nu - 2.0 * std::log(nu) - M_PI * std::exp(-nu) / nu +
                   tail_sign(sign) * std::exp(-2.0 * nu) / (4.0 * nu4);
            return c;
        case SymmetryClass::A: break;
    }
    bad_class("yn_smalln");
}

namespace {

// D[f](nu) = nu^2 f'''' + 4 nu f''' + 2 f'' for the pieces of c2, term by term:
//   D[nu^2/2]        = 2
//   D[-2 ln nu]      = 0
//   D[e^{-nu}/nu]    = e^{-nu} (nu + 2/nu + 4/nu^2 + 4/nu^3)
//   D[e^{-2nu}/(4nu^4)] = e^{-2nu} (4/nu^2 + 24/nu^3 + 74/nu^4
//                                   + 128/nu^5 + 100/nu^6)
double d_exp_over_nu(double nu) {
    return std::exp(-nu) * (nu + 2.0 / nu + 4.0 / (nu * nu) + 4.0 / (nu * nu * nu));
}

double d_tail(double nu) {
    const double i = 1.0 / nu;
    const double i2 = i * i;
    return std::exp(-2.0 * nu) * i2 *
           (4.0 + i * (24.0 + i * (74.0 + i * (128.0 + i * 100.0))));
}

}  // namespace

double c2_biharmonic(SymmetryClass cls, double nu, SelfDualTailSign sign) {
    if (!(nu > 0.0)) throw ParameterError("c2_biharmonic: require nu > 0");
    switch (cls) {
        case SymmetryClass::AIdagger:
            return 2.0 - d_tail(nu);
        case SymmetryClass::AIIdagger:
            return 2.0 - M_PI * d_exp_over_nu(nu) + tail_sign(sign) * d_tail(nu);
        case SymmetryClass::A: break;
    }
    bad_class("c2_biharmonic");
}

// --- Modified Bessel functions K0, K1 --------------------------------------
//
// x < 2: ascending series paired with the I-series. x >= 2: the standard
// continued-fraction evaluation of the irregular solution (Thompson/Barnett
// scheme), which converges to machine precision in a few dozen terms.

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240;

struct K0K1 {
    double k0;
    double k1;
};

K0K1 bessel_k_small(double x) {
    // I0, I1 and the companion K series; all terms positive, no cancellation.
    const double q = 0.25 * x * x;
    double i0 = 1.0;
    double k0_sum = 0.0;  // sum q^k / (k!)^2 * H_k
    double term = 1.0;
    double harmonic = 0.0;
    for (int k = 1; k < 64; ++k) {
        term *= q / (static_cast<double>(k) * static_cast<double>(k));
        harmonic += 1.0 / static_cast<double>(k);
        i0 += term;
        k0_sum += term * harmonic;
        if (term < 1e-18 * i0) break;
    }
    // I1(x) = (x/2) * sum q^k / (k! (k+1)!)
    double i1s = 1.0, t1 = 1.0;
    for (int k = 1; k < 64; ++k) {
        t1 *= q / (static_cast<double>(k) * static_cast<double>(k + 1));
        i1s += t1;
        if (t1 < 1e-18 * i1s) break;
    }
    const double half_x = 0.5 * x;
    const double i1v = half_x * i1s;
    const double lg = std::log(half_x) + kEulerGamma;
    const double k0 = -lg * i0 + k0_sum;
    // Wronskian: I0(x) K1(x) + I1(x) K0(x) = 1/x.
    const double k1 = (1.0 / x - i1v * k0) / i0;
    return {k0, k1};
}

K0K1 bessel_k_large(double x) {
    const double mu2 = 0.0;  // order 0
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    const double a1 = 0.25 - mu2;
    double q = a1, c = a1, a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i <= 30000; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / static_cast<double>(i);
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < 1e-17) break;
    }
    h = a1 * h;
    const double k0 = std::sqrt(M_PI / (2.0 * x)) * std::exp(-x) / s;
    const double k1 = k0 * (x + 0.5 - h) / x;
    return {k0, k1};
}

K0K1 bessel_k(double x) {
    if (!(x > 0.0)) throw ParameterError("bessel_k: require x > 0");
    if (x > 705.0) throw ParameterError("bessel_k: argument beyond supported range (0, 705)");
    return x < 2.0 ? bessel_k_small(x) : bessel_k_large(x);
}

}  // namespace

double bessel_k0(double x) { return bessel_k(x).k0; }

double r2_small(SymmetryClass cls, double z1_abs, double C) {
    if (z1_abs < 0.0) throw ParameterError("r2_small: require |z1| >= 0");
    if (!(C > 0.0)) throw ParameterError("r2_small: require C > 0");
    if (z1_abs == 0.0) return 0.0;
    const double c2 = C * C;
    const double r2 = z1_abs * z1_abs;
    const double x = 4.0 * c2 * r2;
    const double pref = (2.0 / M_PI) * 16.0 * c2 * c2 * r2;
    switch (cls) {
        case SymmetryClass::AIdagger: return pref * bessel_k0(x);
        case SymmetryClass::A: return pref * std::exp(-x);
        case SymmetryClass::AIIdagger: return (pref / 3.0) * (1.0 + x) * std::exp(-x);
    }
    bad_class("r2_small");
}

double surmise_spacing(SymmetryClass cls, double s, double C) {
    if (s < 0.0) throw ParameterError("surmise_spacing: require s >= 0");
    if (!(C > 0.0)) throw ParameterError("surmise_spacing: require C > 0");
    if (s == 0.0) return 0.0;
    const double c2 = C * C;
    const double x = c2 * s * s;
    const double s3 = s * s * s;
    switch (cls) {
        case SymmetryClass::AIdagger: return 2.0 * c2 * c2 * s3 * bessel_k0(x);
        case SymmetryClass::A: return 2.0 * c2 * c2 * s3 * std::exp(-x);
        case SymmetryClass::AIIdagger:
            return (2.0 / 3.0) * c2 * c2 * s3 * (1.0 + x) * std::exp(-x);
    }
    bad_class("surmise_spacing");
}

double surmise_spacing_cdf(SymmetryClass cls, double s, double C) {
    if (s < 0.0) throw ParameterError("surmise_spacing_cdf: require s >= 0");
    if (!(C > 0.0)) throw ParameterError("surmise_spacing_cdf: require C > 0");
    if (s == 0.0) return 0.0;
    const double x = C * C * s * s;
    switch (cls) {
        case SymmetryClass::AIdagger: {
            if (x > 705.0) return 1.0;
            return 1.0 - x * bessel_k(x).k1;
        }
        case SymmetryClass::A: {
            if (x > 705.0) return 1.0;
            return 1.0 - (1.0 + x) * std::exp(-x);
        }
        case SymmetryClass::AIIdagger: {
            if (x > 705.0) return 1.0;
            return 1.0 - std::exp(-x) * (x * x + 3.0 * x + 3.0) / 3.0;
        }
    }
    bad_class("surmise_spacing_cdf");
}

double surmise_mean_spacing(SymmetryClass cls, double C) {
    if (!(C > 0.0)) throw ParameterError("surmise_mean_spacing: require C > 0");
    switch (cls) {
        case SymmetryClass::AIdagger: {
            const double g54 = std::tgamma(1.25);
            return std::sqrt(2.0) * g54 * g54 / C;
        }
        case SymmetryClass::A: return 0.75 * std::sqrt(M_PI) / C;
        case SymmetryClass::AIIdagger: return 0.875 * std::sqrt(M_PI) / C;
    }
    bad_class("surmise_mean_spacing");
}

}  // namespace nhrmt::asymptotics
