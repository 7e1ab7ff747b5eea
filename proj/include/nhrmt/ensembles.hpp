#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

#include "nhrmt/common.hpp"

namespace nhrmt::ensembles {

// Fully determines one reproducible matrix draw.
struct EnsembleSpec {
    SymmetryClass cls = SymmetryClass::A;
    int n_half = 1;          // N; matrix dimension is N (A, AI+) or 2N (AII+)
    double width = 1.0;      // g, per-entry complex variance of the unconstrained Gaussian
    std::uint64_t seed = 0;
    std::uint64_t realization_index = 0;

    int dim() const { return cls == SymmetryClass::AIIdagger ? 2 * n_half : n_half; }

    EnsembleSpec with_realization(std::uint64_t r) const {
        EnsembleSpec s = *this;
        s.realization_index = r;
        return s;
    }
};

void validate(const EnsembleSpec& spec);

// One draw from P(H) ~ exp[-tr(H^dag H)/g] restricted to the class manifold:
// G has i.i.d. complex Gaussian entries of variance g (real/imag each g/2);
// A -> G, AI+ -> (G + G^T)/2, AII+ -> (G + S G^T S)/2 with S = sigma^y x I_N.
// Pure function of spec: repeated calls agree bitwise, and the class
// constraint holds bitwise by construction.
Eigen::MatrixXcd sample(const EnsembleSpec& spec);

// Max-norm deviation from the class constraint (0 for class A by convention).
// Uses the structural block form of S H^T S, so projected samples return
// exactly 0.
double check_symmetry(const Eigen::MatrixXcd& h, SymmetryClass cls);

// Large-N spectral radius of the class/width combination:
// A: sqrt(gN); AI+: sqrt(gN/2); AII+: sqrt(gN) (matrix dimension 2N).
double spectral_radius(SymmetryClass cls, int n_half, double width);

// Bulk density in the form pi*R1: A -> 1/g; AI+ -> 2/g; AII+ -> 2/g
// (eigenvalues counted with Kramers multiplicity).
double bulk_pi_r1(SymmetryClass cls, double width);

}  // namespace nhrmt::ensembles
