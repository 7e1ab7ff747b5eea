#include "nhrmt/ensembles.hpp"

#include <cmath>

#include "nhrmt/rng.hpp"

namespace nhrmt {

SymmetryClass symmetry_class_from_string(const std::string& s) {
    if (s == "A" || s == "a") return SymmetryClass::A;
    if (s == "AIdagger" || s == "AI" || s == "ai" || s == "aidagger") return SymmetryClass::AIdagger;
    if (s == "AIIdagger" || s == "AII" || s == "aii" || s == "aiidagger") return SymmetryClass::AIIdagger;
    throw ParameterError("unknown symmetry class: " + s);
}

}  // namespace nhrmt

namespace nhrmt::ensembles {

void validate(const EnsembleSpec& spec) {
    if (spec.n_half < 1) throw ParameterError("n_half must be >= 1");
    if (!(spec.width > 0.0) || !std::isfinite(spec.width)) {
        throw ParameterError("width must be positive and finite");
    }
}

namespace {

// i.i.d. complex Gaussian entries of variance g, row-major, re before im.
Eigen::MatrixXcd gaussian_matrix(int dim, double width, rng::GaussianStream& gs) {
    const double sigma = std::sqrt(0.5 * width);
    Eigen::MatrixXcd g(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            const double re = sigma * gs.next_normal();
            const double im = sigma * gs.next_normal();
            g(i, j) = std::complex<double>(re, im);
        }
    }
    return g;
}

// S M^T S with S = sigma^y x I_N, written in blocks: for M = [[A,B],[C,D]],
// S M^T S = [[D^T, -B^T], [-C^T, A^T]].
Eigen::MatrixXcd dual_transform(const Eigen::MatrixXcd& m) {
    const int n = static_cast<int>(m.rows()) / 2;
    Eigen::MatrixXcd r(2 * n, 2 * n);
    r.topLeftCorner(n, n) = m.bottomRightCorner(n, n).transpose();
    r.topRightCorner(n, n) = -m.topRightCorner(n, n).transpose();
    r.bottomLeftCorner(n, n) = -m.bottomLeftCorner(n, n).transpose();
    r.bottomRightCorner(n, n) = m.topLeftCorner(n, n).transpose();
    return r;
}

}  // namespace

Eigen::MatrixXcd sample(const EnsembleSpec& spec) {
    validate(spec);
    rng::GaussianStream gs(rng::stream_seed(spec.seed, spec.realization_index));
    Eigen::MatrixXcd g = gaussian_matrix(spec.dim(), spec.width, gs);
    switch (spec.cls) {
        case SymmetryClass::A:
            return g;
        case SymmetryClass::AIdagger:
            // (g + g^T)/2: IEEE addition commutes, so H = H^T bitwise.
            return 0.5 * (g + g.transpose()).eval();
        case SymmetryClass::AIIdagger:
            // (g + S g^T S)/2: block identities make the constraint bitwise.
            return 0.5 * (g + dual_transform(g)).eval();
    }
    throw ParameterError("unknown symmetry class");
}

double check_symmetry(const Eigen::MatrixXcd& h, SymmetryClass cls) {
    if (h.rows() != h.cols()) throw ParameterError("matrix must be square");
    switch (cls) {
        case SymmetryClass::A:
            return 0.0;
        case SymmetryClass::AIdagger:
            return (h - h.transpose()).cwiseAbs().maxCoeff();
        case SymmetryClass::AIIdagger:
            if (h.rows() % 2 != 0) throw ParameterError("AIIdagger requires even dimension");
            return (h - dual_transform(h)).cwiseAbs().maxCoeff();
    }
    throw ParameterError("unknown symmetry class");
}

double spectral_radius(SymmetryClass cls, int n_half, double width) {
    switch (cls) {
        case SymmetryClass::A: return std::sqrt(width * n_half);
        case SymmetryClass::AIdagger: return std::sqrt(0.5 * width * n_half);
        case SymmetryClass::AIIdagger: return std::sqrt(width * n_half);
    }
    throw ParameterError("unknown symmetry class");
}

double bulk_pi_r1(SymmetryClass cls, double width) {
    switch (cls) {
        case SymmetryClass::A: return 1.0 / width;
        case SymmetryClass::AIdagger: return 2.0 / width;
        case SymmetryClass::AIIdagger: return 2.0 / width;
    }
    throw ParameterError("unknown symmetry class");
}

}  // namespace nhrmt::ensembles
