#pragma once

#include <stdexcept>
#include <string>

namespace nhrmt {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kOutputSchemaVersion = 1;

enum class SymmetryClass { A, AIdagger, AIIdagger };

inline const char* to_string(SymmetryClass c) {
    switch (c) {
        case SymmetryClass::A: return "A";
        case SymmetryClass::AIdagger: return "AIdagger";
        case SymmetryClass::AIIdagger: return "AIIdagger";
    }
    return "?";
}

// Accepts the canonical names plus the short spellings used on the command line.
SymmetryClass symmetry_class_from_string(const std::string& s);

// Invalid user-supplied parameters (dimensions, widths, unsupported ranges).
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numerical routine failed (eigensolver non-convergence etc.).
struct ComputationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Kramers pairing residual exceeded its guard.
struct DegeneracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace nhrmt
