#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nhrmt/common.hpp"

namespace nhrmt::experiments {

enum class Experiment {
    girko,           // bulk radial density vs flat circular-law value
    dos_edge,        // radial density near the spectral edge vs closed form
    r2_bulk,         // pair correlation vs bulk two-point closed form
    charpoly1,       // one-point moment MC vs replica quadrature
    charpoly2,       // two-point moment MC vs replica quadrature
    spacing_surmise, // small-matrix spacing MC vs surmise
    sample,          // raw eigenvalue dump
    nlsm_eval,       // quadrature-only evaluation on a grid
};

const char* to_string(Experiment e);
Experiment experiment_from_string(const std::string& s);

// Uniform argument grid, parsed from "min:max:count".
struct GridSpec {
    double min = 0.0;
    double max = 3.0;
    int count = 20;

    static GridSpec parse(const std::string& text);
    std::string to_string() const;
    std::vector<double> values() const;
};

struct ExperimentConfig {
    Experiment experiment = Experiment::girko;
    SymmetryClass cls = SymmetryClass::AIdagger;
    int N = 2;                    // half-dimension parameter (dim = N or 2N)
    double g = 2.0;               // ensemble width
    std::vector<int> n_list{1};   // replica indices (charpoly*/nlsm_eval)
    std::int64_t n_samples = 1000;
    std::uint64_t seed = 1;
    GridSpec grid{0.0, 3.0, 20};
    std::string output_dir = "out";
    int threads = 0;              // 0 = hardware concurrency
    int bins = 0;                 // 0 = per-experiment default
    double window_fraction = 0.5; // pair-correlation window / spectral radius
    std::string nlsm_kind = "one_point"; // nlsm_eval: one_point | two_point

    void validate() const;

    // Lossless round trip through the plain key = value config format.
    static ExperimentConfig from_key_values(const std::map<std::string, std::string>& kv);
    std::map<std::string, std::string> to_key_values() const;
};

struct OutputRecord {
    std::string file;   // basename within output_dir
    std::string sha256;
    std::int64_t n_rows = 0;
};

struct RunManifest {
    std::map<std::string, std::string> config;
    std::string version;
    int output_schema = 0;
    double wall_seconds = 0.0;
    std::vector<OutputRecord> outputs;
    std::int64_t dropped_samples = 0;
    std::vector<std::string> notes;

    std::string to_json() const;
};

// Runs one experiment end to end: (a) estimate CSV, (b) prediction CSV on
// the same grid, (c) comparison CSV with z-scores, (d) manifest.json --
// all in config.output_dir. CSV bytes are identical across reruns of the
// same config (and across thread counts); only the manifest's wall-clock
// field varies.
RunManifest run_experiment(const ExperimentConfig& config);

struct CompareReport {
    std::int64_t n_rows = 0;       // rows with a valid prediction
    std::int64_t n_exceed = 0;     // |z| above tolerance
    double max_abs_z = 0.0;
    bool pass = false;             // exceed fraction <= 1%
    std::string text;              // human-readable per-file summary
};

// Compares an estimate CSV against a prediction CSV on the same grid:
// per-row z = (estimate - prediction) / std_error. Grids must match within
// 1e-9 (ParameterError otherwise); rows whose prediction is flagged invalid
// are skipped. Pass/fail rule: at most 1% of rows may exceed the tolerance.
CompareReport compare(const std::string& estimates_csv,
                      const std::string& predictions_csv,
                      double tolerance_z);

}  // namespace nhrmt::experiments
