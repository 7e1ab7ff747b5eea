#include "nhrmt/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "nhrmt/asymptotics.hpp"
#include "nhrmt/charpoly.hpp"
#include "nhrmt/ensembles.hpp"
#include "nhrmt/io.hpp"
#include "nhrmt/nlsm.hpp"
#include "nhrmt/spectra.hpp"
#include "nhrmt/threadpool.hpp"

namespace nhrmt::experiments {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

const char* to_string(Experiment e) {
    switch (e) {
        case Experiment::girko: return "girko";
        case Experiment::dos_edge: return "dos_edge";
        case Experiment::r2_bulk: return "r2_bulk";
        case Experiment::charpoly1: return "charpoly1";
        case Experiment::charpoly2: return "charpoly2";
        case Experiment::spacing_surmise: return "spacing_surmise";
        case Experiment::sample: return "sample";
        case Experiment::nlsm_eval: return "nlsm_eval";
    }
    return "?";
}

Experiment experiment_from_string(const std::string& s) {
    for (Experiment e : {Experiment::girko, Experiment::dos_edge, Experiment::r2_bulk,
                         Experiment::charpoly1, Experiment::charpoly2,
                         Experiment::spacing_surmise, Experiment::sample,
                         Experiment::nlsm_eval}) {
        if (s == to_string(e)) return e;
    }
    throw ParameterError("unknown experiment '" + s + "'");
}

// --- GridSpec ---------------------------------------------------------------

GridSpec GridSpec::parse(const std::string& text) {
    GridSpec g;
    const std::size_t c1 = text.find(':');
    const std::size_t c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
        throw ParameterError("grid: expected min:max:count, got '" + text + "'");
    }
    char* end = nullptr;
    const std::string smin = text.substr(0, c1);
    const std::string smax = text.substr(c1 + 1, c2 - c1 - 1);
    const std::string scnt = text.substr(c2 + 1);
    g.min = std::strtod(smin.c_str(), &end);
    if (end != smin.c_str() + smin.size() || smin.empty()) {
        throw ParameterError("grid: bad min '" + smin + "'");
    }
    g.max = std::strtod(smax.c_str(), &end);
    if (end != smax.c_str() + smax.size() || smax.empty()) {
        throw ParameterError("grid: bad max '" + smax + "'");
    }
    g.count = static_cast<int>(std::strtol(scnt.c_str(), &end, 10));
    if (end != scnt.c_str() + scnt.size() || scnt.empty()) {
        throw ParameterError("grid: bad count '" + scnt + "'");
    }
    return g;
}

std::string GridSpec::to_string() const {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.17g:%.17g:%d", min, max, count);
    return buf;
}

std::vector<double> GridSpec::values() const {
    if (count < 1) throw ParameterError("grid: count must be >= 1");
    std::vector<double> v(static_cast<std::size_t>(count));
    if (count == 1) {
        v[0] = min;
        return v;
    }
    for (int k = 0; k < count; ++k) {
        v[static_cast<std::size_t>(k)] = min + (max - min) * k / (count - 1);
    }
    return v;
}

namespace {

// count+1 edges of `count` equal-width bins on [min, max].
std::vector<double> bin_edges(const GridSpec& g) {
    if (g.count < 1) throw ParameterError("grid: count must be >= 1");
    if (!(g.max > g.min)) throw ParameterError("grid: require max > min");
    std::vector<double> e(static_cast<std::size_t>(g.count) + 1);
    for (int k = 0; k <= g.count; ++k) {
        e[static_cast<std::size_t>(k)] = g.min + (g.max - g.min) * k / g.count;
    }
    return e;
}

int max_replicas(Experiment e, SymmetryClass cls, const std::string& nlsm_kind) {
    const bool one_point =
        e == Experiment::charpoly1 || (e == Experiment::nlsm_eval && nlsm_kind == "one_point");
    if (cls == SymmetryClass::AIdagger) return one_point ? 4 : 3;
    return 2;  // self-dual quadratures support n in [0, 2]
}

}  // namespace

// --- ExperimentConfig --------------------------------------------------------

void ExperimentConfig::validate() const {
    if (N < 1) throw ParameterError("config: require N >= 1");
    if (!(g > 0.0)) throw ParameterError("config: require g > 0");
    if (n_samples < 1) throw ParameterError("config: require n_samples >= 1");
    if (grid.count < 1) throw ParameterError("config: require grid count >= 1");
    if (!(grid.max > grid.min) || grid.min < 0.0) {
        throw ParameterError("config: require 0 <= grid min < grid max");
    }
    if (threads < 0) throw ParameterError("config: require threads >= 0");
    if (bins < 0) throw ParameterError("config: require bins >= 0");
    if (!(window_fraction > 0.0) || window_fraction > 1.0) {
        throw ParameterError("config: require window_fraction in (0, 1]");
    }
    if (output_dir.empty()) throw ParameterError("config: output_dir must be non-empty");
    if (nlsm_kind != "one_point" && nlsm_kind != "two_point") {
        throw ParameterError("config: nlsm_kind must be one_point or two_point");
    }
    const bool needs_replicas =
        experiment == Experiment::charpoly1 || experiment == Experiment::charpoly2 ||
        experiment == Experiment::nlsm_eval;
    if (needs_replicas) {
        if (n_list.empty()) throw ParameterError("config: n_list must be non-empty");
        if (cls == SymmetryClass::A) {
            throw ParameterError("config: no replica quadrature for class A");
        }
        const int cap = max_replicas(experiment, cls, nlsm_kind);
        for (int n : n_list) {
            if (n < 0 || n > cap) {
                throw ParameterError("config: replica index " + std::to_string(n) +
                                     " outside [0, " + std::to_string(cap) + "] for class " +
                                     nhrmt::to_string(cls));
            }
        }
    }
    if ((experiment == Experiment::dos_edge || experiment == Experiment::r2_bulk) &&
        cls == SymmetryClass::A) {
        throw ParameterError("config: no closed form for class A in this experiment");
    }
    if (experiment == Experiment::spacing_surmise && N != 2) {
        throw ParameterError(
            "config: the spacing surmise is a two-level comparison; require N = 2");
    }
}

namespace {

std::int64_t parse_int(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const long long x = std::strtoll(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size()) {
        throw ParameterError("config: bad integer for " + key + ": '" + v + "'");
    }
    return x;
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (v.empty() || v[0] == '-' || end != v.c_str() + v.size()) {
        throw ParameterError("config: bad unsigned integer for " + key + ": '" + v + "'");
    }
    return x;
}

double parse_double(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size()) {
        throw ParameterError("config: bad number for " + key + ": '" + v + "'");
    }
    return x;
}

std::string format_double_exact(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_key_values(
    const std::map<std::string, std::string>& kv) {
    ExperimentConfig c;
    for (const auto& [key, value] : kv) {
        if (key == "experiment") {
            c.experiment = experiment_from_string(value);
        } else if (key == "class") {
            c.cls = symmetry_class_from_string(value);
        } else if (key == "N") {
            c.N = static_cast<int>(parse_int(key, value));
        } else if (key == "g") {
            c.g = parse_double(key, value);
        } else if (key == "n_list") {
            c.n_list.clear();
            std::istringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ',')) {
                c.n_list.push_back(static_cast<int>(parse_int(key, item)));
            }
            if (c.n_list.empty()) throw ParameterError("config: empty n_list");
        } else if (key == "n_samples") {
            c.n_samples = parse_int(key, value);
        } else if (key == "seed") {
            c.seed = static_cast<std::uint64_t>(parse_int(key, value));
        } else if (key == "grid") {
            c.grid = GridSpec::parse(value);
        } else if (key == "output_dir") {
            c.output_dir = value;
        } else if (key == "threads") {
            c.threads = static_cast<int>(parse_int(key, value));
        } else if (key == "bins") {
            c.bins = static_cast<int>(parse_int(key, value));
        } else if (key == "window_fraction") {
            c.window_fraction = parse_double(key, value);
        } else if (key == "nlsm_kind") {
            c.nlsm_kind = value;
        } else {
            throw ParameterError("config: unknown key '" + key + "'");
        }
    }
    return c;
}

std::map<std::string, std::string> ExperimentConfig::to_key_values() const {
    std::map<std::string, std::string> kv;
    kv["experiment"] = to_string(experiment);
    kv["class"] = nhrmt::to_string(cls);
    kv["N"] = std::to_string(N);
    kv["g"] = format_double_exact(g);
    std::string nl;
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (i) nl += ',';
        nl += std::to_string(n_list[i]);
    }
    kv["n_list"] = nl;
    kv["n_samples"] = std::to_string(n_samples);
    kv["seed"] = std::to_string(seed);
    kv["grid"] = grid.to_string();
    kv["output_dir"] = output_dir;
    kv["threads"] = std::to_string(threads);
    kv["bins"] = std::to_string(bins);
    kv["window_fraction"] = format_double_exact(window_fraction);
    kv["nlsm_kind"] = nlsm_kind;
    return kv;
}

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["version"] = version;
    j["output_schema"] = output_schema;
    j["config"] = config;  // std::map iterates sorted -> deterministic order
    j["wall_seconds"] = wall_seconds;
    j["dropped_samples"] = dropped_samples;
    j["outputs"] = nlohmann::ordered_json::array();
    for (const auto& o : outputs) {
        j["outputs"].push_back({{"file", o.file}, {"sha256", o.sha256}, {"n_rows", o.n_rows}});
    }
    j["notes"] = notes;
    return j.dump(2) + "\n";
}

// --- comparison --------------------------------------------------------------

namespace {

io::CsvFile as_file(const io::CsvTable& t) { return io::CsvFile{t.header(), t.rows()}; }

int value_column(const io::CsvFile& f) {
    const int c = f.column("normalized_moment");
    return c >= 0 ? c : f.require_column("value");
}

bool parse_cell(const std::string& cell, double& out) {
    char* end = nullptr;
    out = std::strtod(cell.c_str(), &end);
    return !cell.empty() && end == cell.c_str() + cell.size();
}

struct ComparisonBuild {
    io::CsvTable table{std::vector<std::string>{"placeholder"}};
    std::vector<double> z_valid;  // z of rows with a valid prediction
    double max_abs_z = 0.0;
};

ComparisonBuild build_comparison(const io::CsvFile& est, const io::CsvFile& pred) {
    if (est.rows.size() != pred.rows.size()) {
        throw ParameterError("compare: row counts differ (" + std::to_string(est.rows.size()) +
                             " vs " + std::to_string(pred.rows.size()) + ")");
    }
    const int ev = value_column(est);
    const int pv = value_column(pred);
    const int se_abs = est.column("std_error");
    const int se_rel = est.column("rel_std_error");
    if (se_abs < 0 && se_rel < 0) {
        throw ParameterError("compare: estimate file has no std_error / rel_std_error column");
    }
    const int valid_col = pred.column("valid");

    // Join columns: shared names that are not value/error/bookkeeping.
    std::vector<std::pair<int, int>> join;  // (est col, pred col)
    std::vector<std::string> join_names;
    for (std::size_t i = 0; i < est.header.size(); ++i) {
        const std::string& name = est.header[i];
        if (name == "value" || name == "normalized_moment" || name == "std_error" ||
            name == "rel_std_error" || name == "valid" || name == "n_samples") {
            continue;
        }
        const int pc = pred.column(name);
        if (pc >= 0) {
            join.emplace_back(static_cast<int>(i), pc);
            join_names.push_back(name);
        }
    }

    std::vector<std::string> header = join_names;
    header.insert(header.end(), {"estimate", "prediction", "std_error", "z", "valid"});
    ComparisonBuild out;
    out.table = io::CsvTable(header);

    for (std::size_t r = 0; r < est.rows.size(); ++r) {
        std::vector<std::string> row;
        row.reserve(header.size());
        for (const auto& [ec, pc] : join) {
            const std::string& a = est.rows[r][static_cast<std::size_t>(ec)];
            const std::string& b = pred.rows[r][static_cast<std::size_t>(pc)];
            double na = 0.0, nb = 0.0;
            if (parse_cell(a, na) && parse_cell(b, nb)) {
                if (std::abs(na - nb) > 1e-9) {
                    throw ParameterError("compare: grid mismatch in column '" +
                                         est.header[static_cast<std::size_t>(ec)] + "' row " +
                                         std::to_string(r) + " (" + a + " vs " + b + ")");
                }
            } else if (a != b) {
                throw ParameterError("compare: mismatch in column '" +
                                     est.header[static_cast<std::size_t>(ec)] + "' row " +
                                     std::to_string(r));
            }
            row.push_back(a);
        }
        const double e = est.number(r, ev);
        const double p = pred.number(r, pv);
        double se = se_abs >= 0 ? est.number(r, se_abs) : est.number(r, se_rel) * std::abs(e);
        const bool valid = valid_col < 0 || pred.number(r, valid_col) != 0.0;
        double z = kNan;
        if (valid) {
            if (se > 0.0) {
                z = (e - p) / se;
            } else {
                z = (e == p) ? 0.0 : kInf;
            }
            out.z_valid.push_back(z);
            if (std::isfinite(z)) {
                out.max_abs_z = std::max(out.max_abs_z, std::abs(z));
            } else {
                out.max_abs_z = kInf;
            }
        }
        row.push_back(io::format_number(e));
        row.push_back(io::format_number(p));
        row.push_back(io::format_number(se));
        row.push_back(io::format_number(z));
        row.push_back(valid ? "1" : "0");
        out.table.add_row(row);
    }
    return out;
}

}  // namespace

CompareReport compare(const std::string& estimates_csv, const std::string& predictions_csv,
                      double tolerance_z) {
    if (!(tolerance_z > 0.0)) throw ParameterError("compare: require tolerance > 0");
    const io::CsvFile est = io::read_csv(estimates_csv);
    const io::CsvFile pred = io::read_csv(predictions_csv);
    const ComparisonBuild b = build_comparison(est, pred);
    CompareReport rep;
    rep.n_rows = static_cast<std::int64_t>(b.z_valid.size());
    for (double z : b.z_valid) {
        if (!(std::abs(z) <= tolerance_z)) ++rep.n_exceed;
    }
    rep.max_abs_z = b.max_abs_z;
    rep.pass = 100 * rep.n_exceed <= rep.n_rows;  // at most 1% of rows may exceed
    std::ostringstream ss;
    ss << "compared " << rep.n_rows << " rows (of " << est.rows.size() << ") at |z| <= "
       << tolerance_z << ": " << rep.n_exceed << " exceed, max |z| = " << b.max_abs_z << " -> "
       << (rep.pass ? "PASS" : "FAIL");
    rep.text = ss.str();
    return rep;
}

// --- experiment runners --------------------------------------------------------

namespace {

using OutputList = std::vector<std::pair<std::string, io::CsvTable>>;

struct RunnerResult {
    OutputList outputs;
    std::int64_t dropped = 0;
    std::vector<std::string> notes;
};

int effective_threads(const ExperimentConfig& cfg) {
    return cfg.threads == 0 ? threads::default_thread_count() : cfg.threads;
}

ensembles::EnsembleSpec base_spec(const ExperimentConfig& cfg) {
    ensembles::EnsembleSpec s;
    s.cls = cfg.cls;
    s.n_half = cfg.N;
    s.width = cfg.g;
    s.seed = cfg.seed;
    s.realization_index = 0;
    return s;
}

// Accumulate spectra over all realizations into per-block accumulators and
// merge in block order (thread-count independent).
template <typename Accum>
Accum accumulate_spectra(const ExperimentConfig& cfg, const Accum& prototype) {
    const auto blocks =
        threads::make_blocks(cfg.n_samples, static_cast<int>(std::min<std::int64_t>(
                                                cfg.n_samples, 200)));
    std::vector<Accum> acc(blocks.size(), prototype);
    const ensembles::EnsembleSpec spec = base_spec(cfg);
    threads::run_blocks(blocks, effective_threads(cfg), [&](const threads::Block& blk) {
        Accum& a = acc[static_cast<std::size_t>(blk.index)];
        for (std::int64_t r = blk.first; r < blk.last; ++r) {
            const ensembles::EnsembleSpec sr = spec.with_realization(r);
            a.add(spectra::eigenvalues(ensembles::sample(sr), sr));
        }
    });
    Accum total = acc[0];
    for (std::size_t b = 1; b < acc.size(); ++b) total.merge(acc[b]);
    return total;
}

void add_comparison(RunnerResult& rr, const std::string& stem, const io::CsvTable& est,
                    const io::CsvTable& pred) {
    ComparisonBuild cb = build_comparison(as_file(est), as_file(pred));
    rr.outputs.emplace_back(stem + "_comparison.csv", std::move(cb.table));
}

// girko: equal-area annular bins of the radial density against the flat bulk
// value pi*R1 = bulk.
RunnerResult run_girko(const ExperimentConfig& cfg) {
    RunnerResult rr;
    const double radius = ensembles::spectral_radius(cfg.cls, cfg.N, cfg.g);
    const int n_bins = cfg.bins > 0 ? cfg.bins : 16;
    std::vector<double> edges(static_cast<std::size_t>(n_bins) + 1);
    const double r_max = 1.05 * radius;
    for (int k = 0; k <= n_bins; ++k) {
        edges[static_cast<std::size_t>(k)] =
            r_max * std::sqrt(static_cast<double>(k) / n_bins);
    }
    const spectra::HistogramEstimate h =
        accumulate_spectra(cfg, spectra::RadialDensityAccum(edges)).estimate();

    const double bulk = ensembles::bulk_pi_r1(cfg.cls, cfg.g);
    io::CsvTable est({"bin_left", "bin_right", "value", "std_error", "n_samples"});
    io::CsvTable pred({"bin_left", "bin_right", "value", "valid"});
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        est.add_row({io::format_number(edges[k]), io::format_number(edges[k + 1]),
                     io::format_number(M_PI * h.counts[k]),
                     io::format_number(M_PI * h.std_errors[k]),
                     std::to_string(h.n_samples)});
        const bool valid = edges[k + 1] <= 0.7 * radius;
        pred.add_row({io::format_number(edges[k]), io::format_number(edges[k + 1]),
                      io::format_number(bulk), valid ? "1" : "0"});
    }
    rr.notes.push_back("girko: value column is pi*R1 in measured units; "
                       "prediction valid only in the bulk (bin_right <= 0.7 * radius)");
    rr.outputs.emplace_back("girko_estimate.csv", est);
    rr.outputs.emplace_back("girko_prediction.csv", pred);
    add_comparison(rr, "girko", est, pred);
    return rr;
}

// dos_edge: radial density rebinned in the edge coordinate u and scaled to
// the closed form's native width convention.
RunnerResult run_dos_edge(const ExperimentConfig& cfg) {
    RunnerResult rr;
    const double radius = ensembles::spectral_radius(cfg.cls, cfg.N, cfg.g);
    const asymptotics::EdgeUnits units0 = asymptotics::edge_units(cfg.cls, 0.0, cfg.N, cfg.g);
    const double s_len = radius / units0.u;  // measured length per formula unit

    const std::vector<double> u_edges = bin_edges(cfg.grid);
    // u ascending corresponds to |z| descending; the accumulator needs
    // ascending radii.
    std::vector<double> z_edges(u_edges.size());
    for (std::size_t k = 0; k < u_edges.size(); ++k) {
        z_edges[z_edges.size() - 1 - k] = radius - s_len * u_edges[k];
    }
    if (z_edges.front() < 0.0) {
        throw ParameterError("dos_edge: u grid reaches past the origin; reduce grid max");
    }
    const spectra::HistogramEstimate h =
        accumulate_spectra(cfg, spectra::RadialDensityAccum(z_edges)).estimate();

    io::CsvTable est({"u_left", "u_right", "value", "std_error", "n_samples"});
    io::CsvTable pred({"u_left", "u_right", "value", "valid"});
    const std::size_t n_bins = u_edges.size() - 1;
    for (std::size_t k = 0; k < n_bins; ++k) {
        const std::size_t zk = n_bins - 1 - k;  // z-bin holding this u-bin
        est.add_row({io::format_number(u_edges[k]), io::format_number(u_edges[k + 1]),
                     io::format_number(M_PI * h.counts[zk] * units0.pi_r1_scale),
                     io::format_number(M_PI * h.std_errors[zk] * units0.pi_r1_scale),
                     std::to_string(h.n_samples)});
        const double u_mid = 0.5 * (u_edges[k] + u_edges[k + 1]);
        const bool valid = u_mid >= 1.0;
        pred.add_row({io::format_number(u_edges[k]), io::format_number(u_edges[k + 1]),
                      io::format_number(valid ? asymptotics::dos_edge(cfg.cls, u_mid, cfg.N)
                                              : kNan),
                      valid ? "1" : "0"});
    }
    rr.notes.push_back(
        "dos_edge: value column is pi*R1 in the formula's width convention (g_formula = " +
        format_double_exact(units0.g_formula) + "); prediction valid for u_mid >= 1");
    rr.outputs.emplace_back("dos_edge_estimate.csv", est);
    rr.outputs.emplace_back("dos_edge_prediction.csv", pred);
    add_comparison(rr, "dos_edge", est, pred);
    return rr;
}

// r2_bulk: pair correlation in a central disk window against the truncated
// large-separation closed form.
RunnerResult run_r2_bulk(const ExperimentConfig& cfg) {
    RunnerResult rr;
    const double radius = ensembles::spectral_radius(cfg.cls, cfg.N, cfg.g);
    const double window = cfg.window_fraction * radius;
    const std::vector<double> edges = bin_edges(cfg.grid);
    const spectra::HistogramEstimate h =
        accumulate_spectra(cfg, spectra::PairCorrelationAccum(window, edges)).estimate();

    io::CsvTable est({"omega_left", "omega_right", "value", "std_error", "n_samples"});
    io::CsvTable pred({"omega_left", "omega_right", "value", "valid"});
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        est.add_row({io::format_number(edges[k]), io::format_number(edges[k + 1]),
                     io::format_number(M_PI * M_PI * h.counts[k]),
                     io::format_number(M_PI * M_PI * h.std_errors[k]),
                     std::to_string(h.n_samples)});
        const double mid = 0.5 * (edges[k] + edges[k + 1]);
        const double nu = mid * mid / cfg.g;
        const bool valid = nu >= 4.0;
        pred.add_row({io::format_number(edges[k]), io::format_number(edges[k + 1]),
                      io::format_number(valid ? asymptotics::r2_bulk(cfg.cls, mid, cfg.g)
                                              : kNan),
                      valid ? "1" : "0"});
    }
    rr.notes.push_back("r2_bulk: value column is pi^2*R2 in measured units; prediction valid "
                       "in the plateau regime |omega|^2/g >= 4");
    rr.outputs.emplace_back("r2_bulk_estimate.csv", est);
    rr.outputs.emplace_back("r2_bulk_prediction.csv", pred);
    add_comparison(rr, "r2_bulk", est, pred);
    return rr;
}

// spacing_surmise: spacing histogram of the two-level model, mean-rescaled on
// both sides.
RunnerResult run_spacing(const ExperimentConfig& cfg) {
    RunnerResult rr;
    const auto blocks = threads::make_blocks(
        cfg.n_samples, static_cast<int>(std::min<std::int64_t>(cfg.n_samples, 200)));
    std::vector<std::vector<double>> parts(blocks.size());
    const ensembles::EnsembleSpec spec = base_spec(cfg);
    threads::run_blocks(blocks, effective_threads(cfg), [&](const threads::Block& blk) {
        auto& part = parts[static_cast<std::size_t>(blk.index)];
        part.reserve(static_cast<std::size_t>(blk.last - blk.first));
        for (std::int64_t r = blk.first; r < blk.last; ++r) {
            const ensembles::EnsembleSpec sr = spec.with_realization(r);
            std::vector<spectra::ComplexSpectrum> one{
                spectra::eigenvalues(ensembles::sample(sr), sr)};
            part.push_back(spectra::spacing_samples(one)[0]);
        }
    });
    std::vector<double> s;
    s.reserve(static_cast<std::size_t>(cfg.n_samples));
    for (const auto& p : parts) s.insert(s.end(), p.begin(), p.end());
    double mean = 0.0;
    for (double v : s) mean += v;
    mean /= static_cast<double>(s.size());

    const std::vector<double> edges = bin_edges(cfg.grid);
    std::vector<std::int64_t> counts(edges.size() - 1, 0);
    for (double v : s) {
        const double x = v / mean;
        if (x < edges.front() || x >= edges.back()) continue;
        const auto it = std::upper_bound(edges.begin(), edges.end(), x);
        ++counts[static_cast<std::size_t>(it - edges.begin()) - 1];
    }

    const double mu = asymptotics::surmise_mean_spacing(cfg.cls, 1.0);
    io::CsvTable est({"s_left", "s_right", "value", "std_error", "n_samples"});
    io::CsvTable pred({"s_left", "s_right", "value", "valid"});
    const double n = static_cast<double>(s.size());
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        const double width = edges[k + 1] - edges[k];
        const double density = static_cast<double>(counts[k]) / (n * width);
        // Poisson-floored standard error keeps empty tail bins comparable.
        const double se = std::sqrt(static_cast<double>(counts[k]) + 1.0) / (n * width);
        est.add_row({io::format_number(edges[k]), io::format_number(edges[k + 1]),
                     io::format_number(density), io::format_number(se),
                     std::to_string(s.size())});
        const double mid = 0.5 * (edges[k] + edges[k + 1]);
        pred.add_row({io::format_number(edges[k]), io::format_number(edges[k + 1]),
                      io::format_number(mu * asymptotics::surmise_spacing(cfg.cls, mu * mid, 1.0)),
                      "1"});
    }
    rr.notes.push_back("spacing_surmise: value column is the density of s/<s>; the surmise "
                       "is rescaled to unit mean (C is arbitrary)");
    rr.outputs.emplace_back("spacing_estimate.csv", est);
    rr.outputs.emplace_back("spacing_prediction.csv", pred);
    add_comparison(rr, "spacing", est, pred);
    return rr;
}

// sample: raw eigenvalue dump.
RunnerResult run_sample(const ExperimentConfig& cfg) {
    RunnerResult rr;
    io::CsvTable dump({"realization", "re", "im"});
    const ensembles::EnsembleSpec spec = base_spec(cfg);
    for (std::int64_t r = 0; r < cfg.n_samples; ++r) {
        const ensembles::EnsembleSpec sr = spec.with_realization(r);
        const spectra::ComplexSpectrum sp = spectra::eigenvalues(ensembles::sample(sr), sr);
        for (const auto& ev : sp.eigenvalues) {
            dump.add_row({std::to_string(r), io::format_number(ev.real()),
                          io::format_number(ev.imag())});
        }
    }
    rr.outputs.emplace_back("sample_eigenvalues.csv", dump);
    return rr;
}

// Log of the one-point replica prediction at squared radius zsq (raw,
// unnormalized).
double log_z1_prediction(SymmetryClass cls, int n, int N, double g, double zsq) {
    if (cls == SymmetryClass::AIdagger) {
        return nlsm::z1_integral_aidag(n, N, g, zsq).log_value;
    }
    return nlsm::z1_integral_aiidag(n, N, nlsm::rescale_zsq(zsq, g)).log_value;
}

// Log of the two-point replica prediction with z1 = 0, |z2| = a (raw).
double log_z2_prediction(SymmetryClass cls, int n, double g, double a) {
    const double t = a * a / g;           // separation argument
    const double zsq = a * a / (4.0 * g);  // midpoint argument
    if (cls == SymmetryClass::AIdagger) {
        return nlsm::z2_integral_aidag(n, t, zsq).log_value;
    }
    return nlsm::z2_integral_aiidag(n, t, zsq).log_value;
}

RunnerResult run_charpoly(const ExperimentConfig& cfg) {
    RunnerResult rr;
    const bool two_point = cfg.experiment == Experiment::charpoly2;
    const std::string stem = two_point ? "charpoly2" : "charpoly1";
    const std::string abs_name = two_point ? "abs_z2" : "abs_z";
    const std::vector<double> grid = cfg.grid.values();
    const ensembles::EnsembleSpec spec = base_spec(cfg);

    io::CsvTable est({abs_name, "n", "N", "g", "normalized_moment", "rel_std_error",
                      "n_samples"});
    io::CsvTable pred({abs_name, "n", "N", "g", "normalized_moment", "valid"});
    bool any = false;
    for (int n : cfg.n_list) {
        try {
            const charpoly::MomentCurve curve =
                two_point ? charpoly::z2_moment_curve(spec, n, grid, cfg.n_samples,
                                                      effective_threads(cfg))
                          : charpoly::z1_moment_curve(spec, n, grid, cfg.n_samples,
                                                      effective_threads(cfg));
            rr.dropped += curve.n_dropped;
            const double log_pred_zero =
                two_point ? log_z2_prediction(cfg.cls, n, cfg.g, 0.0)
                          : log_z1_prediction(cfg.cls, n, cfg.N, cfg.g, 0.0);
            for (std::size_t k = 0; k < grid.size(); ++k) {
                const double a = grid[k];
                est.add_row({io::format_number(a), std::to_string(n), std::to_string(cfg.N),
                             format_double_exact(cfg.g),
                             io::format_number(curve.normalized[k]),
                             io::format_number(curve.normalized[k] > 0.0
                                                   ? curve.normalized_se[k] / curve.normalized[k]
                                                   : 0.0),
                             std::to_string(curve.n_samples)});
                const double lp = two_point
                                      ? log_z2_prediction(cfg.cls, n, cfg.g, a)
                                      : log_z1_prediction(cfg.cls, n, cfg.N, cfg.g, a * a);
                const double value =
                    std::exp(lp - log_pred_zero - 2.0 * n * a * a / cfg.g);
                pred.add_row({io::format_number(a), std::to_string(n), std::to_string(cfg.N),
                              format_double_exact(cfg.g), io::format_number(value), "1"});
            }
            any = true;
        } catch (const std::exception& e) {
            rr.notes.push_back(stem + ": n = " + std::to_string(n) +
                               " failed and was skipped: " + e.what());
        }
    }
    if (!any) throw ComputationError(stem + ": every replica index failed");
    rr.notes.push_back(stem + ": normalized_moment is Z/Z(0) * exp(-2 n |arg|^2 / g)" +
                       std::string(two_point ? " with z1 = 0" : ""));
    rr.outputs.emplace_back(stem + "_estimate.csv", est);
    rr.outputs.emplace_back(stem + "_prediction.csv", pred);
    add_comparison(rr, stem, est, pred);
    return rr;
}

RunnerResult run_nlsm_eval(const ExperimentConfig& cfg) {
    RunnerResult rr;
    const bool two_point = cfg.nlsm_kind == "two_point";
    io::CsvTable values({"n", "N", "g", "abs_arg", "value", "log_value", "abs_error_est",
                         "n_nodes", "method"});
    for (int n : cfg.n_list) {
        for (double a : cfg.grid.values()) {
            nlsm::QuadratureResult q;
            if (two_point) {
                const double t = a * a / cfg.g;
                q = cfg.cls == SymmetryClass::AIdagger ? nlsm::z2_integral_aidag(n, t, 0.0)
                                                       : nlsm::z2_integral_aiidag(n, t, 0.0);
            } else {
                q = cfg.cls == SymmetryClass::AIdagger
                        ? nlsm::z1_integral_aidag(n, cfg.N, cfg.g, a * a)
                        : nlsm::z1_integral_aiidag(n, cfg.N,
                                                   nlsm::rescale_zsq(a * a, cfg.g));
            }
            values.add_row({std::to_string(n), std::to_string(cfg.N),
                            format_double_exact(cfg.g), io::format_number(a),
                            io::format_number(q.value), io::format_number(q.log_value),
                            io::format_number(q.abs_error_est), std::to_string(q.n_nodes),
                            q.method});
        }
    }
    rr.notes.push_back("nlsm_eval: " + cfg.nlsm_kind +
                       " integrals; two_point uses a centered pair (zsq = 0)");
    rr.outputs.emplace_back("nlsm_values.csv", values);
    return rr;
}

}  // namespace

RunManifest run_experiment(const ExperimentConfig& config) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();

    RunnerResult rr;
    switch (config.experiment) {
        case Experiment::girko: rr = run_girko(config); break;
        case Experiment::dos_edge: rr = run_dos_edge(config); break;
        case Experiment::r2_bulk: rr = run_r2_bulk(config); break;
        case Experiment::charpoly1:
        case Experiment::charpoly2: rr = run_charpoly(config); break;
        case Experiment::spacing_surmise: rr = run_spacing(config); break;
        case Experiment::sample: rr = run_sample(config); break;
        case Experiment::nlsm_eval: rr = run_nlsm_eval(config); break;
    }

    io::ensure_directory(config.output_dir);
    RunManifest man;
    man.config = config.to_key_values();
    man.version = kVersion;
    man.output_schema = kOutputSchemaVersion;
    man.dropped_samples = rr.dropped;
    man.notes = rr.notes;
    for (const auto& [name, table] : rr.outputs) {
        const std::string path = config.output_dir + "/" + name;
        table.write(path);
        man.outputs.push_back(OutputRecord{name, io::sha256_file(path),
                                           static_cast<std::int64_t>(table.n_rows())});
    }
    man.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    io::write_text_file(config.output_dir + "/manifest.json", man.to_json());
    return man;
}

}  // namespace nhrmt::experiments
