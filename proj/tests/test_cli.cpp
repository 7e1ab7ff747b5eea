#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "nhrmt/experiments.hpp"
#include "nhrmt/io.hpp"

using nhrmt::IoError;
using nhrmt::ParameterError;
using nhrmt::SymmetryClass;
using namespace nhrmt::experiments;
namespace io = nhrmt::io;

namespace {

std::string test_dir(const std::string& leaf) {
    const std::string d =
        "/tmp/nhrmt_unit_" + std::to_string(::getpid()) + "/" + leaf;
    std::filesystem::create_directories(d);
    return d;
}

// Builds an estimate/prediction CSV pair on a shared 1D grid.
struct Fixture {
    io::CsvTable est{std::vector<std::string>{"x_left", "x_right", "value", "std_error",
                                              "n_samples"}};
    io::CsvTable pred{std::vector<std::string>{"x_left", "x_right", "value", "valid"}};

    void add(double x, double est_v, double se, double pred_v, bool valid = true) {
        est.add_row({io::format_number(x), io::format_number(x + 1.0),
                     io::format_number(est_v), io::format_number(se), "100"});
        pred.add_row({io::format_number(x), io::format_number(x + 1.0),
                      io::format_number(pred_v), valid ? "1" : "0"});
    }

    std::pair<std::string, std::string> write(const std::string& dir) {
        const std::string e = dir + "/est.csv", p = dir + "/pred.csv";
        est.write(e);
        pred.write(p);
        return {e, p};
    }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("sha256 known-answer vectors") {
    CHECK(io::sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(io::sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(io::sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
    // Exercise the multi-block path (length > 64 and the 56-byte pad edge).
    CHECK(io::sha256_hex(std::string(56, 'x')).size() == 64);
    CHECK(io::sha256_hex(std::string(1000, 'a')) != io::sha256_hex(std::string(999, 'a')));
}

TEST_CASE("csv formatting, quoting, and file round trip") {
    CHECK(io::format_number(1.5) == "1.500000000000e+00");
    CHECK(io::format_number(-0.001) == "-1.000000000000e-03");
    const std::string dir = test_dir("csv");
    io::CsvTable t({"name", "x"});
    t.add_row({"plain", io::format_number(2.0)});
    t.add_row({"with,comma", io::format_number(3.0)});
    t.add_row({"with\"quote", io::format_number(4.0)});
    t.write(dir + "/t.csv");
    const io::CsvFile f = io::read_csv(dir + "/t.csv");
    REQUIRE(f.rows.size() == 3);
    CHECK(f.rows[1][0] == "with,comma");
    CHECK(f.rows[2][0] == "with\"quote");
    CHECK(f.number(0, f.require_column("x")) == 2.0);
    CHECK(f.column("missing") == -1);
    CHECK_THROWS_AS(f.require_column("missing"), IoError);
    CHECK_THROWS_AS(f.number(0, f.require_column("name")), IoError);
    CHECK_THROWS_AS(io::read_csv(dir + "/nope.csv"), IoError);
}

TEST_CASE("key = value parsing") {
    const auto kv = io::parse_key_values(
        "# comment\n key = a \nother=b\nkey = c # trailing comment\n\n");
    CHECK(kv.at("key") == "c");
    CHECK(kv.at("other") == "b");
    CHECK_THROWS_AS(io::parse_key_values("just a line\n"), IoError);
}

TEST_CASE("grid parsing and values") {
    const GridSpec g = GridSpec::parse("0:3:4");
    CHECK(g.min == 0.0);
    CHECK(g.max == 3.0);
    CHECK(g.count == 4);
    const auto v = g.values();
    REQUIRE(v.size() == 4);
    CHECK(v.front() == 0.0);
    CHECK(v.back() == 3.0);
    CHECK(v[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(GridSpec::parse("0.5:2.5:1").values() == std::vector<double>{0.5});
    CHECK_THROWS_AS(GridSpec::parse("1:2"), ParameterError);
    CHECK_THROWS_AS(GridSpec::parse("a:2:3"), ParameterError);
    CHECK_THROWS_AS(GridSpec::parse("0:3:x"), ParameterError);
    // Lossless to_string round trip for an awkward double.
    GridSpec g2{0.1, 2.7000000000000002, 13};
    const GridSpec g3 = GridSpec::parse(g2.to_string());
    CHECK(g3.min == g2.min);
    CHECK(g3.max == g2.max);
    CHECK(g3.count == g2.count);
}

TEST_CASE("experiment config round-trips losslessly and rejects junk") {
    ExperimentConfig c;
    c.experiment = Experiment::charpoly2;
    c.cls = SymmetryClass::AIIdagger;
    c.N = 17;
    c.g = 0.30000000000000004;  // not exactly representable in short decimal
    c.n_list = {1, 2};
    c.n_samples = 123456789012LL;
    c.seed = 9876543210123456789ULL;
    c.grid = GridSpec{0.0, 2.5, 11};
    c.output_dir = "some/dir";
    c.threads = 3;
    c.window_fraction = 1.0 / 3.0;
    const auto kv = c.to_key_values();
    const ExperimentConfig d = ExperimentConfig::from_key_values(kv);
    CHECK(d.to_key_values() == kv);
    CHECK(d.g == c.g);
    CHECK(d.seed == c.seed);
    CHECK(d.window_fraction == c.window_fraction);
    CHECK(d.n_list == c.n_list);

    auto bad = kv;
    bad["surprise"] = "1";
    CHECK_THROWS_AS(ExperimentConfig::from_key_values(bad), ParameterError);
    auto bad2 = kv;
    bad2["N"] = "seven";
    CHECK_THROWS_AS(ExperimentConfig::from_key_values(bad2), ParameterError);
}

TEST_CASE("config validation rejects inconsistent requests") {
    ExperimentConfig c;
    c.experiment = Experiment::dos_edge;
    c.cls = SymmetryClass::AIdagger;
    c.N = 50;
    c.n_samples = 0;  // zero realizations
    c.output_dir = test_dir("validate") + "/never_created";
    CHECK_THROWS_AS(run_experiment(c), ParameterError);
    // No partial files: the output directory was never created.
    CHECK(!std::filesystem::exists(c.output_dir));

    c.n_samples = 10;
    c.cls = SymmetryClass::A;
    CHECK_THROWS_AS(c.validate(), ParameterError);  // no class-A closed form

    ExperimentConfig sp;
    sp.experiment = Experiment::spacing_surmise;
    sp.N = 3;  // surmise comparison needs the two-level model
    CHECK_THROWS_AS(sp.validate(), ParameterError);

    ExperimentConfig cp;
    cp.experiment = Experiment::charpoly1;
    cp.cls = SymmetryClass::AIIdagger;
    cp.n_list = {3};  // beyond the supported self-dual replica range
    CHECK_THROWS_AS(cp.validate(), ParameterError);
    cp.cls = SymmetryClass::AIdagger;
    cp.validate();  // n = 3 is fine for the transpose-symmetric class
}

TEST_CASE("compare: identical inputs give zero z everywhere") {
    Fixture fx;
    for (int i = 0; i < 8; ++i) fx.add(i, 1.0 + i, 0.1, 1.0 + i);
    const auto [e, p] = fx.write(test_dir("cmp_id"));
    const CompareReport rep = compare(e, p, 5.0);
    CHECK(rep.pass);
    CHECK(rep.n_rows == 8);
    CHECK(rep.n_exceed == 0);
    CHECK(rep.max_abs_z == 0.0);
}

TEST_CASE("compare: one outlier in 200 rows passes, five fail") {
    Fixture one, five;
    for (int i = 0; i < 200; ++i) {
        one.add(i, 1.0 + (i == 7 ? 1.0 : 0.0), 0.1, 1.0);     // one 10-sigma row
        five.add(i, 1.0 + (i % 40 == 3 ? 1.0 : 0.0), 0.1, 1.0);  // five 10-sigma rows
    }
    {
        const auto [e, p] = one.write(test_dir("cmp_one"));
        const CompareReport rep = compare(e, p, 5.0);
        CHECK(rep.pass);
        CHECK(rep.n_exceed == 1);
        CHECK(rep.max_abs_z == doctest::Approx(10.0).epsilon(1e-12));
    }
    {
        const auto [e, p] = five.write(test_dir("cmp_five"));
        const CompareReport rep = compare(e, p, 5.0);
        CHECK(!rep.pass);
        CHECK(rep.n_exceed == 5);
    }
}

TEST_CASE("compare: invalid prediction rows are skipped") {
    Fixture fx;
    for (int i = 0; i < 10; ++i) fx.add(i, 1.0, 0.01, i < 3 ? 99.0 : 1.0, i >= 3);
    const auto [e, p] = fx.write(test_dir("cmp_valid"));
    const CompareReport rep = compare(e, p, 5.0);
    CHECK(rep.pass);
    CHECK(rep.n_rows == 7);
    CHECK(rep.n_exceed == 0);
}

TEST_CASE("compare: grid mismatch and schema violations are parameter errors") {
    Fixture a, b;
    for (int i = 0; i < 4; ++i) a.add(i, 1.0, 0.1, 1.0);
    for (int i = 0; i < 4; ++i) b.add(i + 0.5, 1.0, 0.1, 1.0);
    const std::string dir = test_dir("cmp_bad");
    a.est.write(dir + "/est.csv");
    b.pred.write(dir + "/pred.csv");
    CHECK_THROWS_AS(compare(dir + "/est.csv", dir + "/pred.csv", 5.0), ParameterError);

    // Row-count mismatch.
    Fixture c;
    for (int i = 0; i < 3; ++i) c.add(i, 1.0, 0.1, 1.0);
    c.est.write(dir + "/est3.csv");
    a.pred.write(dir + "/pred4.csv");
    CHECK_THROWS_AS(compare(dir + "/est3.csv", dir + "/pred4.csv", 5.0), ParameterError);

    // Estimate without any error column.
    io::CsvTable noerr({"x_left", "value"});
    noerr.add_row({"0", "1"});
    noerr.write(dir + "/noerr.csv");
    io::CsvTable predx({"x_left", "value", "valid"});
    predx.add_row({"0", "1", "1"});
    predx.write(dir + "/predx.csv");
    CHECK_THROWS_AS(compare(dir + "/noerr.csv", dir + "/predx.csv", 5.0), ParameterError);
    CHECK_THROWS_AS(compare(dir + "/est.csv", dir + "/pred.csv", 0.0), ParameterError);
}

TEST_CASE("compare: relative error columns are converted to absolute") {
    const std::string dir = test_dir("cmp_rel");
    io::CsvTable est({"x", "normalized_moment", "rel_std_error"});
    est.add_row({"0", io::format_number(2.0), io::format_number(0.05)});
    io::CsvTable pred({"x", "normalized_moment", "valid"});
    pred.add_row({"0", io::format_number(2.3), "1"});
    est.write(dir + "/est.csv");
    pred.write(dir + "/pred.csv");
    const CompareReport rep = compare(dir + "/est.csv", dir + "/pred.csv", 5.0);
    // se = 0.05 * 2.0 = 0.1; z = (2.0 - 2.3)/0.1 = -3.
    CHECK(rep.max_abs_z == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(rep.pass);
}

TEST_CASE("run_experiment writes verifiable manifests and reproduces bytes") {
    ExperimentConfig c;
    c.experiment = Experiment::spacing_surmise;
    c.cls = SymmetryClass::AIdagger;
    c.N = 2;
    c.g = 2.0;
    c.n_samples = 2000;
    c.seed = 99;
    c.grid = GridSpec{0.0, 4.0, 16};
    c.output_dir = test_dir("run_a");
    const RunManifest man = run_experiment(c);
    REQUIRE(man.outputs.size() == 3);
    for (const auto& rec : man.outputs) {
        const std::string path = c.output_dir + "/" + rec.file;
        CHECK(io::file_exists(path));
        CHECK(io::sha256_file(path) == rec.sha256);  // manifest checksums verify
        CHECK(rec.n_rows == 16);
    }
    CHECK(io::file_exists(c.output_dir + "/manifest.json"));
    CHECK(man.config.at("experiment") == "spacing_surmise");
    CHECK(man.dropped_samples == 0);

    // Same config, fresh directory, different thread request: same bytes.
    ExperimentConfig c2 = c;
    c2.output_dir = test_dir("run_b");
    c2.threads = 4;
    const RunManifest man2 = run_experiment(c2);
    for (std::size_t i = 0; i < man.outputs.size(); ++i) {
        CHECK(man.outputs[i].sha256 == man2.outputs[i].sha256);
    }
}

TEST_CASE("run_experiment: quadrature-only evaluation emits trivial and real rows") {
    ExperimentConfig c;
    c.experiment = Experiment::nlsm_eval;
    c.cls = SymmetryClass::AIIdagger;
    c.N = 2;
    c.g = 1.0;
    c.n_list = {0, 1};
    c.grid = GridSpec{0.0, 1.0, 3};
    c.output_dir = test_dir("run_nlsm");
    const RunManifest man = run_experiment(c);
    REQUIRE(man.outputs.size() == 1);
    const io::CsvFile f = io::read_csv(c.output_dir + "/" + man.outputs[0].file);
    REQUIRE(f.rows.size() == 6);
    const int vcol = f.require_column("value");
    const int ncol = f.require_column("n");
    for (std::size_t r = 0; r < f.rows.size(); ++r) {
        if (f.number(r, ncol) == 0.0) CHECK(f.number(r, vcol) == 1.0);
        else CHECK(f.number(r, vcol) > 0.0);
    }
}

TEST_CASE("text file helpers") {
    const std::string dir = test_dir("txt");
    io::write_text_file(dir + "/a.txt", "hello\n");
    CHECK(io::read_text_file(dir + "/a.txt") == "hello\n");
    CHECK(io::file_exists(dir + "/a.txt"));
    CHECK(!io::file_exists(dir + "/b.txt"));
    CHECK_THROWS_AS(io::read_text_file(dir + "/b.txt"), IoError);
    CHECK_THROWS_AS(io::write_text_file(dir + "/no/such/dir/x.txt", "y"), IoError);
}

}  // TEST_SUITE
