#include <doctest.h>

#include <charconv>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "uavswarm/analytic.hpp"
#include "uavswarm/cli.hpp"
#include "uavswarm/csv.hpp"
#include "uavswarm/mc.hpp"

using namespace uavswarm;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "uavswarm");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

using Table = std::vector<std::vector<std::string>>;

Table parse_csv(const std::string& text) {
    Table t;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.push_back("");
        t.push_back(cells);
    }
    return t;
}

std::string cell(const Table& t, std::size_t row, const std::string& column) {
    const auto& h = t.at(0);
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (h[i] == column) return t.at(row).at(i);
    }
    FAIL("missing column " << column);
    return {};
}

double num(const std::string& s) {
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    REQUIRE(r.ec == std::errc());
    return v;
}

}  // namespace

TEST_CASE("CSV formatting") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(num(format_double(0.1 + 0.2)) == 0.1 + 0.2);
    std::ostringstream out;
    CsvWriter w(out, {"a", "b"});
    CsvRow r;
    r.add("x,y").add(std::optional<double>{});
    w.write(r);
    CHECK(out.str() == "a,b\n\"x,y\",\n");
    CsvRow bad;
    bad.add(1.0);
    CHECK_THROWS_AS(w.write(bad), std::logic_error);
}

TEST_CASE("seed precedence") {
    CHECK(cli::resolve_seed(7, "9").seed == 7);
    CHECK(cli::resolve_seed(7, "9").source == "flag");
    CHECK(cli::resolve_seed(std::nullopt, "9").seed == 9);
    CHECK(cli::resolve_seed(std::nullopt, "9").source == "env");
    CHECK(cli::resolve_seed(std::nullopt, nullptr).seed == cli::kDefaultSeed);
    CHECK(cli::resolve_seed(std::nullopt, "").source == "default");
    CHECK_THROWS_AS(cli::resolve_seed(std::nullopt, "12abc"), cli::UsageError);
}

TEST_CASE("range expansion") {
    const auto g = cli::expand_range(0.1e-3, 0.9e-3, 0.05e-3);
    CHECK(g.size() == 17);
    CHECK(g[1] == 0.15e-3);
    CHECK(g.back() == 0.9e-3);
    CHECK_THROWS_AS(cli::expand_range(1.0, 2.0, 0.0), cli::UsageError);
}

TEST_CASE("analyze") {
    const Result zero = run_cli({"analyze", "--set", "message_bits=0"});
    REQUIRE(zero.code == 0);
    const Table t0 = parse_csv(zero.out);
    CHECK(t0.size() == 2);
    CHECK(num(cell(t0, 1, "eta")) == 1.0);

    const Result r = run_cli({"analyze"});
    REQUIRE(r.code == 0);
    const Table t = parse_csv(r.out);
    const AnalyticBreakdown b = reliability(validate(ScenarioConfig{}));
    CHECK(num(cell(t, 1, "eta")) == b.eta);
    CHECK(num(cell(t, 1, "one_minus_eta")) == 1.0 - b.eta);
    CHECK(num(cell(t, 1, "expected_phase1")) == b.expected_phase1);
    CHECK(cell(t, 1, "out_of_regime") == "false");

    const Result bad = run_cli({"analyze", "--set", "message_bits=500"});
    REQUIRE(bad.code == 0);
    CHECK(cell(parse_csv(bad.out), 1, "out_of_regime") == "true");
    CHECK(bad.err.find("out of regime") != std::string::npos);
}

TEST_CASE("simulate") {
    const std::vector<std::string> args = {"simulate", "--trials", "300", "--seed", "5", "--workers", "2"};
    const Result a = run_cli(args);
    const Result b = run_cli(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const Table t = parse_csv(a.out);
    CHECK(cell(t, 1, "trials") == "300");
    CHECK(cell(t, 1, "seed") == "5");
    CHECK(cell(t, 1, "seed_source") == "flag");
    const ReliabilityEstimate e = estimate(validate(ScenarioConfig{}), ProtocolKind::proposed(), 300, 5, 1);
    CHECK(num(cell(t, 1, "eta")) == e.eta_mean);
    CHECK(num(cell(t, 1, "std_err")) == *e.std_err);

    const Result m = run_cli({"simulate", "--trials", "50", "--protocol", "multi-round", "--rounds", "3", "--no-head",
                              "--set", "n_uavs=10", "--set", "message_bits=150"});
    REQUIRE(m.code == 0);
    const Table tm = parse_csv(m.out);
    CHECK(tm.size() == 4);
    CHECK(cell(tm, 3, "round") == "3");
    CHECK(cell(tm, 1, "protocol") == "multi-round-3-nohead");
}

TEST_CASE("compare") {
    const Result r = run_cli({"compare", "--trials", "200", "--seed", "11"});
    REQUIRE(r.code == 0);
    const Table t = parse_csv(r.out);
    REQUIRE(t.size() == 5);
    for (std::size_t i = 1; i < t.size(); ++i) {
        CHECK(cell(t, i, "seed") == "11");
        CHECK(cell(t, i, "trials") == "200");
    }
    CHECK(cell(t, 1, "protocol") == "proposed");
    CHECK(cell(t, 4, "protocol") == "protocol-3");
}

TEST_CASE("sweep") {
    const Result r =
        run_cli({"sweep", "--var", "message_bits", "--values", "0,20,40", "--trials", "100", "--seed", "3"});
    REQUIRE(r.code == 0);
    const Table t = parse_csv(r.out);
    REQUIRE(t.size() == 7);
    CHECK(cell(t, 1, "engine") == "analytic");
    CHECK(cell(t, 2, "engine") == "mc");
    CHECK(num(cell(t, 1, "eta")) == 1.0);
    CHECK(cell(t, 5, "value") == "40");

    const Result range = run_cli({"sweep", "--var", "swarm_altitude_m", "--range", "300,1000,350", "--engine",
                                  "analytic"});
    REQUIRE(range.code == 0);
    CHECK(parse_csv(range.out).size() == 4);

    const Result rounds = run_cli({"sweep", "--var", "rounds", "--values", "1,2", "--trials", "20", "--set",
                                   "n_uavs=10"});
    REQUIRE(rounds.code == 0);
    CHECK(cell(parse_csv(rounds.out), 2, "protocol") == "multi-round-2-head");

    CHECK(run_cli({"sweep", "--var", "rounds", "--values", "1", "--engine", "analytic"}).code == cli::kUsageError);
    CHECK(run_cli({"sweep", "--var", "rician_k", "--values", "1"}).code == cli::kUsageError);
    CHECK(run_cli({"sweep", "--var", "n_uavs", "--values", "2.5", "--engine", "analytic"}).code ==
          cli::kConfigError);
}

TEST_CASE("optimize-tau") {
    const Result flat = run_cli({"optimize-tau", "--engine", "analytic", "--set", "message_bits=0"});
    REQUIRE(flat.code == 0);
    const Table t = parse_csv(flat.out);
    CHECK(t.size() == 18);
    CHECK(cell(t, 1, "best") == "true");
    CHECK(num(cell(t, 1, "tau_phase1_s")) == 0.1e-3);
    CHECK(flat.err.find("best tau_phase1_s = " + format_double(0.1e-3)) != std::string::npos);
    CHECK(run_cli({"optimize-tau", "--values", "0.002"}).code == cli::kConfigError);
}

TEST_CASE("dist-k") {
    const Result r = run_cli({"dist-k", "--trials", "100", "--set", "message_bits=0"});
    REQUIRE(r.code == 0);
    const Table t = parse_csv(r.out);
    REQUIRE(t.size() == 42);
    CHECK(num(cell(t, 41, "probability")) == 1.0);
    CHECK(cell(t, 41, "count") == "100");

    const Result s = run_cli({"dist-k", "--trials", "200"});
    REQUIRE(s.code == 0);
    const Table ts = parse_csv(s.out);
    double total = 0.0;
    for (std::size_t i = 1; i < ts.size(); ++i) total += num(cell(ts, i, "probability"));
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exit codes") {
    CHECK(run_cli({"analyze", "--set", "bogus=1"}).code == cli::kConfigError);
    CHECK(run_cli({"analyze", "--set", "n_uavs=1000"}).code == cli::kConfigError);
    CHECK(run_cli({"analyze", "--set", "tau_phase1_s=0.001"}).code == cli::kConfigError);
    CHECK(run_cli({"analyze", "--set", "noequals"}).code == cli::kUsageError);
    CHECK(run_cli({"analyze", "--no-such-flag"}).code == cli::kUsageError);
    CHECK(run_cli({}).code == cli::kUsageError);
    CHECK(run_cli({"simulate", "--protocol", "nonsense"}).code == cli::kUsageError);
    CHECK(run_cli({"analyze", "--out", "/nonexistent-dir/x.csv"}).code == cli::kIoError);
    CHECK(run_cli({"analyze", "--config", "/nonexistent-dir/c.json"}).code == cli::kConfigError);
    // packing bound holds exactly, but random sequential placement cannot reach it
    CHECK(run_cli({"simulate", "--trials", "1", "--set", "n_uavs=144"}).code == cli::kPlacementError);
    CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("output file") {
    const std::string path = "cli_test_out.csv";
    REQUIRE(run_cli({"analyze", "--out", path}).code == 0);
    std::FILE* f = std::fopen(path.c_str(), "r");
    REQUIRE(f != nullptr);
    char buf[16] = {};
    CHECK(std::fread(buf, 1, 6, f) == 6);
    std::fclose(f);
    CHECK(std::string(buf) == "engine");
    std::remove(path.c_str());
}
