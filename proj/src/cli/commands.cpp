#include "uavswarm/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "uavswarm/analytic.hpp"
#include "uavswarm/csv.hpp"
#include "uavswarm/geometry.hpp"

namespace uavswarm::cli {

SeedChoice resolve_seed(std::optional<std::uint64_t> flag, const char* env_value) {
    if (flag) return {*flag, "flag"};
    if (env_value != nullptr && *env_value != '\0') {
        const std::string_view text(env_value);
        std::uint64_t v = 0;
        const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
        if (r.ec != std::errc() || r.ptr != text.data() + text.size()) {
            throw UsageError(std::string(kSeedEnvVar) + " is not an unsigned 64-bit integer: '" +
                             std::string(text) + "'");
        }
        return {v, "env"};
    }
    return {};
}

Engine parse_engine(const std::string& text) {
    if (text == "analytic") return Engine::Analytic;
    if (text == "mc") return Engine::Mc;
    if (text == "both") return Engine::Both;
    throw UsageError("engine must be analytic, mc or both, got '" + text + "'");
}

const std::vector<std::string>& sweep_variables() {
    static const std::vector<std::string> vars = {"message_bits", "swarm_radius_m", "swarm_altitude_m",
                                                  "tau_phase1_s", "n_uavs",         "m_available",
                                                  "m_occupied",   "rounds"};
    return vars;
}

std::vector<double> expand_range(double start, double stop, double step) {
    if (!(step > 0.0)) throw UsageError("range step must be > 0");
    if (!(stop >= start)) throw UsageError("range stop must be >= start");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 100000) throw UsageError("range has too many points");
    std::vector<double> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.12g", start + static_cast<double>(i) * step);
        out.push_back(std::strtod(buf, nullptr));
    }
    return out;
}

ScenarioConfig apply_sweep_value(const ScenarioConfig& base, const std::string& variable, double value) {
    if (std::find(sweep_variables().begin(), sweep_variables().end(), variable) == sweep_variables().end()) {
        throw UsageError("cannot sweep '" + variable + "'");
    }
    ScenarioConfig c = base;
    if (variable != "rounds") set_config_value(c, variable, format_double(value));
    return c;
}

namespace {

CsvRow& add_eta(CsvRow& row, double eta) { return row.add(eta).add(1.0 - eta); }

std::string seed_text(const SeedChoice& s) { return std::to_string(s.seed); }

}  // namespace

void cmd_analyze(const Scenario& scenario, std::ostream& out) {
    const AnalyticBreakdown b = reliability(scenario);
    CsvWriter csv(out, {"engine", "message_bits", "theta_phase1", "theta_phase2", "p_head", "p_member",
                        "expected_phase1", "k_effective", "p_phase2", "eta", "one_minus_eta", "out_of_regime",
                        "head_method"});
    CsvRow row;
    row.add("analytic").add(scenario.config().message_bits).add(scenario.theta_phase1()).add(scenario.theta_phase2());
    row.add(b.p_head).add(b.p_member).add(b.expected_phase1).add(b.k_effective).add(b.p_phase2);
    add_eta(row, b.eta).add(b.out_of_regime).add(b.head_used_quadrature ? "quadrature" : "series");
    csv.write(row);
}

void cmd_simulate(const Scenario& scenario, const ProtocolKind& protocol, const RunOptions& run, std::ostream& out) {
    const MonteCarloRun mc = run_trials(scenario, protocol, run.trials, run.seed.seed, run.workers);
    CsvWriter csv(out, {"protocol", "round", "message_bits", "seed", "seed_source", "trials", "eta",
                        "one_minus_eta", "std_err", "phase1_eta"});
    const ReliabilityEstimate p1 = mc.phase1_eta();
    auto emit = [&](const ReliabilityEstimate& e, const std::string& round) {
        CsvRow row;
        row.add(protocol.name()).add(round).add(scenario.config().message_bits).add(seed_text(run.seed));
        row.add(run.seed.source).add(static_cast<std::uint64_t>(e.trials));
        add_eta(row, e.eta_mean).add(e.std_err).add(p1.eta_mean);
        csv.write(row);
    };
    if (protocol.type == ProtocolType::MultiRound) {
        const auto rounds = mc.round_etas();
        for (std::size_t r = 0; r < rounds.size(); ++r) emit(rounds[r], std::to_string(r + 1));
    } else {
        emit(mc.eta(), "");
    }
}

void cmd_compare(const Scenario& scenario, const RunOptions& run, std::ostream& out) {
    CsvWriter csv(out, {"protocol", "m_available", "m_occupied", "message_bits", "seed", "seed_source", "trials",
                        "eta", "one_minus_eta", "std_err"});
    for (const ProtocolKind& p : {ProtocolKind::proposed(), ProtocolKind::nearest_gbs_only(),
                                  ProtocolKind::all_gbs_no_d2d(), ProtocolKind::head_only_relay()}) {
        const ReliabilityEstimate e = estimate(scenario, p, run.trials, run.seed.seed, run.workers);
        CsvRow row;
        row.add(p.name()).add(scenario.m_available()).add(scenario.m_occupied()).add(scenario.config().message_bits);
        row.add(seed_text(run.seed)).add(run.seed.source).add(static_cast<std::uint64_t>(e.trials));
        add_eta(row, e.eta_mean).add(e.std_err);
        csv.write(row);
    }
}

void cmd_sweep(const ScenarioConfig& base, const SweepSpec& spec, const RunOptions& run, std::ostream& out) {
    if (spec.values.empty()) throw UsageError("sweep needs at least one value");
    const bool is_rounds = spec.variable == "rounds";
    const bool want_analytic = spec.engine != Engine::Mc;
    const bool want_mc = spec.engine != Engine::Analytic;
    if (want_analytic && (is_rounds || spec.protocol.type != ProtocolType::Proposed)) {
        throw UsageError("the analytic engine models the proposed protocol only; use --engine mc");
    }

    // Validate every point up front so a bad value fails before any work.
    std::vector<Scenario> scenarios;
    for (double v : spec.values) scenarios.push_back(validate(apply_sweep_value(base, spec.variable, v)));

    std::vector<AnalyticBreakdown> analytic(spec.values.size());
    if (want_analytic) {
        parallel_for(spec.values.size(), run.workers, [&](std::size_t i) { analytic[i] = reliability(scenarios[i]); });
    }

    CsvWriter csv(out, {"variable", "value", "engine", "protocol", "seed", "seed_source", "trials", "eta",
                        "one_minus_eta", "std_err", "expected_phase1", "out_of_regime"});
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
        const double v = spec.values[i];
        ProtocolKind protocol = spec.protocol;
        if (is_rounds) {
            if (v < 1 || v != std::floor(v)) throw UsageError("rounds must be a positive integer");
            protocol = ProtocolKind::multi_round(static_cast<int>(v), spec.protocol.with_head);
        }
        if (want_analytic) {
            const AnalyticBreakdown& b = analytic[i];
            CsvRow row;
            row.add(spec.variable).add(v).add("analytic").add(protocol.name()).add(seed_text(run.seed));
            row.add(run.seed.source).add("");
            add_eta(row, b.eta).add("").add(b.expected_phase1).add(b.out_of_regime);
            csv.write(row);
        }
        if (want_mc) {
            const MonteCarloRun mc = run_trials(scenarios[i], protocol, run.trials, run.seed.seed, run.workers);
            const ReliabilityEstimate e = mc.eta();
            CsvRow row;
            row.add(spec.variable).add(v).add("mc").add(protocol.name()).add(seed_text(run.seed));
            row.add(run.seed.source).add(static_cast<std::uint64_t>(e.trials));
            add_eta(row, e.eta_mean).add(e.std_err).add(mc.phase1_count().eta_mean).add("");
            csv.write(row);
        }
    }
}

double cmd_optimize_tau(const ScenarioConfig& base, std::vector<double> grid, Engine engine, const RunOptions& run,
                        std::ostream& out) {
    if (grid.empty()) throw UsageError("optimize-tau needs a non-empty grid");
    if (engine == Engine::Both) throw UsageError("optimize-tau takes a single engine (analytic or mc)");
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<Scenario> scenarios;
    for (double t : grid) {
        ScenarioConfig c = base;
        c.tau_phase1_s = t;
        scenarios.push_back(validate(c));
    }
    std::vector<ReliabilityEstimate> est(grid.size());
    if (engine == Engine::Analytic) {
        parallel_for(grid.size(), run.workers,
                     [&](std::size_t i) { est[i].eta_mean = reliability(scenarios[i]).eta; });
    } else {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            est[i] = estimate(scenarios[i], ProtocolKind::proposed(), run.trials, run.seed.seed, run.workers);
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (est[i].eta_mean > est[best].eta_mean) best = i;  // strict: ties stay with the smaller tau
    }
    const bool mc = engine == Engine::Mc;
    CsvWriter csv(out, {"tau_phase1_s", "engine", "seed", "seed_source", "trials", "eta", "one_minus_eta", "std_err",
                        "best"});
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CsvRow row;
        row.add(grid[i]).add(mc ? "mc" : "analytic").add(seed_text(run.seed)).add(run.seed.source);
        if (mc) {
            row.add(static_cast<std::uint64_t>(est[i].trials));
        } else {
            row.add("");
        }
        add_eta(row, est[i].eta_mean).add(est[i].std_err).add(i == best);
        csv.write(row);
    }
    return grid[best];
}

void cmd_dist_k(const Scenario& scenario, const RunOptions& run, std::ostream& out, std::ostream* log) {
    const MonteCarloRun mc = run_trials(scenario, ProtocolKind::proposed(), run.trials, run.seed.seed, run.workers);
    const std::vector<double> pmf = mc.phase1_histogram();
    CsvWriter csv(out, {"k", "count", "probability", "seed", "seed_source", "trials"});
    for (std::size_t k = 0; k < pmf.size(); ++k) {
        CsvRow row;
        row.add(static_cast<std::uint64_t>(k)).add(static_cast<std::uint64_t>(std::llround(pmf[k] * run.trials)));
        row.add(pmf[k]).add(seed_text(run.seed)).add(run.seed.source).add(static_cast<std::uint64_t>(run.trials));
        csv.write(row);
    }
    if (log != nullptr) {
        const ReliabilityEstimate count = mc.phase1_count();
        *log << "mean |Theta_I| = " << count.eta_mean;
        if (count.std_err) *log << " +- " << *count.std_err;
        *log << ", analytic E|Theta_I| = " << phase1_expected(scenario) << '\n';
    }
}

// ---- command line --------------------------------------------------------

namespace {

struct CommonFlags {
    std::string config_path;
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
    std::size_t trials = 20000;
    std::string out_path;
    unsigned workers = 0;
    std::string engine;
    std::string protocol = "proposed";
    int rounds = 1;
    bool no_head = false;
};

ScenarioConfig build_config(const CommonFlags& f) {
    ScenarioConfig c = f.config_path.empty() ? ScenarioConfig{} : load_config_file(f.config_path);
    for (const std::string& kv : f.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
        set_config_value(c, kv.substr(0, eq), kv.substr(eq + 1));
    }
    return c;
}

class OutputSink {
public:
    explicit OutputSink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (path.empty() || path == "-") return;
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_) throw std::ios_base::failure("cannot open output file '" + path + "'");
        stream_ = file_.get();
    }
    std::ostream& get() { return *stream_; }
    void finish() {
        stream_->flush();
        if (!*stream_) throw std::ios_base::failure("write to output failed");
    }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_;
};

void report_config_error(const ConfigError& e, std::ostream& err) {
    err << "config error:";
    if (e.issues().empty()) err << ' ' << e.what();
    err << '\n';
    for (const auto& issue : e.issues()) err << "  " << issue.field << ": " << issue.message << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-phase (cellular + D2D) UAV-swarm reliability: analytic model and Monte Carlo"};
    app.require_subcommand(1);
    app.fallthrough();
    CommonFlags f;

    app.add_option("--config", f.config_path, "JSON config file (flat object of field names)");
    app.add_option("--set", f.sets, "Override one field, key=value (repeatable)")->take_all();
    app.add_option("--seed", f.seed, std::string("Master seed (else $") + kSeedEnvVar + ", else built-in)");
    app.add_option("--trials", f.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
    app.add_option("--out", f.out_path, "CSV output path (default stdout)");
    app.add_option("--workers", f.workers, "Worker threads (0 = all cores)");
    app.add_option("--engine", f.engine, "analytic | mc | both");
    app.add_option("--protocol", f.protocol, "proposed | protocol-1 | protocol-2 | protocol-3 | multi-round");
    app.add_option("--rounds", f.rounds, "D2D rounds for multi-round")->check(CLI::PositiveNumber);
    app.add_flag("--no-head", f.no_head, "Multi-round: cellular stage without head-aligned weights");

    auto* analyze = app.add_subcommand("analyze", "Closed-form reliability breakdown");
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo reliability of one protocol");
    auto* compare = app.add_subcommand("compare", "Monte Carlo reliability of the proposed and benchmark protocols");
    auto* sweep = app.add_subcommand("sweep", "Reliability over one swept parameter");
    auto* optimize = app.add_subcommand("optimize-tau", "Grid search of the phase-I duration");
    auto* dist_k = app.add_subcommand("dist-k", "Histogram of the phase-I decode count");
    auto* show = app.add_subcommand("show-config", "Print the effective config as JSON");

    std::string sweep_var;
    std::vector<double> sweep_values;
    std::vector<double> sweep_range;
    sweep->add_option("--var", sweep_var, "Swept variable")->required();
    sweep->add_option("--values", sweep_values, "Explicit values")->delimiter(',');
    sweep->add_option("--range", sweep_range, "start,stop,step")->delimiter(',')->expected(3);

    std::vector<double> tau_values;
    std::vector<double> tau_range = {0.1e-3, 0.9e-3, 0.05e-3};
    optimize->add_option("--values", tau_values, "Explicit tau_phase1_s grid")->delimiter(',');
    optimize->add_option("--range", tau_range, "start,stop,step in seconds")->delimiter(',')->expected(3);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsageError;
    }

    try {
        const ScenarioConfig base = build_config(f);
        RunOptions run;
        run.trials = f.trials;
        run.workers = f.workers;
        run.seed = resolve_seed(f.seed, std::getenv(kSeedEnvVar));
        const ProtocolKind protocol = [&] {
            try {
                return parse_protocol(f.protocol, f.rounds, !f.no_head);
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
        }();
        OutputSink sink(f.out_path, out);

        if (analyze->parsed()) {
            if (!f.engine.empty() && f.engine != "analytic") throw UsageError("analyze uses the analytic engine");
            const Scenario s = validate(base);
            cmd_analyze(s, sink.get());
            if (reliability(s).out_of_regime) {
                err << "warning: E|Theta_I| < 1; the point substitution K = E|Theta_I| is out of regime\n";
            }
        } else if (simulate->parsed()) {
            if (!f.engine.empty() && f.engine != "mc") throw UsageError("simulate uses the mc engine");
            cmd_simulate(validate(base), protocol, run, sink.get());
        } else if (compare->parsed()) {
            cmd_compare(validate(base), run, sink.get());
        } else if (sweep->parsed()) {
            SweepSpec spec;
            spec.variable = sweep_var;
            if (!sweep_values.empty() && !sweep_range.empty()) throw UsageError("give --values or --range, not both");
            spec.values = sweep_range.empty() ? sweep_values
                                              : expand_range(sweep_range[0], sweep_range[1], sweep_range[2]);
            spec.engine = f.engine.empty() ? (sweep_var == "rounds" ? Engine::Mc : Engine::Both)
                                           : parse_engine(f.engine);
            spec.protocol = protocol;
            cmd_sweep(base, spec, run, sink.get());
        } else if (optimize->parsed()) {
            const Engine engine = f.engine.empty() ? Engine::Mc : parse_engine(f.engine);
            std::vector<double> grid = tau_values;
            if (grid.empty()) grid = expand_range(tau_range[0], tau_range[1], tau_range[2]);
            const double best = cmd_optimize_tau(base, grid, engine, run, sink.get());
            err << "best tau_phase1_s = " << format_double(best) << '\n';
        } else if (dist_k->parsed()) {
            cmd_dist_k(validate(base), run, sink.get(), &err);
        } else if (show->parsed()) {
            validate(base);
            sink.get() << config_to_json(base) << '\n';
        }
        sink.finish();
        return kOk;
    } catch (const ConfigError& e) {  // includes PackingError
        report_config_error(e, err);
        return kConfigError;
    } catch (const PlacementError& e) {
        err << "placement error: " << e.what() << '\n';
        return kPlacementError;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kNumericalError;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::ios_base::failure& e) {
        err << "i/o error: " << e.what() << '\n';
        return kIoError;
    } catch (const std::domain_error& e) {
        err << "numerical error: " << e.what() << '\n';
        return kNumericalError;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    }
}

}  // namespace uavswarm::cli
