#include "xover/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xover/compare.hpp"
#include "xover/crossover.hpp"
#include "xover/io/config.hpp"
#include "xover/io/render.hpp"
#include "xover/io/verify.hpp"
#include "xover/linkgraph.hpp"

#ifndef XOVER_FIXTURES_DIR
#define XOVER_FIXTURES_DIR "data/fixtures"
#endif

namespace xover::cli {
namespace {

namespace fs = std::filesystem;

/// Raised for argument combinations CLI11 cannot express; maps to exit 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> inclusive_range(double lo, double hi, double step, const char* what) {
    if (!(step > 0.0)) throw UsageError(std::string(what) + ": step must be > 0");
    if (hi < lo) throw UsageError(std::string(what) + ": max must be >= min");
    const long n = std::lround(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> out;
    out.reserve(n);
    // Round to 1e-9 so 1.1 + 3 * 0.1 prints as 1.4, not 1.4000000000000001.
    for (long k = 0; k < n; ++k) out.push_back(std::round((lo + k * step) * 1e9) / 1e9);
    return out;
}

void write_file(const fs::path& p, const std::string& content) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << content;
    if (!f) throw std::runtime_error("write failed: " + p.string());
}

// ---------------------------------------------------------------- crossover

struct CrossoverArgs {
    std::vector<double> h;
    std::vector<double> i;
    int scenario = 0;
    bool all_scenarios = false;
    double epsilon = kDefaultMinElevationDeg;
    std::string format = "text";

    bool sweep = false;
    double theta_min = 0.5;
    double theta_max = 180.0;
    double theta_step = 0.5;

    std::optional<double> ingress_elev;
    std::optional<double> egress_elev;
    std::optional<double> zigzag;
    std::string offsets = "sum";
};

void crossover_function_sweep(const CrossoverArgs& a, std::ostream& out) {
    if (!(a.theta_min > 0.0)) throw UsageError("--theta-min must be > 0");
    const auto thetas = inclusive_range(a.theta_min, a.theta_max, a.theta_step, "--theta");
    std::vector<Scenario> scenarios(kAllScenarios.begin(), kAllScenarios.end());
    if (a.scenario) scenarios = {scenario_from_number(a.scenario)};

    std::vector<std::vector<std::string>> table;
    std::vector<std::string> header = {"theta_deg", "h_km", "i"};
    for (Scenario s : scenarios) header.push_back("f_s" + std::to_string(scenario_number(s)));
    table.push_back(header);
    for (double h : a.h)
        for (double i : a.i)
            for (double th : thetas) {
                std::vector<std::string> line = {io::fixed(th, 4), io::fmt_km(h), io::fmt_index(i)};
                for (Scenario s : scenarios) {
                    const CrossoverQuery q{h, i, a.epsilon, s, {}};
                    q.validate();
                    line.push_back(io::fixed(crossover_function(th, q), 6));
                }
                table.push_back(std::move(line));
            }
    if (a.format == "json") {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (std::size_t r = 1; r < table.size(); ++r) {
            nlohmann::ordered_json j;
            for (std::size_t c = 0; c < header.size(); ++c) j[header[c]] = std::stod(table[r][c]);
            arr.push_back(j);
        }
        out << arr.dump(2) << '\n';
    } else {
        io::detail::write_table(out, table, io::parse_format(a.format));
    }
}

void crossover_per_slot(const CrossoverArgs& a, std::ostream& out) {
    if (a.offsets != "sum" && a.offsets != "rss") throw UsageError("--offsets must be sum or rss");
    std::vector<std::vector<std::string>> table;
    table.push_back({"h_km", "i", "ingress_elev_deg", "egress_elev_deg", "zigzag", "theta_deg", "d_km"});
    for (double h : a.h)
        for (double i : a.i) {
            PerSlotCrossoverQuery q;
            q.base = {h, i, a.epsilon, Scenario::kOutward, {}};
            q.ingress_elevation_deg = a.ingress_elev.value_or(a.epsilon);
            q.egress_elevation_deg = a.egress_elev.value_or(a.epsilon);
            q.zigzag_delta = a.zigzag.value_or(0.0);
            q.combination = a.offsets == "sum" ? OffsetCombination::kSum : OffsetCombination::kRootSumSquare;
            const auto r = solve_per_slot_crossover(q);
            table.push_back({io::fmt_km(h), io::fmt_index(i), io::fixed(q.ingress_elevation_deg, 2),
                             io::fixed(q.egress_elevation_deg, 2), io::fixed(q.zigzag_delta, 4),
                             r ? io::fmt_theta(r->theta_crossover_deg) : io::kNoCrossover,
                             r ? io::fmt_km(r->distance_crossover_km) : io::kNoCrossover});
        }
    if (a.format == "json") {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (std::size_t r = 1; r < table.size(); ++r) {
            nlohmann::ordered_json j;
            for (std::size_t c = 0; c < table[0].size(); ++c) {
                const std::string& v = table[r][c];
                j[table[0][c]] = v == io::kNoCrossover ? nlohmann::ordered_json(nullptr)
                                                       : nlohmann::ordered_json(std::stod(v));
            }
            arr.push_back(j);
        }
        out << arr.dump(2) << '\n';
    } else {
        io::detail::write_table(out, table, io::parse_format(a.format));
    }
}

void run_crossover(const CrossoverArgs& a, std::ostream& out) {
    if (a.sweep) return crossover_function_sweep(a, out);
    if (a.ingress_elev || a.egress_elev || a.zigzag) return crossover_per_slot(a, out);
    for (double h : a.h) CrossoverQuery{h, 1.0, a.epsilon, Scenario::kOverhead, {}}.validate();
    for (double i : a.i) CrossoverQuery{550.0, i, a.epsilon, Scenario::kOverhead, {}}.validate();
    const auto rows = emit_crossover_tables(a.h, a.i, EarthModel{}, a.epsilon);
    std::optional<Scenario> only;
    if (a.scenario) only = scenario_from_number(a.scenario);
    io::render_crossover_rows(out, rows, io::parse_format(a.format), only, EarthModel{}, a.epsilon);
}

// -------------------------------------------------------------------- sweep

struct SweepArgs {
    std::vector<double> h;
    std::vector<double> i;
    std::optional<double> h_min, h_max, h_step;
    std::optional<double> i_min, i_max, i_step;
    double epsilon = kDefaultMinElevationDeg;
    std::string format = "csv";
};

std::vector<double> axis(const std::vector<double>& list, const std::optional<double>& lo,
                         const std::optional<double>& hi, const std::optional<double>& step, const char* name) {
    const bool any_range = lo || hi || step;
    if (!list.empty() && any_range) throw UsageError(std::string("give either --") + name + " or a range, not both");
    if (!list.empty()) return list;
    if (!(lo && hi && step))
        throw UsageError(std::string("--") + name + "-min, --" + name + "-max and --" + name + "-step are all required");
    return inclusive_range(*lo, *hi, *step, name);
}

void run_sweep(const SweepArgs& a, std::ostream& out) {
    const auto hs = axis(a.h, a.h_min, a.h_max, a.h_step, "h");
    const auto is = axis(a.i, a.i_min, a.i_max, a.i_step, "i");
    for (double h : hs) CrossoverQuery{h, 1.0, a.epsilon, Scenario::kOverhead, {}}.validate();
    for (double i : is) CrossoverQuery{550.0, i, a.epsilon, Scenario::kOverhead, {}}.validate();
    io::render_crossover_rows(out, emit_crossover_tables(hs, is, EarthModel{}, a.epsilon), io::parse_format(a.format),
                              std::nullopt, EarthModel{}, a.epsilon);
}

// ------------------------------------------------------- simulate / compare

struct RunArgs {
    std::string config;
    std::optional<int> slots;
    std::optional<double> epoch;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
    std::string dump_config;
};

io::ExperimentConfig load_with_overrides(const RunArgs& a) {
    io::ExperimentConfig cfg = io::load_config(a.config);
    if (a.epoch) cfg.constellation.epoch_offset_s = *a.epoch;
    if (a.seed) cfg.constellation.epoch_offset_s = io::epoch_from_seed(*a.seed);
    if (a.slots) {
        if (*a.slots < 1) throw UsageError("--slots must be >= 1");
        cfg.duration_s = *a.slots * cfg.dt_s;
    }
    return cfg;
}

/// Returns true when the config was dumped and the command should stop.
bool maybe_dump(const RunArgs& a, const io::ExperimentConfig& cfg, std::ostream& out) {
    if (a.dump_config.empty()) return false;
    const std::string text = io::config_to_json(cfg).dump(2) + "\n";
    if (a.dump_config == "-")
        out << text;
    else
        write_file(a.dump_config, text);
    return true;
}

struct SimulateArgs : RunArgs {
    std::string connection;
    std::string owsn;
    bool emit_paths = false;
    std::string out_dir = ".";
};

template <class T>
const T& pick(const std::vector<T>& items, const std::string& name, const char* what,
              const std::function<const T&(const std::string&)>& lookup) {
    if (!name.empty()) return lookup(name);
    if (items.size() == 1) return items.front();
    std::string names;
    for (const auto& it : items) names += (names.empty() ? "" : ", ") + it.name;
    throw io::ConfigError("", std::string("choose a ") + what + " with --" + what + " (available: " + names + ")");
}

int run_simulate(const SimulateArgs& a, std::ostream& out) {
    const io::ExperimentConfig cfg = load_with_overrides(a);
    if (maybe_dump(a, cfg, out)) return kExitOk;

    const auto& conn = pick<ConnectionScenario>(cfg.connections, a.connection, "connection",
                                                [&](const std::string& n) -> const ConnectionScenario& {
                                                    return cfg.connection(n);
                                                });
    const auto& owsn = pick<OwsnConfig>(cfg.owsns, a.owsn, "owsn",
                                        [&](const std::string& n) -> const OwsnConfig& { return cfg.owsn(n); });

    const ComparisonSettings settings = cfg.comparison_settings(a.threads);
    const GroundStation ga = station_for(conn.city_a, cfg.catalog, owsn);
    const GroundStation gb = station_for(conn.city_b, cfg.catalog, owsn);
    const SlotSeries series = simulate_connection(simulation_settings_for(owsn, settings), ga, gb);

    std::vector<std::string> labels = {ga.name, gb.name};
    WalkerConfig shell = cfg.constellation;
    shell.altitude_km = owsn.altitude_km;
    for (const auto& el : generate_walker(shell)) labels.push_back(el.id.label());

    std::ostringstream csv;
    io::render_slots_csv(csv, series, labels, a.emit_paths);
    const fs::path dir = a.out_dir;
    write_file(dir / "slots.csv", csv.str());
    write_file(dir / "summary.json", io::summary_json(series, conn.name, owsn.name).dump(2) + "\n");

    out << conn.name << " over " << owsn.name << ": ";
    if (series.reachable_count() > 0)
        out << "mean " << io::fmt_ms(series.mean_latency_ms) << " ms";
    else
        out << "no route in any slot";
    out << ", " << series.slot_count() << " slots, " << series.unreachable_count << " unreachable\n";
    out << "wrote " << (dir / "slots.csv").string() << " and " << (dir / "summary.json").string() << '\n';
    return kExitOk;
}

struct CompareArgs : RunArgs {
    std::string format;
};

int run_compare(const CompareArgs& a, std::ostream& out, std::ostream& err) {
    const io::ExperimentConfig cfg = load_with_overrides(a);
    if (maybe_dump(a, cfg, out)) return kExitOk;
    if (cfg.connections.empty()) throw io::ConfigError("/connections", "at least one connection is required");
    if (cfg.oftns.empty() && cfg.owsns.empty()) throw io::ConfigError("", "no networks configured");

    const ComparisonReport report =
        run_comparison(cfg.connections, cfg.oftns, cfg.owsns, cfg.comparison_settings(a.threads), cfg.catalog);
    io::render_comparison(out, report, io::parse_format(a.format.empty() ? cfg.output_format : a.format));
    if (report.failed_cells > 0) err << "warning: " << report.failed_cells << " cell(s) failed\n";
    return kExitOk;
}

// ------------------------------------------------------------------- verify

struct VerifyArgs {
    std::string fixtures = XOVER_FIXTURES_DIR;
    std::vector<std::string> only;
    io::VerifyTolerances tol;
    bool verbose = false;
};

int run_verify(const VerifyArgs& a, std::ostream& out) {
    std::vector<std::string> tables = a.only.empty() ? io::verify_table_names() : a.only;
    for (const auto& t : tables)
        if (std::find(io::verify_table_names().begin(), io::verify_table_names().end(), t) ==
            io::verify_table_names().end())
            throw UsageError("--only: unknown table '" + t + "'");

    int checks = 0, failures = 0;
    for (const auto& t : tables) {
        io::VerifyReport rep;
        try {
            rep = io::verify_tables(a.fixtures, {t}, a.tol);
        } catch (const std::exception& e) {
            out << "FAIL " << t << ": " << e.what() << '\n';
            ++checks;
            ++failures;
            continue;
        }
        for (const auto& c : rep.checks) {
            ++checks;
            failures += !c.pass;
            if (c.pass && !a.verbose && c.note.empty()) continue;
            std::ostringstream line;
            line.precision(10);
            line << (c.pass ? "PASS " : "FAIL ") << c.table << ' ' << c.row << ' ' << c.field << ": expected "
                 << c.expected << " got " << c.actual << " (tol " << c.tolerance << ")";
            if (!c.note.empty()) line << " [" << c.note << "]";
            out << line.str() << '\n';
        }
    }
    out << "verify: " << checks << " checks, " << failures << " failed\n";
    return failures == 0 ? kExitOk : kExitFailure;
}

void add_format(CLI::App* app, std::string& target, const std::string& default_value) {
    target = default_value;
    app->add_option("--format", target, "Output format")
        ->check(CLI::IsMember({"text", "csv", "json"}))
        ->capture_default_str();
}

void add_run_options(CLI::App* app, RunArgs& a) {
    app->add_option("--config", a.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    app->add_option("--slots", a.slots, "Number of slots (overrides duration_s)");
    auto* epoch = app->add_option("--epoch", a.epoch, "Epoch offset, s");
    auto* seed = app->add_option("--seed", a.seed, "Derive the epoch offset from a seed");
    epoch->excludes(seed);
    app->add_option("--threads", a.threads, "Worker threads (0 = all cores)");
    app->add_option("--dump-config", a.dump_config, "Write the resolved config to a file ('-' for stdout) and exit");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fibre vs. laser-satellite latency crossover laboratory", "xover"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);

    CrossoverArgs xa;
    auto* cx = app.add_subcommand("crossover", "Crossover angle and distance for each (h, i)");
    cx->add_option("--h", xa.h, "Satellite altitudes, km")->required()->delimiter(',');
    cx->add_option("--i", xa.i, "Fibre refractive indices")->required()->delimiter(',');
    auto* sc = cx->add_option("--scenario", xa.scenario, "Single scenario 1-4")->check(CLI::Range(1, 4));
    auto* all = cx->add_flag("--all-scenarios", xa.all_scenarios, "All four scenarios plus the average (default)");
    sc->excludes(all);
    cx->add_option("--epsilon", xa.epsilon, "Minimum elevation angle, deg")->check(CLI::Range(0.0, 90.0));
    add_format(cx, xa.format, "text");
    cx->add_flag("--sweep", xa.sweep, "Emit the crossover function over a theta grid instead");
    cx->add_option("--theta-min", xa.theta_min, "Sweep start, deg");
    cx->add_option("--theta-max", xa.theta_max, "Sweep end, deg");
    cx->add_option("--theta-step", xa.theta_step, "Sweep step, deg");
    cx->add_option("--ingress-elev", xa.ingress_elev, "Per-slot variant: ingress elevation, deg")
        ->check(CLI::Range(0.0, 90.0));
    cx->add_option("--egress-elev", xa.egress_elev, "Per-slot variant: egress elevation, deg")
        ->check(CLI::Range(0.0, 90.0));
    cx->add_option("--zigzag", xa.zigzag, "Per-slot variant: fibre zig-zag fraction")->check(CLI::NonNegativeNumber);
    cx->add_option("--offsets", xa.offsets, "Per-slot variant: offset combination (sum|rss)")
        ->check(CLI::IsMember({"sum", "rss"}));

    SweepArgs sa;
    auto* sw = app.add_subcommand("sweep", "Crossover distances over an (h, i) grid, CSV by default");
    sw->add_option("--h", sa.h, "Altitudes, km")->delimiter(',');
    sw->add_option("--h-min", sa.h_min);
    sw->add_option("--h-max", sa.h_max);
    sw->add_option("--h-step", sa.h_step);
    sw->add_option("--i", sa.i, "Refractive indices")->delimiter(',');
    sw->add_option("--i-min", sa.i_min);
    sw->add_option("--i-max", sa.i_max);
    sw->add_option("--i-step", sa.i_step);
    sw->add_option("--epsilon", sa.epsilon, "Minimum elevation angle, deg")->check(CLI::Range(0.0, 90.0));
    add_format(sw, sa.format, "csv");

    SimulateArgs ma;
    auto* sim = app.add_subcommand("simulate", "Route one connection over one satellite network, slot by slot");
    add_run_options(sim, ma);
    sim->add_option("--connection", ma.connection, "Connection name from the config");
    sim->add_option("--owsn", ma.owsn, "Satellite network name from the config");
    sim->add_flag("--emit-paths", ma.emit_paths, "Fill the path column of slots.csv");
    sim->add_option("--out-dir", ma.out_dir, "Directory for slots.csv and summary.json")->capture_default_str();

    CompareArgs ca;
    auto* cmp = app.add_subcommand("compare", "Fibre vs. satellite latency matrix");
    add_run_options(cmp, ca);
    cmp->add_option("--format", ca.format, "Output format (default: the config's output_format)")
        ->check(CLI::IsMember({"text", "csv", "json"}));

    VerifyArgs va;
    auto* ver = app.add_subcommand("verify", "Check regenerated tables against the reference fixtures");
    ver->add_option("--fixtures", va.fixtures, "Fixture directory")->capture_default_str();
    ver->add_option("--only", va.only, "Subset of tables (table1..table5)")->delimiter(',');
    ver->add_option("--theta-tol", va.tol.theta_deg, "Angle tolerance, deg")->capture_default_str();
    ver->add_option("--km-tol", va.tol.km, "Distance tolerance, km")->capture_default_str();
    ver->add_option("--ms-tol", va.tol.ms, "Latency tolerance, ms")->capture_default_str();
    ver->add_flag("--verbose", va.verbose, "Also list passing checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\nRun with --help for usage.\n";
        return kExitUsage;
    }

    try {
        if (*cx) {
            run_crossover(xa, out);
            return kExitOk;
        }
        if (*sw) {
            run_sweep(sa, out);
            return kExitOk;
        }
        if (*sim) return run_simulate(ma, out);
        if (*cmp) return run_compare(ca, out, err);
        if (*ver) return run_verify(va, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\nRun with --help for usage.\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace xover::cli
