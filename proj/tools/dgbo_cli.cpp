// dgbo: command-line front end for the simulation and diagnostics library.
//
//   dgbo <simulate|smoothing|normalform|counterexample|lemma-check|scan>
//        --config FILE --out DIR [--seed N] [--threads N]
//
// Exit codes: 0 ok, 2 invalid input, 3 numerical invariant violated.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "dgbo/combinatorics.hpp"
#include "dgbo/diagnostics.hpp"
#include "dgbo/io.hpp"

using namespace dgbo;
namespace fs = std::filesystem;

namespace {

struct InvariantViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Context {
    json config;
    fs::path out;
    std::uint64_t seed = 0;
    int threads = 1;
    PartitionConstants partition;

    json section(const char* name) const { return config.value(name, json::object()); }

    json provenance() const {
        return {{"schema_version", kSchemaVersion},
                {"config_hash", config_hash(config)},
                {"seed", seed},
                {"partition", to_json(partition)}};
    }

    void write(const std::string& name, const std::string& text) const {
        std::ofstream os(out / name);
        os << text;
        if (!os) throw std::runtime_error("cannot write " + (out / name).string());
    }

    void summary(json s) const {
        s["provenance"] = provenance();
        write("summary.json", s.dump(2) + "\n");
    }
};

json load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config '" + path + "'");
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    if (!j.contains("schema_version")) throw ConfigError("config lacks schema_version");
    if (j["schema_version"] != kSchemaVersion)
        throw ConfigError("unsupported schema_version " + j["schema_version"].dump());
    return j;
}

template <class T>
T param(const json& sec, const char* key, T def) {
    if (!sec.contains(key)) return def;
    try {
        return sec.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

std::pair<SimConfig, SpectralField> sim_and_data(const Context& ctx) {
    SimConfig cfg = sim_config_from_json(ctx.section("sim"));
    SpectralField g = initial_data(ctx.section("initial"), cfg.grid.num_modes, ctx.seed);
    return {cfg, g};
}

// ---------------------------------------------------------------------------

void run_simulate(const Context& ctx) {
    auto [cfg, g] = sim_and_data(ctx);
    Trajectory tr = integrate(cfg, g);
    write_trajectory(tr, ctx.out, ctx.provenance());
    auto q0 = conserved_quantities(tr.states.front(), cfg.poly, cfg.sym);
    double mass_drift = 0, energy_drift = 0, max_mean = 0;
    for (auto& s : tr.states) {
        auto q = conserved_quantities(s, cfg.poly, cfg.sym);
        mass_drift = std::max(mass_drift, std::abs(q.mass - q0.mass) / std::max(q0.mass, 1e-300));
        energy_drift = std::max(energy_drift, std::abs(q.energy - q0.energy) /
                                                  std::max(std::abs(q0.energy), 1e-300));
        max_mean = std::max(max_mean, std::abs(s.mean));
    }
    ctx.summary({{"experiment", "simulate"},
                 {"params", to_json(cfg)},
                 {"snapshots", tr.states.size()},
                 {"residuals",
                  {{"mass_drift_rel", mass_drift},
                   {"energy_drift_rel", energy_drift},
                   {"max_abs_mean", max_mean}}},
                 {"pass", max_mean == 0.0}});
    if (max_mean != 0.0) throw InvariantViolation("mean mode drifted from zero");
}

void run_smoothing(const Context& ctx) {
    auto [cfg, g] = sim_and_data(ctx);
    const json sec = ctx.section("smoothing");
    const double s = param<double>(sec, "s", 1.0);
    const auto a_grid = param<std::vector<double>>(sec, "a_grid", {0.0, 0.2, 0.4});
    Trajectory tr = integrate(cfg, g);
    auto tab = smoothing_table(tr, g, s, a_grid);
    ctx.write("smoothing.csv", tab.csv());
    json last = json::object();
    for (auto& r : tab.rows)
        if (r.t == tab.rows.back().t)
            last[std::to_string(r.a)] = {{"diff_norm", r.diff_norm}, {"free_norm", r.free_norm}};
    bool finite = true;
    for (auto& r : tab.rows) finite = finite && std::isfinite(r.diff_norm);
    const double alpha = cfg.sym.kind == SymbolKind::fractional ? cfg.sym.alpha : 4.0;
    ctx.summary({{"experiment", "smoothing"},
                 {"params", {{"sim", to_json(cfg)}, {"s", s}, {"a_grid", a_grid}}},
                 {"fitted_exponents",
                  {{"tail_slope_diff", tab.tail_slope_diff},
                   {"tail_slope_data", tab.tail_slope_data},
                   {"observed_gain", tab.observed_gain},
                   {"alpha_minus_1", alpha - 1.0}}},
                 {"residuals", {{"final_time", last}}},
                 {"pass", finite}});
    if (!finite) throw InvariantViolation("non-finite smoothing norm");
}

void run_normalform(const Context& ctx) {
    auto [cfg, g] = sim_and_data(ctx);
    const json sec = ctx.section("normalform");
    NormalFormOptions o;
    o.depth_N = param<int>(sec, "depth_N", 1);
    o.depth_M = param<int>(sec, "depth_M", 0);
    o.s = param<double>(sec, "s", 0.0);
    o.constants = ctx.partition;
    o.threads = ctx.threads;
    const double threshold = param<double>(sec, "threshold", 1e-3);
    Trajectory tr = integrate(cfg, g);
    NormalFormReport rep;
    try {
        rep = normal_form_residual(tr, o);
    } catch (const QuadratureError& e) {
        throw ConfigError(e.what());
    }
    ctx.write("normalform.csv", rep.csv());
    json terms = json::array();
    for (auto& t : rep.terms)
        terms.push_back({{"label", t.label}, {"tuples", t.tuples}, {"final_norm", t.norms.back()}});
    const bool pass = rep.max_rel_residual < threshold;
    ctx.summary({{"experiment", "normalform"},
                 {"params",
                  {{"sim", to_json(cfg)},
                   {"depth_N", o.depth_N},
                   {"depth_M", o.depth_M},
                   {"s", o.s},
                   {"threshold", threshold}}},
                 {"residuals",
                  {{"max_rel", rep.max_rel_residual}, {"final_abs", rep.abs_residual.back()}}},
                 {"terms", terms},
                 {"pass", pass}});
    if (!pass) throw InvariantViolation("normal-form residual above threshold");
}

void run_counterexample(const Context& ctx) {
    const json sec = ctx.section("counterexample");
    const DispersionSymbol sym =
        symbol_from_json(sec.value("symbol", json{{"kind", "fractional"}, {"alpha", 1.5}}));
    const double s = param<double>(sec, "s", 1.0), a = param<double>(sec, "a", 0.8);
    std::vector<long> Ns = param<std::vector<long>>(sec, "N_list", {});
    if (Ns.empty()) {
        const int lo = param<int>(sec, "N_pow_min", 4), hi = param<int>(sec, "N_pow_max", 14);
        if (lo < 2 || hi > 24 || lo > hi) throw ConfigError("bad N_pow range");
        for (int p = lo; p <= hi; ++p) Ns.push_back(1L << p);
    }
    const double tol = param<double>(sec, "tolerance", 0.05);
    CounterexampleReport rep;
    try {
        rep = counterexample_scan(Ns, s, a, sym);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    ctx.write("counterexample.csv", rep.csv());
    const bool divergent = rep.expected > 0;
    const bool pass = divergent ? std::abs(rep.slope - rep.expected) <= tol : rep.slope <= tol;
    ctx.summary({{"experiment", "counterexample"},
                 {"params", {{"s", s}, {"a", a}, {"alpha", rep.alpha}, {"N_list", Ns}}},
                 {"fitted_exponents", {{"slope", rep.slope}, {"expected", rep.expected}}},
                 {"pass", pass}});
}

void run_lemma_check(const Context& ctx) {
    const json sec = ctx.section("lemma_check");
    const int trials = param<int>(sec, "trials", 1000), max_N = param<int>(sec, "max_N", 7);
    const int mtrials = param<int>(sec, "multiset_trials", 200), max_M = param<int>(sec, "max_M", 8);
    if (trials < 0 || mtrials < 0 || max_N < 2 || max_N > 10 || max_M < 2 || max_M > 10)
        throw ConfigError("lemma_check sizes out of range");
    auto rep = lemma_check(ctx.seed, trials, max_N, mtrials, max_M);
    std::string csv = "check,cases,violations\n";
    long long zv = 0, mv = 0;
    for (auto& v : rep.violations) (v.rfind("zero_sum", 0) == 0 ? zv : mv)++;
    csv += "zero_sum," + std::to_string(rep.zero_sum_cases) + "," + std::to_string(zv) + "\n";
    csv += "multiset," + std::to_string(rep.multiset_cases) + "," + std::to_string(mv) + "\n";
    ctx.write("lemma_check.csv", csv);
    ctx.summary({{"experiment", "lemma-check"},
                 {"params",
                  {{"trials", trials},
                   {"max_N", max_N},
                   {"multiset_trials", mtrials},
                   {"max_M", max_M}}},
                 {"cases", {{"zero_sum", rep.zero_sum_cases}, {"multiset", rep.multiset_cases}}},
                 {"violations", rep.violations},
                 {"pass", rep.violations.empty()}});
    if (!rep.violations.empty()) throw InvariantViolation("cancellation identity violated");
}

void run_scan(const Context& ctx) {
    const json sec = ctx.section("scan");
    const Lemma lemma = [&] {
        try {
            return parse_lemma(param<std::string>(sec, "lemma", "L2_1"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }();
    const DispersionSymbol sym =
        symbol_from_json(sec.value("symbol", json{{"kind", "fractional"}, {"alpha", 2.0}}));
    const long range = param<long>(sec, "range", 30);
    if (range < 1) throw ConfigError("scan range must be positive");
    ScanOptions opt;
    opt.arity = param<int>(sec, "arity", opt.arity);
    opt.k_list = param<std::vector<int>>(sec, "k_list", opt.k_list);
    opt.threads = ctx.threads;
    auto rep = bound_scan(lemma, range, sym, ctx.partition, opt);
    ctx.write("scan.csv", ScanReport::csv_header() + "\n" + rep.csv_row() + "\n");
    ctx.summary({{"experiment", "scan"},
                 {"params",
                  {{"lemma", rep.lemma},
                   {"range", range},
                   {"alpha", rep.alpha},
                   {"arity", opt.arity},
                   {"k_list", opt.k_list}}},
                 {"residuals",
                  {{"ratio_min", rep.ratio_min},
                   {"ratio_max", rep.ratio_max},
                   {"argmin", rep.argmin},
                   {"argmax", rep.argmax},
                   {"tuples", rep.tuples}}},
                 {"violations", rep.violations},
                 {"pass", rep.violations.empty()}});
    if (!rep.violations.empty()) throw InvariantViolation("asserted bound violated");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dgbo: dispersion-generalized Benjamin-Ono experiments"};
    app.require_subcommand(1);
    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int threads = 1;
    app.add_option("--config", config_path, "JSON config file")->required();
    app.add_option("--out", out_dir, "output directory")->required();
    app.add_option_function<std::uint64_t>(
        "--seed",
        [&](const std::uint64_t& s) {
            seed = s;
            seed_given = true;
        },
        "random seed (overrides the config)");
    app.add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 1024));
    app.fallthrough();

    using Runner = void (*)(const Context&);
    const std::vector<std::tuple<const char*, const char*, Runner>> cmds = {
        {"simulate", "integrate and write a trajectory directory", run_simulate},
        {"smoothing", "nonlinear smoothing table", run_smoothing},
        {"normalform", "normal-form identity residual", run_normalform},
        {"counterexample", "two-mode sharpness scan", run_counterexample},
        {"lemma-check", "randomized exact cancellation identities", run_lemma_check},
        {"scan", "resonance / multiplier bound scan", run_scan}};
    Runner chosen = nullptr;
    for (auto& [name, help, fn] : cmds) {
        auto* sub = app.add_subcommand(name, help);
        sub->callback([&chosen, f = fn] { chosen = f; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        Context ctx;
        ctx.config = load_config(config_path);
        ctx.seed = seed_given ? seed : ctx.config.value("seed", std::uint64_t{0});
        ctx.config["seed"] = ctx.seed;
        ctx.threads = threads;
        ctx.partition = partition_from_json(ctx.section("partition"));
        ctx.out = out_dir;
        fs::create_directories(ctx.out);
        chosen(ctx);
    } catch (const ConfigError& e) {
        std::cerr << "dgbo: invalid input: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "dgbo: invalid input: " << e.what() << '\n';
        return 2;
    } catch (const InvariantViolation& e) {
        std::cerr << "dgbo: invariant violated: " << e.what() << '\n';
        return 3;
    } catch (const BlowUpError& e) {
        std::cerr << "dgbo: invariant violated: " << e.what() << '\n';
        return 3;
    } catch (const PartitionError& e) {
        std::cerr << "dgbo: invariant violated: " << e.what() << '\n';
        return 3;
    } catch (const RealityError& e) {
        std::cerr << "dgbo: invariant violated: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "dgbo: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
