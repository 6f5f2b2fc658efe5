#include "dgbo/io.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

namespace dgbo {

namespace fs = std::filesystem;

namespace {
template <class T>
T get_or(const json& j, const char* key, T def) {
    if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return def;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

std::string num(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(17) << v;
    return os.str();
}

const char* stepper_name(Stepper s) { return s == Stepper::etdrk4 ? "etdrk4" : "exprk4_ho"; }
}  // namespace

DispersionSymbol symbol_from_json(const json& j) {
    const std::string kind = get_or<std::string>(j, "kind", "fractional");
    if (kind == "quintic") return DispersionSymbol::quintic();
    if (kind != "fractional") throw ConfigError("unknown symbol kind '" + kind + "'");
    const double alpha = get_or<double>(j, "alpha", 2.0);
    if (!(alpha > 1.0 && alpha <= 2.0))
        throw ConfigError("fractional symbol needs 1 < alpha <= 2 (got " + num(alpha) + ")");
    return DispersionSymbol::fractional(alpha);
}

json to_json(const SimConfig& c) {
    json j;
    j["grid"] = {{"num_modes", c.grid.num_modes}, {"dealias_fraction", c.grid.dealias_fraction}};
    if (c.sym.kind == SymbolKind::quintic) j["symbol"] = {{"kind", "quintic"}};
    else j["symbol"] = {{"kind", "fractional"}, {"alpha", c.sym.alpha}};
    j["poly"] = c.poly.coeffs;
    j["gauged"] = c.gauged;
    j["dt"] = c.dt;
    j["t_end"] = c.t_end;
    j["snapshot_stride"] = c.snapshot_stride;
    j["contour_points"] = c.contour_points;
    j["stepper"] = stepper_name(c.stepper);
    j["overflow_guard"] = c.overflow_guard;
    return j;
}

SimConfig sim_config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    SimConfig c;
    const json grid = j.value("grid", json::object());
    c.grid.num_modes = get_or<int>(grid, "num_modes", c.grid.num_modes);
    c.grid.dealias_fraction = get_or<double>(grid, "dealias_fraction", c.grid.dealias_fraction);
    c.sym = symbol_from_json(j.value("symbol", json::object()));
    c.poly.coeffs = get_or<std::vector<double>>(j, "poly", {0.0, 1.0});
    c.gauged = get_or<bool>(j, "gauged", c.gauged);
    c.dt = get_or<double>(j, "dt", c.dt);
    c.t_end = get_or<double>(j, "t_end", c.t_end);
    c.snapshot_stride = get_or<int>(j, "snapshot_stride", c.snapshot_stride);
    c.contour_points = get_or<int>(j, "contour_points", c.contour_points);
    c.overflow_guard = get_or<double>(j, "overflow_guard", c.overflow_guard);
    const std::string st = get_or<std::string>(j, "stepper", "etdrk4");
    if (st == "etdrk4") c.stepper = Stepper::etdrk4;
    else if (st == "exprk4_ho") c.stepper = Stepper::exprk4_ho;
    else throw ConfigError("unknown stepper '" + st + "'");
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return c;
}

json to_json(const PartitionConstants& c) {
    return {{"sep", c.sep},         {"r2", c.r2},
            {"d1", c.d1},           {"n_floor", c.n_floor},
            {"n3_floor", c.n3_floor}, {"d2_floor", c.d2_floor},
            {"resonant_tol", c.resonant_tol}, {"check", c.check}};
}

PartitionConstants partition_from_json(const json& j) {
    PartitionConstants c;
    c.sep = get_or<double>(j, "sep", c.sep);
    c.r2 = get_or<double>(j, "r2", c.r2);
    c.d1 = get_or<double>(j, "d1", c.d1);
    c.n_floor = get_or<double>(j, "n_floor", c.n_floor);
    c.n3_floor = get_or<double>(j, "n3_floor", c.n3_floor);
    c.d2_floor = get_or<double>(j, "d2_floor", c.d2_floor);
    c.resonant_tol = get_or<double>(j, "resonant_tol", c.resonant_tol);
    c.check = get_or<bool>(j, "check", c.check);
    if (!(c.sep > 1) || !(c.r2 > 0) || !(c.d1 > 0) || !(c.resonant_tol >= 0))
        throw ConfigError("partition constants out of range");
    return c;
}

SpectralField initial_data(const json& j, int M, std::uint64_t seed) {
    const std::string type = get_or<std::string>(j, "type", "exponential");
    SpectralField g(M);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ph(0.0, 2.0 * M_PI);
    if (type == "exponential" || type == "power") {
        const double amp = get_or<double>(j, "amp", 0.5);
        const double decay = get_or<double>(j, "decay", 0.5);
        const double p = get_or<double>(j, "exponent", 1.5);
        for (int k = 1; k <= M; ++k) {
            const double r = type == "exponential" ? amp * std::exp(-decay * k)
                                                   : amp * std::pow(static_cast<double>(k), -p);
            g.pos(k) = std::polar(r, ph(rng));
        }
        return g;
    }
    if (type == "modes") {
        for (auto& m : j.at("modes")) {
            if (!m.is_array() || m.size() != 3) throw ConfigError("modes entries are [xi, re, im]");
            const long xi = m[0].get<long>();
            if (xi < 1 || xi > M) throw ConfigError("mode index out of range");
            g.pos(xi) = cplx(m[1].get<double>(), m[2].get<double>());
        }
        return g;
    }
    throw ConfigError("unknown initial data type '" + type + "'");
}

std::string config_hash(const json& j) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : j.dump()) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

// ---------------------------------------------------------------------------

namespace {
void put_le(std::ostream& os, double v) {
    std::uint64_t u;
    std::memcpy(&u, &v, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(u >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

double get_le(std::istream& is) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8)) throw std::runtime_error("truncated snapshot file");
    std::uint64_t u = 0;
    for (int i = 7; i >= 0; --i) u = (u << 8) | b[i];
    double v;
    std::memcpy(&v, &u, 8);
    return v;
}

std::string snap_name(size_t i) {
    std::ostringstream os;
    os << "snap_" << std::setw(5) << std::setfill('0') << i << ".bin";
    return os.str();
}
}  // namespace

std::string norms_csv(const Trajectory& tr) {
    std::ostringstream os;
    os << "t,mass,energy,h0,h1,gauge_shift\n";
    for (size_t i = 0; i < tr.states.size(); ++i) {
        auto q = conserved_quantities(tr.states[i], tr.config.poly, tr.config.sym);
        os << num(tr.times[i]) << ',' << num(q.mass) << ',' << num(q.energy) << ','
           << num(hs_norm(tr.states[i], 0)) << ',' << num(hs_norm(tr.states[i], 1)) << ','
           << num(i < tr.gauge_shift.size() ? tr.gauge_shift[i] : 0.0) << '\n';
    }
    return os.str();
}

void write_trajectory(const Trajectory& tr, const fs::path& dir, const json& provenance) {
    fs::create_directories(dir);
    json cfg = provenance;
    cfg["schema_version"] = kSchemaVersion;
    cfg["sim"] = to_json(tr.config);
    if (!cfg.contains("partition")) cfg["partition"] = to_json(PartitionConstants{});
    cfg["config_hash"] = config_hash(cfg["sim"]);
    std::ofstream(dir / "config.json") << cfg.dump(2) << '\n';

    json man;
    man["format"] = "float64 little-endian, interleaved re/im, xi = 1..M";
    man["modes"] = tr.config.grid.num_modes;
    man["snapshots"] = json::array();
    for (size_t i = 0; i < tr.states.size(); ++i) {
        const auto name = snap_name(i);
        std::ofstream os(dir / name, std::ios::binary);
        for (const cplx& c : tr.states[i].data()) {
            put_le(os, c.real());
            put_le(os, c.imag());
        }
        if (!os) throw std::runtime_error("cannot write " + (dir / name).string());
        man["snapshots"].push_back({{"file", name},
                                    {"t", tr.times[i]},
                                    {"gauge_shift", i < tr.gauge_shift.size() ? tr.gauge_shift[i] : 0.0}});
    }
    std::ofstream(dir / "manifest.json") << man.dump(2) << '\n';
    std::ofstream(dir / "norms.csv") << norms_csv(tr);
}

Trajectory read_trajectory(const fs::path& dir) {
    std::ifstream ci(dir / "config.json"), mi(dir / "manifest.json");
    if (!ci || !mi) throw ConfigError("not a trajectory directory: " + dir.string());
    json cfg, man;
    try {
        ci >> cfg;
        mi >> man;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("cannot parse trajectory metadata: ") + e.what());
    }
    Trajectory tr;
    tr.config = sim_config_from_json(cfg.at("sim"));
    const int M = man.at("modes").get<int>();
    for (auto& s : man.at("snapshots")) {
        std::ifstream is(dir / s.at("file").get<std::string>(), std::ios::binary);
        if (!is) throw ConfigError("missing snapshot file");
        SpectralField f(M);
        for (auto& c : f.data()) {
            const double re = get_le(is);
            c = cplx(re, get_le(is));
        }
        tr.states.push_back(std::move(f));
        tr.times.push_back(s.at("t").get<double>());
        tr.gauge_shift.push_back(s.value("gauge_shift", 0.0));
    }
    return tr;
}

}  // namespace dgbo
