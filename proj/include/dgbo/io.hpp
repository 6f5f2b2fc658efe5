#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "dgbo/resonance.hpp"
#include "dgbo/solver.hpp"

namespace dgbo {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// JSON <-> config pieces. Readers fill unspecified fields with defaults and
// throw ConfigError on malformed or out-of-range values.
json to_json(const SimConfig& c);
SimConfig sim_config_from_json(const json& j);
json to_json(const PartitionConstants& c);
PartitionConstants partition_from_json(const json& j);
DispersionSymbol symbol_from_json(const json& j);

// Initial data description:
//   {"type": "exponential", "amp": a, "decay": b}      ghat = a e^{-b xi} e^{i theta}
//   {"type": "power", "amp": a, "exponent": p}         ghat = a xi^{-p} e^{i theta}
//   {"type": "modes", "modes": [[xi, re, im], ...]}
// theta uniform on [0, 2pi) from a mt19937_64 seeded with `seed`.
SpectralField initial_data(const json& j, int M, std::uint64_t seed);

// FNV-1a (64 bit) of the canonical dump, as 16 hex digits
std::string config_hash(const json& j);

// Directory layout: config.json, manifest.json, snap_NNNNN.bin (little-endian
// float64 re/im pairs for xi = 1..M), norms.csv.
void write_trajectory(const Trajectory& tr, const std::filesystem::path& dir,
                      const json& provenance = json::object());
Trajectory read_trajectory(const std::filesystem::path& dir);

std::string norms_csv(const Trajectory& tr);

}  // namespace dgbo
