#pragma once

// File formats: RFC-4180 CSV tables (numeric), JSON serialization of states
// and rational data, simulation configs, and versioned checkpoints.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "szego/integrate.hpp"

namespace szego {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row) { rows.push_back(std::move(row)); }
  int column(const std::string& name) const;  // -1 when absent
  std::vector<double> col(const std::string& name) const;
};

void write_csv(const Table& table, const std::filesystem::path& path);
Table read_csv(const std::filesystem::path& path);

// {"N": int, "coeffs": [[re, im], ...]}
Json state_to_json(const FourierState& u);
FourierState state_from_json(const Json& j);

// {"A": [[re, im], ...], "B": [[re, im], ...]}
Json rational_to_json(const RationalState& r);
RationalState rational_from_json(const Json& j);

Json config_to_json(const SimulationConfig& cfg);
SimulationConfig config_from_json(const Json& j, SimulationConfig base = {});

// {"schema_version": 1, "t": ..., "config": {...}, "state": {...}}
Json checkpoint_to_json(const SimulationConfig& cfg, double t, const FourierState& u);
std::pair<double, FourierState> checkpoint_from_json(const Json& j, SimulationConfig* cfg_out);

}  // namespace szego
