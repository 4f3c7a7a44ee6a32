#include "szego/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace szego {

int Table::column(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

std::vector<double> Table::col(const std::string& name) const {
  int c = column(name);
  if (c < 0) throw Error("Table: no column named " + name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[static_cast<size_t>(c)]);
  return out;
}

void write_csv(const Table& table, const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw Error("write_csv: cannot open " + path.string());
  for (size_t i = 0; i < table.header.size(); ++i)
    f << (i ? "," : "") << table.header[i];
  f << "\r\n";
  char buf[40];
  for (const auto& row : table.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      f << (i ? "," : "") << buf;
    }
    f << "\r\n";
  }
}

Table read_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error("read_csv: cannot open " + path.string());
  Table t;
  std::string line;
  bool first = true;
  while (std::getline(f, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    if (first) {
      while (std::getline(ss, cell, ',')) t.header.push_back(cell);
      first = false;
    } else {
      std::vector<double> row;
      while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

namespace {

Json complex_list(const Vec& v) {
  Json out = Json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back({v[i].real(), v[i].imag()});
  return out;
}

Vec complex_list_from(const Json& j) {
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i)
    v[static_cast<long>(i)] = Complex(j[i][0].get<double>(), j[i][1].get<double>());
  return v;
}

}  // namespace

Json state_to_json(const FourierState& u) {
  return {{"N", u.truncation()}, {"coeffs", complex_list(u.coeffs())}};
}

FourierState state_from_json(const Json& j) {
  Vec c = complex_list_from(j.at("coeffs"));
  int n = j.at("N").get<int>();
  if (n != c.size()) throw Error("state_from_json: N disagrees with coefficient count");
  return FourierState(std::move(c));
}

Json rational_to_json(const RationalState& r) {
  return {{"A", complex_list(r.numer)}, {"B", complex_list(r.denom)}};
}

RationalState rational_from_json(const Json& j) {
  RationalState r{complex_list_from(j.at("A")), complex_list_from(j.at("B"))};
  r.validate();
  return r;
}

Json config_to_json(const SimulationConfig& cfg) {
  return {{"alpha", cfg.alpha},
          {"N", cfg.truncation},
          {"grid", cfg.resolved_grid()},
          {"rel_tol", cfg.rel_tol},
          {"abs_tol", cfg.abs_tol},
          {"t_max", cfg.t_max},
          {"sample_interval", cfg.sample_interval},
          {"tail_guard", cfg.tail_guard},
          {"hierarchy_n_max", cfg.hierarchy_n_max},
          {"hierarchy_m", cfg.hierarchy_m},
          {"spectral_m", cfg.spectral_m},
          {"spectral_count", cfg.spectral_count},
          {"track_ell", cfg.track_ell},
          {"pole_rank", cfg.pole_rank},
          {"sobolev_exponents", cfg.sobolev_exponents}};
}

SimulationConfig config_from_json(const Json& j, SimulationConfig base) {
  SimulationConfig c = base;
  if (j.contains("alpha")) c.alpha = j["alpha"].get<double>();
  if (j.contains("N")) c.truncation = j["N"].get<int>();
  if (j.contains("grid")) c.grid_size = j["grid"].get<int>();
  if (j.contains("rel_tol")) c.rel_tol = j["rel_tol"].get<double>();
  if (j.contains("abs_tol")) c.abs_tol = j["abs_tol"].get<double>();
  if (j.contains("t_max")) c.t_max = j["t_max"].get<double>();
  if (j.contains("sample_interval")) c.sample_interval = j["sample_interval"].get<double>();
  if (j.contains("tail_guard")) c.tail_guard = j["tail_guard"].get<double>();
  if (j.contains("hierarchy_n_max")) c.hierarchy_n_max = j["hierarchy_n_max"].get<int>();
  if (j.contains("hierarchy_m")) c.hierarchy_m = j["hierarchy_m"].get<int>();
  if (j.contains("spectral_m")) c.spectral_m = j["spectral_m"].get<int>();
  if (j.contains("spectral_count")) c.spectral_count = j["spectral_count"].get<int>();
  if (j.contains("track_ell")) c.track_ell = j["track_ell"].get<bool>();
  if (j.contains("pole_rank")) c.pole_rank = j["pole_rank"].get<int>();
  if (j.contains("sobolev_exponents"))
    c.sobolev_exponents = j["sobolev_exponents"].get<std::vector<double>>();
  return c;
}

Json checkpoint_to_json(const SimulationConfig& cfg, double t, const FourierState& u) {
  return {{"schema_version", kSchemaVersion},
          {"t", t},
          {"config", config_to_json(cfg)},
          {"state", state_to_json(u)}};
}

std::pair<double, FourierState> checkpoint_from_json(const Json& j, SimulationConfig* cfg_out) {
  if (j.at("schema_version").get<int>() != kSchemaVersion)
    throw Error("checkpoint: unsupported schema version");
  if (cfg_out) *cfg_out = config_from_json(j.at("config"), *cfg_out);
  return {j.at("t").get<double>(), state_from_json(j.at("state"))};
}

}  // namespace szego
