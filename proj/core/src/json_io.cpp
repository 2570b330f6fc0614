#include "sklab/json_io.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace sklab {

using nlohmann::json;

std::string path_to_json(const CadlagPath& path) {
  json j;
  j["dim"] = path.dim();
  j["v0"] = path.initial_value();
  j["t"] = path.jump_times();
  auto values = json::array();
  for (std::size_t k = 0; k < path.jump_count(); ++k) {
    auto row = json::array();
    for (std::size_t c = 0; c < path.dim(); ++c) row.push_back(path.post_jump_values()[k * path.dim() + c]);
    values.push_back(std::move(row));
  }
  j["v"] = std::move(values);
  return j.dump();
}

CadlagPath path_from_json(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object() || !j.contains("dim") || !j.contains("t") ||
      !j.contains("v") || !j.contains("v0"))
    throw std::domain_error("path JSON must be an object with dim, t, v, v0");
  const std::size_t dim = j.at("dim").get<std::size_t>();
  std::vector<double> v0 = j.at("v0").get<std::vector<double>>();
  std::vector<double> times = j.at("t").get<std::vector<double>>();
  std::vector<double> values;
  for (const auto& row : j.at("v")) {
    auto r = row.get<std::vector<double>>();
    if (r.size() != dim) throw std::domain_error("path JSON value row has wrong dimension");
    values.insert(values.end(), r.begin(), r.end());
  }
  return CadlagPath(dim, std::move(v0), std::move(times), std::move(values));
}

std::string measure_to_json(const TimeSpacePointMeasure& measure) {
  json atoms = json::array();
  for (std::size_t i = 0; i < measure.size(); ++i)
    atoms.push_back(json::array({measure.times()[i], measure.marks()[i]}));
  json j;
  j["atoms"] = std::move(atoms);
  return j.dump();
}

TimeSpacePointMeasure measure_from_json(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object() || !j.contains("atoms"))
    throw std::domain_error("measure JSON must be an object with an atoms array");
  std::vector<std::pair<double, double>> atoms;
  for (const auto& a : j.at("atoms")) {
    if (!a.is_array() || a.size() != 2) throw std::domain_error("measure atom must be [t, x]");
    atoms.emplace_back(a[0].get<double>(), a[1].get<double>());
  }
  return TimeSpacePointMeasure::from_atoms(std::move(atoms));
}

}  // namespace sklab
