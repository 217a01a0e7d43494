// Copyright 2026 The imlind Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "imlind/sweep.hpp"

namespace imlind {

namespace detail {

/// Doubles round-trip bit-exactly; nonfinite values are encoded as strings
/// since JSON has no literal for them.
inline nlohmann::json json_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline double double_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw ParseError("bad numeric string \"" + s + "\" in report JSON");
  }
  return j.get<double>();
}

}  // namespace detail

inline nlohmann::json report_to_json(const PointReport& r) {
  nlohmann::json j;
  j["a"] = detail::json_double(r.a);
  j["b"] = detail::json_double(r.b);
  j["N"] = r.n_sites;
  j["boundary"] = to_string(r.boundary);
  j["gap"] = detail::json_double(r.gap);
  j["ground_real"] = r.ground_real;
  j["K_abs"] = detail::json_double(r.k_abs);
  j["UU"] = detail::json_double(r.uu);
  j["string_order"] = detail::json_double(r.string_order);
  j["EE"] = detail::json_double(r.ee);
  if (r.es_degeneracy >= 0) j["ES_degeneracy"] = r.es_degeneracy;
  if (r.gsd) j["GSD"] = *r.gsd;
  j["xi1"] = detail::json_double(r.xi1);
  j["xi2"] = detail::json_double(r.xi2);
  j["wall_ms"] = detail::json_double(r.wall_ms);
  j["error"] = r.error;
  nlohmann::json low = nlohmann::json::array();
  for (const cplx& e : r.low_spectrum)
    low.push_back({detail::json_double(e.real()), detail::json_double(e.imag())});
  j["low_spectrum"] = low;
  return j;
}

inline PointReport report_from_json(const nlohmann::json& j) {
  PointReport r;
  r.a = detail::double_from_json(j.at("a"));
  r.b = detail::double_from_json(j.at("b"));
  r.n_sites = j.at("N").get<int>();
  r.boundary = boundary_from_string(j.at("boundary").get<std::string>());
  r.gap = detail::double_from_json(j.at("gap"));
  r.ground_real = j.at("ground_real").get<bool>();
  r.k_abs = detail::double_from_json(j.at("K_abs"));
  r.uu = detail::double_from_json(j.at("UU"));
  r.string_order = detail::double_from_json(j.at("string_order"));
  r.ee = detail::double_from_json(j.at("EE"));
  r.es_degeneracy = j.contains("ES_degeneracy")
                        ? j.at("ES_degeneracy").get<int>()
                        : -1;
  if (j.contains("GSD")) r.gsd = j.at("GSD").get<int>();
  r.xi1 = detail::double_from_json(j.at("xi1"));
  r.xi2 = detail::double_from_json(j.at("xi2"));
  r.wall_ms = detail::double_from_json(j.at("wall_ms"));
  r.error = j.at("error").get<std::string>();
  for (const auto& e : j.at("low_spectrum"))
    r.low_spectrum.emplace_back(detail::double_from_json(e.at(0)),
                                detail::double_from_json(e.at(1)));
  return r;
}

inline void emit_json(const std::vector<PointReport>& reports,
                      std::ostream& os) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(report_to_json(r));
  os << arr.dump(2) << "\n";
}

inline std::vector<PointReport> parse_reports_json(std::istream& is) {
  nlohmann::json arr = nlohmann::json::parse(is);
  std::vector<PointReport> out;
  for (const auto& j : arr) out.push_back(report_from_json(j));
  return out;
}

/// Writes table.csv / table.json into the configured directory.
inline std::vector<std::string> emit(const std::vector<PointReport>& reports,
                                     const OutputConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.directory);
  std::vector<std::string> written;
  if (cfg.csv) {
    const auto path = fs::path(cfg.directory) / "table.csv";
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path.string());
    emit_csv(reports, os);
    written.push_back(path.string());
  }
  if (cfg.json) {
    const auto path = fs::path(cfg.directory) / "table.json";
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path.string());
    emit_json(reports, os);
    written.push_back(path.string());
  }
  return written;
}

}  // namespace imlind
