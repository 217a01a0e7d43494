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

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "imlind/common.hpp"
#include "imlind/duality.hpp"
#include "imlind/evolve.hpp"
#include "imlind/lattice.hpp"
#include "imlind/liouville.hpp"
#include "imlind/models.hpp"
#include "imlind/observables.hpp"
#include "imlind/spectral.hpp"

namespace imlind {

enum class ModelKind { corner, interpolated, gibbs };

inline ModelKind model_kind_from_string(const std::string& s) {
  if (s == "corner") return ModelKind::corner;
  if (s == "interpolated") return ModelKind::interpolated;
  if (s == "gibbs") return ModelKind::gibbs;
  throw ConfigError("unknown model kind \"" + s + "\"");
}

struct ModelConfig {
  ModelKind kind = ModelKind::interpolated;
  int n_sites = 2;
  Boundary boundary = Boundary::periodic;
  std::string corner = "11";
  double a = 0.5;
  double b = 0.5;
  double beta_T = 0.5;
  std::vector<std::string> stabilizers;
  std::vector<std::string> excitations;
};

struct GridConfig {
  double a_min = 0.0, a_max = 1.0;
  int a_steps = 11;
  double b_min = 0.0, b_max = 1.0;
  int b_steps = 11;
};

enum class SolverMethod { automatic, dense, iterative };

struct SolverConfig {
  SolverMethod method = SolverMethod::automatic;
  int k = 6;
  std::uint64_t seed = 42;
  double tol = 1e-10;
  int max_iter = 6000;
};

struct OutputConfig {
  std::string directory = "out";
  bool csv = true;
  bool json = true;
};

inline const std::set<std::string>& known_observables() {
  static const std::set<std::string> labels = {
      "k_abs", "uu",  "string_order", "ee",
      "es_degeneracy", "gsd", "xi1",  "xi2"};
  return labels;
}

struct SweepConfig {
  ModelConfig model;
  GridConfig grid;
  SolverConfig solver;
  std::vector<std::string> observables = {"k_abs", "uu", "string_order", "ee",
                                          "es_degeneracy"};
  OutputConfig output;

  bool wants(const std::string& label) const {
    for (const auto& o : observables)
      if (o == label) return true;
    return false;
  }

  void validate() const {
    if (model.n_sites < 1) throw ConfigError("model.n_sites must be >= 1");
    if (model.n_sites > 7)
      throw ConfigError("model.n_sites above 7 (14 qubits) is outside the "
                        "supported solver range");
    if (grid.a_min < 0 || grid.a_max > 1 || grid.b_min < 0 || grid.b_max > 1 ||
        grid.a_min > grid.a_max || grid.b_min > grid.b_max)
      throw ConfigError("grid bounds must satisfy 0 <= min <= max <= 1");
    if (grid.a_steps < 1 || grid.b_steps < 1)
      throw ConfigError("grid step counts must be >= 1");
    if (solver.k < 1) throw ConfigError("solver.k must be >= 1");
    for (const auto& label : observables)
      if (!known_observables().count(label))
        throw ConfigError("unknown observable label \"" + label + "\"");
    if (model.kind == ModelKind::gibbs &&
        (model.stabilizers.empty() ||
         model.stabilizers.size() != model.excitations.size()))
      throw ConfigError(
          "gibbs model needs matching stabilizer and excitation word lists");
  }
};

/// One record of the phase-diagram scan. Optional quantities stay NaN (or
/// unset) when not requested or not obtainable; a non-empty `error` marks a
/// failed row without aborting the sweep.
struct PointReport {
  double a = std::numeric_limits<double>::quiet_NaN();
  double b = std::numeric_limits<double>::quiet_NaN();
  int n_sites = 0;
  Boundary boundary = Boundary::periodic;
  double gap = std::numeric_limits<double>::quiet_NaN();
  bool ground_real = false;
  double k_abs = std::numeric_limits<double>::quiet_NaN();
  double uu = std::numeric_limits<double>::quiet_NaN();
  double string_order = std::numeric_limits<double>::quiet_NaN();
  double ee = std::numeric_limits<double>::quiet_NaN();
  int es_degeneracy = -1;  // -1 = not computed
  std::optional<int> gsd;
  double xi1 = std::numeric_limits<double>::quiet_NaN();
  double xi2 = std::numeric_limits<double>::quiet_NaN();
  double wall_ms = 0.0;
  std::string error;
  std::vector<cplx> low_spectrum;  // few lowest eigenvalues, for inspection
};

inline LindbladGenerator build_model(const ModelConfig& m, double a, double b) {
  switch (m.kind) {
    case ModelKind::corner:
      return build_corner(corner_from_string(m.corner),
                          LatticeSpec(m.n_sites, m.boundary));
    case ModelKind::interpolated:
      return build_interpolated({a, b}, LatticeSpec(m.n_sites, m.boundary));
    case ModelKind::gibbs: {
      std::vector<PauliString> stabs, excs;
      for (const auto& s : m.stabilizers) stabs.push_back(PauliString::parse(s));
      for (const auto& s : m.excitations) excs.push_back(PauliString::parse(s));
      return build_stabilizer_gibbs(GibbsSpec(stabs, excs, m.beta_T));
    }
  }
  throw ConfigError("unreachable model kind");
}

inline PointReport run_point(const SweepConfig& cfg, double a, double b) {
  const auto t0 = std::chrono::steady_clock::now();
  PointReport rep;
  rep.a = a;
  rep.b = b;
  rep.n_sites = cfg.model.n_sites;
  rep.boundary = cfg.model.boundary;
  try {
    const LindbladGenerator gen = build_model(cfg.model, a, b);
    const Superoperator s = build_imag_superop(gen);

    SolverMethod method = cfg.solver.method;
    if (method == SolverMethod::automatic)
      method = s.dim() <= 4096 ? SolverMethod::dense : SolverMethod::iterative;

    SpectrumResult spec;
    if (method == SolverMethod::dense) {
      spec = full_spectrum(s);
    } else {
      IterativeOptions iopts;
      iopts.tol = cfg.solver.tol;
      iopts.max_iter = cfg.solver.max_iter;
      iopts.seed = cfg.solver.seed;
      spec = extremal_spectrum(s, std::max(2, cfg.solver.k), iopts);
    }
    rep.gap = spec.gap;
    rep.ground_real = spec.ground_is_real;
    const std::size_t keep = std::min<std::size_t>(8, spec.eigenvalues.size());
    rep.low_spectrum.assign(spec.eigenvalues.begin(),
                            spec.eigenvalues.begin() + keep);

    if (cfg.wants("gsd")) {
      if (spec.partial)
        rep.error = "gsd requires the dense solver; ";
      else
        rep.gsd = spec.count_ground_multiplicity(1e-7);
    }

    SteadyStateResult steady = steady_state_from_spectrum(spec, s.n_qubits());
    if (steady.degenerate) {
      rep.error += "degenerate ground space; state observables skipped";
      rep.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
      return rep;
    }
    const DensityMatrix& rho = steady.unique();

    const bool lattice_model = cfg.model.kind != ModelKind::gibbs;
    if (lattice_model) {
      const LatticeSpec lat(cfg.model.n_sites, cfg.model.boundary);
      if (cfg.wants("k_abs"))
        rep.k_abs = strong_symmetry_indicator(rho, lat.tau_parity());
      if (cfg.wants("uu"))
        rep.uu = weak_symmetry_indicator(rho, lat.sigma_parity());
      if (cfg.wants("string_order") && lat.n_sites >= 2)
        rep.string_order =
            string_order(rho, lat, 0, std::max(1, lat.n_sites / 2)).real();
      if ((cfg.wants("ee") || cfg.wants("es_degeneracy")) && lat.n_sites >= 2) {
        SuperVector ground{s.n_qubits(), Ordering::blocked,
                           spec.eigenvectors.col(0)};
        const auto ent =
            supervector_entanglement(ground, std::max(1, lat.n_sites / 2));
        if (cfg.wants("ee")) rep.ee = ent.entropy;
        if (cfg.wants("es_degeneracy"))
          rep.es_degeneracy = ent.leading_degeneracy;
      }
      const auto sigma_z = [&lat](int i) { return lat.sigma(i, 'Z'); };
      if (cfg.wants("xi1")) {
        try {
          const auto series =
              correlation_series(rho, lat, sigma_z, false, "sigma_z linear");
          rep.xi1 = fit_corr_length(series).xi;
        } catch (const FitError&) {
          // below the floor everywhere: no signal, leave NaN
        }
      }
      if (cfg.wants("xi2")) {
        try {
          const auto series =
              correlation_series(rho, lat, sigma_z, true, "sigma_z renyi2");
          rep.xi2 = fit_corr_length(series).xi;
        } catch (const FitError&) {
        }
      }
    }
  } catch (const Error& e) {
    rep.error += e.what();
  }
  rep.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return rep;
}

inline std::vector<double> grid_values(double lo, double hi, int steps) {
  std::vector<double> v;
  if (steps == 1) {
    v.push_back(lo);
    return v;
  }
  for (int i = 0; i < steps; ++i)
    v.push_back(lo + (hi - lo) * static_cast<double>(i) /
                         static_cast<double>(steps - 1));
  return v;
}

/// Grid scan with a bounded worker pool; rows are independent and the output
/// order never depends on scheduling.
inline std::vector<PointReport> run_sweep(const SweepConfig& cfg,
                                          int workers = 1) {
  cfg.validate();
  const auto as = grid_values(cfg.grid.a_min, cfg.grid.a_max, cfg.grid.a_steps);
  const auto bs = grid_values(cfg.grid.b_min, cfg.grid.b_max, cfg.grid.b_steps);
  std::vector<std::pair<double, double>> points;
  for (double a : as)
    for (double b : bs) points.emplace_back(a, b);
  std::vector<PointReport> out(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= points.size()) return;
      out[i] = run_point(cfg, points[i].first, points[i].second);
    }
  };
  const int n_threads =
      std::max(1, std::min<int>(workers, static_cast<int>(points.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return out;
}

inline bool sweep_has_fatal_error(const std::vector<PointReport>& reports) {
  for (const auto& r : reports)
    if (!r.error.empty()) return true;
  return false;
}

namespace detail {

inline std::string format_double(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline constexpr const char* kCsvHeader =
    "a,b,N,boundary,gap,ground_real,K_abs,UU,string_order,EE,ES_degeneracy,"
    "GSD,xi1,xi2,wall_ms";

inline void emit_csv(const std::vector<PointReport>& reports,
                     std::ostream& os) {
  os << kCsvHeader << "\n";
  for (const auto& r : reports) {
    os << detail::format_double(r.a) << "," << detail::format_double(r.b)
       << "," << r.n_sites << "," << to_string(r.boundary) << ","
       << detail::format_double(r.gap) << "," << (r.ground_real ? 1 : 0) << ","
       << detail::format_double(r.k_abs) << "," << detail::format_double(r.uu)
       << "," << detail::format_double(r.string_order) << ","
       << detail::format_double(r.ee) << ","
       << (r.es_degeneracy >= 0 ? std::to_string(r.es_degeneracy) : "") << ","
       << (r.gsd ? std::to_string(*r.gsd) : "") << ","
       << detail::format_double(r.xi1) << "," << detail::format_double(r.xi2)
       << "," << detail::format_double(r.wall_ms) << "\n";
  }
}

/// Sorted "Re Im" lines followed by a gap/degeneracy summary.
inline void write_spectrum_text(const SpectrumResult& spec, std::ostream& os) {
  for (const cplx& e : spec.eigenvalues) {
    os << detail::format_double(e.real()) << " "
       << detail::format_double(e.imag()) << "\n";
  }
  os << "# gap " << detail::format_double(spec.gap) << "\n";
  os << "# ground_is_real " << (spec.ground_is_real ? 1 : 0) << "\n";
  os << "# ground_multiplicity " << spec.count_ground_multiplicity() << "\n";
  os << "# shift " << detail::format_double(spec.shift) << "\n";
}

}  // namespace imlind
