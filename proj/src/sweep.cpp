// Copyright 2026 The qetlab Authors
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

#include "qetlab/sweep.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "qetlab/entanglement.hpp"
#include "qetlab/errors.hpp"

#ifndef QETLAB_VERSION
#define QETLAB_VERSION "unknown"
#endif

namespace qet {

namespace {

std::pair<std::string, std::string> swept_params(ModelKind family) {
  switch (family) {
    case ModelKind::ising:
      return {"h_x", "h_z"};
    case ModelKind::cluster:
    case ModelKind::cluster_zz:
      return {"J1", "J2"};
    case ModelKind::y_cluster:
      return {"h_y", "J_y"};
    case ModelKind::jw_mapped:
      break;
  }
  throw ContractError("sweeps are not defined for " + to_string(family));
}

std::vector<double> axis_values(std::pair<double, double> range, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    v[i] = range.first * (1.0 - t) + range.second * t;
  }
  return v;
}

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string axis_string(Pauli p) { return std::string(1, to_char(p)); }

nlohmann::json config_json(const QETConfig& c) {
  return {{"n_A", c.n_a}, {"n_B", c.n_b}, {"axis_A", axis_string(c.axis_a)},
          {"axis_B", axis_string(c.axis_b)}};
}

template <typename F>
void parallel_cells(std::size_t count, unsigned threads, F&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next++; i < count; i = next++) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
        next = count;
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

std::string to_string(SweepMetric m) {
  switch (m) {
    case SweepMetric::entropy:
      return "entropy";
    case SweepMetric::qet_energy:
      return "qet_energy";
    case SweepMetric::both:
      return "both";
  }
  return "?";
}

SweepMetric sweep_metric_from_string(const std::string& s) {
  for (auto m : {SweepMetric::entropy, SweepMetric::qet_energy, SweepMetric::both}) {
    if (to_string(m) == s) return m;
  }
  throw ContractError("unknown metric '" + s + "'");
}

void validate(const SweepSpec& spec) {
  const auto [a, b] = swept_params(spec.family);
  auto known = [&](const std::string& p) { return p == a || p == b; };
  if (!known(spec.x_param) || !known(spec.y_param) || spec.x_param == spec.y_param) {
    throw ContractError("swept parameters for " + to_string(spec.family) + " must be " + a +
                        " and " + b);
  }
  for (double v : {spec.x_range.first, spec.x_range.second, spec.y_range.first, spec.y_range.second}) {
    if (!std::isfinite(v)) throw ContractError("sweep ranges must be finite");
  }
  if (!(spec.x_range.first < spec.x_range.second) || !(spec.y_range.first < spec.y_range.second)) {
    throw ContractError("sweep ranges need lo < hi");
  }
  if (spec.resolution < 2) throw ContractError("sweep resolution must be at least 2");
  if (spec.num_sites < 3) throw ContractError("sweeps need at least 3 sites");
  if (spec.metric != SweepMetric::entropy) validate(spec.config, spec.num_sites);
}

SweepSpec default_sweep_spec(ModelKind family, Pauli ising_axis) {
  SweepSpec s;
  s.family = family;
  std::tie(s.x_param, s.y_param) = swept_params(family);
  switch (family) {
    case ModelKind::ising:
      s.coupling_axis = ising_axis;
      s.config = {1, 4, Pauli::Y, ising_axis == Pauli::Y ? Pauli::Z : Pauli::X};
      break;
    case ModelKind::cluster:
    case ModelKind::cluster_zz:
      s.config = {1, 4, Pauli::X, Pauli::Y};
      break;
    case ModelKind::y_cluster:
      s.config = {1, 4, Pauli::X, Pauli::Z};
      break;
    case ModelKind::jw_mapped:
      break;
  }
  return s;
}

SweepSpec sweep_spec_from_json(const nlohmann::json& j) {
  const auto family = model_kind_from_string(j.at("model").get<std::string>());
  SweepSpec s = default_sweep_spec(
      family, pauli_from_char(j.value("coupling_axis", std::string("X")).at(0)));
  s.num_sites = j.value("N", s.num_sites);
  if (j.contains("fixed")) s.fixed = j["fixed"].get<std::map<std::string, double>>();
  s.x_param = j.value("x_param", s.x_param);
  s.y_param = j.value("y_param", s.y_param);
  if (j.contains("x_range")) s.x_range = {j["x_range"].at(0).get<double>(), j["x_range"].at(1).get<double>()};
  if (j.contains("y_range")) s.y_range = {j["y_range"].at(0).get<double>(), j["y_range"].at(1).get<double>()};
  s.resolution = j.value("resolution", s.resolution);
  s.metric = sweep_metric_from_string(j.value("metric", to_string(s.metric)));
  s.boundary = boundary_from_string(j.value("boundary", to_string(s.boundary)));
  s.threads = j.value("threads", s.threads);
  if (j.contains("config")) {
    const auto& c = j["config"];
    s.config.n_a = c.value("n_A", s.config.n_a);
    s.config.n_b = c.value("n_B", s.config.n_b);
    s.config.axis_a = pauli_from_char(c.value("axis_A", axis_string(s.config.axis_a)).at(0));
    s.config.axis_b = pauli_from_char(c.value("axis_B", axis_string(s.config.axis_b)).at(0));
  }
  validate(s);
  return s;
}

nlohmann::json to_json(const SweepSpec& s) {
  nlohmann::json j{{"model", to_string(s.family)},
                   {"N", s.num_sites},
                   {"fixed", s.fixed},
                   {"x_param", s.x_param},
                   {"y_param", s.y_param},
                   {"x_range", {s.x_range.first, s.x_range.second}},
                   {"y_range", {s.y_range.first, s.y_range.second}},
                   {"resolution", s.resolution},
                   {"metric", to_string(s.metric)},
                   {"boundary", to_string(s.boundary)},
                   {"config", config_json(s.config)}};
  if (s.family == ModelKind::ising) j["coupling_axis"] = axis_string(s.coupling_axis);
  return j;
}

SpinChainModel build_sweep_model(const SweepSpec& spec, double x, double y) {
  auto c = spec.fixed;
  c[spec.x_param] = x;
  c[spec.y_param] = y;
  auto get = [&](const char* k) { return c.count(k) ? c.at(k) : 0.0; };
  switch (spec.family) {
    case ModelKind::ising:
      return build_ising(spec.num_sites, get("h_x"), get("h_z"), spec.coupling_axis, spec.boundary);
    case ModelKind::cluster:
    case ModelKind::cluster_zz:
      return build_cluster(spec.num_sites, get("J1"), get("J2"),
                           spec.family == ModelKind::cluster_zz, spec.boundary);
    case ModelKind::y_cluster:
      return build_y_cluster(spec.num_sites, get("h_y"), get("J_y"), spec.boundary);
    case ModelKind::jw_mapped:
      break;
  }
  throw ContractError("sweeps are not defined for jw_mapped models");
}

std::optional<std::string> SweepGrid::meta(const std::string& key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::vector<SweepGrid> run_sweep(const SweepSpec& spec) {
  validate(spec);
  const auto xs = axis_values(spec.x_range, spec.resolution);
  const auto ys = axis_values(spec.y_range, spec.resolution);
  const std::size_t cells = xs.size() * ys.size();
  const bool want_entropy = spec.metric != SweepMetric::qet_energy;
  const bool want_energy = spec.metric != SweepMetric::entropy;

  std::vector<double> entropy(cells, 0.0), energy(cells, 0.0), deviation(cells, 0.0);
  std::vector<char> degenerate(cells, 0);
  parallel_cells(cells, spec.threads, [&](std::size_t i) {
    const std::size_t ix = i % xs.size(), iy = i / xs.size();
    try {
      const auto prepared = prepare(build_sweep_model(spec, xs[ix], ys[iy]));
      degenerate[i] = prepared.ground.degenerate;
      if (want_entropy) entropy[i] = half_chain_entropy(prepared.ground.amplitudes);
      if (want_energy) {
        const auto r = run_qet(prepared.model, prepared.ground, spec.config);
        energy[i] = r.e_density_matrix;
        deviation[i] = std::abs(r.e_density_matrix - r.e_analytic);
      }
      const double v = want_energy ? energy[i] : entropy[i];
      if (!std::isfinite(v) || !std::isfinite(entropy[i])) throw ContractError("non-finite metric");
    } catch (const std::exception& e) {
      throw Error("sweep cell (" + std::to_string(ix) + ", " + std::to_string(iy) + ") at " +
                  spec.x_param + "=" + fmt12(xs[ix]) + ", " + spec.y_param + "=" + fmt12(ys[iy]) +
                  ": " + e.what());
    }
  });

  auto base_metadata = [&](const std::string& metric) {
    nlohmann::json model{{"name", to_string(spec.family)},
                         {"N", spec.num_sites},
                         {"boundary", to_string(spec.boundary)},
                         {"fixed", spec.fixed}};
    if (spec.family == ModelKind::ising) model["coupling_axis"] = axis_string(spec.coupling_axis);
    std::vector<std::pair<std::string, std::string>> m{
        {"metric", metric},
        {"model", model.dump()},
        {"qet_config", config_json(spec.config).dump()},
        {"boundary", to_string(spec.boundary)},
        {"x_param", spec.x_param},
        {"y_param", spec.y_param},
        {"resolution", std::to_string(spec.resolution)},
        {"code_version", QETLAB_VERSION},
    };
    return m;
  };

  std::vector<std::pair<std::size_t, std::size_t>> flagged;
  for (std::size_t i = 0; i < cells; ++i) {
    if (degenerate[i]) flagged.emplace_back(i % xs.size(), i / xs.size());
  }
  std::string flagged_text;
  for (auto [ix, iy] : flagged) {
    flagged_text += (flagged_text.empty() ? "" : ";") + std::to_string(ix) + ":" + std::to_string(iy);
  }

  std::vector<SweepGrid> out;
  auto emit = [&](const std::string& metric, std::vector<double> values) {
    SweepGrid g;
    g.metric = metric;
    g.x = xs;
    g.y = ys;
    g.values = std::move(values);
    g.metadata = base_metadata(metric);
    g.degenerate_cells = flagged;
    g.metadata.emplace_back("degenerate_cells", std::to_string(flagged.size()));
    if (!flagged.empty()) g.metadata.emplace_back("degenerate_cell_list", flagged_text);
    if (metric == "qet_energy") {
      g.metadata.emplace_back("max_analytic_deviation",
                              fmt12(*std::max_element(deviation.begin(), deviation.end())));
    }
    out.push_back(std::move(g));
  };
  if (want_entropy) emit("entropy", std::move(entropy));
  if (want_energy) emit("qet_energy", std::move(energy));
  return out;
}

std::string to_csv(const SweepGrid& grid) {
  std::ostringstream os;
  for (const auto& [k, v] : grid.metadata) os << "# " << k << "=" << v << "\n";
  os << "x,y,value\n";
  for (std::size_t iy = 0; iy < grid.y.size(); ++iy) {
    for (std::size_t ix = 0; ix < grid.x.size(); ++ix) {
      os << fmt12(grid.x[ix]) << ',' << fmt12(grid.y[iy]) << ',' << fmt12(grid.at(ix, iy)) << '\n';
    }
  }
  return os.str();
}

SweepGrid sweep_grid_from_csv(const std::string& text) {
  SweepGrid g;
  std::istringstream is(text);
  std::string line;
  std::vector<std::array<double, 3>> rows;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto body = line.substr(line.find_first_not_of("# "));
      const auto eq = body.find('=');
      if (eq == std::string::npos) continue;
      g.metadata.emplace_back(body.substr(0, eq), body.substr(eq + 1));
      continue;
    }
    if (!header_seen) {
      if (line != "x,y,value") throw ContractError("sweep CSV is missing the x,y,value header");
      header_seen = true;
      continue;
    }
    std::array<double, 3> r{};
    std::istringstream ls(line);
    std::string field;
    for (auto& v : r) {
      if (!std::getline(ls, field, ',')) throw ContractError("malformed sweep CSV row: " + line);
      v = std::stod(field);
    }
    rows.push_back(r);
  }
  for (const auto& r : rows) {
    if (r[1] != rows.front()[1]) break;
    g.x.push_back(r[0]);
  }
  if (g.x.empty() || rows.size() % g.x.size() != 0) throw ContractError("sweep CSV is not a full grid");
  for (std::size_t i = 0; i < rows.size(); i += g.x.size()) g.y.push_back(rows[i][1]);
  for (const auto& r : rows) g.values.push_back(r[2]);
  if (auto m = g.meta("metric")) g.metric = *m;
  return g;
}

std::size_t row_argmax(const SweepGrid& g, std::size_t iy, bool magnitude) {
  std::size_t best = 0;
  double best_v = -INFINITY;
  for (std::size_t ix = 0; ix < g.x.size(); ++ix) {
    const double v = magnitude ? std::abs(g.at(ix, iy)) : g.at(ix, iy);
    if (v > best_v) {
      best_v = v;
      best = ix;
    }
  }
  return best;
}

RidgeStats ridge_compare(const SweepGrid& a, const SweepGrid& b, std::size_t row_begin,
                         std::size_t row_end) {
  if (a.x.size() != b.x.size() || a.y.size() != b.y.size()) {
    throw ContractError("ridge comparison needs congruent grids");
  }
  row_end = std::min(row_end, a.y.size());
  RidgeStats s;
  std::vector<std::size_t> d;
  auto flat = [](const SweepGrid& g, std::size_t iy, bool mag) {
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t ix = 0; ix < g.x.size(); ++ix) {
      const double v = mag ? std::abs(g.at(ix, iy)) : g.at(ix, iy);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return hi - lo < 1e-9;
  };
  for (std::size_t iy = row_begin; iy < row_end; ++iy) {
    if (flat(a, iy, false) || flat(b, iy, true)) {
      s.distances.emplace_back(std::nullopt);
      ++s.skipped;
      continue;
    }
    const auto ia = row_argmax(a, iy, false), ib = row_argmax(b, iy, true);
    const std::size_t dist = ia > ib ? ia - ib : ib - ia;
    s.distances.emplace_back(dist);
    d.push_back(dist);
  }
  if (!d.empty()) {
    std::sort(d.begin(), d.end());
    const std::size_t m = d.size() / 2;
    s.median = d.size() % 2 ? static_cast<double>(d[m]) : 0.5 * static_cast<double>(d[m - 1] + d[m]);
    s.max = d.back();
  }
  return s;
}

}  // namespace qet
