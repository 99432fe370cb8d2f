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

#pragma once

// Coupling-plane sweeps producing entropy and teleported-energy heatmaps.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qetlab/models.hpp"
#include "qetlab/qet.hpp"

namespace qet {

enum class SweepMetric { entropy, qet_energy, both };

std::string to_string(SweepMetric m);
SweepMetric sweep_metric_from_string(const std::string& s);

struct SweepSpec {
  ModelKind family = ModelKind::ising;
  std::size_t num_sites = 6;
  /// Couplings held fixed; swept ones are overwritten per cell.
  std::map<std::string, double> fixed;
  Pauli coupling_axis = Pauli::X;  // ising only
  std::string x_param = "h_x";
  std::string y_param = "h_z";
  std::pair<double, double> x_range{0.0, 2.0};
  std::pair<double, double> y_range{0.0, 2.0};
  std::size_t resolution = 41;
  SweepMetric metric = SweepMetric::both;
  QETConfig config{1, 4, Pauli::Y, Pauli::X};
  Boundary boundary = kDefaultBoundary;
  unsigned threads = 1;
};

/// Throws ContractError for empty ranges, resolution < 2, unknown parameter
/// names, or an invalid QET configuration.
void validate(const SweepSpec& spec);

/// Per-family defaults: [0,2]^2 over the family's two couplings and the
/// Default Alice/Bob axes for each model family heatmap.
SweepSpec default_sweep_spec(ModelKind family, Pauli ising_axis = Pauli::X);

SweepSpec sweep_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SweepSpec& spec);

/// Model for one grid cell.
SpinChainModel build_sweep_model(const SweepSpec& spec, double x, double y);

struct SweepGrid {
  std::string metric;
  std::vector<double> x;
  std::vector<double> y;
  /// Row-major with y outer: values[iy * x.size() + ix].
  std::vector<double> values;
  /// Ordered `# key=value` metadata.
  std::vector<std::pair<std::string, std::string>> metadata;
  /// (ix, iy) of cells whose ground state was degenerate.
  std::vector<std::pair<std::size_t, std::size_t>> degenerate_cells;

  double at(std::size_t ix, std::size_t iy) const { return values[iy * x.size() + ix]; }
  std::optional<std::string> meta(const std::string& key) const;
};

/// One grid per requested metric (entropy first when both). The energy grid
/// holds the signed density-matrix teleported energy; its metadata records
/// the largest deviation from the closed form.
std::vector<SweepGrid> run_sweep(const SweepSpec& spec);

/// Commented header, an `x,y,value` line, then one row per cell with 12
/// significant digits.
std::string to_csv(const SweepGrid& grid);
SweepGrid sweep_grid_from_csv(const std::string& text);

struct RidgeStats {
  /// Per scan line (fixed y): |argmax_x a - argmax_x |b|| in cells; empty when skipped.
  std::vector<std::optional<std::size_t>> distances;
  std::size_t skipped = 0;
  double median = 0.0;
  std::size_t max = 0;
};

/// Compares the x-argmax of `a` with that of |b| on scan lines
/// [row_begin, row_end). Lines where either profile is flat (max - min
/// < 1e-9) are skipped and counted.
RidgeStats ridge_compare(const SweepGrid& a, const SweepGrid& b, std::size_t row_begin = 0,
                         std::size_t row_end = static_cast<std::size_t>(-1));

/// Index of the maximum of the given scan line of a grid (|.| if requested).
std::size_t row_argmax(const SweepGrid& g, std::size_t iy, bool magnitude);

}  // namespace qet
