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

#include "qetlab/models.hpp"

#include <bit>
#include <cmath>

#include "qetlab/errors.hpp"

namespace qet {

namespace {

using Factors = std::vector<std::pair<std::size_t, Pauli>>;

void require_chain_length(std::size_t n) {
  if (n < 3) throw ContractError("spin chains need at least 3 sites");
}

// Visits every nearest-neighbour bond (n, n+1).
template <typename F>
void for_each_bond(std::size_t n, Boundary b, F&& f) {
  const std::size_t last = b == Boundary::periodic ? n : n - 1;
  for (std::size_t i = 0; i < last; ++i) f(i, (i + 1) % n);
}

// Visits every three-site window (n-1, n, n+1) by its centre.
template <typename F>
void for_each_triple(std::size_t n, Boundary b, F&& f) {
  if (b == Boundary::periodic) {
    for (std::size_t i = 0; i < n; ++i) f((i + n - 1) % n, i, (i + 1) % n);
  } else {
    for (std::size_t i = 1; i + 1 < n; ++i) f(i - 1, i, i + 1);
  }
}

SpinChainModel make_model(ModelKind kind, std::size_t n, Boundary boundary,
                          std::map<std::string, double> couplings, std::vector<PauliTerm> terms) {
  SpinChainModel m;
  m.kind = kind;
  m.num_sites = n;
  m.boundary = boundary;
  m.couplings = std::move(couplings);
  m.bulk_terms = OperatorSum(n, std::move(terms));
  return m;
}

}  // namespace

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::ising:
      return "ising";
    case ModelKind::cluster:
      return "cluster";
    case ModelKind::cluster_zz:
      return "cluster_zz";
    case ModelKind::y_cluster:
      return "y_cluster";
    case ModelKind::jw_mapped:
      return "jw_mapped";
  }
  return "?";
}

std::string to_string(Boundary b) { return b == Boundary::periodic ? "periodic" : "open"; }

std::string to_string(FermionKind k) { return k == FermionKind::ssh ? "ssh" : "kitaev"; }

ModelKind model_kind_from_string(const std::string& s) {
  for (auto k : {ModelKind::ising, ModelKind::cluster, ModelKind::cluster_zz, ModelKind::y_cluster,
                 ModelKind::jw_mapped}) {
    if (to_string(k) == s) return k;
  }
  throw ContractError("unknown model '" + s + "'");
}

Boundary boundary_from_string(const std::string& s) {
  if (s == "periodic") return Boundary::periodic;
  if (s == "open") return Boundary::open;
  throw ContractError("unknown boundary '" + s + "'");
}

FermionKind fermion_kind_from_string(const std::string& s) {
  if (s == "ssh") return FermionKind::ssh;
  if (s == "kitaev") return FermionKind::kitaev;
  throw ContractError("unknown fermion chain '" + s + "'");
}

double SpinChainModel::coupling(const std::string& name) const {
  auto it = couplings.find(name);
  if (it == couplings.end()) throw ContractError("model has no coupling '" + name + "'");
  return it->second;
}

OperatorSum SpinChainModel::shifted_hamiltonian() const {
  if (!e0_shift) throw ContractError("model has no global energy shift; calibrate it first");
  return bulk_terms - OperatorSum::identity(num_sites, *e0_shift);
}

SpinChainModel build_ising(std::size_t n, double h_x, double h_z, Pauli coupling_axis,
                           Boundary boundary) {
  require_chain_length(n);
  std::vector<PauliTerm> terms;
  for_each_bond(n, boundary, [&](std::size_t a, std::size_t b) {
    terms.emplace_back(-1.0, Factors{{a, coupling_axis}, {b, coupling_axis}});
  });
  for (std::size_t i = 0; i < n; ++i) {
    terms.emplace_back(-h_x, Factors{{i, Pauli::X}});
    terms.emplace_back(-h_z, Factors{{i, Pauli::Z}});
  }
  auto m = make_model(ModelKind::ising, n, boundary, {{"h_x", h_x}, {"h_z", h_z}}, std::move(terms));
  m.coupling_axis = coupling_axis;
  return m;
}

SpinChainModel build_cluster(std::size_t n, double j1, double j2, bool with_zz, Boundary boundary) {
  require_chain_length(n);
  std::vector<PauliTerm> terms;
  for (std::size_t i = 0; i < n; ++i) terms.emplace_back(1.0, Factors{{i, Pauli::Z}});
  for_each_bond(n, boundary, [&](std::size_t a, std::size_t b) {
    terms.emplace_back(-j1, Factors{{a, Pauli::X}, {b, Pauli::X}});
    if (with_zz) terms.emplace_back(0.5, Factors{{a, Pauli::Z}, {b, Pauli::Z}});
  });
  for_each_triple(n, boundary, [&](std::size_t l, std::size_t c, std::size_t r) {
    terms.emplace_back(-j2, Factors{{l, Pauli::X}, {c, Pauli::Z}, {r, Pauli::X}});
  });
  return make_model(with_zz ? ModelKind::cluster_zz : ModelKind::cluster, n, boundary,
                    {{"J1", j1}, {"J2", j2}}, std::move(terms));
}

SpinChainModel build_y_cluster(std::size_t n, double h_y, double j_y, Boundary boundary) {
  require_chain_length(n);
  std::vector<PauliTerm> terms;
  for (std::size_t i = 0; i < n; ++i) terms.emplace_back(h_y, Factors{{i, Pauli::Y}});
  for_each_bond(n, boundary, [&](std::size_t a, std::size_t b) {
    terms.emplace_back(-j_y, Factors{{a, Pauli::Y}, {b, Pauli::Y}});
  });
  for_each_triple(n, boundary, [&](std::size_t l, std::size_t c, std::size_t r) {
    terms.emplace_back(-1.0, Factors{{l, Pauli::X}, {c, Pauli::Z}, {r, Pauli::X}});
  });
  return make_model(ModelKind::y_cluster, n, boundary, {{"h_y", h_y}, {"J_y", j_y}},
                    std::move(terms));
}

OperatorSum jw_annihilation(std::size_t num_sites, std::size_t site) {
  std::vector<std::pair<std::size_t, Pauli>> string;
  for (std::size_t m = 0; m < site; ++m) string.emplace_back(m, Pauli::Z);
  auto with = [&](Pauli p) {
    auto f = string;
    f.emplace_back(site, p);
    return f;
  };
  return OperatorSum(num_sites, {PauliTerm(0.5, with(Pauli::X)), PauliTerm(cplx(0, 0.5), with(Pauli::Y))});
}

SpinChainModel jordan_wigner(const FermionChainSpec& spec) {
  if (spec.boundary == Boundary::periodic) {
    throw UnsupportedError("Jordan-Wigner mapping of periodic chains is not supported");
  }
  const std::size_t n = spec.num_sites();
  if (spec.size < 2 || !std::isfinite(spec.lambda)) {
    throw ContractError("fermion chain needs size >= 2 and a finite coupling");
  }
  std::vector<OperatorSum> c, cd;
  for (std::size_t i = 0; i < n; ++i) {
    c.push_back(jw_annihilation(n, i));
    cd.push_back(c.back().adjoint());
  }
  OperatorSum h(n);
  auto add_with_hc = [&](const OperatorSum& t) { h += t + t.adjoint(); };
  const double lam = spec.lambda;
  if (spec.kind == FermionKind::kitaev) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      add_with_hc(cd[i] * c[i + 1] + lam * (cd[i] * cd[i + 1]));
    }
  } else {
    // Cell k holds sublattice A at 2k and B at 2k+1.
    for (std::size_t k = 0; k < spec.size; ++k) {
      add_with_hc(2.0 * (1.0 - lam) * (cd[2 * k] * c[2 * k + 1]));
      if (k + 1 < spec.size) add_with_hc(2.0 * lam * (cd[2 * k + 2] * c[2 * k + 1]));
    }
  }
  SpinChainModel m;
  m.kind = ModelKind::jw_mapped;
  m.num_sites = n;
  m.boundary = Boundary::open;
  m.couplings = {{"lambda", lam}};
  m.bulk_terms = std::move(h);
  m.fermion = spec;
  return m;
}

OperatorSum local_bulk_hamiltonian(const SpinChainModel& model, std::size_t n) {
  if (n >= model.num_sites) {
    throw ContractError("site " + std::to_string(n) + " outside chain of " +
                        std::to_string(model.num_sites));
  }
  const std::uint64_t bit = std::uint64_t{1} << n;
  std::vector<PauliTerm> terms;
  for (const auto& t : model.bulk_terms.terms()) {
    if (t.string.support() & bit) terms.push_back(t);
  }
  return OperatorSum(model.num_sites, std::move(terms));
}

OperatorSum local_hamiltonian(const SpinChainModel& model, std::size_t n) {
  auto h = local_bulk_hamiltonian(model, n);
  if (model.epsilon) h += OperatorSum::identity(model.num_sites, (*model.epsilon)[n]);
  return h;
}

SpinChainModel calibrate(const SpinChainModel& model, const GroundState& ground) {
  if (ground.num_qubits() != model.num_sites) {
    throw DimensionError("ground state does not match the model size");
  }
  SpinChainModel out = model;
  std::vector<double> eps(model.num_sites);
  for (std::size_t n = 0; n < model.num_sites; ++n) {
    eps[n] = -expectation(ground.amplitudes, local_bulk_hamiltonian(model, n)).real();
  }
  out.epsilon = std::move(eps);
  out.e0_shift = ground.energy;
  out.degenerate_ground = ground.degenerate;
  return out;
}

CommutatorCheck check_commutator_condition(const OperatorSum& hamiltonian,
                                           const OperatorSum& local, const PauliString& sigma) {
  const OperatorSum s = OperatorSum::single(hamiltonian.num_qubits(), PauliTerm(1.0, sigma));
  CommutatorCheck out;
  out.residual = commutator(hamiltonian, s) - commutator(local, s);
  out.holds = out.residual.empty();
  return out;
}

CommutatorCheck check_commutator_condition(const SpinChainModel& model, std::size_t n_b,
                                           Pauli axis_b) {
  return check_commutator_condition(model.bulk_terms, local_hamiltonian(model, n_b),
                                    PauliString::from_factors({{n_b, axis_b}}));
}

nlohmann::json to_json(const SpinChainModel& model) {
  nlohmann::json j;
  j["name"] = to_string(model.kind);
  j["N"] = model.num_sites;
  j["couplings"] = model.couplings;
  j["boundary"] = to_string(model.boundary);
  if (model.coupling_axis) j["coupling_axis"] = std::string(1, to_char(*model.coupling_axis));
  if (model.fermion) {
    j["fermion"] = {{"kind", to_string(model.fermion->kind)}, {"size", model.fermion->size}};
  }
  j["epsilon"] = model.epsilon ? nlohmann::json(*model.epsilon) : nlohmann::json::array();
  j["e0_shift"] = model.e0_shift ? nlohmann::json(*model.e0_shift) : nlohmann::json(nullptr);
  return j;
}

SpinChainModel model_from_json(const nlohmann::json& j) {
  const auto kind = model_kind_from_string(j.at("name").get<std::string>());
  const auto n = j.at("N").get<std::size_t>();
  const auto boundary = boundary_from_string(j.value("boundary", to_string(kDefaultBoundary)));
  const auto& c = j.at("couplings");
  auto get = [&](const char* key) { return c.value(key, 0.0); };

  SpinChainModel m;
  switch (kind) {
    case ModelKind::ising:
      m = build_ising(n, get("h_x"), get("h_z"),
                      pauli_from_char(j.value("coupling_axis", std::string("X")).at(0)), boundary);
      break;
    case ModelKind::cluster:
    case ModelKind::cluster_zz:
      m = build_cluster(n, get("J1"), get("J2"), kind == ModelKind::cluster_zz, boundary);
      break;
    case ModelKind::y_cluster:
      m = build_y_cluster(n, get("h_y"), get("J_y"), boundary);
      break;
    case ModelKind::jw_mapped: {
      const auto& f = j.at("fermion");
      FermionChainSpec spec{fermion_kind_from_string(f.at("kind").get<std::string>()),
                            f.at("size").get<std::size_t>(), get("lambda"), boundary};
      m = jordan_wigner(spec);
      if (m.num_sites != n) throw ContractError("fermion chain size does not match N");
      break;
    }
  }
  if (j.contains("epsilon") && !j["epsilon"].empty()) {
    auto eps = j["epsilon"].get<std::vector<double>>();
    if (eps.size() != n) throw ContractError("epsilon has wrong length");
    m.epsilon = std::move(eps);
  }
  if (j.contains("e0_shift") && !j["e0_shift"].is_null()) m.e0_shift = j["e0_shift"].get<double>();
  return m;
}

}  // namespace qet
