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

#include "qetlab/shot_sim.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "qetlab/errors.hpp"

namespace qet {

namespace {

OperatorSum pauli_op(std::size_t n, const PauliString& s) {
  return OperatorSum::single(n, PauliTerm(1.0, s));
}

// Born probability of the +1 eigenspace of a Pauli string.
double born_plus(const StateVector& state, const OperatorSum& observable) {
  const double ev = matrix_element(state, observable, state).real();
  return std::clamp(0.5 * (1.0 + ev), 0.0, 1.0);
}

StateVector collapse(const StateVector& state, const OperatorSum& observable, int mu, double p_plus) {
  const double p = mu == 1 ? p_plus : 1.0 - p_plus;
  StateVector out = 0.5 * (state + double(mu) * qet::apply(observable, state));
  return out / std::sqrt(p);
}

MeasurementSample measure(const StateVector& state, const OperatorSum& observable, Rng& rng) {
  const double p_plus = born_plus(state, observable);
  const int mu = rng.uniform() < p_plus ? 1 : -1;
  return {mu, collapse(state, observable, mu, p_plus)};
}

int fair_coin(Rng& rng) { return rng.uniform() < 0.5 ? 1 : -1; }

unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

template <typename F>
void parallel_for(std::size_t count, unsigned threads, F&& body) {
  threads = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

// Everything a shot needs that does not depend on the random draws: Alice's
// outcome probability and, per (mu, mu_applied) branch, the +1 probability
// of the readout on Bob's rotated state.
struct BranchTable {
  double p_alice_plus = 0.0;
  double p_readout_plus[2][2] = {};  // [mu == -1][mu_applied == -1]
};

BranchTable branch_table(const ProtocolRun& run, const OperatorSum& observable) {
  const std::size_t n = run.model.num_sites;
  const auto sa = pauli_op(n, run.config.sigma_a());
  BranchTable t;
  t.p_alice_plus = born_plus(run.ground.amplitudes, sa);
  for (int mu : {1, -1}) {
    const double p_mu = mu == 1 ? t.p_alice_plus : 1.0 - t.p_alice_plus;
    if (p_mu <= 0.0) continue;
    const StateVector post = collapse(run.ground.amplitudes, sa, mu, t.p_alice_plus);
    for (int applied : {1, -1}) {
      const auto u = conditional_unitary(run.theta, run.config.axis_b, run.config.n_b, applied, n);
      t.p_readout_plus[mu == -1][applied == -1] = born_plus(qet::apply(u, post), observable);
    }
  }
  return t;
}

std::uint64_t stream_index(std::size_t observable, std::uint64_t batch) {
  return (static_cast<std::uint64_t>(observable) << 32) | batch;
}

}  // namespace

ShotEstimate estimate_from_counts(std::uint64_t plus, std::uint64_t shots, std::string label) {
  if (shots == 0) throw ContractError("an estimate needs at least one shot");
  ShotEstimate e;
  e.shots = shots;
  e.observable = std::move(label);
  const double n = static_cast<double>(shots);
  e.mean = (2.0 * static_cast<double>(plus) - n) / n;
  if (shots > 1) {
    const double var = std::max(0.0, (1.0 - e.mean * e.mean) * n / (n - 1.0));
    e.std_error = std::sqrt(var / n);
  }
  return e;
}

MeasurementSample measure_pauli_sample(const StateVector& state, const PauliString& observable,
                                       Rng& rng) {
  const auto n = static_cast<std::size_t>(std::countr_zero(static_cast<std::uint64_t>(state.size())));
  if (std::abs(state.norm() - 1.0) > 1e-10) throw NormalizationError("state is not normalized");
  return measure(state, pauli_op(n, observable), rng);
}

MeasurementSample measure_pauli_sample(const StateVector& state, Pauli axis, std::size_t site,
                                       Rng& rng) {
  return measure_pauli_sample(state, PauliString::from_factors({{site, axis}}), rng);
}

ShotRecord run_protocol_once(const ProtocolRun& run, const PauliString& observable, Rng& rng) {
  const std::size_t n = run.model.num_sites;
  ShotRecord r;
  auto alice = measure(run.ground.amplitudes, pauli_op(n, run.config.sigma_a()), rng);
  r.mu = alice.mu;
  r.mu_applied = run.decorrelate_feedforward ? fair_coin(rng) : r.mu;
  const auto u = conditional_unitary(run.theta, run.config.axis_b, run.config.n_b, r.mu_applied, n);
  const StateVector bob = qet::apply(u, alice.collapsed);
  r.readout = measure(bob, pauli_op(n, observable), rng).mu;
  return r;
}

std::vector<ShotEstimate> sample_observables(const ProtocolRun& run) {
  if (run.shots == 0) throw ContractError("shots must be positive");
  validate(run.config, run.model.num_sites);
  const std::uint64_t batches = (run.shots + kShotBatch - 1) / kShotBatch;
  std::vector<ShotEstimate> out;
  for (std::size_t k = 0; k < run.observables.size(); ++k) {
    const BranchTable table = branch_table(run, pauli_op(run.model.num_sites, run.observables[k]));
    std::vector<std::uint64_t> plus(batches, 0);
    parallel_for(batches, run.threads, [&](std::size_t b) {
      auto rng = Rng::substream(run.seed, stream_index(k, b));
      const std::uint64_t count = std::min(kShotBatch, run.shots - b * kShotBatch);
      std::uint64_t local = 0;
      for (std::uint64_t s = 0; s < count; ++s) {
        const int mu = rng.uniform() < table.p_alice_plus ? 1 : -1;
        const int applied = run.decorrelate_feedforward ? fair_coin(rng) : mu;
        local += rng.uniform() < table.p_readout_plus[mu == -1][applied == -1];
      }
      plus[b] = local;
    });
    std::uint64_t total = 0;
    for (auto p : plus) total += p;
    out.push_back(estimate_from_counts(total, run.shots, run.observables[k].label()));
  }
  return out;
}

ShotEstimate sample_observable_reference(const ProtocolRun& run, std::size_t observable_index) {
  const auto& obs = run.observables.at(observable_index);
  const std::uint64_t batches = (run.shots + kShotBatch - 1) / kShotBatch;
  std::uint64_t plus = 0;
  for (std::uint64_t b = 0; b < batches; ++b) {
    auto rng = Rng::substream(run.seed, stream_index(observable_index, b));
    const std::uint64_t count = std::min(kShotBatch, run.shots - b * kShotBatch);
    for (std::uint64_t s = 0; s < count; ++s) plus += run_protocol_once(run, obs, rng).readout == 1;
  }
  return estimate_from_counts(plus, run.shots, obs.label());
}

BobEnergyEstimate estimate_bob_energy(const ProtocolRun& run) {
  if (!run.model.calibrated()) throw ContractError("Bob's energy needs a calibrated model");
  const auto local = local_bulk_hamiltonian(run.model, run.config.n_b);
  if (!local.is_hermitian()) throw AlgebraError("local Hamiltonian is not Hermitian");

  ProtocolRun sampled = run;
  sampled.observables.clear();
  BobEnergyEstimate out;
  for (const auto& t : local.terms()) {
    sampled.observables.push_back(t.string);
    out.term_coefficients.push_back(t.coefficient.real());
  }
  const auto y = PauliString::from_factors({{run.config.n_b, Pauli::Y}});
  const bool y_in_terms = local.coefficient_of(y) != cplx(0.0);
  if (!y_in_terms) sampled.observables.push_back(y);

  auto estimates = sample_observables(sampled);
  if (!y_in_terms) {
    out.bob_y = estimates.back();
    estimates.pop_back();
  }
  out.terms = std::move(estimates);

  double mean = (*run.model.epsilon)[run.config.n_b];
  double var = 0.0;
  for (std::size_t i = 0; i < out.terms.size(); ++i) {
    const double c = out.term_coefficients[i];
    mean += c * out.terms[i].mean;
    var += c * c * out.terms[i].std_error * out.terms[i].std_error;
    if (y_in_terms && out.terms[i].observable == y.label()) out.bob_y = out.terms[i];
  }
  out.energy.mean = mean;
  out.energy.std_error = std::sqrt(var);
  out.energy.shots = run.shots;
  out.energy.observable = "H_" + std::to_string(run.config.n_b);
  if (run.shots < 1000) out.warnings.push_back("fewer than 1000 shots: error bars unreliable");
  return out;
}

ProtocolRun make_protocol_run(const SpinChainModel& model, const GroundState& ground,
                              const QETConfig& config, std::uint64_t shots, std::uint64_t seed) {
  if (!model.calibrated()) throw ContractError("protocol runs need a calibrated model");
  ProtocolRun run;
  run.model = model;
  run.ground = ground;
  run.config = config;
  const double x = xi(ground, model, config);
  run.theta = theta(x, eta(ground, model, config).value);
  run.shots = shots;
  run.seed = seed;
  return run;
}

std::string shot_csv_header() { return "observable,mean,std_error,shots,seed,J1,J2,model"; }

std::string to_csv_row(const ShotEstimate& e, const ProtocolRun& run) {
  auto c = [&](const char* k) {
    auto it = run.model.couplings.find(k);
    return it == run.model.couplings.end() ? 0.0 : it->second;
  };
  char buf[512];
  std::snprintf(buf, sizeof buf, "%s,%.12g,%.12g,%llu,%llu,%.12g,%.12g,%s", e.observable.c_str(),
                e.mean, e.std_error, static_cast<unsigned long long>(e.shots),
                static_cast<unsigned long long>(run.seed), c("J1"), c("J2"),
                to_string(run.model.kind).c_str());
  return buf;
}

Table1Column table1_column(double j1, std::uint64_t shots, std::uint64_t seed, unsigned threads) {
  constexpr std::size_t kSites = 6, kAlice = 1, kBob = 4;
  const auto prepared = prepare(build_cluster(kSites, j1, 0.0, true, Boundary::open));
  const QETConfig config{kAlice, kBob, Pauli::X, Pauli::Y};
  auto run = make_protocol_run(prepared.model, prepared.ground, config, shots, seed);
  run.threads = threads;
  const auto est = estimate_bob_energy(run);

  auto find = [&](std::vector<std::pair<std::size_t, Pauli>> f) {
    const auto label = PauliString::from_factors(f).label();
    for (const auto& t : est.terms) {
      if (t.observable == label) return t;
    }
    throw ContractError("observable " + label + " missing from Bob's local Hamiltonian");
  };
  Table1Column col;
  col.j1 = j1;
  col.xx_left = find({{kBob - 1, Pauli::X}, {kBob, Pauli::X}});
  col.xx_right = find({{kBob, Pauli::X}, {kBob + 1, Pauli::X}});
  col.zz_left = find({{kBob - 1, Pauli::Z}, {kBob, Pauli::Z}});
  col.zz_right = find({{kBob, Pauli::Z}, {kBob + 1, Pauli::Z}});
  col.z = find({{kBob, Pauli::Z}});
  col.h_sampled = est.energy;
  const auto r = run_qet(prepared.model, prepared.ground, config);
  col.h_exact = r.e_analytic;
  col.epsilon = (*prepared.model.epsilon)[kBob];
  col.theta = r.theta;
  return col;
}

std::vector<Table1Column> reproduce_table1(std::uint64_t shots, std::uint64_t seed, unsigned threads) {
  std::vector<Table1Column> cols;
  for (double j1 : kTable1Couplings) cols.push_back(table1_column(j1, shots, seed, threads));
  return cols;
}

std::string table1_csv(const std::vector<Table1Column>& cols, std::uint64_t seed) {
  std::ostringstream os;
  os << "# model=cluster_zz\n# N=6\n# J2=0\n# n_A=1\n# n_B=4\n# axis_A=X\n# axis_B=Y\n"
     << "# boundary=open\n# seed=" << seed << "\n";
  if (!cols.empty()) os << "# shots_per_observable=" << cols.front().h_sampled.shots << "\n";
  os << "quantity";
  char buf[128];
  for (const auto& c : cols) {
    std::snprintf(buf, sizeof buf, ",J1=%.1f", c.j1);
    os << buf;
  }
  os << "\n";
  auto sampled_row = [&](const char* name, auto member) {
    os << name;
    for (const auto& c : cols) {
      const ShotEstimate& e = c.*member;
      std::snprintf(buf, sizeof buf, ",%.4f+-%.4f", e.mean, e.std_error);
      os << buf;
    }
    os << "\n";
  };
  auto exact_row = [&](const char* name, auto member) {
    os << name;
    for (const auto& c : cols) {
      std::snprintf(buf, sizeof buf, ",%.4f", c.*member);
      os << buf;
    }
    os << "\n";
  };
  sampled_row("<X_{nB-1}X_{nB}>", &Table1Column::xx_left);
  sampled_row("<X_{nB}X_{nB+1}>", &Table1Column::xx_right);
  sampled_row("<Z_{nB-1}Z_{nB}>", &Table1Column::zz_left);
  sampled_row("<Z_{nB}Z_{nB+1}>", &Table1Column::zz_right);
  sampled_row("<Z_{nB}>", &Table1Column::z);
  sampled_row("<H_{nB}>", &Table1Column::h_sampled);
  exact_row("<H_{nB}>_exact", &Table1Column::h_exact);
  exact_row("epsilon_{nB}", &Table1Column::epsilon);
  exact_row("theta", &Table1Column::theta);
  return os.str();
}

}  // namespace qet
