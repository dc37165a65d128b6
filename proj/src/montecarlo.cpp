#include "qsd/montecarlo.hpp"

#include <cmath>
#include <future>
#include <numeric>

#include "qsd/min_error.hpp"
#include "qsd/multiport.hpp"
#include "qsd/unambiguous.hpp"

namespace qsd {

const char* to_string(Protocol p) {
  switch (p) {
    case Protocol::kMinError: return "min_error";
    case Protocol::kUdTpa: return "ud_tpa";
    case Protocol::kUdSfg: return "ud_sfg";
    case Protocol::kSfgRecovery: return "sfg_recovery";
  }
  return "unknown";
}

bool TrialReport::within(const std::string& rate, double n_sigma) const {
  const double diff = std::abs(empirical.at(rate) - analytic.at(rate));
  return diff <= n_sigma * standard_error.at(rate);
}

int TrialRng::categorical(std::span<const double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  const double u = uniform() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(weights.size()) - 1;
}

namespace {

using Tally = std::map<std::string, std::uint64_t>;

// Per-state branch data: the conclusive probability and readout distribution,
// and the readout distribution of the inconclusive branch.
struct BranchTable {
  std::vector<double> conclusive;
  std::vector<std::vector<double>> conclusive_readout;
  std::vector<std::vector<double>> inconclusive_readout;
};

// `trial` returns an index into `outcomes`.
template <typename TrialFn>
Tally run_sharded(std::uint64_t trials, std::uint64_t seed, int shards,
                  const std::vector<std::string>& outcomes, TrialFn trial) {
  if (trials < 1) throw Error(ErrorCode::kInvalidArgument, "trials must be >= 1");
  if (shards < 1) throw Error(ErrorCode::kInvalidArgument, "shards must be >= 1");
  const auto n_shards = static_cast<std::uint64_t>(shards);
  auto run_shard = [&](std::uint64_t s) {
    const std::uint64_t n = trials / n_shards + (s < trials % n_shards ? 1 : 0);
    TrialRng rng(seed, s);
    std::vector<std::uint64_t> hits(outcomes.size(), 0);
    for (std::uint64_t t = 0; t < n; ++t) ++hits[static_cast<std::size_t>(trial(rng))];
    Tally tally;
    for (std::size_t i = 0; i < outcomes.size(); ++i) tally[outcomes[i]] = hits[i];
    return tally;
  };
  Tally merged;
  if (shards == 1) {
    merged = run_shard(0);
  } else {
    std::vector<std::future<Tally>> futures;
    for (std::uint64_t s = 0; s < n_shards; ++s) {
      futures.push_back(std::async(std::launch::async, run_shard, s));
    }
    for (auto& f : futures) {
      for (const auto& [key, count] : f.get()) merged[key] += count;
    }
  }
  return merged;
}

void add_rate(TrialReport& report, const std::string& name, std::uint64_t hits, double analytic) {
  const double p = static_cast<double>(hits) / static_cast<double>(report.trials);
  report.empirical[name] = p;
  report.analytic[name] = analytic;
  report.standard_error[name] = std::sqrt(p * (1.0 - p) / static_cast<double>(report.trials));
}

std::uint64_t count_of(const Tally& tally, const std::string& key) {
  auto it = tally.find(key);
  return it == tally.end() ? 0 : it->second;
}

TrialReport make_report(Protocol protocol, std::uint64_t trials, std::uint64_t seed, int shards,
                        Tally counts) {
  TrialReport r;
  r.protocol = protocol;
  r.trials = trials;
  r.seed = seed;
  r.shards = shards;
  r.counts = std::move(counts);
  return r;
}

// Canonical basis and labels for a family: the two-photon basis for M = 2,
// |1,0>,|0,1> for M = 1, a single mode with 0..M photons otherwise.
std::pair<BasisPtr, std::vector<std::size_t>> canonical_basis(const SymmetricFamily& family) {
  if (family.M() == 2) {
    auto b = build_basis(2, 2);
    return {b, two_photon_labels(*b)};
  }
  if (family.M() == 1) {
    auto b = build_basis(2, 1);
    return {b, single_photon_labels(*b)};
  }
  auto b = build_basis(1, family.M());
  std::vector<std::size_t> labels(static_cast<std::size_t>(family.M() + 1));
  std::iota(labels.begin(), labels.end(), std::size_t{0});
  return {b, labels};
}

BranchTable unambiguous_table(const SymmetricFamily& family, Mechanism mechanism) {
  BranchTable t;
  std::vector<StateVector> states;
  if (mechanism == Mechanism::kTpa) {
    auto tpa = orthogonalize_tpa(family);
    t.conclusive = tpa.success;
    states = std::move(tpa.states);
  } else {
    auto sfg = orthogonalize_sfg(family);
    for (double p : sfg.inconclusive_probability) t.conclusive.push_back(1.0 - p);
    states = std::move(sfg.conclusive);
  }
  for (const auto& s : states) t.conclusive_readout.push_back(projective_discriminate(states, s));
  return t;
}

}  // namespace

TrialReport run_min_error(const SymmetricFamily& family, std::uint64_t trials, std::uint64_t seed,
                          int shards) {
  const auto [basis, labels] = canonical_basis(family);
  const auto states = family_states(family, basis, labels);
  const DetectionSet detection = srm_states_closed(family, basis, labels);
  std::vector<std::vector<double>> table;
  for (const auto& psi : states) table.push_back(outcome_distribution(detection, psi));

  const int n = family.N();
  auto counts = run_sharded(trials, seed, shards, {"correct", "wrong"}, [&](TrialRng& rng) {
    const int k = rng.index(n);
    const int j = rng.categorical(table[static_cast<std::size_t>(k)]);
    return j == k ? 0 : 1;
  });
  TrialReport r = make_report(Protocol::kMinError, trials, seed, shards, std::move(counts));
  add_rate(r, "P_C", count_of(r.counts, "correct"), success_probability_analytic(family));
  return r;
}

TrialReport run_unambiguous(const SymmetricFamily& family, Mechanism mechanism,
                            std::uint64_t trials, std::uint64_t seed, int shards) {
  const BranchTable t = unambiguous_table(family, mechanism);
  const std::vector<std::string> outcomes{"conclusive_correct", "conclusive_wrong",
                                          "inconclusive"};
  auto counts = run_sharded(trials, seed, shards, outcomes, [&](TrialRng& rng) {
    const int k = rng.index(3);
    const auto ki = static_cast<std::size_t>(k);
    if (!rng.bernoulli(t.conclusive[ki])) return 2;
    const int j = rng.categorical(t.conclusive_readout[ki]);
    return j == k ? 0 : 1;
  });
  const Protocol protocol = mechanism == Mechanism::kTpa ? Protocol::kUdTpa : Protocol::kUdSfg;
  TrialReport r = make_report(protocol, trials, seed, shards, std::move(counts));
  const double pd = success_probability_ud(family);
  add_rate(r, "conclusive", r.counts["conclusive_correct"] + r.counts["conclusive_wrong"], pd);
  add_rate(r, "inconclusive", r.counts["inconclusive"], 1.0 - pd);
  return r;
}

TrialReport run_sfg_recovery_pipeline(const SymmetricFamily& family, std::uint64_t trials,
                                      std::uint64_t seed, int shards) {
  BranchTable t = unambiguous_table(family, Mechanism::kSfg);
  const RecoveredFamily recovered = inconclusive_family(family);
  double p_recovery = 1.0 / 3.0;
  if (recovered.uninformative()) {
    t.inconclusive_readout.assign(3, std::vector<double>(3, 1.0 / 3.0));
  } else {
    const auto multiport = min_error_single_photon(*recovered.family);
    for (int k = 0; k < 3; ++k) {
      std::vector<double> row(3);
      for (int j = 0; j < 3; ++j) row[static_cast<std::size_t>(j)] = multiport.table(k, j);
      t.inconclusive_readout.push_back(std::move(row));
    }
    p_recovery = success_probability_analytic(*recovered.family);
  }

  const std::vector<std::string> outcomes{"conclusive_correct", "conclusive_wrong",
                                          "inconclusive_correct", "inconclusive_wrong"};
  auto counts = run_sharded(trials, seed, shards, outcomes, [&](TrialRng& rng) {
    const int k = rng.index(3);
    const auto ki = static_cast<std::size_t>(k);
    if (rng.bernoulli(t.conclusive[ki])) {
      const int j = rng.categorical(t.conclusive_readout[ki]);
      return j == k ? 0 : 1;
    }
    const int j = rng.categorical(t.inconclusive_readout[ki]);
    return j == k ? 2 : 3;
  });
  TrialReport r = make_report(Protocol::kSfgRecovery, trials, seed, shards, std::move(counts));
  const double pd = success_probability_ud(family);
  add_rate(r, "conclusive", r.counts["conclusive_correct"] + r.counts["conclusive_wrong"], pd);
  add_rate(r, "overall_correct", r.counts["conclusive_correct"] + r.counts["inconclusive_correct"],
           pd + (1.0 - pd) * p_recovery);
  r.analytic["recovered_P_C"] = p_recovery;
  r.notes.push_back(recovered.uninformative()
                        ? "inconclusive branch uninformative: uniform random guess (rate 1/3)"
                        : "inconclusive branch read out on the recovered single-photon multiport");
  return r;
}

}  // namespace qsd
