#pragma once

// Seeded trajectory sampling of the discrimination protocols.
//
// Every trial draws the true state k uniformly, then walks the protocol's
// branch tree using exact branch probabilities from the state modules.
// Trials are split into shards; shard s draws from std::mt19937_64 seeded
// with (seed XOR s). A report is a pure function of (protocol, family,
// trials, seed, shards).

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qsd/physical_models.hpp"
#include "qsd/symmetric_states.hpp"

namespace qsd {

enum class Protocol { kMinError, kUdTpa, kUdSfg, kSfgRecovery };

const char* to_string(Protocol p);

struct TrialReport {
  Protocol protocol = Protocol::kMinError;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  int shards = 1;
  std::map<std::string, std::uint64_t> counts;
  std::map<std::string, double> empirical;
  std::map<std::string, double> analytic;
  std::map<std::string, double> standard_error;
  std::vector<std::string> notes;

  /// |empirical - analytic| <= n_sigma * standard_error for `rate`.
  bool within(const std::string& rate, double n_sigma) const;
};

class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t shard) : engine_(seed ^ shard) {}

  /// Uniform in the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }
  /// Uniform integer in [0, n).
  int index(int n) {
    const int i = static_cast<int>(uniform() * n);
    return i < n ? i : n - 1;
  }
  bool bernoulli(double p) { return uniform() < p; }
  /// Draws an index from (possibly unnormalized) weights.
  int categorical(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
};

TrialReport run_min_error(const SymmetricFamily& family, std::uint64_t trials, std::uint64_t seed,
                          int shards = 1);

TrialReport run_unambiguous(const SymmetricFamily& family, Mechanism mechanism,
                            std::uint64_t trials, std::uint64_t seed, int shards = 1);

/// SFG orthogonalization; inconclusive results are read out on the multiport
/// matched to the recovered single-photon family, or guessed uniformly when
/// that family is uninformative.
TrialReport run_sfg_recovery_pipeline(const SymmetricFamily& family, std::uint64_t trials,
                                      std::uint64_t seed, int shards = 1);

}  // namespace qsd
