#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "netgame/graph.hpp"
#include "netgame/solvers.hpp"

namespace netgame {

/// Seed of run `run_index` in a batch: element `run_index` of the SplitMix64
/// stream started at `master_seed`.
std::uint64_t derive_run_seed(std::uint64_t master_seed, std::uint64_t run_index);

/// Uniform integer in [0, bound) from a 64-bit Mersenne Twister by rejection.
/// Unlike std::uniform_int_distribution this is identical on every standard
/// library.
std::uint64_t draw_below(std::uint64_t bound, std::mt19937_64& rng);

/// One run of decentralized link formation: while some unlinked pair is
/// below target on both ends, link a uniformly chosen such pair.
Graph simulate_once(const DegreeSequence& d, std::uint64_t seed);

struct SimulationRun {
  std::uint64_t seed = 0;
  std::vector<int> degrees;
  long long poa = 0;  // total |eta_i - d_i| minus the closest-graph optimum

  friend bool operator==(const SimulationRun&, const SimulationRun&) = default;
};

struct SimulationBatch {
  std::vector<int> targets;
  std::uint64_t master_seed = 0;
  std::vector<SimulationRun> runs;
  long long best_objective = 0;
  bool best_optimal = true;

  friend bool operator==(const SimulationBatch&, const SimulationBatch&) = default;
};

struct SimulationOptions {
  unsigned threads = 0;  // 0 picks hardware concurrency
  SolverOptions solver;
};

/// Throws std::invalid_argument when runs == 0.
SimulationBatch simulate_batch(const DegreeSequence& d, std::size_t runs, std::uint64_t master_seed,
                               const SimulationOptions& options = {});

inline constexpr std::array<double, 8> kQuantileLevels = {0.0, 0.10, 0.25, 0.50,
                                                          0.75, 0.90, 0.95, 1.0};
inline constexpr std::array<const char*, 8> kQuantileNames = {"min", "p10", "p25", "median",
                                                              "p75", "p90", "p95", "max"};

struct QuantileRow {
  int key = 0;  // realized degree or target degree, depending on the table
  std::array<long long, 8> values{};

  friend bool operator==(const QuantileRow&, const QuantileRow&) = default;
};

struct BatchStatistics {
  /// For each degree value k: how many nodes end with degree k, across runs.
  std::vector<QuantileRow> degree_counts;
  /// Run PoA value -> number of runs.
  std::map<long long, std::size_t> poa_histogram;
  /// For each target degree k: per-run summed deficit of the players whose
  /// target is k.
  std::vector<QuantileRow> deficit_by_target;

  friend bool operator==(const BatchStatistics&, const BatchStatistics&) = default;
};

/// Nearest-rank quantile of a non-empty sample.
long long nearest_rank_quantile(std::vector<long long> sample, double level);

/// Throws std::invalid_argument on an empty batch.
BatchStatistics batch_statistics(const SimulationBatch& batch);

std::string degree_counts_csv(const BatchStatistics& stats);
std::string poa_histogram_csv(const BatchStatistics& stats);
std::string deficit_by_target_csv(const BatchStatistics& stats);

}  // namespace netgame
