#include "netgame/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace netgame {

namespace {

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Potential links kept as a dense array with a position index, so removal is
// O(1) and selection is a single bounded draw.
class PotentialLinks {
 public:
  explicit PotentialLinks(std::size_t n) : n_(n), pos_(n * n, kAbsent) {}

  void insert(std::size_t i, std::size_t j) {
    pos_[i * n_ + j] = pos_[j * n_ + i] = static_cast<std::uint32_t>(links_.size());
    links_.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
  }

  void erase(std::size_t i, std::size_t j) {
    const std::uint32_t p = pos_[i * n_ + j];
    if (p == kAbsent) return;
    const auto last = links_.back();
    links_[p] = last;
    pos_[last.first * n_ + last.second] = pos_[last.second * n_ + last.first] = p;
    links_.pop_back();
    pos_[i * n_ + j] = pos_[j * n_ + i] = kAbsent;
  }

  void erase_all_of(std::size_t v) {
    for (std::size_t k = 0; k < n_; ++k)
      if (k != v) erase(v, k);
  }

  std::size_t size() const { return links_.size(); }
  std::pair<std::size_t, std::size_t> at(std::size_t k) const { return links_[k]; }

 private:
  static constexpr std::uint32_t kAbsent = std::numeric_limits<std::uint32_t>::max();
  std::size_t n_;
  std::vector<std::uint32_t> pos_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> links_;
};

QuantileRow quantile_row(int key, const std::vector<long long>& sample) {
  QuantileRow row;
  row.key = key;
  for (std::size_t q = 0; q < kQuantileLevels.size(); ++q)
    row.values[q] = nearest_rank_quantile(sample, kQuantileLevels[q]);
  return row;
}

std::string quantile_csv(const char* key_name, const std::vector<QuantileRow>& rows) {
  std::ostringstream out;
  out << key_name;
  for (const char* name : kQuantileNames) out << ',' << name;
  out << '\n';
  for (const auto& row : rows) {
    out << row.key;
    for (long long v : row.values) out << ',' << v;
    out << '\n';
  }
  return out.str();
}

}  // namespace

std::uint64_t derive_run_seed(std::uint64_t master_seed, std::uint64_t run_index) {
  return splitmix64_mix(master_seed + kGoldenGamma * (run_index + 1));
}

std::uint64_t draw_below(std::uint64_t bound, std::mt19937_64& rng) {
  if (bound == 0) throw std::invalid_argument("draw_below: bound must be positive");
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = kMax - kMax % bound;
  for (;;) {
    const std::uint64_t x = rng();
    if (x < limit) return x % bound;
  }
}

Graph simulate_once(const DegreeSequence& d, std::uint64_t seed) {
  const std::size_t n = d.size();
  std::mt19937_64 rng(seed);
  std::vector<int> eta(n, 0);
  PotentialLinks potential(n);
  // zero-target players never have a potential link
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i] == 0) continue;
    for (std::size_t j = i + 1; j < n; ++j)
      if (d[j] > 0) potential.insert(i, j);
  }
  GraphBuilder x(n);
  while (potential.size() > 0) {
    const auto [i, j] = potential.at(draw_below(potential.size(), rng));
    x.add_edge(i, j);
    potential.erase(i, j);
    if (++eta[i] >= d[i]) potential.erase_all_of(i);
    if (++eta[j] >= d[j]) potential.erase_all_of(j);
  }
  return x.build();
}

SimulationBatch simulate_batch(const DegreeSequence& d, std::size_t runs, std::uint64_t master_seed,
                               const SimulationOptions& options) {
  if (runs == 0) throw std::invalid_argument("simulate_batch: runs must be at least 1");

  SimulationBatch batch;
  batch.targets = d.values();
  batch.master_seed = master_seed;
  const SolveResult best = best_graph_degree(d, options.solver);
  batch.best_objective = static_cast<long long>(best.objective);
  batch.best_optimal = best.optimal;
  batch.runs.resize(runs);

  auto run_one = [&](std::size_t r) {
    SimulationRun& run = batch.runs[r];
    run.seed = derive_run_seed(master_seed, r);
    const Graph g = simulate_once(d, run.seed);
    run.degrees = degree_sequence(g).values();
    run.poa = l1_distance(degree_sequence(g), d) - batch.best_objective;
  };

  unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(std::min<std::size_t>(runs, 64)));
  if (threads == 1) {
    for (std::size_t r = 0; r < runs; ++r) run_one(r);
    return batch;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t r = next++; r < runs; r = next++) run_one(r);
    });
  }
  pool.clear();
  return batch;
}

long long nearest_rank_quantile(std::vector<long long> sample, double level) {
  if (sample.empty()) throw std::invalid_argument("quantile of an empty sample");
  std::sort(sample.begin(), sample.end());
  if (level <= 0.0) return sample.front();
  const auto rank = static_cast<std::size_t>(std::ceil(level * static_cast<double>(sample.size()) - 1e-9));
  return sample[std::clamp<std::size_t>(rank, 1, sample.size()) - 1];
}

BatchStatistics batch_statistics(const SimulationBatch& batch) {
  if (batch.runs.empty()) throw std::invalid_argument("batch_statistics: batch has no runs");
  const std::size_t n = batch.targets.size();
  int max_degree = 0;
  for (int t : batch.targets) max_degree = std::max(max_degree, t);
  for (const auto& run : batch.runs)
    for (int v : run.degrees) max_degree = std::max(max_degree, v);

  BatchStatistics stats;
  for (int k = 0; k <= max_degree; ++k) {
    std::vector<long long> counts;
    counts.reserve(batch.runs.size());
    for (const auto& run : batch.runs)
      counts.push_back(std::count(run.degrees.begin(), run.degrees.end(), k));
    stats.degree_counts.push_back(quantile_row(k, counts));
  }

  for (const auto& run : batch.runs) ++stats.poa_histogram[run.poa];

  std::vector<int> target_values(batch.targets);
  std::sort(target_values.begin(), target_values.end());
  target_values.erase(std::unique(target_values.begin(), target_values.end()), target_values.end());
  for (int k : target_values) {
    std::vector<long long> per_run;
    per_run.reserve(batch.runs.size());
    for (const auto& run : batch.runs) {
      long long deficit = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (batch.targets[i] == k) deficit += std::abs(batch.targets[i] - run.degrees[i]);
      per_run.push_back(deficit);
    }
    stats.deficit_by_target.push_back(quantile_row(k, per_run));
  }
  return stats;
}

std::string degree_counts_csv(const BatchStatistics& stats) {
  return quantile_csv("degree", stats.degree_counts);
}

std::string poa_histogram_csv(const BatchStatistics& stats) {
  std::ostringstream out;
  out << "poa,count\n";
  for (const auto& [poa, count] : stats.poa_histogram) out << poa << ',' << count << '\n';
  return out.str();
}

std::string deficit_by_target_csv(const BatchStatistics& stats) {
  return quantile_csv("target_degree", stats.deficit_by_target);
}

}  // namespace netgame
