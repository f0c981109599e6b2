#include "mofn/learner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "mofn/engine.hpp"
#include "mofn/random.hpp"

namespace mofn {

int fit_decrement(const Theory& theory, const ExampleSet& train, int i_max) {
  if (train.empty()) throw std::invalid_argument("cannot fit on an empty training set");
  if (i_max < 0) throw std::invalid_argument("i_max must be non-negative");

  CompiledTheory compiled(theory);
  int best_i = 0;
  std::size_t best_correct = 0;
  for (int i = 0; i <= i_max; ++i) {
    auto th = compiled.thresholds(decrement_profile(theory, i));
    std::size_t correct = confusion(compiled, th, train).correct();
    if (i == 0 || correct > best_correct) {
      best_i = i;
      best_correct = correct;
    }
  }
  return best_i;
}

TrialResult run_trial(const Theory& theory, const ExampleSet& set,
                      std::size_t train_size, std::size_t test_size,
                      std::uint64_t seed, int i_max, SplitMode mode) {
  if (test_size == 0) throw std::invalid_argument("test set is empty");
  auto [train, test] = split(set, train_size, test_size, seed, mode);
  int i = fit_decrement(theory, train, i_max);
  double acc = accuracy(confusion(theory, decrement_profile(theory, i), test));
  return {seed, i, acc};
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial) {
  return splitmix64(base_seed + static_cast<std::uint64_t>(trial) * 0x9E3779B97F4A7C15ULL);
}

TrialReport run_trials(const Theory& theory, const ExampleSet& set,
                       std::size_t train_size, std::size_t test_size,
                       std::size_t trials, std::uint64_t base_seed,
                       const TrialOptions& options) {
  if (trials == 0) throw std::invalid_argument("trials must be at least 1");
  if (train_size + test_size > set.size())
    throw std::invalid_argument("train+test size exceeds the example set");

  TrialReport report{train_size, test_size, trials, std::vector<TrialResult>(trials), 0, 0};
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < trials;)
      report.per_trial[t] = run_trial(theory, set, train_size, test_size,
                                      trial_seed(base_seed, t), options.i_max, options.mode);
  };
  const unsigned jobs =
      static_cast<unsigned>(std::clamp<std::size_t>(options.jobs, 1, trials));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  double sum = 0;
  for (const auto& r : report.per_trial) sum += r.test_accuracy;
  report.mean_accuracy = sum / static_cast<double>(trials);
  double ss = 0;
  for (const auto& r : report.per_trial) {
    double d = r.test_accuracy - report.mean_accuracy;
    ss += d * d;
  }
  report.std_accuracy = std::sqrt(ss / static_cast<double>(trials));
  return report;
}

}  // namespace mofn
