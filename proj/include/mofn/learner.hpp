#pragma once

// Learning a single constant decrement i: every leaf becomes an (N-i)-of-N
// concept, with i chosen to maximize training accuracy.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mofn/dataset.hpp"
#include "mofn/theory.hpp"

namespace mofn {

inline constexpr int kDefaultMaxDecrement = 4;

/// i in [0, i_max] with the highest training accuracy; ties go to the
/// smallest i. Throws std::invalid_argument on an empty training set.
int fit_decrement(const Theory& theory, const ExampleSet& train,
                  int i_max = kDefaultMaxDecrement);

struct TrialResult {
  std::uint64_t seed = 0;
  int chosen_i = 0;
  double test_accuracy = 0.0;

  friend bool operator==(const TrialResult&, const TrialResult&) = default;
};

TrialResult run_trial(const Theory& theory, const ExampleSet& set,
                      std::size_t train_size, std::size_t test_size,
                      std::uint64_t seed, int i_max = kDefaultMaxDecrement,
                      SplitMode mode = SplitMode::uniform);

/// seed_t = splitmix64(base_seed + t * 0x9E3779B97F4A7C15), t = 0-based trial.
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial);

struct TrialReport {
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::size_t trials = 0;
  std::vector<TrialResult> per_trial;  // by trial index
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;  // population form

  friend bool operator==(const TrialReport&, const TrialReport&) = default;
};

struct TrialOptions {
  int i_max = kDefaultMaxDecrement;
  SplitMode mode = SplitMode::uniform;
  unsigned jobs = 1;
};

TrialReport run_trials(const Theory& theory, const ExampleSet& set,
                       std::size_t train_size, std::size_t test_size,
                       std::size_t trials, std::uint64_t base_seed,
                       const TrialOptions& options = {});

}  // namespace mofn
