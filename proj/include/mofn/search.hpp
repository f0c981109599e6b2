#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "mofn/dataset.hpp"
#include "mofn/engine.hpp"
#include "mofn/theory.hpp"

namespace mofn {

/// Histogram over exact correct-counts: counts[k] is the number of profiles
/// that classify exactly k examples correctly.
struct AccuracyDistribution {
  std::vector<std::uint64_t> counts;
  std::uint64_t total_profiles = 0;

  AccuracyDistribution() = default;
  explicit AccuracyDistribution(std::size_t examples) : counts(examples + 1, 0) {}

  std::size_t examples() const { return counts.empty() ? 0 : counts.size() - 1; }
  void add(std::size_t correct, std::uint64_t n = 1) {
    counts[correct] += n;
    total_profiles += n;
  }
  AccuracyDistribution& operator+=(const AccuracyDistribution& other);

  friend bool operator==(const AccuracyDistribution&,
                         const AccuracyDistribution&) = default;
};

struct DistributionStats {
  double mean = 0.0;
  double std = 0.0;  // population form
};

/// Mean and population standard deviation of correct/examples with every
/// profile weighted equally. Throws std::domain_error when empty.
DistributionStats distribution_stats(const AccuracyDistribution& dist);

/// Profiles with at least k correct.
std::uint64_t count_at_least(const AccuracyDistribution& dist, std::size_t k);

struct SearchReport {
  AccuracyDistribution distribution;
  std::size_t best_correct = 0;
  std::vector<MProfile> best_profiles;  // enumeration order
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  std::map<std::size_t, std::uint64_t> at_least;

  friend bool operator==(const SearchReport&, const SearchReport&) = default;
};

/// Product over leaves of n. Throws std::overflow_error past 2^64.
std::uint64_t profile_space_size(const Theory& theory);

/// Walks every profile with M in [1, n] per leaf in lexicographic order over
/// leaves(): the first leaf is the most significant digit, so the stream
/// starts at all-M=1 and ends at all-M=n.
class ProfileEnumerator {
 public:
  explicit ProfileEnumerator(const Theory& theory);

  const std::vector<int>& thresholds() const { return current_; }
  MProfile profile() const { return make_profile(leaves_, current_); }
  /// Advances; false once the stream is exhausted.
  bool next();

 private:
  std::vector<Leaf> leaves_;
  std::vector<int> current_;
  bool done_ = false;
};

struct SearchOptions {
  unsigned jobs = 1;
  std::vector<std::size_t> at_least_thresholds{99, 103};
};

/// Exhaustive sweep of the M in [1, n] profile space. Work is split by the
/// first leaf's M value; partitions are merged in order, so the report does
/// not depend on `jobs`.
SearchReport exhaustive_search(const Theory& theory, const ExampleSet& set,
                               const SearchOptions& options = {});

}  // namespace mofn
