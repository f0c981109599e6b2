#include "mofn/search.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace mofn {

AccuracyDistribution& AccuracyDistribution::operator+=(const AccuracyDistribution& other) {
  if (counts.size() < other.counts.size()) counts.resize(other.counts.size(), 0);
  for (std::size_t k = 0; k < other.counts.size(); ++k) counts[k] += other.counts[k];
  total_profiles += other.total_profiles;
  return *this;
}

DistributionStats distribution_stats(const AccuracyDistribution& dist) {
  if (dist.total_profiles == 0 || dist.examples() == 0)
    throw std::domain_error("statistics of an empty distribution");
  long double sum = 0, sumsq = 0;
  for (std::size_t k = 0; k < dist.counts.size(); ++k) {
    long double c = static_cast<long double>(dist.counts[k]);
    sum += c * k;
    sumsq += c * k * k;
  }
  const long double total = static_cast<long double>(dist.total_profiles);
  const long double n = static_cast<long double>(dist.examples());
  const long double mean = sum / total;
  const long double var = std::max<long double>(sumsq / total - mean * mean, 0);
  return {static_cast<double>(mean / n), static_cast<double>(std::sqrt(var) / n)};
}

std::uint64_t count_at_least(const AccuracyDistribution& dist, std::size_t k) {
  std::uint64_t n = 0;
  for (std::size_t j = k; j < dist.counts.size(); ++j) n += dist.counts[j];
  return n;
}

std::uint64_t profile_space_size(const Theory& theory) {
  std::uint64_t size = 1;
  for (const auto& leaf : leaves(theory)) {
    if (leaf.n() != 0 && size > std::numeric_limits<std::uint64_t>::max() / leaf.n())
      throw std::overflow_error("profile space exceeds 2^64");
    size *= leaf.n();
  }
  return size;
}

ProfileEnumerator::ProfileEnumerator(const Theory& theory)
    : leaves_(leaves(theory)), current_(leaves_.size(), 1) {}

bool ProfileEnumerator::next() {
  if (done_) return false;
  for (std::size_t i = current_.size(); i-- > 0;) {
    if (static_cast<std::size_t>(current_[i]) < leaves_[i].n()) {
      ++current_[i];
      return true;
    }
    current_[i] = 1;
  }
  done_ = true;
  return false;
}

namespace {

using Word = std::uint64_t;

// Evaluates profiles over the whole example set at once: one bit per example.
class BitsetEvaluator {
 public:
  BitsetEvaluator(const CompiledTheory& compiled, const ExampleSet& set)
      : compiled_(compiled),
        examples_(set.size()),
        words_((set.size() + 63) / 64),
        positive_(words_, 0),
        valid_(words_, 0) {
    const auto& leaves = compiled.leaves();
    SatTable sat(leaves, set);
    offsets_.resize(leaves.size());
    std::size_t off = 0;
    for (std::size_t l = 0; l < leaves.size(); ++l) {
      offsets_[l] = off;
      off += (leaves[l].n() + 1) * words_;
    }
    at_least_.assign(off, 0);
    for (std::size_t e = 0; e < examples_; ++e) {
      const Word bit = Word{1} << (e % 64);
      valid_[e / 64] |= bit;
      if (set[e].label == Label::positive) positive_[e / 64] |= bit;
      for (std::size_t l = 0; l < leaves.size(); ++l)
        for (std::size_t m = 0; m <= sat.at(e, l); ++m)
          at_least_[offsets_[l] + m * words_ + e / 64] |= bit;
    }
    symbol_values_.assign(compiled.symbols().size() * words_, 0);
    scratch_.assign(words_, 0);
  }

  std::size_t correct(std::span<const int> thresholds) {
    const auto& symbols = compiled_.symbols();
    for (std::size_t s = 0; s < symbols.size(); ++s) {
      Word* out = &symbol_values_[s * words_];
      std::fill(out, out + words_, 0);
      for (const auto& clause : symbols[s].clauses) {
        if (clause.leaf != CompiledTheory::Clause::kNoLeaf) {
          const Word* bits = leaf_bits(clause.leaf, thresholds[clause.leaf]);
          for (std::size_t w = 0; w < words_; ++w) out[w] |= bits[w];
          continue;
        }
        std::copy(valid_.begin(), valid_.end(), scratch_.begin());
        for (auto child : clause.symbols) {
          const Word* bits = &symbol_values_[child * words_];
          for (std::size_t w = 0; w < words_; ++w) scratch_[w] &= bits[w];
        }
        for (std::size_t w = 0; w < words_; ++w) out[w] |= scratch_[w];
      }
    }
    const Word* pred = &symbol_values_[compiled_.root() * words_];
    std::size_t right = 0;
    for (std::size_t w = 0; w < words_; ++w) {
      Word agree = ~(pred[w] ^ positive_[w]) & valid_[w];
      right += static_cast<std::size_t>(std::popcount(agree));
    }
    return right;
  }

 private:
  const Word* leaf_bits(std::size_t leaf, int m) const {
    return &at_least_[offsets_[leaf] + static_cast<std::size_t>(m) * words_];
  }

  const CompiledTheory& compiled_;
  std::size_t examples_;
  std::size_t words_;
  std::vector<Word> positive_;
  std::vector<Word> valid_;
  std::vector<std::size_t> offsets_;
  std::vector<Word> at_least_;  // [leaf][m][word]: examples with >= m satisfied
  std::vector<Word> symbol_values_;
  std::vector<Word> scratch_;
};

struct Partition {
  AccuracyDistribution dist;
  std::size_t best = 0;
  std::vector<std::vector<int>> best_thresholds;
};

// All profiles whose first leaf has M = lead (or the whole space when the
// theory has no leaves).
Partition run_partition(const CompiledTheory& compiled, const ExampleSet& set, int lead) {
  const auto& leaves = compiled.leaves();
  BitsetEvaluator eval(compiled, set);
  Partition part{AccuracyDistribution(set.size()), 0, {}};

  std::vector<int> m(leaves.size(), 1);
  if (!m.empty()) m[0] = lead;
  while (true) {
    std::size_t c = eval.correct(m);
    part.dist.add(c);
    if (c > part.best || part.dist.total_profiles == 1) {
      part.best = c;
      part.best_thresholds.clear();
    }
    if (c == part.best) part.best_thresholds.push_back(m);

    std::size_t i = m.size();
    while (i-- > 1) {
      if (static_cast<std::size_t>(m[i]) < leaves[i].n()) {
        ++m[i];
        break;
      }
      m[i] = 1;
    }
    if (i == 0 || i == static_cast<std::size_t>(-1)) break;
  }
  return part;
}

}  // namespace

SearchReport exhaustive_search(const Theory& theory, const ExampleSet& set,
                               const SearchOptions& options) {
  CompiledTheory compiled(theory);
  profile_space_size(theory);  // overflow check

  const auto& leaves = compiled.leaves();
  const int parts = leaves.empty() ? 1 : static_cast<int>(leaves[0].n());
  std::vector<Partition> results(static_cast<std::size_t>(parts));

  const unsigned jobs = std::clamp<unsigned>(options.jobs, 1, static_cast<unsigned>(parts));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int p; (p = next.fetch_add(1)) < parts;)
      results[static_cast<std::size_t>(p)] = run_partition(compiled, set, p + 1);
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  SearchReport report;
  report.distribution = AccuracyDistribution(set.size());
  std::size_t best = 0;
  for (const auto& r : results) {
    report.distribution += r.dist;
    best = std::max(best, r.best);
  }
  report.best_correct = best;
  for (const auto& r : results)
    if (r.best == best)
      for (const auto& th : r.best_thresholds)
        report.best_profiles.push_back(compiled.profile(th));

  if (!set.empty()) {
    auto stats = distribution_stats(report.distribution);
    report.mean_accuracy = stats.mean;
    report.std_accuracy = stats.std;
  }
  for (auto k : options.at_least_thresholds)
    report.at_least[k] = count_at_least(report.distribution, k);
  return report;
}

}  // namespace mofn
