#pragma once

// M-of-N evaluation of a theory over sequences.
//
// A leaf with N conditions and threshold M is true when at least M of its
// conditions hold (M = 0 makes it unconditionally true). Internal clauses stay
// strict conjunctions and symbols strict disjunctions.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mofn/dataset.hpp"
#include "mofn/theory.hpp"

namespace mofn {

class ProfileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One M threshold per leaf, keyed by LeafId in leaves() order.
class MProfile {
 public:
  MProfile() = default;
  explicit MProfile(std::vector<std::pair<LeafId, int>> entries)
      : entries_(std::move(entries)) {}

  const std::vector<std::pair<LeafId, int>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  /// Throws ProfileError when the leaf is absent.
  int at(const LeafId& id) const;
  void set(const LeafId& id, int m);

  friend bool operator==(const MProfile&, const MProfile&) = default;

 private:
  std::vector<std::pair<LeafId, int>> entries_;
};

/// Builds a profile from thresholds aligned with leaves(theory).
MProfile make_profile(const std::vector<Leaf>& leaves, std::span<const int> thresholds);

/// Every leaf at M = n (strict conjunctive reading).
MProfile strict_profile(const Theory& theory);

/// Throws ProfileError unless the profile covers exactly the theory's leaves
/// with 0 <= M <= n.
void check_profile(const Theory& theory, const MProfile& profile);

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  std::size_t correct() const { return tp + tn; }

  ConfusionCounts& operator+=(const ConfusionCounts& o) {
    tp += o.tp;
    fp += o.fp;
    tn += o.tn;
    fn += o.fn;
    return *this;
  }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

void tally(ConfusionCounts& counts, Label truth, Label predicted);

/// (tp + tn) / total. Throws std::domain_error on an empty tally.
double accuracy(const ConfusionCounts& counts);

/// A theory flattened for repeated evaluation: symbols in dependency order
/// (children before parents), clauses as either a leaf index or a list of
/// symbol indices.
class CompiledTheory {
 public:
  struct Clause {
    static constexpr std::size_t kNoLeaf = static_cast<std::size_t>(-1);
    std::size_t leaf = kNoLeaf;
    std::vector<std::size_t> symbols;  // indices into symbols(); empty body when leaf == kNoLeaf
  };
  struct Symbol {
    std::string name;
    std::vector<Clause> clauses;
  };

  /// Requires a valid theory; throws TheoryError otherwise.
  explicit CompiledTheory(const Theory& theory);

  const std::vector<Leaf>& leaves() const { return leaves_; }
  const std::vector<Symbol>& symbols() const { return symbols_; }
  std::size_t root() const { return root_; }

  /// Thresholds aligned with leaves(); validates the profile.
  std::vector<int> thresholds(const MProfile& profile) const;
  MProfile profile(std::span<const int> thresholds) const;

  /// Generic bottom-up fold. `leaf_value(i)` yields the value of leaf i,
  /// `conj`/`disj` combine a non-empty span of values, `one` is the value of
  /// an empty conjunction and `zero` of a symbol without clauses.
  template <class T, class LeafFn, class AndFn, class OrFn>
  T fold(LeafFn&& leaf_value, AndFn&& conj, OrFn&& disj, T one, T zero) const;

  bool classify(std::span<const int> thresholds, const Sequence& seq) const;
  /// Same, from precomputed per-leaf satisfied counts.
  bool classify_counts(std::span<const int> thresholds,
                       std::span<const std::uint8_t> sat_counts) const;

 private:
  std::vector<Leaf> leaves_;
  std::vector<Symbol> symbols_;
  std::size_t root_ = 0;
};

template <class T, class LeafFn, class AndFn, class OrFn>
T CompiledTheory::fold(LeafFn&& leaf_value, AndFn&& conj, OrFn&& disj, T one,
                       T zero) const {
  std::vector<T> value(symbols_.size(), zero);
  std::vector<T> clause_vals;
  std::vector<T> lits;
  for (std::size_t s = 0; s < symbols_.size(); ++s) {
    clause_vals.clear();
    for (const auto& c : symbols_[s].clauses) {
      if (c.leaf != Clause::kNoLeaf) {
        clause_vals.push_back(leaf_value(c.leaf));
      } else if (c.symbols.empty()) {
        clause_vals.push_back(one);
      } else {
        lits.clear();
        for (auto child : c.symbols) lits.push_back(value[child]);
        clause_vals.push_back(conj(std::span<const T>(lits)));
      }
    }
    value[s] = clause_vals.empty() ? zero : disj(std::span<const T>(clause_vals));
  }
  return value[root_];
}

/// Number of the leaf's conditions that hold in `seq`.
std::size_t leaf_satisfied_count(const Leaf& leaf, const Sequence& seq);

/// Per-example, per-leaf satisfied counts: row e holds the counts of example e
/// in leaves() order.
class SatTable {
 public:
  SatTable(const std::vector<Leaf>& leaves, const ExampleSet& set);

  std::size_t examples() const { return examples_; }
  std::size_t leaves() const { return leaves_; }
  std::span<const std::uint8_t> row(std::size_t example) const {
    return {data_.data() + example * leaves_, leaves_};
  }
  std::uint8_t at(std::size_t example, std::size_t leaf) const {
    return data_[example * leaves_ + leaf];
  }

 private:
  std::size_t examples_;
  std::size_t leaves_;
  std::vector<std::uint8_t> data_;
};

Label classify(const Theory& theory, const MProfile& profile, const Sequence& seq);

ConfusionCounts confusion(const Theory& theory, const MProfile& profile,
                          const ExampleSet& set);
ConfusionCounts confusion(const CompiledTheory& compiled,
                          std::span<const int> thresholds, const ExampleSet& set);

/// Each leaf gets M = max(n - i, 0).
MProfile decrement_profile(const Theory& theory, int i);

struct SweepRow {
  std::string interpretation;
  int decrement = 0;
  std::size_t correct = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  double accuracy = 0.0;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

std::string decrement_label(int i);

/// Row 1: full theory, strict. Row 2: `dropped` removed, strict. Rows 3..:
/// reduced theory at i = 1..i_max. Throws TheoryError when `dropped` is not
/// defined in the full theory.
std::vector<SweepRow> sweep_decrements(const Theory& full_theory,
                                       const ExampleSet& set, int i_max,
                                       std::string_view dropped = "conformation");

}  // namespace mofn
