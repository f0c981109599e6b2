#pragma once

// Degree-of-provedness scoring: logical connectives replaced by arithmetic.
// A leaf scores the fraction of its conditions that hold, a clause combines
// its literal scores with the AND rule, and a symbol takes the maximum over
// its clauses. Examples are ranked by root score and the top share, matching
// the known positive proportion, is classified positive.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mofn/dataset.hpp"
#include "mofn/engine.hpp"
#include "mofn/theory.hpp"

namespace mofn {

enum class AndRule { minimum, product };

struct DopSemantics {
  AndRule and_rule = AndRule::minimum;

  /// "min-max" or "product-max".
  std::string name() const;
  /// Throws std::invalid_argument for anything but the two names above.
  static DopSemantics parse(std::string_view name);

  friend bool operator==(const DopSemantics&, const DopSemantics&) = default;
};

/// Root score in [0, 1].
double dop_score(const Theory& theory, const Sequence& seq, const DopSemantics& sem = {});
double dop_score(const CompiledTheory& compiled, const Sequence& seq,
                 const DopSemantics& sem = {});

/// k-th highest score, k = round(positive_fraction * |scores|) clamped to
/// [1, |scores|]. Classification is score >= threshold, so ties at the
/// threshold all go positive. Throws std::invalid_argument on empty scores or
/// a fraction outside (0, 1).
double calibrate_threshold(std::span<const double> scores, double positive_fraction);
std::size_t rank_cutoff(std::size_t count, double positive_fraction);

struct DopEntry {
  std::string name;
  Label label = Label::negative;
  double score = 0.0;
  Label predicted = Label::negative;

  friend bool operator==(const DopEntry&, const DopEntry&) = default;
};

struct DopReport {
  DopSemantics semantics;
  std::vector<DopEntry> entries;  // input order
  double threshold = 0.0;
  std::size_t k = 0;
  double positive_fraction_used = 0.0;
  ConfusionCounts counts;

  friend bool operator==(const DopReport&, const DopReport&) = default;
};

/// Scores, calibrates and tallies. The fraction defaults to the set's own
/// positive share.
DopReport dop_classify_all(const Theory& theory, const ExampleSet& set,
                           const DopSemantics& sem = {},
                           std::optional<double> positive_fraction = std::nullopt);

}  // namespace mofn
