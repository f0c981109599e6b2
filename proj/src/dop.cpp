#include "mofn/dop.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace mofn {

std::string DopSemantics::name() const {
  return and_rule == AndRule::minimum ? "min-max" : "product-max";
}

DopSemantics DopSemantics::parse(std::string_view name) {
  if (name == "min-max") return {AndRule::minimum};
  if (name == "product-max") return {AndRule::product};
  throw std::invalid_argument("unknown semantics '" + std::string(name) +
                              "' (expected min-max or product-max)");
}

double dop_score(const Theory& theory, const Sequence& seq, const DopSemantics& sem) {
  return dop_score(CompiledTheory(theory), seq, sem);
}

double dop_score(const CompiledTheory& compiled, const Sequence& seq,
                 const DopSemantics& sem) {
  const auto& leaves = compiled.leaves();
  auto leaf = [&](std::size_t i) {
    return static_cast<double>(leaf_satisfied_count(leaves[i], seq)) /
           static_cast<double>(leaves[i].n());
  };
  auto maximum = [](std::span<const double> v) { return *std::max_element(v.begin(), v.end()); };
  if (sem.and_rule == AndRule::minimum) {
    auto minimum = [](std::span<const double> v) {
      return *std::min_element(v.begin(), v.end());
    };
    return compiled.fold<double>(leaf, minimum, maximum, 1.0, 0.0);
  }
  auto product = [](std::span<const double> v) {
    double p = 1.0;
    for (double x : v) p *= x;
    return p;
  };
  return compiled.fold<double>(leaf, product, maximum, 1.0, 0.0);
}

std::size_t rank_cutoff(std::size_t count, double positive_fraction) {
  auto k = static_cast<std::size_t>(std::llround(positive_fraction * static_cast<double>(count)));
  return std::clamp<std::size_t>(k, 1, count);
}

double calibrate_threshold(std::span<const double> scores, double positive_fraction) {
  if (scores.empty()) throw std::invalid_argument("no scores to calibrate");
  if (!(positive_fraction > 0.0 && positive_fraction < 1.0))
    throw std::invalid_argument("positive fraction must lie strictly between 0 and 1");
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  return sorted[rank_cutoff(sorted.size(), positive_fraction) - 1];
}

DopReport dop_classify_all(const Theory& theory, const ExampleSet& set,
                           const DopSemantics& sem, std::optional<double> positive_fraction) {
  if (set.empty()) throw std::invalid_argument("no examples to score");
  double fraction = positive_fraction.value_or(static_cast<double>(set.positives()) /
                                               static_cast<double>(set.size()));

  CompiledTheory compiled(theory);
  DopReport report;
  report.semantics = sem;
  std::vector<double> scores;
  scores.reserve(set.size());
  for (const auto& ex : set.examples()) scores.push_back(dop_score(compiled, ex.sequence, sem));

  report.threshold = calibrate_threshold(scores, fraction);
  report.k = rank_cutoff(scores.size(), fraction);
  report.positive_fraction_used = fraction;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto& ex = set[i];
    Label predicted = scores[i] >= report.threshold ? Label::positive : Label::negative;
    tally(report.counts, ex.label, predicted);
    report.entries.push_back({ex.name, ex.label, scores[i], predicted});
  }
  return report;
}

}  // namespace mofn
