#include "mofn/engine.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace mofn {

int MProfile::at(const LeafId& id) const {
  for (const auto& [leaf, m] : entries_)
    if (leaf == id) return m;
  throw ProfileError("profile has no entry for leaf " + id.str());
}

void MProfile::set(const LeafId& id, int m) {
  for (auto& [leaf, value] : entries_) {
    if (leaf == id) {
      value = m;
      return;
    }
  }
  throw ProfileError("profile has no entry for leaf " + id.str());
}

MProfile make_profile(const std::vector<Leaf>& leaves, std::span<const int> thresholds) {
  if (leaves.size() != thresholds.size())
    throw ProfileError("threshold count does not match leaf count");
  std::vector<std::pair<LeafId, int>> entries;
  entries.reserve(leaves.size());
  for (std::size_t i = 0; i < leaves.size(); ++i)
    entries.emplace_back(leaves[i].id, thresholds[i]);
  return MProfile(std::move(entries));
}

MProfile strict_profile(const Theory& theory) { return decrement_profile(theory, 0); }

void check_profile(const Theory& theory, const MProfile& profile) {
  std::map<LeafId, std::size_t> want;
  for (const auto& leaf : leaves(theory)) want.emplace(leaf.id, leaf.n());

  std::set<LeafId> seen;
  for (const auto& [id, m] : profile.entries()) {
    auto it = want.find(id);
    if (it == want.end())
      throw ProfileError("profile names leaf " + id.str() + " which the theory lacks");
    if (!seen.insert(id).second)
      throw ProfileError("profile lists leaf " + id.str() + " twice");
    if (m < 0 || static_cast<std::size_t>(m) > it->second)
      throw ProfileError("M=" + std::to_string(m) + " for leaf " + id.str() +
                         " outside [0," + std::to_string(it->second) + "]");
  }
  for (const auto& [id, n] : want)
    if (!seen.contains(id))
      throw ProfileError("profile has no entry for leaf " + id.str());
}

void tally(ConfusionCounts& counts, Label truth, Label predicted) {
  if (truth == Label::positive)
    ++(predicted == Label::positive ? counts.tp : counts.fn);
  else
    ++(predicted == Label::positive ? counts.fp : counts.tn);
}

double accuracy(const ConfusionCounts& counts) {
  if (counts.total() == 0) throw std::domain_error("accuracy of an empty example set");
  return static_cast<double>(counts.correct()) / static_cast<double>(counts.total());
}

CompiledTheory::CompiledTheory(const Theory& theory) {
  Diagnostics diag = validate(theory);
  if (!diag.ok()) throw TheoryError(std::move(diag));

  leaves_ = mofn::leaves(theory);
  std::map<LeafId, std::size_t> leaf_index;
  for (std::size_t i = 0; i < leaves_.size(); ++i) leaf_index.emplace(leaves_[i].id, i);

  // Post-order from the root gives children before parents.
  std::map<std::string, std::size_t, std::less<>> order;
  std::function<std::size_t(const std::string&)> place = [&](const std::string& name) {
    if (auto it = order.find(name); it != order.end()) return it->second;
    const Rule& rule = *theory.find(name);
    Symbol sym{name, {}};
    for (std::size_t ci = 0; ci < rule.clauses.size(); ++ci) {
      const auto& clause = rule.clauses[ci];
      Clause c;
      if (clause.is_leaf()) {
        c.leaf = leaf_index.at(LeafId{name, ci});
      } else {
        for (const auto& lit : clause.body)
          c.symbols.push_back(place(std::get<SymbolRef>(lit).name));
      }
      sym.clauses.push_back(std::move(c));
    }
    symbols_.push_back(std::move(sym));
    order.emplace(name, symbols_.size() - 1);
    return symbols_.size() - 1;
  };
  root_ = place(theory.root());
}

std::vector<int> CompiledTheory::thresholds(const MProfile& profile) const {
  if (profile.size() != leaves_.size())
    throw ProfileError("profile has " + std::to_string(profile.size()) +
                       " entries, theory has " + std::to_string(leaves_.size()) +
                       " leaves");
  std::vector<int> out(leaves_.size());
  std::vector<bool> filled(leaves_.size(), false);
  for (const auto& [id, m] : profile.entries()) {
    auto it = std::find_if(leaves_.begin(), leaves_.end(),
                           [&](const Leaf& l) { return l.id == id; });
    if (it == leaves_.end())
      throw ProfileError("profile names leaf " + id.str() + " which the theory lacks");
    auto i = static_cast<std::size_t>(it - leaves_.begin());
    if (filled[i]) throw ProfileError("profile lists leaf " + id.str() + " twice");
    if (m < 0 || static_cast<std::size_t>(m) > it->n())
      throw ProfileError("M=" + std::to_string(m) + " for leaf " + id.str() +
                         " outside [0," + std::to_string(it->n()) + "]");
    filled[i] = true;
    out[i] = m;
  }
  return out;
}

MProfile CompiledTheory::profile(std::span<const int> thresholds) const {
  return make_profile(leaves_, thresholds);
}

namespace {

bool all_of(std::span<const char> v) {
  return std::all_of(v.begin(), v.end(), [](char b) { return b != 0; });
}
bool any_of(std::span<const char> v) {
  return std::any_of(v.begin(), v.end(), [](char b) { return b != 0; });
}

}  // namespace

bool CompiledTheory::classify(std::span<const int> thresholds, const Sequence& seq) const {
  return fold<char>(
             [&](std::size_t i) {
               return static_cast<char>(
                   leaf_satisfied_count(leaves_[i], seq) >=
                   static_cast<std::size_t>(thresholds[i]));
             },
             all_of, any_of, char{1}, char{0}) != 0;
}

bool CompiledTheory::classify_counts(std::span<const int> thresholds,
                                     std::span<const std::uint8_t> sat_counts) const {
  return fold<char>(
             [&](std::size_t i) {
               return static_cast<char>(sat_counts[i] >= thresholds[i]);
             },
             all_of, any_of, char{1}, char{0}) != 0;
}

std::size_t leaf_satisfied_count(const Leaf& leaf, const Sequence& seq) {
  std::size_t n = 0;
  for (const auto& c : leaf.conditions)
    if (holds(seq, c)) ++n;
  return n;
}

SatTable::SatTable(const std::vector<Leaf>& leaves, const ExampleSet& set)
    : examples_(set.size()), leaves_(leaves.size()), data_(examples_ * leaves_) {
  for (std::size_t e = 0; e < examples_; ++e)
    for (std::size_t l = 0; l < leaves_; ++l)
      data_[e * leaves_ + l] =
          static_cast<std::uint8_t>(leaf_satisfied_count(leaves[l], set[e].sequence));
}

Label classify(const Theory& theory, const MProfile& profile, const Sequence& seq) {
  CompiledTheory compiled(theory);
  return compiled.classify(compiled.thresholds(profile), seq) ? Label::positive
                                                              : Label::negative;
}

ConfusionCounts confusion(const Theory& theory, const MProfile& profile,
                          const ExampleSet& set) {
  CompiledTheory compiled(theory);
  return confusion(compiled, compiled.thresholds(profile), set);
}

ConfusionCounts confusion(const CompiledTheory& compiled,
                          std::span<const int> thresholds, const ExampleSet& set) {
  ConfusionCounts counts;
  for (const auto& ex : set.examples()) {
    Label predicted = compiled.classify(thresholds, ex.sequence) ? Label::positive
                                                                 : Label::negative;
    tally(counts, ex.label, predicted);
  }
  return counts;
}

MProfile decrement_profile(const Theory& theory, int i) {
  if (i < 0) throw std::invalid_argument("decrement must be non-negative");
  std::vector<std::pair<LeafId, int>> entries;
  for (const auto& leaf : leaves(theory))
    entries.emplace_back(leaf.id, std::max(static_cast<int>(leaf.n()) - i, 0));
  return MProfile(std::move(entries));
}

std::string decrement_label(int i) {
  if (i == 0) return "N-of-N";
  return "(N-" + std::to_string(i) + ")-of-N";
}

namespace {

SweepRow make_row(std::string label, int i, const ConfusionCounts& c) {
  return SweepRow{std::move(label), i, c.correct(), c.fp, c.fn, accuracy(c)};
}

}  // namespace

std::vector<SweepRow> sweep_decrements(const Theory& full_theory,
                                       const ExampleSet& set, int i_max,
                                       std::string_view dropped) {
  if (i_max < 0) throw std::invalid_argument("i_max must be non-negative");
  if (!full_theory.defines(dropped))
    throw TheoryError("sweep needs symbol '" + std::string(dropped) +
                      "' in the full theory");

  std::vector<SweepRow> rows;
  rows.push_back(make_row("N-of-N (original theory)", 0,
                          confusion(full_theory, strict_profile(full_theory), set)));

  Theory reduced = drop_symbol(full_theory, dropped).theory;
  CompiledTheory compiled(reduced);
  for (int i = 0; i <= i_max; ++i) {
    auto th = compiled.thresholds(decrement_profile(reduced, i));
    std::string label = i == 0 ? "N-of-N w/ " + std::string(dropped) + " rule removed"
                               : decrement_label(i);
    rows.push_back(make_row(std::move(label), i, confusion(compiled, th, set)));
  }
  return rows;
}

}  // namespace mofn
