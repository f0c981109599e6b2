#pragma once

// Test-only oracles and generators. Nothing here calls into the evaluation
// code it is used to check: conditions are looked up through an explicit
// coordinate table, and theories are evaluated by direct recursion over the
// parsed rules.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mofn/dataset.hpp"
#include "mofn/dop.hpp"
#include "mofn/engine.hpp"
#include "mofn/theory.hpp"

namespace testsupport {

using namespace mofn;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string data_path(const std::string& name) {
  return std::string(MOFN_DATA_DIR) + "/" + name;
}

inline Theory uci_theory() { return parse_theory(read_file(data_path("promoters.theory"))); }
inline ExampleSet uci_data() { return parse_dataset(read_file(data_path("promoters.data"))); }

/// Window coordinates in sequence order, built by enumeration.
inline const std::vector<int>& window() {
  static const std::vector<int> w = [] {
    std::vector<int> out;
    for (int p = -50; p <= 7; ++p)
      if (p != 0) out.push_back(p);
    return out;
  }();
  return w;
}

inline char base_at(const std::string& seq, int position) {
  const auto& w = window();
  auto it = std::find(w.begin(), w.end(), position);
  return seq.at(static_cast<std::size_t>(it - w.begin()));
}

inline std::size_t oracle_count(const std::vector<Condition>& conds, const std::string& seq) {
  std::size_t n = 0;
  for (const auto& c : conds)
    if (base_at(seq, c.position) == to_char(c.base)) ++n;
  return n;
}

/// Assignment of bases to a few positions; unlisted positions hold nothing.
using Assignment = std::map<int, char>;

inline std::size_t oracle_count(const std::vector<Condition>& conds, const Assignment& a) {
  std::size_t n = 0;
  for (const auto& c : conds) {
    auto it = a.find(c.position);
    if (it != a.end() && it->second == to_char(c.base)) ++n;
  }
  return n;
}

inline std::vector<Condition> body_conditions(const Clause& clause) {
  std::vector<Condition> out;
  for (const auto& lit : clause.body) out.push_back(std::get<Condition>(lit));
  return out;
}

/// Recursive boolean evaluation straight off the rules.
/// `m` maps "symbol#ordinal" to the leaf threshold.
template <class CountFn>
bool oracle_truth(const Theory& t, const std::map<std::string, int>& m, CountFn count,
                  const std::string& symbol) {
  const Rule* rule = t.find(symbol);
  if (!rule) return false;
  for (std::size_t ci = 0; ci < rule->clauses.size(); ++ci) {
    const Clause& clause = rule->clauses[ci];
    bool value;
    if (clause.is_leaf()) {
      auto conds = body_conditions(clause);
      value = static_cast<int>(count(conds)) >= m.at(symbol + "#" + std::to_string(ci));
    } else {
      value = true;
      for (const auto& lit : clause.body)
        value = value && oracle_truth(t, m, count, std::get<SymbolRef>(lit).name);
    }
    if (value) return true;
  }
  return false;
}

inline std::map<std::string, int> profile_map(const MProfile& p) {
  std::map<std::string, int> m;
  for (const auto& [id, v] : p.entries()) m[id.str()] = v;
  return m;
}

inline bool oracle_classify(const Theory& t, const MProfile& p, const std::string& seq) {
  auto m = profile_map(p);
  return oracle_truth(t, m, [&](const std::vector<Condition>& c) { return oracle_count(c, seq); },
                      t.root());
}

inline bool oracle_classify(const Theory& t, const MProfile& p, const Assignment& a) {
  auto m = profile_map(p);
  return oracle_truth(t, m, [&](const std::vector<Condition>& c) { return oracle_count(c, a); },
                      t.root());
}

inline double oracle_dop(const Theory& t, const std::string& seq, AndRule rule,
                         const std::string& symbol) {
  const Rule* r = t.find(symbol);
  double best = 0.0;
  for (const auto& clause : r->clauses) {
    double v;
    if (clause.is_leaf()) {
      auto conds = body_conditions(clause);
      v = static_cast<double>(oracle_count(conds, seq)) / static_cast<double>(conds.size());
    } else {
      v = 1.0;
      for (const auto& lit : clause.body) {
        double c = oracle_dop(t, seq, rule, std::get<SymbolRef>(lit).name);
        v = rule == AndRule::minimum ? std::min(v, c) : v * c;
      }
    }
    best = std::max(best, v);
  }
  return best;
}

inline std::string random_sequence(std::mt19937_64& rng) {
  static const char bases[] = "acgt";
  std::string s(kSequenceLength, 'a');
  for (auto& c : s) c = bases[rng() % 4];
  return s;
}

inline Sequence to_sequence(const std::string& s) {
  Sequence seq{};
  for (std::size_t i = 0; i < s.size(); ++i) parse_nucleotide(s[i], seq[i]);
  return seq;
}

inline Nucleotide random_base(std::mt19937_64& rng) {
  return static_cast<Nucleotide>(rng() % 4);
}

/// Random valid acyclic theory with at most `max_conditions` conditions drawn
/// from a small pool of positions, so leaves overlap.
inline Theory random_valid_theory(std::mt19937_64& rng, std::size_t max_conditions = 8) {
  static const std::vector<int> pool{-37, -35, -12, -10, -3, 2, 5, 7};
  while (true) {
    std::vector<Rule> rules;
    std::size_t conditions = 0;
    std::set<std::string> referenced;
    std::function<std::string(int)> make = [&](int depth) -> std::string {
      std::string name = "s" + std::to_string(rules.size());
      rules.push_back(Rule{name, {}});
      std::size_t self = rules.size() - 1;
      std::size_t n_clauses = 1 + rng() % 2;
      std::vector<Clause> clauses;
      for (std::size_t c = 0; c < n_clauses; ++c) {
        Clause clause;
        if (depth >= 2 || rng() % 2 == 0) {
          std::vector<int> ps = pool;
          std::shuffle(ps.begin(), ps.end(), rng);
          std::size_t n = 1 + rng() % 3;
          for (std::size_t k = 0; k < n; ++k)
            clause.body.push_back(Condition{ps[k], random_base(rng)});
          conditions += n;
        } else {
          std::size_t n = 1 + rng() % 2;
          for (std::size_t k = 0; k < n; ++k) {
            // Reuse a finished symbol (never an ancestor) or build a new one.
            std::vector<std::string> done;
            for (std::size_t r = self + 1; r < rules.size(); ++r)
              if (!rules[r].clauses.empty()) done.push_back(rules[r].head);
            std::string child = (!done.empty() && rng() % 3 == 0) ? done[rng() % done.size()]
                                                                  : make(depth + 1);
            referenced.insert(child);
            clause.body.push_back(SymbolRef{child});
          }
        }
        clauses.push_back(std::move(clause));
      }
      rules[self].clauses = std::move(clauses);
      return name;
    };
    make(0);
    if (conditions > max_conditions) continue;
    Theory t(rules, "s0");
    if (validate(t).ok()) return t;
  }
}

}  // namespace testsupport
