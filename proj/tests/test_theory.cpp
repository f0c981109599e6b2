#include "doctest.h"
#include "support.hpp"

using namespace mofn;
using namespace testsupport;

namespace {

bool has_error(const Diagnostics& d, const std::string& fragment) {
  return std::any_of(d.errors.begin(), d.errors.end(), [&](const Diagnostic& e) {
    return e.message.find(fragment) != std::string::npos;
  });
}

}  // namespace

TEST_CASE("uci theory parses with root promoter and four minus_35 leaves") {
  Theory t = uci_theory();
  CHECK(t.root() == "promoter");
  REQUIRE(t.find("minus_35"));
  CHECK(t.find("minus_35")->clauses.size() == 4);
  CHECK(validate(t).errors.empty());
  CHECK(validate(t).warnings.empty());
  CHECK(leaves(t).size() == 12);
}

TEST_CASE("minimal theory") {
  Theory t = parse_theory("t :- p-1=a.");
  CHECK(t.root() == "t");
  auto ls = leaves(t);
  REQUIRE(ls.size() == 1);
  CHECK(ls[0].n() == 1);
  CHECK(ls[0].id.str() == "t#0");
  CHECK(format_theory(t) == "t :- p-1=a.\n");
}

TEST_CASE("cycles are rejected") {
  CHECK_THROWS_AS(parse_theory("a :- b. b :- a."), TheoryError);
  Diagnostics d = validate(parse_theory_unchecked("a :- b.\nb :- a."));
  CHECK(has_error(d, "cyclic reference"));
  // line number of the closing edge
  auto it = std::find_if(d.errors.begin(), d.errors.end(), [](const Diagnostic& e) {
    return e.message.find("cyclic") != std::string::npos;
  });
  CHECK(it->line == 2);
}

TEST_CASE("syntax errors carry line and column") {
  try {
    parse_theory_unchecked("a :- p-1=a.\nb :- p-2=x.");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 10);
  }
  CHECK_THROWS_AS(parse_theory_unchecked("a :- p-1=a"), ParseError);
  CHECK_THROWS_AS(parse_theory_unchecked("A :- p-1=a."), ParseError);
  CHECK_THROWS_AS(parse_theory_unchecked("a :- p-=a."), ParseError);
  CHECK_THROWS_AS(parse_theory_unchecked("a :- p-1 = a."), ParseError);
  CHECK_THROWS_AS(parse_theory_unchecked("a :- b,, c."), ParseError);
}

TEST_CASE("comments and whitespace") {
  Theory t = parse_theory("% header\n  top :- \n\tleaf . % trailing\nleaf :- p3=c,\n p-50=g.\n");
  CHECK(t.root() == "top");
  CHECK(leaves(t).size() == 1);
  CHECK(leaves(t)[0].conditions == std::vector<Condition>{{3, Nucleotide::C}, {-50, Nucleotide::G}});
}

TEST_CASE("symbols starting with p are not conditions") {
  Theory t = parse_theory("promoter :- p7x, p_1.\np7x :- p7=a.\np_1 :- p1=c.");
  CHECK(t.root() == "promoter");
  CHECK(leaves(t).size() == 2);
}

TEST_CASE("validate reports invalid positions and duplicates") {
  CHECK(has_error(validate(parse_theory_unchecked("t :- p0=a.")), "position 0 invalid"));
  CHECK(has_error(validate(parse_theory_unchecked("t :- p8=a.")), "outside [-50,+7]"));
  CHECK(has_error(validate(parse_theory_unchecked("t :- p-51=a.")), "outside [-50,+7]"));
  CHECK(has_error(validate(parse_theory_unchecked("t :- p-7=a, p-6=c, p-7=g.")),
                  "duplicate position"));
  CHECK(has_error(validate(parse_theory_unchecked("t :- u, p-1=a. u :- p-2=a.")), "mixes"));
  CHECK(has_error(validate(parse_theory_unchecked("t :- u.")), "undefined symbol 'u'"));
  CHECK(has_error(validate(parse_theory_unchecked("t :- p1=a. u :- p2=a.")), "ambiguous root"));
  CHECK(has_error(validate(Theory{}), "empty"));
}

TEST_CASE("drop_symbol") {
  Theory t = uci_theory();

  SUBCASE("conformation") {
    auto r = drop_symbol(t, "conformation");
    CHECK(r.theory.root() == "promoter");
    CHECK_FALSE(r.theory.defines("conformation"));
    const Rule* promoter = r.theory.find("promoter");
    REQUIRE(promoter);
    REQUIRE(promoter->clauses.size() == 1);
    CHECK(promoter->clauses[0].body == std::vector<Literal>{SymbolRef{"contact"}});
    CHECK(*r.theory.find("contact") == *t.find("contact"));
    CHECK(validate(r.theory).ok());
    CHECK(leaves(r.theory).size() == 8);
  }
  SUBCASE("minus_10 weakens contact") {
    auto r = drop_symbol(t, "minus_10");
    const Rule* contact = r.theory.find("contact");
    REQUIRE(contact);
    CHECK(contact->clauses[0].body == std::vector<Literal>{SymbolRef{"minus_35"}});
    REQUIRE_FALSE(r.warnings.empty());
    CHECK(r.warnings[0].message.find("weakened") != std::string::npos);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(drop_symbol(t, "xyz"), TheoryError);
    CHECK_THROWS_AS(drop_symbol(t, "promoter"), TheoryError);
  }
  SUBCASE("emptied body is a warning and the head becomes true") {
    auto r = drop_symbol(parse_theory("a :- b. b :- p1=a."), "b");
    CHECK(validate(r.theory).ok());
    REQUIRE(validate(r.theory).warnings.size() == 1);
    CHECK(r.warnings[0].message.find("unconditionally true") != std::string::npos);
    CHECK(format_theory(r.theory) == "a.\n");
  }
  SUBCASE("unreachable symbols are pruned") {
    auto r = drop_symbol(t, "contact");
    CHECK_FALSE(r.theory.defines("minus_35"));
    CHECK(validate(r.theory).ok());
  }
  SUBCASE("leaves outside the dropped symbol are unchanged") {
    for (const char* sym : {"conformation", "minus_10", "minus_35"}) {
      auto before = leaves(t);
      auto after = leaves(drop_symbol(t, sym).theory);
      std::erase_if(before, [&](const Leaf& l) { return l.id.symbol == sym; });
      REQUIRE(before.size() == after.size());
      for (std::size_t i = 0; i < before.size(); ++i) {
        CHECK(before[i].id == after[i].id);
        CHECK(before[i].conditions == after[i].conditions);
      }
    }
  }
}

TEST_CASE("leaves of the conformation-free theory") {
  Theory t = drop_symbol(uci_theory(), "conformation").theory;
  auto ls = leaves(t);
  REQUIRE(ls.size() == 8);
  std::vector<std::string> ids;
  std::uint64_t product = 1;
  for (const auto& l : ls) {
    ids.push_back(l.id.str());
    product *= l.n();
  }
  CHECK(ids == std::vector<std::string>{"minus_35#0", "minus_35#1", "minus_35#2", "minus_35#3",
                                        "minus_10#0", "minus_10#1", "minus_10#2", "minus_10#3"});
  CHECK(product == 388800);
  // the leftmost minus_35 leaf
  CHECK(format_condition(ls[0].conditions[0]) == "p-37=c");
  CHECK(ls[0].n() == 6);
  // stable across calls
  auto again = leaves(t);
  for (std::size_t i = 0; i < ls.size(); ++i) CHECK(again[i].id == ls[i].id);
}

TEST_CASE("format round-trips the uci theory") {
  Theory t = uci_theory();
  std::string text = format_theory(t);
  Theory back = parse_theory(text);
  CHECK(back == t);
  CHECK(format_theory(back) == text);
}

TEST_CASE("round-trip property over generated theories") {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 200; ++n) {
    Theory t = random_valid_theory(rng);
    std::string text = format_theory(t);
    Theory back = parse_theory(text);
    REQUIRE(back == t);
    CHECK(format_theory(back) == text);
  }
}

namespace {

// Random raw theory over at most three symbols with an independently computed
// verdict.
struct RawCase {
  Theory theory;
  bool valid = true;
};

RawCase random_raw(std::mt19937_64& rng) {
  const std::vector<std::string> names{"s0", "s1", "s2"};
  const std::vector<int> positions{-50, -7, -1, 1, 7, 0, 8, -51};
  std::size_t n_symbols = 1 + rng() % 3;
  std::vector<Rule> rules;
  bool valid = true;
  std::set<std::string> defined(names.begin(), names.begin() + static_cast<long>(n_symbols));
  std::map<std::string, std::set<std::string>> edges;
  std::set<std::string> referenced;

  for (std::size_t s = 0; s < n_symbols; ++s) {
    Rule r{names[s], {}};
    std::size_t n_clauses = 1 + rng() % 3;
    for (std::size_t c = 0; c < n_clauses; ++c) {
      Clause clause;
      std::size_t n_lits = 1 + rng() % 3;
      bool conds = false, syms = false;
      std::set<int> seen;
      for (std::size_t k = 0; k < n_lits; ++k) {
        bool want_cond = rng() % 2 == 0;
        if (want_cond) {
          // mostly legal positions
          int p = positions[rng() % 100 < 90 ? rng() % 5 : 5 + rng() % 3];
          clause.body.push_back(Condition{p, random_base(rng)});
          conds = true;
          if (!is_valid_position(p)) valid = false;
          if (!seen.insert(p).second) valid = false;
        } else {
          std::string target = rng() % 10 == 0 ? "zz" : names[rng() % 3];
          clause.body.push_back(SymbolRef{target});
          syms = true;
          referenced.insert(target);
          if (!defined.contains(target)) valid = false;
          edges[names[s]].insert(target);
        }
      }
      if (conds && syms) valid = false;
      r.clauses.push_back(std::move(clause));
    }
    rules.push_back(std::move(r));
  }

  // cycles: transitive closure
  std::map<std::string, std::set<std::string>> reach = edges;
  for (int iter = 0; iter < 4; ++iter)
    for (auto& [a, targets] : reach) {
      std::set<std::string> add;
      for (const auto& b : targets)
        if (reach.contains(b)) add.insert(reach[b].begin(), reach[b].end());
      targets.insert(add.begin(), add.end());
    }
  for (const auto& [a, targets] : reach)
    if (targets.contains(a)) valid = false;

  std::vector<std::string> roots;
  for (const auto& r : rules)
    if (!referenced.contains(r.head)) roots.push_back(r.head);
  if (roots.size() != 1) valid = false;

  return {Theory(std::move(rules), roots.size() == 1 ? roots[0] : ""), valid};
}

}  // namespace

TEST_CASE("validate agrees with generator ground truth") {
  std::mt19937_64 rng(5);
  int valid_seen = 0, invalid_seen = 0;
  for (int n = 0; n < 3000; ++n) {
    RawCase c = random_raw(rng);
    INFO(format_theory(c.theory));
    CHECK(validate(c.theory).ok() == c.valid);
    (c.valid ? valid_seen : invalid_seen)++;
  }
  CHECK(valid_seen > 50);
  CHECK(invalid_seen > 50);
}

TEST_CASE("leaf ids") {
  CHECK(LeafId::parse("minus_35#3") == LeafId{"minus_35", 3});
  CHECK_THROWS(LeafId::parse("minus_35"));
  CHECK_THROWS(LeafId::parse("#1"));
  CHECK_THROWS(LeafId::parse("a#x"));
}
