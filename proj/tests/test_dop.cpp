#include "doctest.h"
#include "support.hpp"

using namespace mofn;
using namespace testsupport;

namespace {

const DopSemantics kMin{AndRule::minimum};
const DopSemantics kProduct{AndRule::product};

}  // namespace

TEST_CASE("semantics names") {
  CHECK(DopSemantics::parse("min-max") == kMin);
  CHECK(DopSemantics::parse("product-max") == kProduct);
  CHECK(kProduct.name() == "product-max");
  CHECK_THROWS_AS(DopSemantics::parse("max-min"), std::invalid_argument);
}

TEST_CASE("a sequence satisfying a strict clause scores 1") {
  Theory t = uci_theory();
  ExampleSet set = uci_data();
  MProfile strict = strict_profile(t);
  Sequence seq{};
  seq.fill(Nucleotide::A);
  // satisfy the first clause of every symbol
  for (const auto& l : leaves(t))
    if (l.id.ordinal == 0)
      for (const auto& c : l.conditions) seq[position_index(c.position)] = c.base;
  REQUIRE(classify(t, strict, seq) == Label::positive);
  CHECK(dop_score(t, seq, kMin) == 1.0);
  CHECK(dop_score(t, seq, kProduct) == 1.0);
}

TEST_CASE("single leaf scores its satisfied fraction") {
  Theory t = parse_theory("t :- p-4=c, p-3=g, p-2=t, p-1=a.");
  Sequence seq{};
  seq.fill(Nucleotide::A);
  seq[position_index(-4)] = Nucleotide::C;
  seq[position_index(-3)] = Nucleotide::G;
  seq[position_index(-2)] = Nucleotide::T;
  CHECK(dop_score(t, seq) == 1.0);
  seq[position_index(-1)] = Nucleotide::C;
  CHECK(dop_score(t, seq) == 0.75);
}

TEST_CASE("scores match the recursive oracle") {
  std::mt19937_64 rng(47);
  for (int n = 0; n < 300; ++n) {
    Theory t = n % 5 == 0 ? uci_theory() : random_valid_theory(rng);
    std::string s = random_sequence(rng);
    for (auto sem : {kMin, kProduct}) {
      double got = dop_score(t, to_sequence(s), sem);
      CHECK(got == doctest::Approx(oracle_dop(t, s, sem.and_rule, t.root())).epsilon(1e-12));
      CHECK(got >= 0.0);
      CHECK(got <= 1.0);
    }
  }
}

TEST_CASE("calibrate_threshold") {
  std::vector<double> s{0.9, 0.8, 0.3, 0.1};
  CHECK(calibrate_threshold(s, 0.5) == 0.8);
  CHECK(std::count_if(s.begin(), s.end(), [](double x) { return x >= 0.8; }) == 2);

  std::vector<double> same(6, 0.4);
  double th = calibrate_threshold(same, 0.5);
  CHECK(std::count_if(same.begin(), same.end(), [&](double x) { return x >= th; }) == 6);

  CHECK(rank_cutoff(106, 0.5) == 53);
  CHECK(rank_cutoff(1, 0.5) == 1);
  CHECK(rank_cutoff(10, 0.01) == 1);
  CHECK_THROWS_AS(calibrate_threshold(std::vector<double>{}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(calibrate_threshold(s, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(calibrate_threshold(s, 1.0), std::invalid_argument);
}

TEST_CASE("distinct scores: exactly k positives") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 200; ++n) {
    std::vector<double> s(1 + rng() % 50);
    for (auto& x : s) x = u(rng);
    double f = 0.05 + 0.9 * u(rng);
    double th = calibrate_threshold(s, f);
    auto pos = std::count_if(s.begin(), s.end(), [&](double x) { return x >= th; });
    CHECK(static_cast<std::size_t>(pos) == rank_cutoff(s.size(), f));
  }
}

TEST_CASE("uci dop report") {
  Theory t = uci_theory();
  ExampleSet set = uci_data();
  for (auto sem : {kMin, kProduct}) {
    DopReport r = dop_classify_all(t, set, sem);
    CHECK(r.k == 53);
    CHECK(r.positive_fraction_used == 0.5);
    CHECK(r.counts.total() == 106);
    std::size_t above = 0, at_or_above = 0;
    for (const auto& e : r.entries) {
      above += e.score > r.threshold;
      at_or_above += e.score >= r.threshold;
      CHECK((e.predicted == Label::positive) == (e.score >= r.threshold));
    }
    CHECK(above < 53);
    CHECK(at_or_above >= 53);
  }
  CHECK(accuracy(dop_classify_all(t, set, kMin).counts) == doctest::Approx(87.0 / 106));
  CHECK(accuracy(dop_classify_all(t, set, kProduct).counts) == doctest::Approx(99.0 / 106));
}

TEST_CASE("one-example set") {
  ExampleSet set = parse_dataset("-,only," + std::string(57, 'g') + "\n");
  DopReport r = dop_classify_all(uci_theory(), set, kMin, 0.5);
  CHECK(r.k == 1);
  CHECK(r.entries[0].predicted == Label::positive);
  CHECK(r.counts.fp == 1);
}

TEST_CASE("four examples by hand") {
  Theory t = parse_theory("t :- p1=a, p2=c. t :- p3=g, p4=t, p5=t, p6=t.");
  auto seq = [](std::string head) {
    std::string s(kSequenceLength, 'c');
    s.replace(50, head.size(), head);  // index 50 is position +1
    return s;
  };
  // scores: 1.0, 0.75, 0.5, 0.25
  std::string text = "+,a," + seq("acgttt") + "\n" +  // both of clause 1
                     "+,b," + seq("ggggtt") + "\n" +  // 3/4 of clause 2
                     "-,c," + seq("ttgtgg") + "\n" +  // 2/4
                     "-,d," + seq("ttgccc") + "\n";   // 1/4
  ExampleSet set = parse_dataset(text);
  DopReport r = dop_classify_all(t, set);
  REQUIRE(r.entries.size() == 4);
  CHECK(r.entries[0].score == 1.0);
  CHECK(r.entries[1].score == 0.75);
  CHECK(r.entries[2].score == 0.5);
  CHECK(r.entries[3].score == 0.25);
  CHECK(r.threshold == 0.75);
  CHECK(r.counts == ConfusionCounts{2, 0, 2, 0});
}

TEST_CASE("one more satisfied condition never lowers the score") {
  Theory t = uci_theory();
  CompiledTheory compiled(t);
  auto ls = leaves(t);
  std::mt19937_64 rng(59);
  int checked = 0;
  for (int n = 0; checked < 1000; ++n) {
    Sequence seq = to_sequence(random_sequence(rng));
    const Leaf& l = ls[rng() % ls.size()];
    const Condition& c = l.conditions[rng() % l.conditions.size()];
    Nucleotide current = seq[position_index(c.position)];
    if (current == c.base) continue;
    // the substitution must not falsify another condition at that position
    bool breaks = false;
    for (const auto& other : ls)
      for (const auto& o : other.conditions) breaks |= o.position == c.position && o.base == current;
    if (breaks) continue;
    ++checked;
    Sequence better = seq;
    better[position_index(c.position)] = c.base;
    for (auto sem : {kMin, kProduct})
      CHECK(dop_score(compiled, better, sem) >= dop_score(compiled, seq, sem));
  }
}
