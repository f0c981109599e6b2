#include "mofn/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "mofn/random.hpp"

namespace mofn {

std::string sequence_string(const Sequence& seq) {
  std::string s;
  s.reserve(seq.size());
  for (auto n : seq) s.push_back(to_char(n));
  return s;
}

ExampleSet::ExampleSet(std::vector<Example> examples)
    : examples_(std::move(examples)) {
  positives_ = static_cast<std::size_t>(
      std::count_if(examples_.begin(), examples_.end(),
                    [](const Example& e) { return e.label == Label::positive; }));
}

ExampleSet ExampleSet::subset(const std::vector<std::size_t>& indices) const {
  std::vector<Example> out;
  out.reserve(indices.size());
  for (auto i : indices) out.push_back(examples_.at(i));
  return ExampleSet(std::move(out));
}

DataError::DataError(int line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message),
      line_(line) {}

namespace {

std::string strip_spaces(std::string_view field) {
  std::string out;
  for (char c : field)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

}  // namespace

ParsedData parse_dataset_with_warnings(std::string_view text) {
  std::vector<Example> examples;
  std::vector<Diagnostic> warnings;
  std::map<std::string, int> seen;

  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;

    if (strip_spaces(line).empty()) {
      if (end == text.size()) break;
      continue;
    }

    auto c1 = line.find(',');
    auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos || line.find(',', c2 + 1) != std::string_view::npos)
      throw DataError(line_no, "malformed line: expected <class>,<name>,<sequence>");

    std::string cls = strip_spaces(line.substr(0, c1));
    std::string name = strip_spaces(line.substr(c1 + 1, c2 - c1 - 1));
    std::string bases = strip_spaces(line.substr(c2 + 1));

    Example ex;
    if (cls == "+")
      ex.label = Label::positive;
    else if (cls == "-")
      ex.label = Label::negative;
    else
      throw DataError(line_no, "class must be '+' or '-', got '" + cls + "'");
    if (name.empty()) throw DataError(line_no, "empty example name");
    ex.name = name;

    if (bases.size() != kSequenceLength)
      throw DataError(line_no, "sequence length " + std::to_string(bases.size()) +
                                   ", expected " + std::to_string(kSequenceLength));
    for (std::size_t i = 0; i < bases.size(); ++i) {
      if (!parse_nucleotide(bases[i], ex.sequence[i]))
        throw DataError(line_no, std::string("illegal character '") + bases[i] +
                                     "' at sequence offset " + std::to_string(i));
    }

    if (auto [it, fresh] = seen.emplace(name, line_no); !fresh)
      warnings.push_back({line_no, "duplicate example name '" + name +
                                       "' (first on line " +
                                       std::to_string(it->second) + ")"});
    examples.push_back(std::move(ex));
    if (end == text.size()) break;
  }
  return {ExampleSet(std::move(examples)), std::move(warnings)};
}

ExampleSet parse_dataset(std::string_view text) {
  return parse_dataset_with_warnings(text).set;
}

namespace {

// Draws `count` distinct entries of `pool` (partial Fisher-Yates), in draw order.
std::vector<std::size_t> draw(std::vector<std::size_t>& pool, std::size_t count,
                              std::mt19937_64& gen) {
  for (std::size_t i = 0; i < count; ++i) {
    auto j = i + uniform_below(gen, pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  return {pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count)};
}

}  // namespace

std::pair<ExampleSet, ExampleSet> split(const ExampleSet& set,
                                        std::size_t train_size,
                                        std::size_t test_size,
                                        std::uint64_t seed, SplitMode mode) {
  if (train_size + test_size > set.size())
    throw std::invalid_argument(
        "split sizes " + std::to_string(train_size) + "+" +
        std::to_string(test_size) + " exceed " + std::to_string(set.size()) +
        " available examples");

  std::mt19937_64 gen(seed);

  if (mode == SplitMode::uniform) {
    std::vector<std::size_t> pool(set.size());
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    auto picked = draw(pool, train_size + test_size, gen);
    std::vector<std::size_t> train(picked.begin(),
                                   picked.begin() + static_cast<std::ptrdiff_t>(train_size));
    std::vector<std::size_t> test(picked.begin() + static_cast<std::ptrdiff_t>(train_size),
                                  picked.end());
    return {set.subset(train), set.subset(test)};
  }

  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < set.size(); ++i)
    (set[i].label == Label::positive ? pos : neg).push_back(i);

  const double share = set.empty() ? 0.0 : static_cast<double>(pos.size()) / set.size();
  auto quota = [&](std::size_t size, std::size_t pos_left, std::size_t neg_left) {
    auto p = static_cast<std::size_t>(std::llround(share * static_cast<double>(size)));
    p = std::min(p, pos_left);
    if (size - p > neg_left) p = size - neg_left;
    return p;
  };
  std::size_t train_pos = quota(train_size, pos.size(), neg.size());
  std::size_t test_pos =
      quota(test_size, pos.size() - train_pos, neg.size() - (train_size - train_pos));

  auto pos_pick = draw(pos, train_pos + test_pos, gen);
  auto neg_pick = draw(neg, (train_size - train_pos) + (test_size - test_pos), gen);

  std::vector<std::size_t> train(pos_pick.begin(),
                                 pos_pick.begin() + static_cast<std::ptrdiff_t>(train_pos));
  train.insert(train.end(), neg_pick.begin(),
               neg_pick.begin() + static_cast<std::ptrdiff_t>(train_size - train_pos));
  std::vector<std::size_t> test(pos_pick.begin() + static_cast<std::ptrdiff_t>(train_pos),
                                pos_pick.end());
  test.insert(test.end(),
              neg_pick.begin() + static_cast<std::ptrdiff_t>(train_size - train_pos),
              neg_pick.end());
  return {set.subset(train), set.subset(test)};
}

}  // namespace mofn
