#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mofn/theory.hpp"

namespace mofn {

inline constexpr std::size_t kSequenceLength = 57;

using Sequence = std::array<Nucleotide, kSequenceLength>;

enum class Label : std::uint8_t { negative, positive };

inline char label_char(Label l) { return l == Label::positive ? '+' : '-'; }

/// Maps a window coordinate in [-50,-1] ∪ [+1,+7] to a sequence index.
constexpr std::size_t position_index(int p) {
  return static_cast<std::size_t>(p < 0 ? p + 50 : p + 49);
}

/// Inverse of position_index.
constexpr int index_position(std::size_t i) {
  return i < 50 ? static_cast<int>(i) - 50 : static_cast<int>(i) - 49;
}

inline bool holds(const Sequence& seq, const Condition& c) {
  return seq[position_index(c.position)] == c.base;
}

std::string sequence_string(const Sequence& seq);

struct Example {
  Label label = Label::negative;
  std::string name;
  Sequence sequence{};
};

class ExampleSet {
 public:
  ExampleSet() = default;
  explicit ExampleSet(std::vector<Example> examples);

  const std::vector<Example>& examples() const { return examples_; }
  std::size_t size() const { return examples_.size(); }
  bool empty() const { return examples_.empty(); }
  const Example& operator[](std::size_t i) const { return examples_[i]; }

  std::size_t positives() const { return positives_; }
  std::size_t negatives() const { return examples_.size() - positives_; }

  /// Subset in the order of `indices`.
  ExampleSet subset(const std::vector<std::size_t>& indices) const;

 private:
  std::vector<Example> examples_;
  std::size_t positives_ = 0;
};

class DataError : public std::runtime_error {
 public:
  DataError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

struct ParsedData {
  ExampleSet set;
  std::vector<Diagnostic> warnings;  // duplicate names
};

/// Lines `<+|->,<name>,<57 bases>`; whitespace inside fields is stripped and
/// blank lines are skipped. Throws DataError naming the offending line.
ParsedData parse_dataset_with_warnings(std::string_view text);
ExampleSet parse_dataset(std::string_view text);

enum class SplitMode { uniform, stratified };

/// Disjoint train/test subsets drawn without replacement.
///
/// The generator is std::mt19937_64 seeded with `seed`; indices are drawn by a
/// partial Fisher-Yates shuffle using unbiased rejection sampling on the raw
/// 64-bit outputs, so splits are identical across standard libraries. The
/// first `train_size` drawn indices form the training set, the next
/// `test_size` the test set, each kept in draw order.
///
/// Stratified mode shuffles each class separately and takes
/// round(size * class_share) from the positive class for each part.
std::pair<ExampleSet, ExampleSet> split(const ExampleSet& set,
                                        std::size_t train_size,
                                        std::size_t test_size,
                                        std::uint64_t seed,
                                        SplitMode mode = SplitMode::uniform);

}  // namespace mofn
