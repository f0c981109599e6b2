#pragma once

// Propositional Horn-clause domain theories over position/nucleotide
// conditions.
//
// A theory is an AND-OR structure: a symbol with several clauses is the OR of
// its clauses, a clause body is the AND of its literals, and a clause whose
// literals are all conditions is a leaf. Only leaves are reinterpreted as
// M-of-N concepts; everything above them stays strictly boolean.

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mofn {

enum class Nucleotide : std::uint8_t { A, C, G, T };

char to_char(Nucleotide n);
/// Lower-case a/c/g/t only; anything else yields false.
bool parse_nucleotide(char c, Nucleotide& out);

inline constexpr int kFirstPosition = -50;
inline constexpr int kLastPosition = 7;

constexpr bool is_valid_position(int p) {
  return p >= kFirstPosition && p <= kLastPosition && p != 0;
}

struct Condition {
  int position = 0;  // validated by validate(), not at construction
  Nucleotide base = Nucleotide::A;

  friend bool operator==(const Condition&, const Condition&) = default;
};

struct SymbolRef {
  std::string name;

  friend bool operator==(const SymbolRef&, const SymbolRef&) = default;
};

using Literal = std::variant<SymbolRef, Condition>;

struct Clause {
  std::vector<Literal> body;
  int line = 0;  // source line, 0 when synthesized; ignored by ==

  bool is_leaf() const;
  bool is_mixed() const;

  friend bool operator==(const Clause& a, const Clause& b) {
    return a.body == b.body;
  }
};

struct Rule {
  std::string head;
  std::vector<Clause> clauses;

  friend bool operator==(const Rule&, const Rule&) = default;
};

/// Identifies a leaf by its owning symbol and the 0-based index of the clause
/// under that symbol. Rendered as "<symbol>#<ordinal>".
struct LeafId {
  std::string symbol;
  std::size_t ordinal = 0;

  std::string str() const;
  static LeafId parse(std::string_view text);

  friend auto operator<=>(const LeafId&, const LeafId&) = default;
};

struct Leaf {
  LeafId id;
  std::vector<Condition> conditions;

  std::size_t n() const { return conditions.size(); }
};

class Theory {
 public:
  Theory() = default;

  /// Rules in first-definition order. The root is the unique head that no
  /// body references; empty when there is none or more than one.
  Theory(std::vector<Rule> rules, std::string root);

  const std::string& root() const { return root_; }
  const std::vector<Rule>& rules() const { return rules_; }

  bool defines(std::string_view symbol) const;
  /// nullptr when the symbol is not defined.
  const Rule* find(std::string_view symbol) const;
  std::size_t index_of(std::string_view symbol) const;

  friend bool operator==(const Theory& a, const Theory& b) {
    return a.root_ == b.root_ && a.rules_ == b.rules_;
  }

 private:
  std::vector<Rule> rules_;
  std::string root_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

struct Diagnostic {
  int line = 0;
  std::string message;
};

struct Diagnostics {
  std::vector<Diagnostic> errors;
  std::vector<Diagnostic> warnings;

  bool ok() const { return errors.empty(); }
  std::string str() const;
};

/// Syntax error in a rule file.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// A syntactically valid theory that violates the theory invariants.
class TheoryError : public std::runtime_error {
 public:
  explicit TheoryError(Diagnostics diagnostics);
  explicit TheoryError(const std::string& message);
  const Diagnostics& diagnostics() const { return diagnostics_; }

 private:
  Diagnostics diagnostics_;
};

/// Syntax-only parse. Throws ParseError; never checks the theory invariants.
Theory parse_theory_unchecked(std::string_view text);

/// Parse and validate. Throws ParseError or TheoryError.
Theory parse_theory(std::string_view text);

/// Reports every invariant violation as data: undefined symbols, cycles,
/// missing or ambiguous root, mixed bodies, duplicate positions within a leaf,
/// positions outside [-50,+7] or equal to 0. Empty bodies are warnings.
Diagnostics validate(const Theory& theory);

struct DropResult {
  Theory theory;
  std::vector<Diagnostic> warnings;
};

/// Removes the symbol's rules and every literal that references it. Symbols
/// no longer reachable from the root are pruned as well. Throws TheoryError
/// for an unknown symbol or the root.
DropResult drop_symbol(const Theory& theory, std::string_view name);

/// Leaves in deterministic order: symbols in first-definition order, clauses
/// in file order within a symbol.
std::vector<Leaf> leaves(const Theory& theory);

/// Leaves reachable from `symbol` (same order as leaves()).
std::vector<Leaf> leaves_under(const Theory& theory, std::string_view symbol);

/// Canonical text: one clause per line, ", " between literals. Reparses to an
/// equal Theory.
std::string format_theory(const Theory& theory);

std::string format_condition(const Condition& c);

}  // namespace mofn
