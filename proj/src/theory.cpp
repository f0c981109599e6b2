#include "mofn/theory.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <set>
#include <sstream>
#include <utility>

namespace mofn {

char to_char(Nucleotide n) {
  switch (n) {
    case Nucleotide::A: return 'a';
    case Nucleotide::C: return 'c';
    case Nucleotide::G: return 'g';
    case Nucleotide::T: return 't';
  }
  return '?';
}

bool parse_nucleotide(char c, Nucleotide& out) {
  switch (c) {
    case 'a': out = Nucleotide::A; return true;
    case 'c': out = Nucleotide::C; return true;
    case 'g': out = Nucleotide::G; return true;
    case 't': out = Nucleotide::T; return true;
    default: return false;
  }
}

bool Clause::is_leaf() const {
  return !body.empty() &&
         std::all_of(body.begin(), body.end(), [](const Literal& l) {
           return std::holds_alternative<Condition>(l);
         });
}

bool Clause::is_mixed() const {
  bool has_cond = false;
  bool has_sym = false;
  for (const auto& l : body) {
    if (std::holds_alternative<Condition>(l))
      has_cond = true;
    else
      has_sym = true;
  }
  return has_cond && has_sym;
}

std::string LeafId::str() const {
  return symbol + "#" + std::to_string(ordinal);
}

LeafId LeafId::parse(std::string_view text) {
  auto hash = text.rfind('#');
  if (hash == std::string_view::npos || hash == 0 || hash + 1 == text.size())
    throw std::invalid_argument("malformed leaf id '" + std::string(text) + "'");
  LeafId id;
  id.symbol = std::string(text.substr(0, hash));
  auto digits = text.substr(hash + 1);
  auto [ptr, ec] =
      std::from_chars(digits.data(), digits.data() + digits.size(), id.ordinal);
  if (ec != std::errc() || ptr != digits.data() + digits.size())
    throw std::invalid_argument("malformed leaf id '" + std::string(text) + "'");
  return id;
}

Theory::Theory(std::vector<Rule> rules, std::string root)
    : rules_(std::move(rules)), root_(std::move(root)) {
  for (std::size_t i = 0; i < rules_.size(); ++i)
    index_.emplace(rules_[i].head, i);
}

bool Theory::defines(std::string_view symbol) const {
  return index_.find(symbol) != index_.end();
}

const Rule* Theory::find(std::string_view symbol) const {
  auto it = index_.find(symbol);
  return it == index_.end() ? nullptr : &rules_[it->second];
}

std::size_t Theory::index_of(std::string_view symbol) const {
  auto it = index_.find(symbol);
  if (it == index_.end())
    throw TheoryError("undefined symbol '" + std::string(symbol) + "'");
  return it->second;
}

std::string Diagnostics::str() const {
  std::ostringstream os;
  for (const auto& e : errors)
    os << "line " << e.line << ": error: " << e.message << '\n';
  for (const auto& w : warnings)
    os << "line " << w.line << ": warning: " << w.message << '\n';
  return os.str();
}

ParseError::ParseError(int line, int column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

TheoryError::TheoryError(Diagnostics diagnostics)
    : std::runtime_error(diagnostics.str()),
      diagnostics_(std::move(diagnostics)) {}

TheoryError::TheoryError(const std::string& message)
    : std::runtime_error(message) {
  diagnostics_.errors.push_back({0, message});
}

namespace {

bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || c == '_'; }
bool is_ident_char(char c) {
  return is_ident_start(c) || (c >= '0' && c <= '9');
}

class RuleParser {
 public:
  explicit RuleParser(std::string_view text) : text_(text) {}

  Theory run() {
    std::vector<Rule> rules;
    std::map<std::string, std::size_t, std::less<>> index;
    std::set<std::string, std::less<>> referenced;

    skip_blank();
    while (!at_end()) {
      int head_line = line_;
      std::string head = identifier("clause head");
      Clause clause;
      clause.line = head_line;
      skip_blank();
      if (peek() == ':') {
        expect(":-");
        do {
          skip_blank();
          clause.body.push_back(literal());
          if (auto* s = std::get_if<SymbolRef>(&clause.body.back()))
            referenced.insert(s->name);
          skip_blank();
        } while (accept(','));
      }
      skip_blank();
      expect(".");

      auto [it, inserted] = index.emplace(head, rules.size());
      if (inserted) rules.push_back(Rule{head, {}});
      rules[it->second].clauses.push_back(std::move(clause));
      skip_blank();
    }

    std::string root;
    int candidates = 0;
    for (const auto& r : rules) {
      if (!referenced.contains(r.head)) {
        ++candidates;
        root = r.head;
      }
    }
    if (candidates != 1) root.clear();
    return Theory(std::move(rules), std::move(root));
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(line_, col_, what);
  }

  void skip_blank() {
    while (!at_end()) {
      char c = peek();
      if (c == '%') {
        while (!at_end() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  bool accept(char c) {
    if (peek() != c || at_end()) return false;
    advance();
    return true;
  }

  void expect(std::string_view token) {
    for (char c : token) {
      if (at_end() || peek() != c)
        fail("expected '" + std::string(token) + "'" + found());
      advance();
    }
  }

  std::string found() const {
    if (at_end()) return " but reached end of input";
    return std::string(" but found '") + peek() + "'";
  }

  std::string identifier(const char* what) {
    if (!is_ident_start(peek()) || at_end())
      fail(std::string("expected ") + what + found());
    std::string out;
    while (!at_end() && is_ident_char(peek())) out.push_back(advance());
    return out;
  }

  // A literal starting with 'p' is a condition when an optional '-' and a
  // digit run are followed by '='; otherwise it is a symbol name.
  Literal literal() {
    if (peek() == 'p') {
      std::size_t k = 1;
      if (peek(k) == '-') ++k;
      std::size_t digits = 0;
      while (std::isdigit(static_cast<unsigned char>(peek(k + digits)))) ++digits;
      if (digits > 0 && peek(k + digits) == '=') return condition();
      if (peek(1) == '-') {
        advance();
        advance();
        fail("malformed condition: expected digits and '='");
      }
    }
    return SymbolRef{identifier("symbol or condition")};
  }

  Condition condition() {
    advance();  // 'p'
    bool negative = accept('-');
    long value = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      value = value * 10 + (advance() - '0');
      if (value > 1'000'000) fail("position out of range");
    }
    expect("=");
    Condition c;
    c.position = static_cast<int>(negative ? -value : value);
    if (at_end() || !parse_nucleotide(peek(), c.base))
      fail("expected nucleotide a, c, g or t" + found());
    advance();
    if (is_ident_char(peek()) && !at_end())
      fail("unexpected character after condition" + found());
    return c;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

void check_cycles(const Theory& theory, Diagnostics& diag) {
  enum class Mark { white, grey, black };
  std::vector<Mark> mark(theory.rules().size(), Mark::white);
  std::vector<std::string> stack;

  std::function<void(std::size_t)> visit = [&](std::size_t i) {
    mark[i] = Mark::grey;
    const Rule& rule = theory.rules()[i];
    stack.push_back(rule.head);
    for (const auto& clause : rule.clauses) {
      for (const auto& lit : clause.body) {
        const auto* ref = std::get_if<SymbolRef>(&lit);
        if (!ref || !theory.defines(ref->name)) continue;
        std::size_t j = theory.index_of(ref->name);
        if (mark[j] == Mark::grey) {
          auto from = std::find(stack.begin(), stack.end(), ref->name);
          std::string path;
          for (auto it = from; it != stack.end(); ++it) path += *it + " -> ";
          path += ref->name;
          diag.errors.push_back({clause.line, "cyclic reference: " + path});
        } else if (mark[j] == Mark::white) {
          visit(j);
        }
      }
    }
    stack.pop_back();
    mark[i] = Mark::black;
  };

  for (std::size_t i = 0; i < mark.size(); ++i)
    if (mark[i] == Mark::white) visit(i);
}

std::string position_label(int p) {
  return p > 0 ? "+" + std::to_string(p) : std::to_string(p);
}

}  // namespace

Theory parse_theory_unchecked(std::string_view text) {
  return RuleParser(text).run();
}

Theory parse_theory(std::string_view text) {
  Theory theory = parse_theory_unchecked(text);
  Diagnostics diag = validate(theory);
  if (!diag.ok()) throw TheoryError(std::move(diag));
  return theory;
}

Diagnostics validate(const Theory& theory) {
  Diagnostics diag;
  if (theory.rules().empty()) {
    diag.errors.push_back({0, "theory is empty"});
    return diag;
  }

  std::set<std::string, std::less<>> referenced;
  for (const auto& rule : theory.rules()) {
    for (std::size_t ci = 0; ci < rule.clauses.size(); ++ci) {
      const Clause& clause = rule.clauses[ci];
      if (clause.body.empty()) {
        diag.warnings.push_back(
            {clause.line, "clause " + std::to_string(ci) + " of '" + rule.head +
                              "' has an empty body; '" + rule.head +
                              "' is unconditionally true"});
      }
      if (clause.is_mixed()) {
        diag.errors.push_back(
            {clause.line, "clause " + std::to_string(ci) + " of '" + rule.head +
                              "' mixes symbols and conditions"});
      }
      std::set<int> seen;
      for (const auto& lit : clause.body) {
        if (const auto* ref = std::get_if<SymbolRef>(&lit)) {
          referenced.insert(ref->name);
          if (!theory.defines(ref->name))
            diag.errors.push_back(
                {clause.line, "undefined symbol '" + ref->name + "'"});
          continue;
        }
        const auto& c = std::get<Condition>(lit);
        if (c.position == 0) {
          diag.errors.push_back({clause.line, "position 0 invalid"});
        } else if (!is_valid_position(c.position)) {
          diag.errors.push_back({clause.line, "position " +
                                                  position_label(c.position) +
                                                  " outside [-50,+7]"});
        }
        if (!seen.insert(c.position).second) {
          diag.errors.push_back({clause.line, "duplicate position p" +
                                                  std::to_string(c.position) +
                                                  " in clause of '" +
                                                  rule.head + "'"});
        }
      }
    }
  }

  check_cycles(theory, diag);

  std::vector<std::string> roots;
  for (const auto& rule : theory.rules())
    if (!referenced.contains(rule.head)) roots.push_back(rule.head);

  if (roots.empty()) {
    diag.errors.push_back({0, "no root: every head is referenced by a body"});
  } else if (roots.size() > 1) {
    std::string names;
    for (const auto& r : roots) names += (names.empty() ? "" : ", ") + r;
    diag.errors.push_back({0, "ambiguous root: candidates " + names});
  } else if (theory.root() != roots.front()) {
    diag.errors.push_back({0, "root '" + theory.root() +
                                  "' is not the unreferenced head '" +
                                  roots.front() + "'"});
  }
  return diag;
}

DropResult drop_symbol(const Theory& theory, std::string_view name) {
  if (!theory.defines(name))
    throw TheoryError("cannot drop undefined symbol '" + std::string(name) + "'");
  if (theory.root() == name)
    throw TheoryError("cannot drop the root symbol '" + std::string(name) + "'");

  DropResult out;
  std::vector<Rule> kept;
  for (const auto& rule : theory.rules()) {
    if (rule.head == name) continue;
    Rule r{rule.head, {}};
    for (const auto& clause : rule.clauses) {
      Clause c;
      c.line = clause.line;
      for (const auto& lit : clause.body) {
        const auto* ref = std::get_if<SymbolRef>(&lit);
        if (ref && ref->name == name) continue;
        c.body.push_back(lit);
      }
      if (c.body.size() != clause.body.size()) {
        if (c.body.empty()) {
          out.warnings.push_back(
              {clause.line, "clause of '" + rule.head + "' emptied by dropping '" +
                                std::string(name) + "'; '" + rule.head +
                                "' is unconditionally true"});
        } else {
          out.warnings.push_back(
              {clause.line, "clause of '" + rule.head + "' weakened: lost '" +
                                std::string(name) + "'"});
        }
      }
      r.clauses.push_back(std::move(c));
    }
    kept.push_back(std::move(r));
  }

  // Prune symbols that were only reachable through the dropped one.
  Theory staged(kept, theory.root());
  std::set<std::string, std::less<>> reachable;
  std::vector<std::string> work{theory.root()};
  while (!work.empty()) {
    std::string s = std::move(work.back());
    work.pop_back();
    if (!reachable.insert(s).second) continue;
    if (const Rule* r = staged.find(s))
      for (const auto& c : r->clauses)
        for (const auto& lit : c.body)
          if (const auto* ref = std::get_if<SymbolRef>(&lit))
            work.push_back(ref->name);
  }
  std::vector<Rule> pruned;
  for (auto& r : kept) {
    if (reachable.contains(r.head)) {
      pruned.push_back(std::move(r));
    } else {
      int line = r.clauses.empty() ? 0 : r.clauses.front().line;
      out.warnings.push_back(
          {line, "symbol '" + r.head + "' no longer reachable; removed"});
    }
  }
  out.theory = Theory(std::move(pruned), theory.root());
  return out;
}

std::vector<Leaf> leaves(const Theory& theory) {
  std::vector<Leaf> out;
  for (const auto& rule : theory.rules()) {
    for (std::size_t ci = 0; ci < rule.clauses.size(); ++ci) {
      const Clause& clause = rule.clauses[ci];
      if (!clause.is_leaf()) continue;
      Leaf leaf;
      leaf.id = LeafId{rule.head, ci};
      for (const auto& lit : clause.body)
        leaf.conditions.push_back(std::get<Condition>(lit));
      out.push_back(std::move(leaf));
    }
  }
  return out;
}

std::vector<Leaf> leaves_under(const Theory& theory, std::string_view symbol) {
  std::set<std::string, std::less<>> reachable;
  std::vector<std::string> work{std::string(symbol)};
  while (!work.empty()) {
    std::string s = std::move(work.back());
    work.pop_back();
    if (!reachable.insert(s).second) continue;
    if (const Rule* r = theory.find(s))
      for (const auto& c : r->clauses)
        for (const auto& lit : c.body)
          if (const auto* ref = std::get_if<SymbolRef>(&lit))
            work.push_back(ref->name);
  }
  std::vector<Leaf> all = leaves(theory);
  std::erase_if(all, [&](const Leaf& l) { return !reachable.contains(l.id.symbol); });
  return all;
}

std::string format_condition(const Condition& c) {
  return "p" + std::to_string(c.position) + "=" + to_char(c.base);
}

std::string format_theory(const Theory& theory) {
  std::string out;
  for (const auto& rule : theory.rules()) {
    for (const auto& clause : rule.clauses) {
      out += rule.head;
      if (!clause.body.empty()) {
        out += " :- ";
        for (std::size_t i = 0; i < clause.body.size(); ++i) {
          if (i) out += ", ";
          const auto& lit = clause.body[i];
          if (const auto* ref = std::get_if<SymbolRef>(&lit))
            out += ref->name;
          else
            out += format_condition(std::get<Condition>(lit));
        }
      }
      out += ".\n";
    }
  }
  return out;
}

}  // namespace mofn
