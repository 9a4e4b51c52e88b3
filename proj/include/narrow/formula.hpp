#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "narrow/error.hpp"

namespace narrow {

// Source identifiers: [A-Za-z_][A-Za-z0-9_]*, excluding the constant keywords.
inline bool is_identifier(std::string_view s) {
  if (s.empty() || s == "true" || s == "false") return false;
  auto word = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  };
  if (s.front() >= '0' && s.front() <= '9') return false;
  return std::all_of(s.begin(), s.end(), word);
}

class VariableId {
 public:
  explicit VariableId(std::string name) : name_(std::move(name)) {
    if (!is_identifier(name_)) throw VocabularyError("invalid variable name '" + name_ + "'");
  }

  // Names generated by the library carry a separator ('#' or '@') that source
  // identifiers cannot contain, so they never capture a user variable.
  static VariableId reserved(std::string name) {
    VariableId v;
    v.name_ = std::move(name);
    return v;
  }

  const std::string& name() const { return name_; }

  friend bool operator==(const VariableId&, const VariableId&) = default;
  friend auto operator<=>(const VariableId&, const VariableId&) = default;

 private:
  VariableId() = default;
  std::string name_;
};

// k-th copy of a variable; deterministic in (v, k) and injective for fixed k.
inline VariableId copy_of(const VariableId& v, std::size_t k) {
  return VariableId::reserved(v.name() + "#" + std::to_string(k));
}

}  // namespace narrow

template <>
struct std::hash<narrow::VariableId> {
  std::size_t operator()(const narrow::VariableId& v) const noexcept {
    return std::hash<std::string>{}(v.name());
  }
};

namespace narrow {

// Ordered set of variables. Position is the variable's index everywhere else
// in the library (instances, CNF numbering, solver branching order).
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<VariableId> vars) : vars_(std::move(vars)) {
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (!index_.emplace(vars_[i].name(), i).second)
        throw VocabularyError("duplicate variable '" + vars_[i].name() + "'");
    }
  }
  Vocabulary(std::initializer_list<std::string_view> names) {
    std::vector<VariableId> vs;
    for (auto n : names) vs.emplace_back(std::string(n));
    *this = Vocabulary(std::move(vs));
  }

  std::size_t size() const { return vars_.size(); }
  bool empty() const { return vars_.empty(); }
  const VariableId& operator[](std::size_t i) const { return vars_[i]; }
  const std::vector<VariableId>& vars() const { return vars_; }
  auto begin() const { return vars_.begin(); }
  auto end() const { return vars_.end(); }

  bool contains(const VariableId& v) const { return index_.count(v.name()) != 0; }
  std::optional<std::size_t> index_of(const VariableId& v) const {
    auto it = index_.find(v.name());
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.vars_ == b.vars_; }

 private:
  std::vector<VariableId> vars_;
  std::unordered_map<std::string, std::size_t> index_;
};

using VocabularyPtr = std::shared_ptr<const Vocabulary>;

inline VocabularyPtr make_vocabulary(std::vector<VariableId> vars) {
  return std::make_shared<const Vocabulary>(std::move(vars));
}

// A total valuation of a vocabulary, identified by its true variables.
class Instance {
 public:
  explicit Instance(VocabularyPtr vocab) : vocab_(std::move(vocab)), bits_(vocab_->size(), false) {}

  Instance(VocabularyPtr vocab, std::span<const VariableId> true_vars) : Instance(std::move(vocab)) {
    for (const auto& v : true_vars) set(v, true);
  }
  Instance(VocabularyPtr vocab, std::initializer_list<std::string_view> true_vars) : Instance(std::move(vocab)) {
    for (auto n : true_vars) set(VariableId(std::string(n)), true);
  }

  static Instance from_bits(VocabularyPtr vocab, std::vector<bool> bits) {
    Instance i(std::move(vocab));
    if (bits.size() != i.bits_.size()) throw VocabularyError("valuation size does not match vocabulary");
    i.bits_ = std::move(bits);
    return i;
  }

  const Vocabulary& vocabulary() const { return *vocab_; }
  const VocabularyPtr& vocabulary_ptr() const { return vocab_; }
  const std::vector<bool>& bits() const { return bits_; }

  bool value(std::size_t index) const { return bits_[index]; }
  bool value(const VariableId& v) const {
    auto idx = vocab_->index_of(v);
    if (!idx) throw VocabularyError("variable '" + v.name() + "' is not in the instance vocabulary");
    return bits_[*idx];
  }
  void set(std::size_t index, bool b) { bits_[index] = b; }
  void set(const VariableId& v, bool b) {
    auto idx = vocab_->index_of(v);
    if (!idx) throw VocabularyError("variable '" + v.name() + "' is not in the instance vocabulary");
    bits_[*idx] = b;
  }

  std::vector<VariableId> true_vars() const {
    std::vector<VariableId> out;
    for (std::size_t i = 0; i < bits_.size(); ++i)
      if (bits_[i]) out.push_back((*vocab_)[i]);
    return out;
  }
  std::size_t cardinality() const { return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true)); }

  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      if (!bits_[i]) continue;
      if (!first) s += ", ";
      s += (*vocab_)[i].name();
      first = false;
    }
    return s + "}";
  }

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.bits_ == b.bits_ && (a.vocab_ == b.vocab_ || *a.vocab_ == *b.vocab_);
  }

 private:
  VocabularyPtr vocab_;
  std::vector<bool> bits_;
};

// Canonical suite order: fewer true variables first, then lexicographic on
// the sorted names of the true variables.
inline bool canonical_less(const Instance& a, const Instance& b) {
  if (a.cardinality() != b.cardinality()) return a.cardinality() < b.cardinality();
  auto names = [](const Instance& i) {
    std::vector<std::string> n;
    for (const auto& v : i.true_vars()) n.push_back(v.name());
    std::sort(n.begin(), n.end());
    return n;
  };
  return names(a) < names(b);
}

enum class Op { Const, Var, Not, And, Or, Implies, Iff };

// Immutable propositional formula. Subtrees are shared, so copies are cheap
// and values may be used from several threads at once.
class Formula {
 public:
  static Formula constant(bool b) {
    static const Formula t(std::make_shared<const Node>(Node{Op::Const, true, std::nullopt, {}, {}}));
    static const Formula f(std::make_shared<const Node>(Node{Op::Const, false, std::nullopt, {}, {}}));
    return b ? t : f;
  }
  static Formula variable(VariableId v) {
    return Formula(std::make_shared<const Node>(Node{Op::Var, false, std::move(v), {}, {}}));
  }
  static Formula variable(std::string_view name) { return variable(VariableId(std::string(name))); }
  static Formula unary(Op op, Formula a) {
    return Formula(std::make_shared<const Node>(Node{op, false, std::nullopt, std::move(a.node_), {}}));
  }
  static Formula binary(Op op, Formula a, Formula b) {
    return Formula(
        std::make_shared<const Node>(Node{op, false, std::nullopt, std::move(a.node_), std::move(b.node_)}));
  }

  Op op() const { return node_->op; }
  bool value() const { return node_->value; }
  const VariableId& var() const { return *node_->var; }
  Formula lhs() const { return Formula(node_->lhs); }
  Formula rhs() const { return Formula(node_->rhs); }
  bool is_const() const { return op() == Op::Const; }

  // Stable identity of the shared node; used to memoize over DAG-shaped terms.
  const void* id() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.op() != b.op()) return false;
    switch (a.op()) {
      case Op::Const: return a.value() == b.value();
      case Op::Var: return a.var() == b.var();
      case Op::Not: return a.lhs() == b.lhs();
      default: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    }
  }

 private:
  struct Node {
    Op op;
    bool value;
    std::optional<VariableId> var;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

inline Formula var(std::string_view name) { return Formula::variable(name); }
inline Formula lit(bool b) { return Formula::constant(b); }
inline Formula lnot(Formula a) { return Formula::unary(Op::Not, std::move(a)); }
inline Formula land(Formula a, Formula b) { return Formula::binary(Op::And, std::move(a), std::move(b)); }
inline Formula lor(Formula a, Formula b) { return Formula::binary(Op::Or, std::move(a), std::move(b)); }
inline Formula implies(Formula a, Formula b) { return Formula::binary(Op::Implies, std::move(a), std::move(b)); }
inline Formula iff(Formula a, Formula b) { return Formula::binary(Op::Iff, std::move(a), std::move(b)); }

namespace detail {
inline Formula balanced(Op op, std::span<const Formula> fs) {
  if (fs.size() == 1) return fs.front();
  auto mid = fs.size() / 2;
  return Formula::binary(op, balanced(op, fs.first(mid)), balanced(op, fs.subspan(mid)));
}
}  // namespace detail

// Balanced trees keep recursion depth logarithmic for large encodings.
inline Formula conjunction(std::span<const Formula> fs) {
  return fs.empty() ? lit(true) : detail::balanced(Op::And, fs);
}
inline Formula disjunction(std::span<const Formula> fs) {
  return fs.empty() ? lit(false) : detail::balanced(Op::Or, fs);
}

// Variables in order of first occurrence (left to right), without repetition.
inline std::vector<VariableId> free_vars(const Formula& f) {
  std::vector<VariableId> out;
  std::unordered_set<std::string> seen;
  std::unordered_set<const void*> visited;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (!visited.insert(g.id()).second) return;
    switch (g.op()) {
      case Op::Const: return;
      case Op::Var:
        if (seen.insert(g.var().name()).second) out.push_back(g.var());
        return;
      case Op::Not: walk(g.lhs()); return;
      default: walk(g.lhs()); walk(g.rhs()); return;
    }
  };
  walk(f);
  return out;
}

// Evaluates f, looking variables up through `value_of(const VariableId&)`.
// Both operands are always visited, so every variable is looked up.
template <typename Valuation>
bool evaluate(const Formula& f, const Valuation& value_of) {
  switch (f.op()) {
    case Op::Const: return f.value();
    case Op::Var: return value_of(f.var());
    case Op::Not: return !evaluate(f.lhs(), value_of);
    default: break;
  }
  const bool a = evaluate(f.lhs(), value_of);
  const bool b = evaluate(f.rhs(), value_of);
  switch (f.op()) {
    case Op::And: return a && b;
    case Op::Or: return a || b;
    case Op::Implies: return !a || b;
    default: return a == b;
  }
}

// I |= f. Throws VocabularyError if f mentions a variable outside i's vocabulary.
inline bool eval(const Formula& f, const Instance& i) {
  return evaluate(f, [&](const VariableId& v) { return i.value(v); });
}

template <typename Map>
Formula substitute(const Formula& f, const Map& map_var) {
  switch (f.op()) {
    case Op::Const: return f;
    case Op::Var: return Formula::variable(map_var(f.var()));
    case Op::Not: return lnot(substitute(f.lhs(), map_var));
    default: return Formula::binary(f.op(), substitute(f.lhs(), map_var), substitute(f.rhs(), map_var));
  }
}

inline Formula rename(const Formula& f, std::size_t k) {
  return substitute(f, [k](const VariableId& v) { return copy_of(v, k); });
}

// Folds constants away; the result is either a constant or constant-free.
inline Formula simplify(const Formula& f) {
  switch (f.op()) {
    case Op::Const:
    case Op::Var: return f;
    case Op::Not: {
      auto a = simplify(f.lhs());
      return a.is_const() ? lit(!a.value()) : lnot(a);
    }
    default: break;
  }
  auto a = simplify(f.lhs());
  auto b = simplify(f.rhs());
  if (!a.is_const() && !b.is_const()) {
    if (a.id() == f.lhs().id() && b.id() == f.rhs().id()) return f;
    return Formula::binary(f.op(), a, b);
  }
  switch (f.op()) {
    case Op::And:
      if (a.is_const()) return a.value() ? b : a;
      return b.value() ? a : b;
    case Op::Or:
      if (a.is_const()) return a.value() ? a : b;
      return b.value() ? b : a;
    case Op::Implies:
      if (a.is_const()) return a.value() ? b : lit(true);
      return b.value() ? lit(true) : simplify(lnot(a));
    case Op::Iff:
      if (a.is_const() && b.is_const()) return lit(a.value() == b.value());
      if (a.is_const()) return a.value() ? b : simplify(lnot(b));
      return b.value() ? a : simplify(lnot(a));
    default: return f;
  }
}

enum class PrintStyle { Minimal, FullyParenthesized };

namespace detail {
inline int precedence(Op op) {
  switch (op) {
    case Op::Iff: return 1;
    case Op::Implies: return 2;
    case Op::Or: return 3;
    case Op::And: return 4;
    case Op::Not: return 5;
    default: return 6;
  }
}
inline const char* token(Op op) {
  switch (op) {
    case Op::And: return " & ";
    case Op::Or: return " | ";
    case Op::Implies: return " -> ";
    case Op::Iff: return " <-> ";
    default: return "";
  }
}
inline void print(const Formula& f, PrintStyle style, std::string& out) {
  switch (f.op()) {
    case Op::Const: out += f.value() ? "true" : "false"; return;
    case Op::Var: out += f.var().name(); return;
    case Op::Not: {
      out += '!';
      bool paren = style == PrintStyle::FullyParenthesized ? f.lhs().op() != Op::Var && f.lhs().op() != Op::Const
                                                            : precedence(f.lhs().op()) < precedence(Op::Not);
      if (paren) out += '(';
      print(f.lhs(), style, out);
      if (paren) out += ')';
      return;
    }
    default: break;
  }
  // &, |, <-> associate to the left; -> to the right.
  const bool right_assoc = f.op() == Op::Implies;
  auto child = [&](const Formula& c, bool is_left) {
    bool paren;
    if (style == PrintStyle::FullyParenthesized) {
      paren = c.op() != Op::Var && c.op() != Op::Const && c.op() != Op::Not;
    } else {
      int pc = precedence(c.op()), pf = precedence(f.op());
      paren = pc < pf || (pc == pf && (is_left == right_assoc));
    }
    if (paren) out += '(';
    print(c, style, out);
    if (paren) out += ')';
  };
  child(f.lhs(), true);
  out += token(f.op());
  child(f.rhs(), false);
}
}  // namespace detail

inline std::string to_string(const Formula& f, PrintStyle style = PrintStyle::Minimal) {
  std::string out;
  detail::print(f, style, out);
  return out;
}

// Evaluates a formula against assignments packed into a 64-bit mask
// (bit j = value of vocabulary variable j). Meant for exhaustive enumeration.
class CompiledFormula {
 public:
  CompiledFormula(const Formula& f, const Vocabulary& vocab) {
    if (vocab.size() > 64) throw CapExceeded("compiled evaluation supports at most 64 variables");
    compile(f, vocab);
  }

  bool operator()(std::uint64_t assignment) const {
    bool stack[kMaxStack];
    std::size_t sp = 0;
    for (const auto& ins : code_) {
      switch (ins.op) {
        case Op::Const: stack[sp++] = ins.arg != 0; break;
        case Op::Var: stack[sp++] = (assignment >> ins.arg) & 1u; break;
        case Op::Not: stack[sp - 1] = !stack[sp - 1]; break;
        case Op::And: --sp; stack[sp - 1] = stack[sp - 1] && stack[sp]; break;
        case Op::Or: --sp; stack[sp - 1] = stack[sp - 1] || stack[sp]; break;
        case Op::Implies: --sp; stack[sp - 1] = !stack[sp - 1] || stack[sp]; break;
        case Op::Iff: --sp; stack[sp - 1] = stack[sp - 1] == stack[sp]; break;
      }
    }
    return stack[0];
  }

 private:
  static constexpr std::size_t kMaxStack = 256;
  struct Instr {
    Op op;
    std::uint32_t arg;
  };
  std::size_t compile(const Formula& f, const Vocabulary& vocab) {
    switch (f.op()) {
      case Op::Const: code_.push_back({Op::Const, f.value() ? 1u : 0u}); return 1;
      case Op::Var: {
        auto idx = vocab.index_of(f.var());
        if (!idx) throw VocabularyError("variable '" + f.var().name() + "' is not in the vocabulary");
        code_.push_back({Op::Var, static_cast<std::uint32_t>(*idx)});
        return 1;
      }
      case Op::Not: {
        auto d = compile(f.lhs(), vocab);
        code_.push_back({Op::Not, 0});
        return d;
      }
      default: {
        auto dl = compile(f.lhs(), vocab);
        auto dr = compile(f.rhs(), vocab);
        code_.push_back({f.op(), 0});
        auto depth = std::max(dl, dr + 1);
        if (depth > kMaxStack) throw CapExceeded("formula too deep for compiled evaluation");
        return depth;
      }
    }
  }
  std::vector<Instr> code_;
};

}  // namespace narrow
