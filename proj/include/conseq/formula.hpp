#pragma once

#include <compare>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "language.hpp"

namespace conseq {

// An immutable term tree. Leaves are variables or nullary connectives;
// internal nodes are connectives applied to their arguments. Equality and
// ordering are structural, so formulas can live in ordered sets directly.
//
// Well-formedness against a signature (child count = arity) is checked by
// the paths that build formulas from untrusted input: parse_formula and
// make_app. Enumeration and substitution preserve it.
class Formula {
public:
  static Formula var(std::string name) { return Formula(true, std::move(name), {}); }

  static Formula app(std::string connective, std::vector<Formula> args = {}) {
    return Formula(false, std::move(connective), std::move(args));
  }

  // Arity-checked construction.
  static Formula make_app(const Language& lang, const std::string& connective, std::vector<Formula> args) {
    const Connective* c = lang.signature().find(connective);
    if (!c) throw error("unknown connective '" + connective + "'");
    if (static_cast<std::size_t>(c->arity) != args.size())
      throw error("connective '" + connective + "' expects " + std::to_string(c->arity) + " arguments, got " +
                  std::to_string(args.size()));
    return app(connective, std::move(args));
  }

  bool is_variable() const { return is_var_; }
  const std::string& symbol() const { return symbol_; }
  const std::vector<Formula>& args() const { return args_; }

  // Depth 0 for variables and nullary connectives; 1 + max child depth otherwise.
  int depth() const { return depth_; }

  std::strong_ordering operator<=>(const Formula& o) const {
    if (is_var_ != o.is_var_) return is_var_ ? std::strong_ordering::less : std::strong_ordering::greater;
    if (auto c = symbol_ <=> o.symbol_; c != 0) return c;
    if (auto c = args_.size() <=> o.args_.size(); c != 0) return c;
    for (std::size_t i = 0; i < args_.size(); ++i)
      if (auto c = args_[i] <=> o.args_[i]; c != 0) return c;
    return std::strong_ordering::equal;
  }

  bool operator==(const Formula& o) const { return (*this <=> o) == 0; }

  void collect_variables(std::set<std::string>& out) const {
    if (is_var_) {
      out.insert(symbol_);
      return;
    }
    for (const auto& a : args_) a.collect_variables(out);
  }

  bool well_formed(const Language& lang) const {
    if (is_var_) return lang.is_variable_name(symbol_);
    const Connective* c = lang.signature().find(symbol_);
    if (!c || static_cast<std::size_t>(c->arity) != args_.size()) return false;
    for (const auto& a : args_)
      if (!a.well_formed(lang)) return false;
    return true;
  }

private:
  Formula(bool is_var, std::string symbol, std::vector<Formula> args)
      : is_var_(is_var), symbol_(std::move(symbol)), args_(std::move(args)) {
    int d = 0;
    for (const auto& a : args_) d = std::max(d, a.depth() + 1);
    depth_ = d;
  }

  bool is_var_;
  std::string symbol_;
  std::vector<Formula> args_;
  int depth_ = 0;
};

using FormulaSet = std::set<Formula>;

inline std::set<std::string> variables_of(const Formula& f) {
  std::set<std::string> out;
  f.collect_variables(out);
  return out;
}

inline std::set<std::string> variables_of(const FormulaSet& fs) {
  std::set<std::string> out;
  for (const auto& f : fs) f.collect_variables(out);
  return out;
}

// Canonical prefix text; parse_formula inverts it.
inline std::string print_formula(const Formula& f) {
  if (f.is_variable() || f.args().empty()) return f.symbol();
  std::string out = "(" + f.symbol();
  for (const auto& a : f.args()) {
    out += ' ';
    out += print_formula(a);
  }
  out += ')';
  return out;
}

// `{f1,f2,...}` with members in structural order.
inline std::string print_formula_set(const FormulaSet& fs) {
  std::string out = "{";
  bool first = true;
  for (const auto& f : fs) {
    if (!first) out += ',';
    first = false;
    out += print_formula(f);
  }
  out += '}';
  return out;
}

// All distinct subformulas, outermost first, in a deterministic order.
inline std::vector<Formula> subformulas(const Formula& f) {
  std::vector<Formula> out;
  std::set<Formula> seen;
  auto walk = [&](auto&& self, const Formula& g) -> void {
    if (seen.insert(g).second) out.push_back(g);
    for (const auto& a : g.args()) self(self, a);
  };
  walk(walk, f);
  return out;
}

// Finite-support map from variables to formulas; identity elsewhere.
class Substitution {
public:
  Substitution() = default;

  explicit Substitution(std::map<std::string, Formula> mapping) : mapping_(std::move(mapping)) {}

  void set(const std::string& var, Formula image) { mapping_.insert_or_assign(var, std::move(image)); }

  const std::map<std::string, Formula>& mapping() const { return mapping_; }

  bool is_identity() const {
    for (const auto& [v, f] : mapping_)
      if (!(f.is_variable() && f.symbol() == v)) return false;
    return true;
  }

  // Restriction to the variables in `support`.
  Substitution restricted_to(const std::set<std::string>& support) const {
    std::map<std::string, Formula> out;
    for (const auto& [v, f] : mapping_)
      if (support.count(v)) out.emplace(v, f);
    return Substitution(std::move(out));
  }

  bool operator==(const Substitution& o) const { return mapping_ == o.mapping_; }

private:
  std::map<std::string, Formula> mapping_;
};

// Simultaneous homomorphic replacement.
inline Formula apply_substitution(const Substitution& sigma, const Formula& f) {
  if (f.is_variable()) {
    auto it = sigma.mapping().find(f.symbol());
    return it != sigma.mapping().end() ? it->second : f;
  }
  std::vector<Formula> args;
  args.reserve(f.args().size());
  for (const auto& a : f.args()) args.push_back(apply_substitution(sigma, a));
  return Formula::app(f.symbol(), std::move(args));
}

inline FormulaSet apply_substitution(const Substitution& sigma, const FormulaSet& fs) {
  FormulaSet out;
  for (const auto& f : fs) out.insert(apply_substitution(sigma, f));
  return out;
}

} // namespace conseq
