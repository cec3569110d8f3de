#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "formula.hpp"
#include "fragment.hpp"
#include "language.hpp"

namespace conseq {

namespace detail {

// n^k with a ceiling; throws resource_error past `cap`.
inline std::uint64_t checked_pow(std::uint64_t n, std::uint64_t k, std::uint64_t cap,
                                 const char* what) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    if (n != 0 && r > cap / n) throw resource_error(std::string(what) + " exceeds the configured cap");
    r *= n;
  }
  if (r > cap) throw resource_error(std::string(what) + " exceeds the configured cap");
  return r;
}

} // namespace detail

// A finite algebra over carrier {0..n-1}: one total operation table per
// connective of the signature. Tables are flattened row-major with the first
// argument most significant.
class FiniteAlgebra {
public:
  FiniteAlgebra() = default;

  FiniteAlgebra(Signature sig, int carrier_size, std::vector<std::vector<int>> tables)
      : signature_(std::move(sig)), carrier_(carrier_size), tables_(std::move(tables)) {
    if (carrier_ <= 0) throw error("carrier size must be positive");
    if (tables_.size() != signature_.connectives().size())
      throw error("expected one table per connective");
    for (std::size_t i = 0; i < tables_.size(); ++i) {
      const Connective& c = signature_.connectives()[i];
      std::uint64_t expect = detail::checked_pow(static_cast<std::uint64_t>(carrier_),
                                                 static_cast<std::uint64_t>(c.arity),
                                                 std::uint64_t{1} << 32, "operation table");
      if (tables_[i].size() != expect)
        throw error("table for '" + c.name + "' has " + std::to_string(tables_[i].size()) +
                    " entries, expected " + std::to_string(expect));
      for (int e : tables_[i])
        if (e < 0 || e >= carrier_)
          throw error("table for '" + c.name + "' contains out-of-carrier element " + std::to_string(e));
    }
  }

  // Build tables by evaluating `fn(connective_index, args)` pointwise.
  template <typename Fn>
  static FiniteAlgebra from_function(Signature sig, int carrier_size, Fn&& fn) {
    std::vector<std::vector<int>> tables;
    for (std::size_t ci = 0; ci < sig.connectives().size(); ++ci) {
      int k = sig.connectives()[ci].arity;
      std::uint64_t rows = 1;
      for (int i = 0; i < k; ++i) rows *= static_cast<std::uint64_t>(carrier_size);
      std::vector<int> table(rows);
      std::vector<int> args(k, 0);
      for (std::uint64_t r = 0; r < rows; ++r) {
        std::uint64_t rest = r;
        for (int i = k - 1; i >= 0; --i) {
          args[i] = static_cast<int>(rest % carrier_size);
          rest /= carrier_size;
        }
        table[r] = fn(ci, args);
      }
      tables.push_back(std::move(table));
    }
    return FiniteAlgebra(std::move(sig), carrier_size, std::move(tables));
  }

  const Signature& signature() const { return signature_; }
  int carrier_size() const { return carrier_; }
  const std::vector<std::vector<int>>& tables() const { return tables_; }

  int apply(std::size_t connective_index, const std::vector<int>& args) const {
    const std::vector<int>& table = tables_[connective_index];
    std::uint64_t idx = 0;
    for (int a : args) idx = idx * static_cast<std::uint64_t>(carrier_) + static_cast<std::uint64_t>(a);
    return table[idx];
  }

  bool operator==(const FiniteAlgebra&) const = default;

private:
  Signature signature_;
  int carrier_ = 1;
  std::vector<std::vector<int>> tables_;
};

// An algebra with a designated filter D. D may be empty or the whole carrier.
class FiniteMatrix {
public:
  FiniteMatrix() = default;

  FiniteMatrix(FiniteAlgebra algebra, std::vector<int> filter)
      : algebra_(std::move(algebra)), filter_(std::move(filter)) {
    std::sort(filter_.begin(), filter_.end());
    filter_.erase(std::unique(filter_.begin(), filter_.end()), filter_.end());
    for (int e : filter_)
      if (e < 0 || e >= algebra_.carrier_size())
        throw error("filter element " + std::to_string(e) + " lies outside the carrier");
    designated_.assign(static_cast<std::size_t>(algebra_.carrier_size()), false);
    for (int e : filter_) designated_[static_cast<std::size_t>(e)] = true;
  }

  const FiniteAlgebra& algebra() const { return algebra_; }
  const std::vector<int>& filter() const { return filter_; }
  bool designated(int element) const { return designated_[static_cast<std::size_t>(element)]; }
  bool filter_is_full() const { return filter_.size() == static_cast<std::size_t>(algebra_.carrier_size()); }

  bool operator==(const FiniteMatrix& o) const { return algebra_ == o.algebra_ && filter_ == o.filter_; }

private:
  FiniteAlgebra algebra_;
  std::vector<int> filter_;
  std::vector<bool> designated_;
};

// A nonempty finite sequence of matrices over one signature.
class MatrixClass {
public:
  MatrixClass() = default;

  explicit MatrixClass(std::vector<FiniteMatrix> members) : members_(std::move(members)) {
    if (members_.empty()) throw error("matrix class must be nonempty");
    for (const auto& m : members_)
      if (!(m.algebra().signature() == members_[0].algebra().signature()))
        throw error("matrix class members must share one signature");
  }

  MatrixClass(std::initializer_list<FiniteMatrix> members)
      : MatrixClass(std::vector<FiniteMatrix>(members)) {}

  const std::vector<FiniteMatrix>& members() const { return members_; }
  const Signature& signature() const { return members_.front().algebra().signature(); }

private:
  std::vector<FiniteMatrix> members_;
};

using Valuation = std::map<std::string, int>;

// Value of `f` under `v`, by structural recursion through the tables.
inline int evaluate(const FiniteMatrix& m, const Valuation& v, const Formula& f) {
  if (f.is_variable()) {
    auto it = v.find(f.symbol());
    if (it == v.end()) throw error("valuation does not bind variable '" + f.symbol() + "'");
    int e = it->second;
    if (e < 0 || e >= m.algebra().carrier_size())
      throw error("valuation maps '" + f.symbol() + "' outside the carrier");
    return e;
  }
  auto ci = m.algebra().signature().index_of(f.symbol());
  if (!ci) throw error("formula connective '" + f.symbol() + "' is not in the matrix signature");
  if (f.args().size() != static_cast<std::size_t>(m.algebra().signature().connectives()[*ci].arity))
    throw error("arity mismatch at connective '" + f.symbol() + "'");
  std::vector<int> args;
  args.reserve(f.args().size());
  for (const auto& a : f.args()) args.push_back(evaluate(m, v, a));
  return m.algebra().apply(*ci, args);
}

inline bool designates(const FiniteMatrix& m, const Valuation& v, const Formula& f) {
  return m.designated(evaluate(m, v, f));
}

namespace detail {

// Postorder program for evaluating one formula as a stack machine; avoids
// per-node map lookups inside valuation loops.
class CompiledFormula {
public:
  CompiledFormula(const Formula& f, const std::map<std::string, std::size_t>& var_slots,
                  const FiniteMatrix& m) {
    compile(f, var_slots, m);
    stack_.reserve(instrs_.size());
  }

  int run(const std::vector<int>& assignment) const {
    stack_.clear();
    for (const auto& in : instrs_) {
      if (in.table == nullptr) {
        stack_.push_back(assignment[in.slot]);
      } else {
        std::uint64_t idx = 0;
        std::size_t base = stack_.size() - in.arity;
        for (std::size_t i = 0; i < in.arity; ++i)
          idx = idx * in.carrier + static_cast<std::uint64_t>(stack_[base + i]);
        stack_.resize(base);
        stack_.push_back((*in.table)[idx]);
      }
    }
    return stack_.back();
  }

private:
  struct Instr {
    const std::vector<int>* table; // nullptr for a variable load
    std::size_t arity;
    std::uint64_t carrier;
    std::size_t slot;
  };

  void compile(const Formula& f, const std::map<std::string, std::size_t>& var_slots,
               const FiniteMatrix& m) {
    if (f.is_variable()) {
      auto it = var_slots.find(f.symbol());
      if (it == var_slots.end()) throw error("unbound variable '" + f.symbol() + "'");
      instrs_.push_back({nullptr, 0, 0, it->second});
      return;
    }
    auto ci = m.algebra().signature().index_of(f.symbol());
    if (!ci) throw error("formula connective '" + f.symbol() + "' is not in the matrix signature");
    const Connective& c = m.algebra().signature().connectives()[*ci];
    if (f.args().size() != static_cast<std::size_t>(c.arity))
      throw error("arity mismatch at connective '" + f.symbol() + "'");
    for (const auto& a : f.args()) compile(a, var_slots, m);
    instrs_.push_back({&m.algebra().tables()[*ci], f.args().size(),
                       static_cast<std::uint64_t>(m.algebra().carrier_size()), 0});
  }

  std::vector<Instr> instrs_;
  mutable std::vector<int> stack_;
};

// Iterates every total assignment of carrier elements to `num_vars` slots.
class AssignmentOdometer {
public:
  AssignmentOdometer(std::size_t num_vars, int carrier) : values_(num_vars, 0), carrier_(carrier) {}

  const std::vector<int>& values() const { return values_; }

  bool advance() {
    std::size_t pos = values_.size();
    while (pos > 0) {
      --pos;
      if (++values_[pos] < carrier_) return true;
      values_[pos] = 0;
    }
    return false;
  }

private:
  std::vector<int> values_;
  int carrier_;
};

inline std::map<std::string, std::size_t> slot_map(const std::set<std::string>& vars) {
  std::map<std::string, std::size_t> slots;
  std::size_t i = 0;
  for (const auto& v : vars) slots.emplace(v, i++);
  return slots;
}

} // namespace detail

// X entails alpha in m: every valuation on the occurring variables that
// designates all of X designates alpha. Exact; valuations range only over
// occurring variables, which is sound because evaluation is local to them.
inline bool entails_matrix(const FiniteMatrix& m, const FormulaSet& premises, const Formula& conclusion,
                           const Limits& limits = {}) {
  std::set<std::string> vars = variables_of(premises);
  conclusion.collect_variables(vars);
  detail::checked_pow(static_cast<std::uint64_t>(m.algebra().carrier_size()), vars.size(),
                      limits.max_valuations, "valuation count");
  auto slots = detail::slot_map(vars);

  std::vector<detail::CompiledFormula> xs;
  xs.reserve(premises.size());
  for (const auto& p : premises) xs.emplace_back(p, slots, m);
  detail::CompiledFormula goal(conclusion, slots, m);

  detail::AssignmentOdometer odo(vars.size(), m.algebra().carrier_size());
  do {
    bool premises_hold = true;
    for (const auto& x : xs) {
      if (!m.designated(x.run(odo.values()))) {
        premises_hold = false;
        break;
      }
    }
    if (premises_hold && !m.designated(goal.run(odo.values()))) return false;
  } while (odo.advance());
  return true;
}

// Entailment in every member simultaneously.
inline bool entails_class(const MatrixClass& cls, const FormulaSet& premises, const Formula& conclusion,
                          const Limits& limits = {}) {
  for (const auto& m : cls.members())
    if (!entails_matrix(m, premises, conclusion, limits)) return false;
  return true;
}

// The consequence operator restricted to a fragment:
// { alpha in fragment : X entails alpha }. Requires vars(X) within the fragment.
inline FormulaSet cn_restricted(const MatrixClass& cls, const FormulaSet& premises, const Fragment& frag,
                                const Language& lang, const Limits& limits = {}) {
  std::set<std::string> frag_vars(frag.vars.begin(), frag.vars.end());
  for (const auto& v : variables_of(premises))
    if (!frag_vars.count(v)) throw error("premise variable '" + v + "' is not a fragment variable");
  FormulaSet out;
  for (const auto& alpha : enumerate_fragment(frag, lang, limits))
    if (entails_class(cls, premises, alpha, limits)) out.insert(alpha);
  return out;
}

// Whether Cn(X) is everything. Decided exactly: for every member, either no
// valuation on vars(X) designates all of X, or the member's filter is the
// whole carrier. (Equivalently, X entails a fresh variable.)
inline bool is_inconsistent(const MatrixClass& cls, const FormulaSet& premises, const Limits& limits = {}) {
  std::set<std::string> vars = variables_of(premises);
  for (const auto& m : cls.members()) {
    if (m.filter_is_full()) continue;
    detail::checked_pow(static_cast<std::uint64_t>(m.algebra().carrier_size()), vars.size(),
                        limits.max_valuations, "valuation count");
    auto slots = detail::slot_map(vars);
    std::vector<detail::CompiledFormula> xs;
    for (const auto& p : premises) xs.emplace_back(p, slots, m);
    detail::AssignmentOdometer odo(vars.size(), m.algebra().carrier_size());
    bool designating_valuation = false;
    do {
      bool all = true;
      for (const auto& x : xs) {
        if (!m.designated(x.run(odo.values()))) {
          all = false;
          break;
        }
      }
      if (all) {
        designating_valuation = true;
        break;
      }
    } while (odo.advance());
    if (designating_valuation) return false;
  }
  return true;
}

} // namespace conseq
