#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "bitset.hpp"
#include "core.hpp"
#include "formula.hpp"
#include "fragment.hpp"
#include "language.hpp"
#include "matrix.hpp"

namespace conseq {

namespace detail {

// Distinct restricted truth sets of `m` over the fragment, one per valuation
// class, as bit masks in (popcount, lexicographic) order.
inline std::vector<Bitset> sigma_masks(const FiniteMatrix& m, const IndexedFragment& frag,
                                       const Limits& limits = {}) {
  checked_pow(static_cast<std::uint64_t>(m.algebra().carrier_size()), frag.fragment().vars.size(),
              limits.max_valuations, "valuation count");
  auto slots = slot_map(
      std::set<std::string>(frag.fragment().vars.begin(), frag.fragment().vars.end()));
  std::vector<CompiledFormula> programs;
  programs.reserve(frag.size());
  for (const auto& f : frag.formulas()) programs.emplace_back(f, slots, m);

  std::set<Bitset> distinct;
  AssignmentOdometer odo(frag.fragment().vars.size(), m.algebra().carrier_size());
  do {
    Bitset truth(frag.size());
    for (std::size_t i = 0; i < programs.size(); ++i)
      if (m.designated(programs[i].run(odo.values()))) truth.set(i);
    distinct.insert(std::move(truth));
  } while (odo.advance());

  std::vector<Bitset> out(distinct.begin(), distinct.end());
  std::sort(out.begin(), out.end(), [](const Bitset& a, const Bitset& b) {
    auto ca = a.count(), cb = b.count();
    if (ca != cb) return ca < cb;
    return a < b;
  });
  return out;
}

} // namespace detail

// One restricted truth set: { alpha in fragment : v(alpha) designated } for
// some valuation v. `properly_extendable` records whether the full truth set
// admits a proper extension, which for a finite matrix holds exactly when the
// filter is not the whole carrier (send a fresh variable outside the filter).
struct SigmaSet {
  FormulaSet formulas;
  bool properly_extendable = true;
};

struct SigmaFamily {
  Fragment fragment;
  std::vector<SigmaSet> sets;
};

// All restricted truth sets of `m` over the fragment, duplicates collapsed.
inline SigmaFamily sigma_family(const FiniteMatrix& m, const Fragment& frag, const Language& lang,
                                const Limits& limits = {}) {
  IndexedFragment indexed(frag, lang, limits);
  SigmaFamily out;
  out.fragment = frag;
  bool proper = !m.filter_is_full();
  for (const auto& mask : detail::sigma_masks(m, indexed, limits))
    out.sets.push_back({indexed.to_set(mask), proper});
  return out;
}

// Membership in a fragment is decidable without enumerating it: exactly the
// formulas over the fragment's variables within its depth bound.
inline bool fragment_contains(const Fragment& frag, const Formula& f) {
  if (f.depth() > frag.depth) return false;
  std::set<std::string> frag_vars(frag.vars.begin(), frag.vars.end());
  for (const auto& v : variables_of(f))
    if (!frag_vars.count(v)) return false;
  return true;
}

// The truth-set reformulation of class entailment: X entails alpha iff every
// truth set of every family that contains X contains alpha. Requires the
// query to lie inside the families' common fragment.
inline bool entails_via_sigma(const std::vector<SigmaFamily>& families, const FormulaSet& premises,
                              const Formula& conclusion) {
  if (families.empty()) throw error("entails_via_sigma needs at least one family");
  for (const auto& fam : families)
    if (!(fam.fragment == families.front().fragment))
      throw error("sigma families must share one fragment");
  const Fragment& frag = families.front().fragment;
  for (const auto& p : premises)
    if (!fragment_contains(frag, p))
      throw error("fragment too small for the query: premise " + print_formula(p) + " lies outside it");
  if (!fragment_contains(frag, conclusion))
    throw error("fragment too small for the query: conclusion " + print_formula(conclusion) +
                " lies outside it");
  for (const auto& fam : families) {
    for (const auto& s : fam.sets) {
      bool contains_premises = true;
      for (const auto& p : premises) {
        if (!s.formulas.count(p)) {
          contains_premises = false;
          break;
        }
      }
      if (contains_premises && !s.formulas.count(conclusion)) return false;
    }
  }
  return true;
}

} // namespace conseq
