#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "atlas.hpp"
#include "bitset.hpp"
#include "core.hpp"
#include "formula.hpp"
#include "fragment.hpp"
#include "language.hpp"
#include "matrix.hpp"
#include "search.hpp"
#include "sigma.hpp"

namespace conseq {

enum class Outcome { no_counterexample, counterexample };

// X u Y entails alpha with Y in fresh variables and Y consistent, yet X alone
// does not entail alpha.
struct UniformSyntacticWitness {
  FormulaSet premises;       // X
  FormulaSet fresh_premises; // Y
  Formula conclusion;        // alpha
};

// Pairwise variable-disjoint sets, each consistent, whose union is inconsistent.
struct CouniformSyntacticWitness {
  std::vector<FormulaSet> family;
};

// Truth sets Z_i containing X and Z_j containing Y (Z_j properly extendable)
// that no chart's truth set simultaneously matches outside vars(Y) and covers
// inside vars(Y).
struct UniformBundleWitness {
  FormulaSet premises;       // X
  FormulaSet fresh_premises; // Y
  std::size_t chart_i = 0;
  std::size_t chart_j = 0;
  FormulaSet set_i; // Z_i
  FormulaSet set_j; // Z_j
};

// Pairwise variable-disjoint sets, each inside a properly extendable truth
// set of some matrix, whose union is inside none.
struct CouniformClassWitness {
  std::vector<FormulaSet> family;
};

// Two entailment routes disagreeing on one query (conservativity and the
// extension sub-checks).
struct DisagreementWitness {
  FormulaSet premises;
  Formula conclusion;
  bool base_result = false;
  bool other_result = false;
};

using Witness = std::variant<std::monostate, UniformSyntacticWitness, CouniformSyntacticWitness,
                             UniformBundleWitness, CouniformClassWitness, DisagreementWitness>;

struct Verdict {
  Outcome outcome = Outcome::no_counterexample;
  Witness witness;
  SearchStats stats;

  bool found() const { return outcome == Outcome::counterexample; }
};

namespace detail {

inline void check_budget(const SearchBudget& b) {
  if (b.max_vars < 1 || b.max_depth < 0 || b.max_set_size < 1 || b.max_family_size < 1)
    throw error("search budget bounds must be positive");
}

// Search variables: the language's declared variables, padded with fresh ones
// up to `max_vars` when the pool is unbounded.
inline std::vector<std::string> search_vars(const Language& lang, int max_vars) {
  std::vector<std::string> vars = lang.named_vars();
  if (vars.size() > static_cast<std::size_t>(max_vars)) vars.resize(static_cast<std::size_t>(max_vars));
  std::set<std::string> avoid(vars.begin(), vars.end());
  while (lang.pool_unbounded() && vars.size() < static_cast<std::size_t>(max_vars)) {
    std::string v = fresh_variable(lang, avoid);
    avoid.insert(v);
    vars.push_back(v);
  }
  if (vars.empty()) throw error("no search variables available");
  return vars;
}

// Ordered (X, Y, alpha) candidates: total |X|+|Y| ascending, then |X|
// ascending, then X, Y, alpha lexicographic by fragment index. Y is nonempty.
// `visit` returns false to stop; the function returns true when the whole
// space was enumerated.
template <typename Visit>
bool for_each_xy_alpha(std::size_t n, int max_set_size, Visit&& visit) {
  std::size_t smax = static_cast<std::size_t>(max_set_size);
  std::vector<std::size_t> xs, ys;
  for (std::size_t t = 1; t <= 2 * smax; ++t) {
    for (std::size_t sx = (t > smax ? t - smax : 0); sx <= std::min(t - 1, smax); ++sx) {
      std::size_t sy = t - sx;
      if (sy < 1 || sy > smax) continue;
      if (!first_combination(xs, n, sx)) continue;
      do {
        if (!first_combination(ys, n, sy)) break;
        do {
          for (std::size_t a = 0; a < n; ++a)
            if (!visit(xs, ys, a)) return false;
        } while (next_combination(ys, n));
      } while (next_combination(xs, n));
    }
  }
  return true;
}

// Ordered (X, Y) candidates including empty sets, same ordering.
template <typename Visit>
bool for_each_xy(std::size_t n, int max_set_size, Visit&& visit) {
  std::size_t smax = static_cast<std::size_t>(max_set_size);
  std::vector<std::size_t> xs, ys;
  for (std::size_t t = 0; t <= 2 * smax; ++t) {
    for (std::size_t sx = (t > smax ? t - smax : 0); sx <= std::min(t, smax); ++sx) {
      std::size_t sy = t - sx;
      if (sy > smax) continue;
      if (!first_combination(xs, n, sx)) continue;
      do {
        if (!first_combination(ys, n, sy)) break;
        do {
          if (!visit(xs, ys)) return false;
        } while (next_combination(ys, n));
      } while (next_combination(xs, n));
    }
  }
  return true;
}

// Ordered families {X_1..X_m}: m in [2..max_family], member sizes
// non-decreasing in [1..max_set], members of equal size strictly increasing
// lexicographically; families ordered by total size, then m, then members.
template <typename Visit>
bool for_each_family(std::size_t n, int max_set_size, int max_family_size, Visit&& visit) {
  std::size_t smax = static_cast<std::size_t>(max_set_size);
  std::size_t fmax = static_cast<std::size_t>(max_family_size);
  if (fmax < 2) return true;

  std::vector<std::vector<std::size_t>> family;
  // recursive descent over members given the sizes
  auto members = [&](auto&& self, const std::vector<std::size_t>& sizes, std::size_t pos) -> bool {
    if (pos == sizes.size()) return visit(family);
    std::vector<std::size_t> combo;
    if (!first_combination(combo, n, sizes[pos])) return true;
    do {
      if (pos > 0 && sizes[pos] == sizes[pos - 1] && !(family[pos - 1] < combo)) continue;
      family.push_back(combo);
      bool keep = self(self, sizes, pos + 1);
      family.pop_back();
      if (!keep) return false;
    } while (next_combination(combo, n));
    return true;
  };
  // non-decreasing compositions of t into m parts from [min_part..smax]
  auto compositions = [&](auto&& self, std::vector<std::size_t>& sizes, std::size_t remaining,
                          std::size_t parts_left, std::size_t min_part) -> bool {
    if (parts_left == 0) {
      if (remaining != 0) return true;
      family.clear();
      return members(members, sizes, 0);
    }
    for (std::size_t s = min_part; s <= std::min(smax, remaining); ++s) {
      if (remaining - s > (parts_left - 1) * smax) continue;
      sizes.push_back(s);
      bool keep = self(self, sizes, remaining - s, parts_left - 1, s);
      sizes.pop_back();
      if (!keep) return false;
    }
    return true;
  };

  for (std::size_t t = 2; t <= fmax * smax; ++t) {
    for (std::size_t m = 2; m <= std::min(fmax, t); ++m) {
      std::vector<std::size_t> sizes;
      if (!compositions(compositions, sizes, t, m, 1)) return false;
    }
  }
  return true;
}

inline std::uint64_t ordered_cap(const SearchBudget& b) { return b.samples - b.samples / 2; }
inline std::uint64_t random_cap(const SearchBudget& b) { return b.samples / 2; }

inline std::uint32_t combo_var_mask(const IndexedFragment& frag, const std::vector<std::size_t>& combo) {
  std::uint32_t mask = 0;
  for (auto i : combo) mask |= frag.var_mask(i);
  return mask;
}

inline FormulaSet combo_to_set(const IndexedFragment& frag, const std::vector<std::size_t>& combo) {
  FormulaSet out;
  for (auto i : combo) out.insert(frag.at(i));
  return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Syntactic uniformity: search for X, Y, alpha with vars(Y) disjoint from
// vars(X u {alpha}), Y consistent, X u Y |- alpha but X |/- alpha.
// ---------------------------------------------------------------------------
inline Verdict check_uniform_syntactic(const MatrixClass& cls, const Language& lang, const SearchBudget& b,
                                       const Limits& limits = {}) {
  detail::check_budget(b);
  std::vector<std::string> vars = detail::search_vars(lang, b.max_vars);
  IndexedFragment frag(Fragment{vars, b.max_depth}, lang, limits);
  const std::size_t n = frag.size();

  SearchStats stats;
  std::uint64_t subset_count = detail::sat_subsets_up_to(n, static_cast<std::uint64_t>(b.max_set_size));
  stats.space = detail::sat_mul(detail::sat_mul(subset_count, subset_count), n);

  std::optional<UniformSyntacticWitness> hit;
  auto fresh_vars_disjoint = [&](const std::vector<std::size_t>& xs, const std::vector<std::size_t>& ys,
                                 std::size_t a) {
    std::uint32_t ymask = detail::combo_var_mask(frag, ys);
    std::uint32_t xamask = detail::combo_var_mask(frag, xs) | frag.var_mask(a);
    return (ymask & xamask) == 0;
  };
  auto test = [&](const std::vector<std::size_t>& xs, const std::vector<std::size_t>& ys, std::size_t a) {
    ++stats.examined;
    FormulaSet X = detail::combo_to_set(frag, xs);
    FormulaSet Y = detail::combo_to_set(frag, ys);
    const Formula& alpha = frag.at(a);
    if (entails_class(cls, X, alpha, limits)) return false;
    if (is_inconsistent(cls, Y, limits)) return false;
    FormulaSet XY = X;
    XY.insert(Y.begin(), Y.end());
    if (!entails_class(cls, XY, alpha, limits)) return false;
    hit = UniformSyntacticWitness{std::move(X), std::move(Y), alpha};
    return true;
  };

  std::uint64_t cap = detail::ordered_cap(b);
  bool completed = detail::for_each_xy_alpha(n, b.max_set_size, [&](const auto& xs, const auto& ys, std::size_t a) {
    if (!fresh_vars_disjoint(xs, ys, a)) return true; // structurally invalid, keep going
    if (stats.examined >= cap) return false;
    return !test(xs, ys, a);
  });
  if (hit) return {Outcome::counterexample, std::move(*hit), stats};
  if (completed) {
    stats.exhausted = true;
    return {Outcome::no_counterexample, {}, stats};
  }

  detail::Rng rng(b.seed ^ 0x756e6966ull); // per-check stream
  for (std::uint64_t i = 0; i < detail::random_cap(b); ++i) {
    auto xs = detail::random_subset(rng, n, static_cast<std::size_t>(b.max_set_size));
    auto ys = detail::random_subset(rng, n, static_cast<std::size_t>(b.max_set_size));
    std::size_t a = static_cast<std::size_t>(rng.below(n));
    if (ys.empty() || !fresh_vars_disjoint(xs, ys, a)) continue;
    if (test(xs, ys, a)) return {Outcome::counterexample, std::move(*hit), stats};
  }
  return {Outcome::no_counterexample, {}, stats};
}

inline bool revalidate(const MatrixClass& cls, const UniformSyntacticWitness& w, const Limits& limits = {}) {
  std::set<std::string> yvars = variables_of(w.fresh_premises);
  std::set<std::string> xavars = variables_of(w.premises);
  w.conclusion.collect_variables(xavars);
  for (const auto& v : yvars)
    if (xavars.count(v)) return false;
  if (w.fresh_premises.empty()) return false;
  if (is_inconsistent(cls, w.fresh_premises, limits)) return false;
  FormulaSet both = w.premises;
  both.insert(w.fresh_premises.begin(), w.fresh_premises.end());
  return entails_class(cls, both, w.conclusion, limits) && !entails_class(cls, w.premises, w.conclusion, limits);
}

// ---------------------------------------------------------------------------
// Syntactic couniformity: search for pairwise variable-disjoint consistent
// sets whose union is inconsistent. (Their variables never exhaust the pool:
// it is unbounded.)
// ---------------------------------------------------------------------------
inline Verdict check_couniform_syntactic(const MatrixClass& cls, const Language& lang, const SearchBudget& b,
                                         const Limits& limits = {}) {
  detail::check_budget(b);
  std::vector<std::string> vars = detail::search_vars(lang, b.max_vars);
  IndexedFragment frag(Fragment{vars, b.max_depth}, lang, limits);
  const std::size_t n = frag.size();

  SearchStats stats;
  std::uint64_t subset_count = detail::sat_subsets_up_to(n, static_cast<std::uint64_t>(b.max_set_size));
  stats.space = 1;
  for (int i = 0; i < b.max_family_size; ++i) stats.space = detail::sat_mul(stats.space, subset_count);

  std::optional<CouniformSyntacticWitness> hit;
  auto disjoint = [&](const std::vector<std::vector<std::size_t>>& family) {
    std::uint32_t seen = 0;
    for (const auto& member : family) {
      std::uint32_t m = detail::combo_var_mask(frag, member);
      if (m & seen) return false;
      seen |= m;
    }
    return true;
  };
  auto test = [&](const std::vector<std::vector<std::size_t>>& family) {
    ++stats.examined;
    std::vector<FormulaSet> sets;
    FormulaSet unioned;
    for (const auto& member : family) {
      sets.push_back(detail::combo_to_set(frag, member));
      unioned.insert(sets.back().begin(), sets.back().end());
    }
    for (const auto& s : sets)
      if (is_inconsistent(cls, s, limits)) return false;
    if (!is_inconsistent(cls, unioned, limits)) return false;
    hit = CouniformSyntacticWitness{std::move(sets)};
    return true;
  };

  std::uint64_t cap = detail::ordered_cap(b);
  bool completed =
      detail::for_each_family(n, b.max_set_size, b.max_family_size, [&](const auto& family) {
        if (!disjoint(family)) return true;
        if (stats.examined >= cap) return false;
        return !test(family);
      });
  if (hit) return {Outcome::counterexample, std::move(*hit), stats};
  if (completed) {
    stats.exhausted = true;
    return {Outcome::no_counterexample, {}, stats};
  }

  detail::Rng rng(b.seed ^ 0x636f756eull);
  for (std::uint64_t i = 0; i < detail::random_cap(b); ++i) {
    std::size_t m = 2 + static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(b.max_family_size) - 1));
    std::vector<std::vector<std::size_t>> family;
    for (std::size_t j = 0; j < m; ++j) {
      auto member = detail::random_subset(rng, n, static_cast<std::size_t>(b.max_set_size));
      if (member.empty()) member.push_back(rng.below(n));
      family.push_back(std::move(member));
    }
    if (!disjoint(family)) continue;
    if (test(family)) return {Outcome::counterexample, std::move(*hit), stats};
  }
  return {Outcome::no_counterexample, {}, stats};
}

inline bool revalidate(const MatrixClass& cls, const CouniformSyntacticWitness& w, const Limits& limits = {}) {
  if (w.family.size() < 2) return false;
  std::set<std::string> seen;
  FormulaSet unioned;
  for (const auto& member : w.family) {
    for (const auto& v : variables_of(member)) {
      if (seen.count(v)) return false;
      seen.insert(v);
    }
    if (is_inconsistent(cls, member, limits)) return false;
    unioned.insert(member.begin(), member.end());
  }
  return is_inconsistent(cls, unioned, limits);
}

// ---------------------------------------------------------------------------
// Semantic uniformity of a bundle, over restricted truth sets: X inside Z_i,
// Y inside a properly extendable Z_j, such that no chart k has a truth set
// agreeing with Z_i outside vars(Y) and covering Z_j inside vars(Y).
// ---------------------------------------------------------------------------
inline Verdict check_uniform_bundle(const Atlas& atlas, const Fragment& fragment, const Language& lang,
                                    const SearchBudget& b, const Limits& limits = {}) {
  detail::check_budget(b);
  IndexedFragment frag(fragment, lang, limits);
  const std::size_t n = frag.size();
  const std::size_t charts = atlas.chart_count();

  std::vector<std::vector<Bitset>> sigma(charts);
  std::vector<bool> proper(charts);
  for (std::size_t i = 0; i < charts; ++i) {
    sigma[i] = detail::sigma_masks(atlas.chart(i), frag, limits);
    proper[i] = !atlas.chart(i).filter_is_full();
  }

  SearchStats stats;
  std::uint64_t subset_count = detail::sat_subsets_up_to(n, static_cast<std::uint64_t>(b.max_set_size));
  std::uint64_t tuples = 0;
  for (std::size_t i = 0; i < charts; ++i)
    for (std::size_t j = 0; j < charts; ++j)
      tuples = detail::sat_add(tuples, detail::sat_mul(sigma[i].size(), sigma[j].size()));
  stats.space = detail::sat_mul(detail::sat_mul(subset_count, subset_count), tuples);

  std::optional<UniformBundleWitness> hit;
  // The consequent of the uniformity condition for (vars(Y), Z_i, Z_j).
  auto consequent_holds = [&](std::uint32_t yvars, const Bitset& zi, const Bitset& zj) {
    Bitset outside = frag.formulas_avoiding(yvars);
    Bitset inside = frag.formulas_within(yvars);
    Bitset zi_outside = zi & outside;
    Bitset zj_inside = zj & inside;
    for (std::size_t k = 0; k < charts; ++k)
      for (const Bitset& zk : sigma[k])
        if ((zk & outside) == zi_outside && zj_inside.is_subset_of(zk)) return true;
    return false;
  };

  auto test = [&](const std::vector<std::size_t>& xs, const std::vector<std::size_t>& ys, std::size_t i,
                  std::size_t zi_idx, std::size_t j, std::size_t zj_idx) {
    ++stats.examined;
    const Bitset& zi = sigma[i][zi_idx];
    const Bitset& zj = sigma[j][zj_idx];
    std::uint32_t yvars = detail::combo_var_mask(frag, ys);
    if (consequent_holds(yvars, zi, zj)) return false;
    hit = UniformBundleWitness{detail::combo_to_set(frag, xs), detail::combo_to_set(frag, ys),
                               i, j, frag.to_set(zi), frag.to_set(zj)};
    return true;
  };

  std::uint64_t cap = detail::ordered_cap(b);
  Bitset xbits(n), ybits(n);
  auto tuples_for_pair = [&](const std::vector<std::size_t>& xs, const std::vector<std::size_t>& ys) {
    std::uint32_t ymask = detail::combo_var_mask(frag, ys);
    std::uint32_t xmask = detail::combo_var_mask(frag, xs);
    if (xmask & ymask) return true; // X must avoid vars(Y)
    xbits = Bitset::of(n, xs);
    ybits = Bitset::of(n, ys);
    for (std::size_t i = 0; i < charts; ++i)
      for (std::size_t zi = 0; zi < sigma[i].size(); ++zi) {
        if (!xbits.is_subset_of(sigma[i][zi])) continue;
        for (std::size_t j = 0; j < charts; ++j) {
          if (!proper[j]) continue;
          for (std::size_t zj = 0; zj < sigma[j].size(); ++zj) {
            if (!ybits.is_subset_of(sigma[j][zj])) continue;
            if (stats.examined >= cap) return false;
            if (test(xs, ys, i, zi, j, zj)) return false;
          }
        }
      }
    return true;
  };

  bool completed = detail::for_each_xy(n, b.max_set_size, tuples_for_pair);
  if (hit) return {Outcome::counterexample, std::move(*hit), stats};
  if (completed) {
    stats.exhausted = true;
    return {Outcome::no_counterexample, {}, stats};
  }

  cap = b.samples; // allow the sampled phase the remainder of the budget
  detail::Rng rng(b.seed ^ 0x62756e64ull);
  for (std::uint64_t r = 0; r < detail::random_cap(b) && stats.examined < cap; ++r) {
    auto xs = detail::random_subset(rng, n, static_cast<std::size_t>(b.max_set_size));
    auto ys = detail::random_subset(rng, n, static_cast<std::size_t>(b.max_set_size));
    if (!tuples_for_pair(xs, ys) && hit) break;
  }
  if (hit) return {Outcome::counterexample, std::move(*hit), stats};
  return {Outcome::no_counterexample, {}, stats};
}

inline bool revalidate(const Atlas& atlas, const Fragment& fragment, const Language& lang,
                       const UniformBundleWitness& w, const Limits& limits = {}) {
  IndexedFragment frag(fragment, lang, limits);
  if (w.chart_i >= atlas.chart_count() || w.chart_j >= atlas.chart_count()) return false;
  if (atlas.chart(w.chart_j).filter_is_full()) return false;

  Bitset zi = frag.to_mask(w.set_i);
  Bitset zj = frag.to_mask(w.set_j);
  auto in_family = [&](std::size_t chart, const Bitset& z) {
    for (const auto& s : detail::sigma_masks(atlas.chart(chart), frag, limits))
      if (s == z) return true;
    return false;
  };
  if (!in_family(w.chart_i, zi) || !in_family(w.chart_j, zj)) return false;

  Bitset xb = frag.to_mask(w.premises);
  Bitset yb = frag.to_mask(w.fresh_premises);
  std::uint32_t yvars = frag.var_mask(yb);
  if (frag.var_mask(xb) & yvars) return false;
  if (!xb.is_subset_of(zi) || !yb.is_subset_of(zj)) return false;

  Bitset outside = frag.formulas_avoiding(yvars);
  Bitset inside = frag.formulas_within(yvars);
  Bitset zi_outside = zi & outside;
  Bitset zj_inside = zj & inside;
  for (std::size_t k = 0; k < atlas.chart_count(); ++k)
    for (const auto& zk : detail::sigma_masks(atlas.chart(k), frag, limits))
      if ((zk & outside) == zi_outside && zj_inside.is_subset_of(zk)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Semantic couniformity of a class: pairwise variable-disjoint sets, each
// inside a properly extendable truth set of some member, whose union is
// inside none.
// ---------------------------------------------------------------------------
inline Verdict check_couniform_class(const MatrixClass& cls, const Fragment& fragment, const Language& lang,
                                     const SearchBudget& b, const Limits& limits = {}) {
  detail::check_budget(b);
  IndexedFragment frag(fragment, lang, limits);
  const std::size_t n = frag.size();
  const std::size_t members = cls.members().size();

  std::vector<std::vector<Bitset>> sigma(members);
  std::vector<bool> proper(members);
  for (std::size_t i = 0; i < members; ++i) {
    sigma[i] = detail::sigma_masks(cls.members()[i], frag, limits);
    proper[i] = !cls.members()[i].filter_is_full();
  }
  auto inside_proper_set = [&](const Bitset& x) {
    for (std::size_t i = 0; i < members; ++i) {
      if (!proper[i]) continue;
      for (const auto& z : sigma[i])
        if (x.is_subset_of(z)) return true;
    }
    return false;
  };

  SearchStats stats;
  std::uint64_t subset_count = detail::sat_subsets_up_to(n, static_cast<std::uint64_t>(b.max_set_size));
  stats.space = 1;
  for (int i = 0; i < b.max_family_size; ++i) stats.space = detail::sat_mul(stats.space, subset_count);

  std::optional<CouniformClassWitness> hit;
  auto disjoint = [&](const std::vector<std::vector<std::size_t>>& family) {
    std::uint32_t seen = 0;
    for (const auto& member : family) {
      std::uint32_t m = detail::combo_var_mask(frag, member);
      if (m & seen) return false;
      seen |= m;
    }
    return true;
  };
  auto test = [&](const std::vector<std::vector<std::size_t>>& family) {
    ++stats.examined;
    Bitset unioned(n);
    for (const auto& member : family)
      for (auto idx : member) unioned.set(idx);
    for (const auto& member : family)
      if (!inside_proper_set(Bitset::of(n, member))) return false;
    if (inside_proper_set(unioned)) return false;
    std::vector<FormulaSet> sets;
    for (const auto& member : family) sets.push_back(detail::combo_to_set(frag, member));
    hit = CouniformClassWitness{std::move(sets)};
    return true;
  };

  std::uint64_t cap = detail::ordered_cap(b);
  bool completed =
      detail::for_each_family(n, b.max_set_size, b.max_family_size, [&](const auto& family) {
        if (!disjoint(family)) return true;
        if (stats.examined >= cap) return false;
        return !test(family);
      });
  if (hit) return {Outcome::counterexample, std::move(*hit), stats};
  if (completed) {
    stats.exhausted = true;
    return {Outcome::no_counterexample, {}, stats};
  }

  detail::Rng rng(b.seed ^ 0x636c6173ull);
  for (std::uint64_t i = 0; i < detail::random_cap(b); ++i) {
    std::size_t m = 2 + static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(b.max_family_size) - 1));
    std::vector<std::vector<std::size_t>> family;
    for (std::size_t j = 0; j < m; ++j) {
      auto member = detail::random_subset(rng, n, static_cast<std::size_t>(b.max_set_size));
      if (member.empty()) member.push_back(rng.below(n));
      family.push_back(std::move(member));
    }
    if (!disjoint(family)) continue;
    if (test(family)) return {Outcome::counterexample, std::move(*hit), stats};
  }
  return {Outcome::no_counterexample, {}, stats};
}

inline bool revalidate(const MatrixClass& cls, const Fragment& fragment, const Language& lang,
                       const CouniformClassWitness& w, const Limits& limits = {}) {
  if (w.family.size() < 2) return false;
  IndexedFragment frag(fragment, lang, limits);
  std::vector<std::vector<Bitset>> sigma;
  std::vector<bool> proper;
  for (const auto& m : cls.members()) {
    sigma.push_back(detail::sigma_masks(m, frag, limits));
    proper.push_back(!m.filter_is_full());
  }
  auto inside_proper_set = [&](const Bitset& x) {
    for (std::size_t i = 0; i < sigma.size(); ++i) {
      if (!proper[i]) continue;
      for (const auto& z : sigma[i])
        if (x.is_subset_of(z)) return true;
    }
    return false;
  };
  std::set<std::string> seen;
  Bitset unioned(frag.size());
  for (const auto& member : w.family) {
    for (const auto& v : variables_of(member)) {
      if (seen.count(v)) return false;
      seen.insert(v);
    }
    Bitset mb = frag.to_mask(member);
    if (!inside_proper_set(mb)) return false;
    unioned = unioned | mb;
  }
  return !inside_proper_set(unioned);
}

// ---------------------------------------------------------------------------
// Bounded model check: m is a model of the class consequence on the searched
// space if no (X, alpha) has the class entailing alpha from X while m does
// not. A negative answer carries the witness pair.
// ---------------------------------------------------------------------------
struct ModelCheckResult {
  bool is_model = true;
  std::optional<std::pair<FormulaSet, Formula>> witness;
  SearchStats stats;
};

inline ModelCheckResult is_model(const FiniteMatrix& m, const MatrixClass& cls, const Fragment& fragment,
                                 const Language& lang, const SearchBudget& b, const Limits& limits = {}) {
  detail::check_budget(b);
  IndexedFragment frag(fragment, lang, limits);
  const std::size_t n = frag.size();
  ModelCheckResult out;
  out.stats.space =
      detail::sat_mul(detail::sat_subsets_up_to(n, static_cast<std::uint64_t>(b.max_set_size)), n);

  auto test = [&](const std::vector<std::size_t>& xs, std::size_t a) {
    ++out.stats.examined;
    FormulaSet X = detail::combo_to_set(frag, xs);
    const Formula& alpha = frag.at(a);
    if (entails_class(cls, X, alpha, limits) && !entails_matrix(m, X, alpha, limits)) {
      out.is_model = false;
      out.witness = {std::move(X), alpha};
      return true;
    }
    return false;
  };

  std::uint64_t cap = detail::ordered_cap(b);
  detail::SubsetStream xs_stream(n, static_cast<std::size_t>(b.max_set_size));
  std::vector<std::size_t> xs;
  bool completed = true;
  while (xs_stream.next(xs)) {
    for (std::size_t a = 0; a < n; ++a) {
      if (out.stats.examined >= cap) {
        completed = false;
        break;
      }
      if (test(xs, a)) return out;
    }
    if (!completed) break;
  }
  if (completed) {
    out.stats.exhausted = true;
    return out;
  }

  detail::Rng rng(b.seed ^ 0x6d6f64656cull);
  for (std::uint64_t i = 0; i < detail::random_cap(b); ++i) {
    auto xs_r = detail::random_subset(rng, n, static_cast<std::size_t>(b.max_set_size));
    if (test(xs_r, static_cast<std::size_t>(rng.below(n)))) return out;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Single-matrix consistency report: the four conformity verdicts plus the
// product-atlas summary. The bundle check applies only when the members share
// one algebra.
// ---------------------------------------------------------------------------
struct SingleMatrixReport {
  Verdict uniform_syntactic;
  Verdict couniform_syntactic;
  std::optional<Verdict> uniform_bundle;
  Verdict couniform_class;
  std::size_t product_carrier = 0;
  std::vector<std::size_t> product_filter_sizes;
  bool product_within_cap = true;
  bool consistent_with_single_matrix = true;
};

inline SingleMatrixReport single_matrix_report(const MatrixClass& cls, const Language& lang,
                                               const Fragment& fragment, const SearchBudget& b,
                                               const Limits& limits = {}) {
  SingleMatrixReport out;
  Language search_lang(lang.signature(), fragment.vars, lang.pool_unbounded());
  out.uniform_syntactic = check_uniform_syntactic(cls, search_lang, b, limits);
  out.couniform_syntactic = check_couniform_syntactic(cls, search_lang, b, limits);
  out.couniform_class = check_couniform_class(cls, fragment, search_lang, b, limits);

  bool one_algebra = true;
  for (const auto& m : cls.members())
    if (!(m.algebra() == cls.members().front().algebra())) one_algebra = false;
  if (one_algebra) {
    std::vector<std::vector<int>> filters;
    for (const auto& m : cls.members()) filters.push_back(m.filter());
    Atlas atlas(cls.members().front().algebra(), std::move(filters));
    out.uniform_bundle = check_uniform_bundle(atlas, fragment, search_lang, b, limits);
  }

  try {
    Atlas product = product_atlas(cls, limits);
    out.product_carrier = static_cast<std::size_t>(product.algebra().carrier_size());
    for (std::size_t i = 0; i < product.chart_count(); ++i)
      out.product_filter_sizes.push_back(product.chart(i).filter().size());
  } catch (const resource_error&) {
    out.product_within_cap = false;
  }

  bool any = out.uniform_syntactic.found() || out.couniform_syntactic.found() || out.couniform_class.found() ||
             (out.uniform_bundle && out.uniform_bundle->found());
  out.consistent_with_single_matrix = !any;
  return out;
}

} // namespace conseq
