#pragma once

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "bitset.hpp"
#include "core.hpp"
#include "fragment.hpp"
#include "matrix.hpp"
#include "sigma.hpp"

namespace conseq {

// The fragment-restricted theories of a class: subsets T of the fragment with
// cn_restricted(T) = T.
struct TheoryFamily {
  Fragment fragment;
  std::vector<FormulaSet> theories; // ordered by (size, fragment-index lexicographic)
};

namespace detail {

// Fragment-closed sets are exactly the intersections of restricted truth
// sets, plus the whole fragment: closing X adds every formula contained in
// all truth sets that contain X (all of the fragment when none does). The
// Moore family they generate is computed by intersection saturation.
inline std::vector<Bitset> theory_masks(const MatrixClass& cls, const IndexedFragment& frag,
                                        const Limits& limits = {}) {
  std::set<Bitset> closed;
  closed.insert(Bitset::full(frag.size()));
  for (const auto& m : cls.members()) {
    for (const auto& truth : sigma_masks(m, frag, limits)) {
      std::vector<Bitset> fresh;
      for (const auto& c : closed) {
        Bitset meet = c & truth;
        if (!closed.count(meet)) fresh.push_back(std::move(meet));
      }
      for (auto& f : fresh) closed.insert(std::move(f));
      if (closed.size() > limits.max_theory_sets)
        throw resource_error("theory family exceeds the configured cap");
    }
  }
  std::vector<Bitset> out(closed.begin(), closed.end());
  std::sort(out.begin(), out.end(), [](const Bitset& a, const Bitset& b) {
    auto ca = a.count(), cb = b.count();
    if (ca != cb) return ca < cb;
    return a < b;
  });
  return out;
}

} // namespace detail

inline TheoryFamily lindenbaum_theories(const MatrixClass& cls, const Fragment& frag, const Language& lang,
                                        const Limits& limits = {}) {
  IndexedFragment indexed(frag, lang, limits);
  TheoryFamily out;
  out.fragment = frag;
  for (const auto& mask : detail::theory_masks(cls, indexed, limits)) out.theories.push_back(indexed.to_set(mask));
  return out;
}

// Truth sets of the Lindenbaum matrices <Fm, T>, restricted to the fragment:
// valuations into the formula algebra are substitutions, so each set is
// { alpha in fragment : sigma(alpha) in T } for a theory T and a substitution
// sigma mapping the fragment variables to fragment formulas of depth at most
// `sub_depth`. A bounded-substitution under-approximation of the Lindenbaum
// atlas's truth-set family.
inline std::vector<FormulaSet> lindenbaum_sigma_sets(const MatrixClass& cls, const Fragment& frag,
                                                     const Language& lang, int sub_depth,
                                                     const Limits& limits = {}) {
  IndexedFragment indexed(frag, lang, limits);
  std::vector<Bitset> theories = detail::theory_masks(cls, indexed, limits);

  Fragment image_frag{frag.vars, sub_depth};
  std::vector<Formula> images = enumerate_fragment(image_frag, lang, limits);
  if (images.empty()) throw error("no substitution images available in the fragment");
  detail::checked_pow(images.size(), frag.vars.size(), limits.max_valuations, "substitution count");

  std::set<Bitset> distinct;
  std::vector<std::size_t> choice(frag.vars.size(), 0);
  auto advance = [&choice, &images]() {
    std::size_t pos = choice.size();
    while (pos > 0) {
      --pos;
      if (++choice[pos] < images.size()) return true;
      choice[pos] = 0;
    }
    return false;
  };
  do {
    Substitution sigma;
    for (std::size_t i = 0; i < frag.vars.size(); ++i) sigma.set(frag.vars[i], images[choice[i]]);

    // preimage of each theory under sigma, restricted to the fragment
    std::vector<std::size_t> image_index(indexed.size());
    std::vector<bool> image_inside(indexed.size(), false);
    for (std::size_t i = 0; i < indexed.size(); ++i) {
      Formula mapped = apply_substitution(sigma, indexed.at(i));
      if (auto j = indexed.index_of(mapped)) {
        image_index[i] = *j;
        image_inside[i] = true;
      }
    }
    for (const auto& t : theories) {
      Bitset pre(indexed.size());
      for (std::size_t i = 0; i < indexed.size(); ++i)
        if (image_inside[i] && t.test(image_index[i])) pre.set(i);
      distinct.insert(std::move(pre));
    }
  } while (advance());

  std::vector<FormulaSet> out;
  out.reserve(distinct.size());
  for (const auto& mask : distinct) out.push_back(indexed.to_set(mask));
  return out;
}

} // namespace conseq
