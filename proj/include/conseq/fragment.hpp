#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bitset.hpp"
#include "core.hpp"
#include "formula.hpp"
#include "language.hpp"

namespace conseq {

// A finite, deterministically ordered slice of the formulas over `vars`:
// everything of nesting depth <= depth.
struct Fragment {
  std::vector<std::string> vars;
  int depth = 0;

  bool operator==(const Fragment&) const = default;
};

// Listing order: variables in declaration order, then formulas by (depth,
// connective declaration order, child tuples lexicographic in this same
// order). The listing is duplicate-free and monotone in vars and depth.
inline std::vector<Formula> enumerate_fragment(const Fragment& frag, const Language& lang,
                                               const Limits& limits = {}) {
  std::set<std::string> seen;
  for (const auto& v : frag.vars) {
    if (!lang.is_variable_name(v)) throw error("'" + v + "' is not a variable of the language");
    if (!seen.insert(v).second) throw error("duplicate fragment variable '" + v + "'");
  }
  if (frag.depth < 0) throw error("negative fragment depth");

  std::vector<Formula> out;
  auto push = [&](Formula f) {
    if (out.size() >= limits.max_fragment_size)
      throw resource_error("fragment exceeds " + std::to_string(limits.max_fragment_size) + " formulas");
    out.push_back(std::move(f));
  };

  for (const auto& v : frag.vars) push(Formula::var(v));
  for (const auto& c : lang.signature().connectives())
    if (c.arity == 0) push(Formula::app(c.name));

  for (int d = 1; d <= frag.depth; ++d) {
    std::size_t pool = out.size(); // formulas of depth <= d-1
    if (pool == 0) break;
    for (const auto& c : lang.signature().connectives()) {
      if (c.arity == 0) continue;
      std::size_t k = static_cast<std::size_t>(c.arity);
      std::vector<std::size_t> idx(k, 0);
      // index odometer, last position fastest
      auto advance = [&idx, pool, k]() {
        std::size_t pos = k;
        while (pos > 0) {
          --pos;
          if (++idx[pos] < pool) return true;
          idx[pos] = 0;
        }
        return false;
      };
      do {
        int max_child_depth = 0;
        for (auto i : idx) max_child_depth = std::max(max_child_depth, out[i].depth());
        if (max_child_depth == d - 1) {
          std::vector<Formula> args;
          args.reserve(k);
          for (auto i : idx) args.push_back(out[i]);
          push(Formula::app(c.name, std::move(args)));
        }
      } while (advance());
    }
  }
  return out;
}

// A fragment listing with constant-time index lookup and per-formula
// variable masks; the workhorse of the 𝖲-set and search machinery.
class IndexedFragment {
public:
  IndexedFragment() = default;

  IndexedFragment(Fragment frag, const Language& lang, const Limits& limits = {})
      : fragment_(std::move(frag)), formulas_(enumerate_fragment(fragment_, lang, limits)) {
    if (fragment_.vars.size() > 32) throw resource_error("indexed fragments support at most 32 variables");
    for (std::size_t i = 0; i < formulas_.size(); ++i) index_.emplace(formulas_[i], i);
    std::map<std::string, unsigned> var_bit;
    for (unsigned v = 0; v < fragment_.vars.size(); ++v) var_bit.emplace(fragment_.vars[v], v);
    var_masks_.reserve(formulas_.size());
    for (const auto& f : formulas_) {
      std::uint32_t mask = 0;
      for (const auto& v : variables_of(f)) mask |= std::uint32_t{1} << var_bit.at(v);
      var_masks_.push_back(mask);
    }
  }

  const Fragment& fragment() const { return fragment_; }
  const std::vector<Formula>& formulas() const { return formulas_; }
  std::size_t size() const { return formulas_.size(); }
  const Formula& at(std::size_t i) const { return formulas_[i]; }

  std::optional<std::size_t> index_of(const Formula& f) const {
    auto it = index_.find(f);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool contains(const Formula& f) const { return index_.count(f) != 0; }

  // Bit v set iff fragment variable #v occurs in formula #i.
  std::uint32_t var_mask(std::size_t i) const { return var_masks_[i]; }

  std::uint32_t var_mask(const Bitset& members) const {
    std::uint32_t mask = 0;
    for (std::size_t i = 0; i < size(); ++i)
      if (members.test(i)) mask |= var_masks_[i];
    return mask;
  }

  Bitset to_mask(const FormulaSet& fs) const {
    Bitset out(size());
    for (const auto& f : fs) {
      auto i = index_of(f);
      if (!i) throw error("formula " + print_formula(f) + " lies outside the fragment");
      out.set(*i);
    }
    return out;
  }

  FormulaSet to_set(const Bitset& mask) const {
    FormulaSet out;
    for (std::size_t i = 0; i < size(); ++i)
      if (mask.test(i)) out.insert(formulas_[i]);
    return out;
  }

  // Formulas whose variables all avoid `vars` (mask over fragment variables).
  Bitset formulas_avoiding(std::uint32_t vars) const {
    Bitset out(size());
    for (std::size_t i = 0; i < size(); ++i)
      if ((var_masks_[i] & vars) == 0) out.set(i);
    return out;
  }

  // Formulas whose variables all lie within `vars`.
  Bitset formulas_within(std::uint32_t vars) const {
    Bitset out(size());
    for (std::size_t i = 0; i < size(); ++i)
      if ((var_masks_[i] & ~vars) == 0) out.set(i);
    return out;
  }

private:
  Fragment fragment_;
  std::vector<Formula> formulas_;
  std::map<Formula, std::size_t> index_;
  std::vector<std::uint32_t> var_masks_;
};

} // namespace conseq
