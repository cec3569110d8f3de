#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "conformity.hpp"
#include "core.hpp"
#include "formula.hpp"
#include "fragment.hpp"
#include "language.hpp"
#include "matrix.hpp"
#include "search.hpp"

namespace conseq {

// A class of matrices read in a primitive extension of its base language:
// the same matrices interpret the larger variable pool.
struct LiftedConsequence {
  MatrixClass base_class;
  Language base_lang;
  Language extended_lang;

  LiftedConsequence(MatrixClass cls, Language base, Language extended)
      : base_class(std::move(cls)), base_lang(std::move(base)), extended_lang(std::move(extended)) {
    if (!is_primitive_extension(base_lang, extended_lang))
      throw error("the extended language is not a primitive extension of the base language");
    if (!(base_lang.signature() == base_class.signature()))
      throw error("language and matrix class signatures differ");
  }
};

// Entailment over the extended language: valuations cover whatever variables
// occur, so the computation is the base one applied to larger formulas.
inline bool lifted_entails(const LiftedConsequence& lc, const FormulaSet& premises, const Formula& conclusion,
                           const Limits& limits = {}) {
  for (const auto& f : premises)
    if (!f.well_formed(lc.extended_lang))
      throw error("premise " + print_formula(f) + " is not a formula of the extended language");
  if (!conclusion.well_formed(lc.extended_lang))
    throw error("conclusion " + print_formula(conclusion) + " is not a formula of the extended language");
  return entails_class(lc.base_class, premises, conclusion, limits);
}

// A base-language inference pattern plus the substitution carrying it to the
// extended-language query: sigma(Y) inside X, sigma(beta) = alpha, Y |- beta.
struct WojcickiWitness {
  FormulaSet pattern_premises; // Y
  Formula pattern_conclusion;  // beta
  Substitution sigma;
};

struct WojcickiResult {
  bool entails = false;
  std::optional<WojcickiWitness> witness;
  SearchStats stats;
};

inline bool revalidate(const LiftedConsequence& lc, const FormulaSet& premises, const Formula& conclusion,
                       const WojcickiWitness& w, const Limits& limits = {}) {
  for (const auto& y : w.pattern_premises)
    if (!y.well_formed(lc.base_lang)) return false;
  if (!w.pattern_conclusion.well_formed(lc.base_lang)) return false;
  for (const auto& y : w.pattern_premises)
    if (!premises.count(apply_substitution(w.sigma, y))) return false;
  if (!(apply_substitution(w.sigma, w.pattern_conclusion) == conclusion)) return false;
  return entails_class(lc.base_class, w.pattern_premises, w.pattern_conclusion, limits);
}

// Bounded search for a Wojcicki-consequence witness. Substitution images can
// be restricted to subformulas of the query without loss (every pattern
// variable lands on one), so the search runs over maps from at most
// `max_vars` base pattern variables into the query's subformulas, with
// patterns drawn from the base fragment of depth `max_depth`. Complete
// relative to those two bounds; `entails == false` means nothing was found
// within them.
namespace detail {

// All base-language patterns of depth <= bound that the substitution carries
// onto `target`: pattern variables whose image is the target, plus compounds
// built from matching the target's own structure.
inline void patterns_onto(const Formula& target, const std::vector<std::string>& pattern_vars,
                          const Substitution& sigma, int bound, std::vector<Formula>& out) {
  for (const auto& v : pattern_vars)
    if (sigma.mapping().at(v) == target) out.push_back(Formula::var(v));
  if (target.is_variable()) return;
  if (target.args().empty()) {
    out.push_back(target); // a nullary connective matches itself
    return;
  }
  if (bound <= 0) return;
  std::vector<std::vector<Formula>> child_patterns(target.args().size());
  for (std::size_t i = 0; i < target.args().size(); ++i) {
    patterns_onto(target.args()[i], pattern_vars, sigma, bound - 1, child_patterns[i]);
    if (child_patterns[i].empty()) return;
  }
  std::vector<std::size_t> pick(target.args().size(), 0);
  while (true) {
    std::vector<Formula> args;
    args.reserve(pick.size());
    for (std::size_t i = 0; i < pick.size(); ++i) args.push_back(child_patterns[i][pick[i]]);
    out.push_back(Formula::app(target.symbol(), std::move(args)));
    std::size_t pos = pick.size();
    bool wrapped = true;
    while (pos > 0) {
      --pos;
      if (++pick[pos] < child_patterns[pos].size()) {
        wrapped = false;
        break;
      }
      pick[pos] = 0;
    }
    if (wrapped) break;
  }
}

} // namespace detail

inline WojcickiResult wojcicki_entails(const LiftedConsequence& lc, const FormulaSet& premises,
                                       const Formula& conclusion, const SearchBudget& b,
                                       const Limits& limits = {}) {
  detail::check_budget(b);
  WojcickiResult out;

  std::vector<std::string> pattern_vars = detail::search_vars(lc.base_lang, b.max_vars);

  // candidate substitution images: distinct subformulas of X and alpha
  std::vector<Formula> images;
  {
    std::set<Formula> seen;
    for (const auto& x : premises)
      for (const auto& s : subformulas(x))
        if (seen.insert(s).second) images.push_back(s);
    for (const auto& s : subformulas(conclusion))
      if (seen.insert(s).second) images.push_back(s);
  }
  if (images.empty()) return out; // no premises and a query with no structure cannot match

  std::uint64_t sigma_space = 1;
  for (std::size_t i = 0; i < pattern_vars.size(); ++i)
    sigma_space = detail::sat_mul(sigma_space, images.size());
  out.stats.space = sigma_space;

  std::vector<std::size_t> choice(pattern_vars.size(), 0);
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
    if (out.stats.examined >= b.samples) return out; // budget spent
    ++out.stats.examined;

    Substitution sigma;
    for (std::size_t i = 0; i < pattern_vars.size(); ++i) sigma.set(pattern_vars[i], images[choice[i]]);

    // patterns mapping into the query under this substitution
    std::vector<Formula> betas; // candidates for the pattern conclusion
    detail::patterns_onto(conclusion, pattern_vars, sigma, b.max_depth, betas);
    if (betas.empty()) continue;
    FormulaSet gamma; // everything sigma sends into the premises
    for (const auto& x : premises) {
      std::vector<Formula> onto_x;
      detail::patterns_onto(x, pattern_vars, sigma, b.max_depth, onto_x);
      gamma.insert(onto_x.begin(), onto_x.end());
    }
    for (const auto& beta : betas) {
      if (!entails_class(lc.base_class, gamma, beta, limits)) continue;

      // shrink the premise pattern greedily for a readable witness
      FormulaSet trimmed = gamma;
      for (const auto& g : gamma) {
        FormulaSet without = trimmed;
        without.erase(g);
        if (entails_class(lc.base_class, without, beta, limits)) trimmed = std::move(without);
      }
      std::set<std::string> support = variables_of(trimmed);
      beta.collect_variables(support);
      out.entails = true;
      out.witness = WojcickiWitness{std::move(trimmed), beta, sigma.restricted_to(support)};
      return out;
    }
  } while (advance());

  out.stats.exhausted = true;
  return out;
}

// Lifted entailment as an injectable route, so a corrupted lift can be
// exercised by tests.
using EntailmentFn = std::function<bool(const FormulaSet&, const Formula&)>;

// Search for a base-language query on which the base and lifted routes
// disagree. They agree by construction, so a counterexample indicates a
// broken lift (or an injected fault).
inline Verdict conservativity_check(const LiftedConsequence& lc, const Fragment& fragment,
                                    const SearchBudget& b, const Limits& limits = {},
                                    const EntailmentFn& lifted_override = {}) {
  detail::check_budget(b);
  for (const auto& v : fragment.vars)
    if (!lc.base_lang.is_variable_name(v))
      throw error("fragment variable '" + v + "' is not a base-language variable");
  IndexedFragment frag(fragment, lc.base_lang, limits);
  const std::size_t n = frag.size();

  auto lifted = lifted_override ? lifted_override : [&lc, &limits](const FormulaSet& X, const Formula& a) {
    return lifted_entails(lc, X, a, limits);
  };

  Verdict out;
  out.stats.space =
      detail::sat_mul(detail::sat_subsets_up_to(n, static_cast<std::uint64_t>(b.max_set_size)), n);

  auto test = [&](const std::vector<std::size_t>& xs, std::size_t a) {
    ++out.stats.examined;
    FormulaSet X = detail::combo_to_set(frag, xs);
    const Formula& alpha = frag.at(a);
    bool base = entails_class(lc.base_class, X, alpha, limits);
    bool ext = lifted(X, alpha);
    if (base == ext) return false;
    out.outcome = Outcome::counterexample;
    out.witness = DisagreementWitness{std::move(X), alpha, base, ext};
    return true;
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

  detail::Rng rng(b.seed ^ 0x636f6e73ull);
  for (std::uint64_t i = 0; i < detail::random_cap(b); ++i) {
    auto xs_r = detail::random_subset(rng, n, static_cast<std::size_t>(b.max_set_size));
    if (test(xs_r, static_cast<std::size_t>(rng.below(n)))) return out;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Behavioral shared-atlas check for a lifted consequence:
//   (i)   soundness: wojcicki_entails hits imply lifted_entails;
//   (ii)  budget-relative completeness: lifted_entails truths admit witnesses;
//   (iii) conformity: uniformity/couniformity searches stay counterexample-free
//         for both the base use and the lifted use.
// ---------------------------------------------------------------------------
struct SharedAtlasReport {
  Verdict soundness;
  Verdict completeness;
  Verdict base_uniform;
  Verdict base_couniform;
  Verdict lifted_uniform;
  Verdict lifted_couniform;
  bool all_pass = true;
};

inline SharedAtlasReport shared_atlas_check(const LiftedConsequence& lc, const Fragment& frag_base,
                                            const Fragment& frag_ext, const SearchBudget& b,
                                            const Limits& limits = {}) {
  for (const auto& v : frag_ext.vars)
    if (!lc.extended_lang.is_variable_name(v))
      throw error("fragment variable '" + v + "' is not an extended-language variable");
  SharedAtlasReport out;

  // (i) and (ii): walk extended-language queries once, comparing the routes.
  IndexedFragment frag(frag_ext, lc.extended_lang, limits);
  const std::size_t n = frag.size();
  out.soundness.stats.space =
      detail::sat_mul(detail::sat_subsets_up_to(n, static_cast<std::uint64_t>(b.max_set_size)), n);
  out.completeness.stats.space = out.soundness.stats.space;

  std::uint64_t cap = detail::ordered_cap(b);
  detail::SubsetStream xs_stream(n, static_cast<std::size_t>(b.max_set_size));
  std::vector<std::size_t> xs;
  bool completed = true;
  bool stop = false;
  auto consider = [&](const std::vector<std::size_t>& combo, std::size_t a) {
    FormulaSet X = detail::combo_to_set(frag, combo);
    const Formula& alpha = frag.at(a);
    bool lifted = lifted_entails(lc, X, alpha, limits);
    WojcickiResult wr = wojcicki_entails(lc, X, alpha, b, limits);
    if (wr.entails) {
      ++out.soundness.stats.examined;
      if (!lifted) {
        out.soundness.outcome = Outcome::counterexample;
        out.soundness.witness = DisagreementWitness{X, alpha, lifted, wr.entails};
        return true;
      }
    }
    if (lifted) {
      ++out.completeness.stats.examined;
      if (!wr.entails) {
        out.completeness.outcome = Outcome::counterexample;
        out.completeness.witness = DisagreementWitness{X, alpha, lifted, wr.entails};
        return true;
      }
    }
    return false;
  };
  std::uint64_t pairs = 0;
  while (!stop && xs_stream.next(xs)) {
    for (std::size_t a = 0; a < n; ++a) {
      if (pairs >= cap) {
        completed = false;
        stop = true;
        break;
      }
      ++pairs;
      if (consider(xs, a)) {
        stop = true;
        break;
      }
    }
  }
  if (completed && !out.soundness.found() && !out.completeness.found()) {
    out.soundness.stats.exhausted = true;
    out.completeness.stats.exhausted = true;
  } else if (!stop || (!out.soundness.found() && !out.completeness.found())) {
    detail::Rng rng(b.seed ^ 0x73686172ull);
    for (std::uint64_t i = 0; i < detail::random_cap(b); ++i) {
      auto xs_r = detail::random_subset(rng, n, static_cast<std::size_t>(b.max_set_size));
      if (consider(xs_r, static_cast<std::size_t>(rng.below(n)))) break;
    }
  }

  // (iii) conformity for the base use and for the lifted use. The lifted
  // search prefers the new variables so the extension is actually exercised.
  Language base_search(lc.base_lang.signature(), frag_base.vars, lc.base_lang.pool_unbounded());
  out.base_uniform = check_uniform_syntactic(lc.base_class, base_search, b, limits);
  out.base_couniform = check_couniform_syntactic(lc.base_class, base_search, b, limits);

  std::vector<std::string> lifted_vars;
  for (const auto& v : lc.extended_lang.named_vars())
    if (!lc.base_lang.has_named_var(v)) lifted_vars.push_back(v);
  for (const auto& v : lc.extended_lang.named_vars())
    if (lc.base_lang.has_named_var(v)) lifted_vars.push_back(v);
  if (lifted_vars.size() > static_cast<std::size_t>(b.max_vars))
    lifted_vars.resize(static_cast<std::size_t>(b.max_vars));
  Language lifted_search(lc.extended_lang.signature(), lifted_vars, lc.extended_lang.pool_unbounded());
  out.lifted_uniform = check_uniform_syntactic(lc.base_class, lifted_search, b, limits);
  out.lifted_couniform = check_couniform_syntactic(lc.base_class, lifted_search, b, limits);

  out.all_pass = !out.soundness.found() && !out.completeness.found() && !out.base_uniform.found() &&
                 !out.base_couniform.found() && !out.lifted_uniform.found() && !out.lifted_couniform.found();
  return out;
}

} // namespace conseq
