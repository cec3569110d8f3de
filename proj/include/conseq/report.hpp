#pragma once

#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "conformity.hpp"
#include "core.hpp"
#include "extension.hpp"
#include "formula.hpp"

namespace conseq {

// An ordered list of key/value records. tsv mode prints one `key<TAB>value`
// line per record; text mode prints `key: value`. Row order is fixed by the
// code that builds the report, so equal inputs give byte-identical output.
class Report {
public:
  void add(const std::string& key, const std::string& value) { rows_.emplace_back(key, value); }
  void add(const std::string& key, const char* value) { rows_.emplace_back(key, value); }
  void add(const std::string& key, std::uint64_t value) { add(key, std::to_string(value)); }
  void add(const std::string& key, int value) { add(key, std::to_string(value)); }
  void add(const std::string& key, bool value) { add(key, value ? std::string("true") : std::string("false")); }

  const std::vector<std::pair<std::string, std::string>>& rows() const { return rows_; }

  std::string to_tsv() const {
    std::ostringstream out;
    for (const auto& [k, v] : rows_) out << k << '\t' << v << '\n';
    return out.str();
  }

  std::string to_text() const {
    std::ostringstream out;
    for (const auto& [k, v] : rows_) out << k << ": " << v << '\n';
    return out.str();
  }

  std::string render(const std::string& format) const {
    if (format == "tsv") return to_tsv();
    if (format == "text") return to_text();
    throw error("unknown report format '" + format + "'");
  }

private:
  std::vector<std::pair<std::string, std::string>> rows_;
};

inline void describe_stats(Report& r, const std::string& prefix, const SearchStats& stats) {
  r.add(prefix + "stats.examined", stats.examined);
  if (stats.space == detail::kSaturated)
    r.add(prefix + "stats.space", "overflow");
  else
    r.add(prefix + "stats.space", stats.space);
  r.add(prefix + "stats.exhausted", stats.exhausted);
}

inline void describe_witness(Report& r, const std::string& prefix, const Witness& witness) {
  if (std::holds_alternative<UniformSyntacticWitness>(witness)) {
    const auto& w = std::get<UniformSyntacticWitness>(witness);
    r.add(prefix + "witness.X", print_formula_set(w.premises));
    r.add(prefix + "witness.Y", print_formula_set(w.fresh_premises));
    r.add(prefix + "witness.alpha", print_formula(w.conclusion));
  } else if (std::holds_alternative<CouniformSyntacticWitness>(witness)) {
    const auto& w = std::get<CouniformSyntacticWitness>(witness);
    for (std::size_t i = 0; i < w.family.size(); ++i)
      r.add(prefix + "witness.X" + std::to_string(i + 1), print_formula_set(w.family[i]));
  } else if (std::holds_alternative<UniformBundleWitness>(witness)) {
    const auto& w = std::get<UniformBundleWitness>(witness);
    r.add(prefix + "witness.X", print_formula_set(w.premises));
    r.add(prefix + "witness.Y", print_formula_set(w.fresh_premises));
    r.add(prefix + "witness.chart-i", w.chart_i);
    r.add(prefix + "witness.chart-j", w.chart_j);
    r.add(prefix + "witness.Z-i", print_formula_set(w.set_i));
    r.add(prefix + "witness.Z-j", print_formula_set(w.set_j));
  } else if (std::holds_alternative<CouniformClassWitness>(witness)) {
    const auto& w = std::get<CouniformClassWitness>(witness);
    for (std::size_t i = 0; i < w.family.size(); ++i)
      r.add(prefix + "witness.X" + std::to_string(i + 1), print_formula_set(w.family[i]));
  } else if (std::holds_alternative<DisagreementWitness>(witness)) {
    const auto& w = std::get<DisagreementWitness>(witness);
    r.add(prefix + "witness.premises", print_formula_set(w.premises));
    r.add(prefix + "witness.conclusion", print_formula(w.conclusion));
    r.add(prefix + "witness.base", w.base_result);
    r.add(prefix + "witness.other", w.other_result);
  }
}

inline void describe_verdict(Report& r, const std::string& prefix, const Verdict& v) {
  r.add(prefix + "outcome", v.found() ? "counterexample" : "no-counterexample");
  describe_witness(r, prefix, v.witness);
  describe_stats(r, prefix, v.stats);
  if (!v.found())
    r.add(prefix + "note", "bounded search; no-counterexample is evidence, not proof");
}

inline void describe_budget(Report& r, const SearchBudget& b) {
  r.add("budget.max-vars", b.max_vars);
  r.add("budget.max-depth", b.max_depth);
  r.add("budget.set-size", b.max_set_size);
  r.add("budget.family-size", b.max_family_size);
  r.add("budget.samples", b.samples);
  r.add("budget.seed", b.seed);
}

} // namespace conseq
