// conseq: a command-line workbench for consequence over finite logical
// matrices, bundles, and atlases.
//
// Exit status: 0 = entailment holds / no counterexample found;
//              1 = entailment fails / counterexample found;
//              2 = usage or resource error.

#include <CLI11.hpp>

#include <conseq/conseq.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace conseq;

struct CommonOpts {
  std::string matrices_file;
  std::string use;
  std::string vars = "p,q,r";
  int depth = 2;
  int set_size = 2;
  int family_size = 3;
  std::uint64_t samples = 10000;
  std::uint64_t seed = 0;
  std::string format = "text";
};

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::string piece;
  std::istringstream in(text);
  while (std::getline(in, piece, ',')) {
    if (!piece.empty()) out.push_back(piece);
  }
  return out;
}

void add_common(CLI::App* cmd, CommonOpts& o, bool with_budget = true) {
  cmd->add_option("--matrices", o.matrices_file, "matrix definition file to load");
  cmd->add_option("--use", o.use, "comma-separated matrix/atlas names")->required();
  cmd->add_option("--vars", o.vars, "search variables (default p,q,r)");
  cmd->add_option("--depth", o.depth, "formula depth bound");
  if (with_budget) {
    cmd->add_option("--set-size", o.set_size, "premise set size bound");
    cmd->add_option("--family-size", o.family_size, "family size bound");
    cmd->add_option("--samples", o.samples, "candidate budget");
    cmd->add_option("--seed", o.seed, "search seed");
  }
  cmd->add_option("--format", o.format, "report format: text or tsv")
      ->check(CLI::IsMember({"text", "tsv"}));
}

struct Selection {
  Catalog catalog;
  std::vector<std::string> names;
  MatrixClass cls;
  std::optional<Atlas> atlas; // when the selection shares one algebra
  Language lang;
  SearchBudget budget;
  Fragment fragment;

  Selection(const CommonOpts& o)
      : catalog(o.matrices_file.empty() ? Catalog::with_builtins() : load_matrix_file(o.matrices_file)),
        names(split_commas(o.use)),
        cls(catalog.to_class(names)),
        atlas(catalog.to_atlas(names)),
        lang(cls.signature(), split_commas(o.vars), true),
        budget{static_cast<int>(split_commas(o.vars).size()), o.depth, o.set_size,
               o.family_size, o.samples, o.seed},
        fragment{split_commas(o.vars), o.depth} {}
};

void emit(const Report& r, const CommonOpts& o) { std::cout << r.render(o.format); }

void header(Report& r, const std::string& command, const CommonOpts& o) {
  r.add("command", command);
  r.add("use", o.use);
  r.add("vars", o.vars);
  r.add("depth", o.depth);
}

int run_check(const CommonOpts& o, const std::string& premises_text, const std::string& conclusion_text) {
  Selection sel(o);
  FormulaSet premises = parse_formula_set(premises_text, sel.lang);
  Formula conclusion = parse_formula(conclusion_text, sel.lang);
  bool holds = entails_class(sel.cls, premises, conclusion);
  Report r;
  r.add("command", "check");
  r.add("use", o.use);
  r.add("premises", print_formula_set(premises));
  r.add("conclusion", print_formula(conclusion));
  r.add("entails", holds);
  emit(r, o);
  return holds ? 0 : 1;
}

int run_sigma(const CommonOpts& o) {
  Selection sel(o);
  Report r;
  header(r, "sigma", o);
  for (std::size_t mi = 0; mi < sel.cls.members().size(); ++mi) {
    std::string prefix = "member" + std::to_string(mi) + ".";
    SigmaFamily fam = sigma_family(sel.cls.members()[mi], sel.fragment, sel.lang);
    r.add(prefix + "sets", fam.sets.size());
    for (std::size_t i = 0; i < fam.sets.size(); ++i) {
      r.add(prefix + "set" + std::to_string(i), print_formula_set(fam.sets[i].formulas));
      r.add(prefix + "set" + std::to_string(i) + ".properly-extendable", fam.sets[i].properly_extendable);
    }
  }
  emit(r, o);
  return 0;
}

int run_theories(const CommonOpts& o) {
  Selection sel(o);
  TheoryFamily fam = lindenbaum_theories(sel.cls, sel.fragment, sel.lang);
  Report r;
  header(r, "theories", o);
  r.add("theories", fam.theories.size());
  for (std::size_t i = 0; i < fam.theories.size(); ++i)
    r.add("theory" + std::to_string(i), print_formula_set(fam.theories[i]));
  emit(r, o);
  return 0;
}

int run_product(const CommonOpts& o) {
  Selection sel(o);
  Atlas product = product_atlas(sel.cls);
  Report r;
  r.add("command", "product");
  r.add("use", o.use);
  r.add("carrier", static_cast<std::size_t>(product.algebra().carrier_size()));
  r.add("charts", product.chart_count());
  for (std::size_t i = 0; i < product.chart_count(); ++i)
    r.add("filter" + std::to_string(i) + ".size", product.chart(i).filter().size());
  emit(r, o);
  return 0;
}

int run_uniformity(const CommonOpts& o) {
  Selection sel(o);
  Report r;
  header(r, "uniformity", o);
  describe_budget(r, sel.budget);

  Verdict syntactic = check_uniform_syntactic(sel.cls, sel.lang, sel.budget);
  if (const auto* w = std::get_if<UniformSyntacticWitness>(&syntactic.witness))
    r.add("uniform-syntactic.revalidated", revalidate(sel.cls, *w));
  describe_verdict(r, "uniform-syntactic.", syntactic);

  bool found = syntactic.found();
  if (sel.atlas) {
    Verdict bundle = check_uniform_bundle(*sel.atlas, sel.fragment, sel.lang, sel.budget);
    if (const auto* w = std::get_if<UniformBundleWitness>(&bundle.witness))
      r.add("uniform-bundle.revalidated", revalidate(*sel.atlas, sel.fragment, sel.lang, *w));
    describe_verdict(r, "uniform-bundle.", bundle);
    found = found || bundle.found();
  } else {
    r.add("uniform-bundle.outcome", "not-applicable (members have distinct algebras)");
  }
  emit(r, o);
  return found ? 1 : 0;
}

int run_couniformity(const CommonOpts& o) {
  Selection sel(o);
  Report r;
  header(r, "couniformity", o);
  describe_budget(r, sel.budget);
  r.add("note", "family variables never exhaust the pool: it is unbounded");

  Verdict syntactic = check_couniform_syntactic(sel.cls, sel.lang, sel.budget);
  if (const auto* w = std::get_if<CouniformSyntacticWitness>(&syntactic.witness))
    r.add("couniform-syntactic.revalidated", revalidate(sel.cls, *w));
  describe_verdict(r, "couniform-syntactic.", syntactic);

  Verdict semantic = check_couniform_class(sel.cls, sel.fragment, sel.lang, sel.budget);
  if (const auto* w = std::get_if<CouniformClassWitness>(&semantic.witness))
    r.add("couniform-class.revalidated", revalidate(sel.cls, sel.fragment, sel.lang, *w));
  describe_verdict(r, "couniform-class.", semantic);

  emit(r, o);
  return (syntactic.found() || semantic.found()) ? 1 : 0;
}

int run_single_matrix(const CommonOpts& o) {
  Selection sel(o);
  SingleMatrixReport rep = single_matrix_report(sel.cls, sel.lang, sel.fragment, sel.budget);
  Report r;
  header(r, "single-matrix", o);
  describe_budget(r, sel.budget);
  describe_verdict(r, "uniform-syntactic.", rep.uniform_syntactic);
  describe_verdict(r, "couniform-syntactic.", rep.couniform_syntactic);
  if (rep.uniform_bundle)
    describe_verdict(r, "uniform-bundle.", *rep.uniform_bundle);
  else
    r.add("uniform-bundle.outcome", "not-applicable (members have distinct algebras)");
  describe_verdict(r, "couniform-class.", rep.couniform_class);
  if (rep.product_within_cap) {
    r.add("product.carrier", rep.product_carrier);
    for (std::size_t i = 0; i < rep.product_filter_sizes.size(); ++i)
      r.add("product.filter" + std::to_string(i) + ".size", rep.product_filter_sizes[i]);
  } else {
    r.add("product.carrier", "exceeds-cap");
  }
  r.add("classification", rep.consistent_with_single_matrix
                              ? "consistent with single-matrix determinability within budget"
                              : "not determined by a single matrix");
  emit(r, o);
  return rep.consistent_with_single_matrix ? 0 : 1;
}

int run_wojcicki(const CommonOpts& o, const std::string& premises_text, const std::string& conclusion_text) {
  Selection sel(o);
  Language permissive(sel.cls.signature(), {}, true);
  FormulaSet premises = parse_formula_set(premises_text, permissive);
  Formula conclusion = parse_formula(conclusion_text, permissive);

  std::set<std::string> occurring = variables_of(premises);
  conclusion.collect_variables(occurring);
  std::vector<std::string> new_vars;
  for (const auto& v : occurring)
    if (!sel.lang.has_named_var(v)) new_vars.push_back(v);
  LiftedConsequence lc(sel.cls, sel.lang, extend_language(sel.lang, new_vars));

  WojcickiResult res = wojcicki_entails(lc, premises, conclusion, sel.budget);
  Report r;
  r.add("command", "wojcicki");
  r.add("use", o.use);
  r.add("premises", print_formula_set(premises));
  r.add("conclusion", print_formula(conclusion));
  describe_budget(r, sel.budget);
  r.add("entails", res.entails);
  if (res.witness) {
    r.add("witness.Y", print_formula_set(res.witness->pattern_premises));
    r.add("witness.beta", print_formula(res.witness->pattern_conclusion));
    for (const auto& [v, f] : res.witness->sigma.mapping())
      r.add("witness.sigma." + v, print_formula(f));
    r.add("witness.revalidated", revalidate(lc, premises, conclusion, *res.witness));
  }
  describe_stats(r, "", res.stats);
  if (!res.entails) r.add("note", "completeness is budget-relative: not found within bounds");
  emit(r, o);
  return res.entails ? 0 : 1;
}

int run_conservativity(const CommonOpts& o, const std::string& new_vars_text) {
  Selection sel(o);
  std::vector<std::string> new_vars = split_commas(new_vars_text.empty() ? "r1,r2" : new_vars_text);
  LiftedConsequence lc(sel.cls, sel.lang, extend_language(sel.lang, new_vars));
  Verdict v = conservativity_check(lc, sel.fragment, sel.budget);
  Report r;
  header(r, "conservativity", o);
  r.add("new-vars", new_vars_text.empty() ? "r1,r2" : new_vars_text);
  describe_budget(r, sel.budget);
  describe_verdict(r, "conservativity.", v);
  emit(r, o);
  return v.found() ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for consequence over finite logical matrices and atlases"};
  app.require_subcommand(1);

  CommonOpts check_o, sigma_o, theories_o, product_o, uniformity_o, couniformity_o, single_o, wojcicki_o,
      conservativity_o;
  std::string check_premises, check_conclusion;
  std::string wojcicki_premises, wojcicki_conclusion;
  std::string conservativity_new_vars;

  CLI::App* check = app.add_subcommand("check", "decide X |- alpha for the selected class");
  add_common(check, check_o, false);
  check->add_option("--premises", check_premises, "comma-separated premise formulas");
  check->add_option("--conclusion", check_conclusion, "conclusion formula")->required();

  CLI::App* sigma = app.add_subcommand("sigma", "restricted truth sets per member over a fragment");
  add_common(sigma, sigma_o, false);

  CLI::App* theories = app.add_subcommand("theories", "fragment-restricted theories of the class");
  add_common(theories, theories_o, false);

  CLI::App* product = app.add_subcommand("product", "product atlas summary");
  add_common(product, product_o, false);

  CLI::App* uniformity = app.add_subcommand("uniformity", "search for a uniformity counterexample");
  add_common(uniformity, uniformity_o);

  CLI::App* couniformity = app.add_subcommand("couniformity", "search for a couniformity counterexample");
  add_common(couniformity, couniformity_o);

  CLI::App* single = app.add_subcommand("single-matrix", "bundle all conformity verdicts");
  add_common(single, single_o);

  CLI::App* wojcicki = app.add_subcommand("wojcicki", "decide the lifted consequence by pattern search");
  add_common(wojcicki, wojcicki_o);
  wojcicki->add_option("--premises", wojcicki_premises, "comma-separated premise formulas");
  wojcicki->add_option("--conclusion", wojcicki_conclusion, "conclusion formula")->required();

  CLI::App* conservativity = app.add_subcommand("conservativity", "compare base and lifted entailment");
  add_common(conservativity, conservativity_o);
  conservativity->add_option("--new-vars", conservativity_new_vars, "extension variables (default r1,r2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) return run_check(check_o, check_premises, check_conclusion);
    if (sigma->parsed()) return run_sigma(sigma_o);
    if (theories->parsed()) return run_theories(theories_o);
    if (product->parsed()) return run_product(product_o);
    if (uniformity->parsed()) return run_uniformity(uniformity_o);
    if (couniformity->parsed()) return run_couniformity(couniformity_o);
    if (single->parsed()) return run_single_matrix(single_o);
    if (wojcicki->parsed()) return run_wojcicki(wojcicki_o, wojcicki_premises, wojcicki_conclusion);
    if (conservativity->parsed()) return run_conservativity(conservativity_o, conservativity_new_vars);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
