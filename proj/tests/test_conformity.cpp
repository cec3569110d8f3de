#include <catch2/catch.hpp>

#include <conseq/conseq.hpp>

#include "test_util.hpp"

using namespace conseq;

namespace {

Language full_lang() { return Language(builtin_signature(), {"p", "q"}); }
Language fg_lang() { return Language(testutil::fg_signature(), {"p", "q"}); }

SearchBudget small_budget() {
  SearchBudget b;
  b.max_vars = 2;
  b.max_depth = 1;
  b.max_set_size = 2;
  b.max_family_size = 3;
  b.samples = 20000;
  b.seed = 7;
  return b;
}

} // namespace

TEST_CASE("uniformity counterexample on the two-chart empty-filter atlas") {
  MatrixClass cls = testutil::nu_atlas().to_class();
  Verdict v = check_uniform_syntactic(cls, full_lang(), small_budget());
  REQUIRE(v.found());
  const auto& w = std::get<UniformSyntacticWitness>(v.witness);
  CHECK(w.premises.empty());
  CHECK(w.fresh_premises.size() == 1);
  CHECK(revalidate(cls, w));
}

TEST_CASE("no uniformity counterexample for CL2 or L3") {
  for (const MatrixClass& cls : {MatrixClass{cl2()}, MatrixClass{l3()}}) {
    Verdict v = check_uniform_syntactic(cls, full_lang(), small_budget());
    CHECK(!v.found());
    CHECK(v.stats.examined > 0);
  }
}

TEST_CASE("couniformity counterexample on the f/g class") {
  MatrixClass cls = testutil::fg_class();
  Verdict v = check_couniform_syntactic(cls, fg_lang(), small_budget());
  REQUIRE(v.found());
  const auto& w = std::get<CouniformSyntacticWitness>(v.witness);
  REQUIRE(w.family.size() == 2);
  CHECK(w.family[0] == FormulaSet{Formula::app("f", {Formula::var("p")})});
  CHECK(w.family[1] == FormulaSet{Formula::app("g", {Formula::var("q")})});
  CHECK(revalidate(cls, w));
}

TEST_CASE("no couniformity counterexample for single matrices") {
  for (const MatrixClass& cls : {MatrixClass{cl2()}, MatrixClass{l3()}}) {
    Verdict v = check_couniform_syntactic(cls, full_lang(), small_budget());
    CHECK(!v.found());
  }
}

TEST_CASE("bundle uniformity: single chart is exhaustively clean, the NU atlas is not") {
  Language lang = full_lang();
  Fragment frag{{"p", "q"}, 1};
  SearchBudget b = small_budget();
  b.samples = 2'000'000; // enough to exhaust the single-chart space

  Verdict clean = check_uniform_bundle(make_atlas(b2_algebra(), {{1}}), frag, lang, b);
  CHECK(!clean.found());
  CHECK(clean.stats.exhausted);

  Verdict nu = check_uniform_bundle(testutil::nu_atlas(), frag, lang, small_budget());
  REQUIRE(nu.found());
  const auto& w = std::get<UniformBundleWitness>(nu.witness);
  CHECK(revalidate(testutil::nu_atlas(), frag, lang, w));

  Verdict full_filter = check_uniform_bundle(make_atlas(b2_algebra(), {{0, 1}}), frag, lang, b);
  CHECK(!full_filter.found()); // no properly extendable chart at all
  CHECK(full_filter.stats.exhausted);
  CHECK(full_filter.stats.examined == 0);
}

TEST_CASE("class couniformity: f/g counterexample, CL2 clean") {
  Language lang = fg_lang();
  Fragment frag{{"p", "q"}, 1};
  Verdict v = check_couniform_class(testutil::fg_class(), frag, lang, small_budget());
  REQUIRE(v.found());
  const auto& w = std::get<CouniformClassWitness>(v.witness);
  REQUIRE(w.family.size() == 2);
  CHECK(w.family[0] == FormulaSet{Formula::app("f", {Formula::var("p")})});
  CHECK(w.family[1] == FormulaSet{Formula::app("g", {Formula::var("q")})});
  CHECK(revalidate(testutil::fg_class(), frag, lang, w));

  Verdict clean = check_couniform_class(MatrixClass{cl2()}, Fragment{{"p", "q"}, 1}, full_lang(),
                                        small_budget());
  CHECK(!clean.found());
}

TEST_CASE("syntactic and semantic couniformity verdicts agree on the catalog") {
  struct Case {
    MatrixClass cls;
    Language lang;
  };
  std::vector<Case> cases;
  cases.push_back({MatrixClass{cl2()}, full_lang()});
  cases.push_back({MatrixClass{l3()}, full_lang()});
  cases.push_back({testutil::fg_class(), fg_lang()});
  cases.push_back({testutil::nu_atlas().to_class(), full_lang()});
  for (auto& c : cases) {
    SearchBudget b = small_budget();
    Verdict syntactic = check_couniform_syntactic(c.cls, c.lang, b);
    Verdict semantic =
        check_couniform_class(c.cls, Fragment{c.lang.named_vars(), b.max_depth}, c.lang, b);
    CHECK(syntactic.found() == semantic.found());
  }
}

TEST_CASE("where the bundle condition verifies exhaustively, the syntactic search stays clean") {
  // single-chart atlases: the bundle check exhausts its space and finds nothing,
  // so the syntactic search over the same fragment must stay clean too
  Language lang = full_lang();
  Fragment frag{{"p", "q"}, 1};
  SearchBudget b = small_budget();
  b.samples = 2'000'000;
  for (const FiniteMatrix& m : {cl2(), l3(), k3()}) {
    Atlas atlas(m.algebra(), {m.filter()});
    Verdict bundle = check_uniform_bundle(atlas, frag, lang, b);
    REQUIRE(bundle.stats.exhausted);
    REQUIRE(!bundle.found());
    Verdict syntactic = check_uniform_syntactic(MatrixClass{m}, lang, small_budget());
    CHECK(!syntactic.found());
  }
}

TEST_CASE("searches are deterministic given seed and budget") {
  MatrixClass cls = testutil::nu_atlas().to_class();
  SearchBudget b = small_budget();
  Verdict v1 = check_uniform_syntactic(cls, full_lang(), b);
  Verdict v2 = check_uniform_syntactic(cls, full_lang(), b);
  CHECK(v1.found() == v2.found());
  CHECK(v1.stats == v2.stats);
  CHECK(std::get<UniformSyntacticWitness>(v1.witness).fresh_premises ==
        std::get<UniformSyntacticWitness>(v2.witness).fresh_premises);

  Verdict c1 = check_couniform_class(testutil::fg_class(), Fragment{{"p", "q"}, 1}, fg_lang(), b);
  Verdict c2 = check_couniform_class(testutil::fg_class(), Fragment{{"p", "q"}, 1}, fg_lang(), b);
  CHECK(c1.stats == c2.stats);
  CHECK(std::get<CouniformClassWitness>(c1.witness).family ==
        std::get<CouniformClassWitness>(c2.witness).family);
}

TEST_CASE("is_model: stated cases") {
  Language lang = full_lang();
  Fragment frag{{"p", "q"}, 1};
  SearchBudget b = small_budget();

  auto self = is_model(cl2(), MatrixClass{cl2()}, frag, lang, b);
  CHECK(self.is_model);

  auto empty = is_model(testutil::empty_filter_b2(), MatrixClass{cl2()}, frag, lang, b);
  REQUIRE(!empty.is_model);
  REQUIRE(empty.witness.has_value());
  // replay the witness through the base operations
  CHECK(entails_class(MatrixClass{cl2()}, empty.witness->first, empty.witness->second));
  CHECK(!entails_matrix(testutil::empty_filter_b2(), empty.witness->first, empty.witness->second));

  // excluded middle lives at depth 2: CL2 proves it, L3 refutes it
  Formula em = parse_formula("(or p (neg p))", lang);
  CHECK(entails_class(MatrixClass{cl2()}, {}, em));
  CHECK(!entails_matrix(l3(), {}, em));
  auto l3_vs_cl2 = is_model(l3(), MatrixClass{cl2()}, Fragment{{"p"}, 2}, lang, b);
  REQUIRE(!l3_vs_cl2.is_model);
  REQUIRE(l3_vs_cl2.witness.has_value());
  CHECK(entails_class(MatrixClass{cl2()}, l3_vs_cl2.witness->first, l3_vs_cl2.witness->second));
  CHECK(!entails_matrix(l3(), l3_vs_cl2.witness->first, l3_vs_cl2.witness->second));
}

TEST_CASE("single-matrix report classifies the catalog correctly") {
  Language lang = full_lang();
  Fragment frag{{"p", "q"}, 1};
  SearchBudget b = small_budget();

  auto cl2_report = single_matrix_report(MatrixClass{cl2()}, lang, frag, b);
  CHECK(cl2_report.consistent_with_single_matrix);
  CHECK(!cl2_report.uniform_syntactic.found());
  CHECK(!cl2_report.couniform_syntactic.found());
  REQUIRE(cl2_report.uniform_bundle.has_value());
  CHECK(!cl2_report.uniform_bundle->found());
  CHECK(!cl2_report.couniform_class.found());
  CHECK(cl2_report.product_carrier == 2);

  auto nu_report = single_matrix_report(testutil::nu_atlas().to_class(), lang, frag, b);
  CHECK(!nu_report.consistent_with_single_matrix);
  CHECK(nu_report.uniform_syntactic.found());

  auto fg_report = single_matrix_report(testutil::fg_class(), fg_lang(), frag, b);
  CHECK(!fg_report.consistent_with_single_matrix);
  CHECK(fg_report.couniform_syntactic.found());
  CHECK(!fg_report.uniform_bundle.has_value()); // distinct algebras: no bundle form
}

TEST_CASE("witness replay rejects tampered witnesses") {
  MatrixClass cls = testutil::nu_atlas().to_class();
  Verdict v = check_uniform_syntactic(cls, full_lang(), small_budget());
  REQUIRE(v.found());
  auto w = std::get<UniformSyntacticWitness>(v.witness);
  CHECK(revalidate(cls, w));

  auto broken = w;
  broken.fresh_premises.clear();
  CHECK(!revalidate(cls, broken));

  auto shared_var = w;
  shared_var.premises.insert(*shared_var.fresh_premises.begin());
  CHECK(!revalidate(cls, shared_var));
}
