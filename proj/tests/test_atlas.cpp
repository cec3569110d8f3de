#include <catch2/catch.hpp>

#include <conseq/conseq.hpp>

#include <algorithm>

#include "test_util.hpp"

using namespace conseq;

namespace {

Language full_lang() { return Language(builtin_signature(), {"p", "q"}); }

FormulaSet fs(const Language& lang, std::initializer_list<const char*> texts) {
  FormulaSet out;
  for (const char* t : texts) out.insert(parse_formula(t, lang));
  return out;
}

// Brute-force theory family: every subset of the fragment fixed by
// cn_restricted. Only viable on tiny fragments.
std::vector<FormulaSet> brute_force_theories(const MatrixClass& cls, const Fragment& frag,
                                             const Language& lang) {
  auto listing = enumerate_fragment(frag, lang);
  REQUIRE(listing.size() <= 12);
  std::vector<FormulaSet> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << listing.size()); ++mask) {
    FormulaSet candidate;
    for (std::size_t i = 0; i < listing.size(); ++i)
      if (mask & (std::uint64_t{1} << i)) candidate.insert(listing[i]);
    if (cn_restricted(cls, candidate, frag, lang) == candidate) out.push_back(std::move(candidate));
  }
  return out;
}

bool same_families(std::vector<FormulaSet> a, std::vector<FormulaSet> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

} // namespace

TEST_CASE("make_atlas validates filters") {
  CHECK_NOTHROW(make_atlas(b2_algebra(), {{1}}));
  CHECK_NOTHROW(make_atlas(b2_algebra(), {{1}, {}}));
  CHECK_THROWS_AS(make_atlas(b2_algebra(), {{2}}), error);
  CHECK_THROWS_AS(make_atlas(b2_algebra(), {}), error);
}

TEST_CASE("a single-filter atlas entails exactly like its matrix") {
  Language lang = full_lang();
  Atlas a = make_atlas(b2_algebra(), {{1}});
  auto listing = enumerate_fragment(Fragment{{"p", "q"}, 1}, lang);
  testutil::Gen gen(0x1234);
  for (int i = 0; i < 100; ++i) {
    FormulaSet X = gen.formula_set(lang, {"p", "q"}, 2, 2);
    Formula alpha = gen.formula(lang, {"p", "q"}, 2);
    CHECK(atlas_entails(a, X, alpha) == entails_matrix(cl2(), X, alpha));
  }
}

TEST_CASE("the two-chart empty-filter atlas refutes theorems but explodes premises") {
  Language lang = full_lang();
  Atlas nu = testutil::nu_atlas();
  Formula taut = parse_formula("(imp p p)", lang);
  CHECK(!atlas_entails(nu, {}, taut));
  CHECK(atlas_entails(nu, fs(lang, {"q"}), taut));
  CHECK(atlas_entails(nu, {taut}, taut));
}

TEST_CASE("product atlas sizes follow the construction") {
  Atlas p = product_atlas(MatrixClass{cl2(), l3()});
  CHECK(p.algebra().carrier_size() == 6);
  REQUIRE(p.chart_count() == 2);
  CHECK(p.chart(0).filter().size() == 3);
  CHECK(p.chart(1).filter().size() == 2);

  Atlas doubled = product_atlas(MatrixClass{cl2(), cl2()});
  CHECK(doubled.algebra().carrier_size() == 4);
  CHECK(doubled.chart(0).filter().size() == 2);
  CHECK(doubled.chart(1).filter().size() == 2);
}

TEST_CASE("a unary product is the matrix itself") {
  Atlas p = product_atlas(MatrixClass{cl2()});
  CHECK(p.algebra() == cl2().algebra());
  REQUIRE(p.chart_count() == 1);
  CHECK(p.chart(0).filter() == cl2().filter());
}

TEST_CASE("product entailment equals class entailment on seeded queries") {
  Language lang(builtin_signature(), {"p", "q", "r"});
  testutil::Gen gen(0x9e3779b9);

  std::vector<MatrixClass> classes;
  classes.push_back(MatrixClass{cl2(), l3()});
  // seeded random classes of up to 3 matrices with carriers up to 3
  for (int c = 0; c < 3; ++c) {
    std::vector<FiniteMatrix> members;
    std::size_t count = 1 + gen.below(3);
    for (std::size_t i = 0; i < count; ++i) {
      int carrier = 2 + static_cast<int>(gen.below(2));
      auto alg = FiniteAlgebra::from_function(builtin_signature(), carrier,
                                              [&gen, carrier](std::size_t, const std::vector<int>&) {
                                                return static_cast<int>(gen.below(carrier));
                                              });
      std::vector<int> filter;
      for (int e = 0; e < carrier; ++e)
        if (gen.below(2)) filter.push_back(e);
      members.emplace_back(std::move(alg), std::move(filter));
    }
    classes.push_back(MatrixClass(std::move(members)));
  }

  for (const auto& cls : classes) {
    Atlas prod = product_atlas(cls);
    for (int i = 0; i < 125; ++i) {
      FormulaSet X = gen.formula_set(lang, {"p", "q", "r"}, 2, 3);
      Formula alpha = gen.formula(lang, {"p", "q", "r"}, 2);
      CHECK(entails_class(cls, X, alpha) == atlas_entails(prod, X, alpha));
    }
  }
}

TEST_CASE("product respects the carrier cap") {
  std::vector<FiniteMatrix> many(8, l3()); // 3^8 = 6561 carrier, 6561^2 > 1e6 table
  Limits tight;
  tight.max_product_table = 1000;
  CHECK_THROWS_AS(product_atlas(MatrixClass(std::move(many)), tight), resource_error);
}

TEST_CASE("lindenbaum theories: the stated small case") {
  Language lang(Signature({{"neg", 1}}), {"p"});
  Fragment frag{{"p"}, 1};
  TheoryFamily fam = lindenbaum_theories(MatrixClass{cl2()}, frag, lang);
  REQUIRE(fam.theories.size() == 4);
  CHECK(fam.theories[0] == FormulaSet{});
  CHECK(fam.theories[1] == fs(lang, {"p"}));
  CHECK(fam.theories[2] == fs(lang, {"(neg p)"}));
  CHECK(fam.theories[3] == fs(lang, {"p", "(neg p)"}));
}

TEST_CASE("lindenbaum theories equal the brute-force family on small fragments") {
  struct Case {
    MatrixClass cls;
    Language lang;
    Fragment frag;
  };
  std::vector<Case> cases;
  cases.push_back({MatrixClass{cl2()}, Language(Signature({{"neg", 1}}), {"p"}), Fragment{{"p"}, 2}});
  cases.push_back({MatrixClass{l3()}, Language(Signature({{"neg", 1}}), {"p"}), Fragment{{"p"}, 2}});
  cases.push_back({MatrixClass{cl2()}, Language(Signature({{"neg", 1}, {"and", 2}}), {"p", "q"}),
                   Fragment{{"p", "q"}, 1}});
  cases.push_back({MatrixClass{l3()}, Language(Signature({{"neg", 1}, {"imp", 2}}), {"p", "q"}),
                   Fragment{{"p", "q"}, 1}});
  cases.push_back({MatrixClass{cl2(), l3()}, Language(Signature({{"neg", 1}}), {"p", "q"}),
                   Fragment{{"p", "q"}, 1}});
  for (auto& c : cases) {
    TheoryFamily fam = lindenbaum_theories(c.cls, c.frag, c.lang);
    CHECK(same_families(fam.theories, brute_force_theories(c.cls, c.frag, c.lang)));
  }
}

TEST_CASE("every theory family contains the fragment and is intersection-closed") {
  Language lang(builtin_signature(), {"p", "q"});
  Fragment frag{{"p", "q"}, 1};
  for (const MatrixClass& cls : {MatrixClass{cl2()}, MatrixClass{l3()}, MatrixClass{cl2(), l3()}}) {
    TheoryFamily fam = lindenbaum_theories(cls, frag, lang);
    auto listing = enumerate_fragment(frag, lang);
    FormulaSet whole(listing.begin(), listing.end());
    CHECK(std::find(fam.theories.begin(), fam.theories.end(), whole) != fam.theories.end());

    for (const auto& t : fam.theories) {
      // fragment-closed
      CHECK(cn_restricted(cls, t, frag, lang) == t);
    }
    for (std::size_t i = 0; i < fam.theories.size(); ++i)
      for (std::size_t j = i + 1; j < fam.theories.size(); ++j) {
        FormulaSet meet;
        std::set_intersection(fam.theories[i].begin(), fam.theories[i].end(), fam.theories[j].begin(),
                              fam.theories[j].end(), std::inserter(meet, meet.begin()));
        CHECK(std::find(fam.theories.begin(), fam.theories.end(), meet) != fam.theories.end());
      }
  }
}

TEST_CASE("with imp in the signature every CL2 theory contains (imp p p)") {
  Language lang(Signature({{"neg", 1}, {"imp", 2}}), {"p"});
  Fragment frag{{"p"}, 1};
  TheoryFamily fam = lindenbaum_theories(MatrixClass{cl2()}, frag, lang);
  Formula taut = parse_formula("(imp p p)", lang);
  for (const auto& t : fam.theories) CHECK(t.count(taut) == 1);
}

TEST_CASE("restricted truth sets are theories") {
  Language lang(builtin_signature(), {"p", "q"});
  Fragment frag{{"p", "q"}, 1};
  for (const MatrixClass& cls : {MatrixClass{cl2()}, MatrixClass{l3()}, MatrixClass{cl2(), l3()}}) {
    TheoryFamily fam = lindenbaum_theories(cls, frag, lang);
    for (const auto& m : cls.members()) {
      for (const auto& s : sigma_family(m, frag, lang).sets) {
        INFO(print_formula_set(s.formulas));
        CHECK(std::find(fam.theories.begin(), fam.theories.end(), s.formulas) != fam.theories.end());
      }
    }
  }
}

TEST_CASE("lindenbaum sigma sets: identity substitution reproduces each theory") {
  Language lang(Signature({{"neg", 1}}), {"p"});
  Fragment frag{{"p"}, 1};
  MatrixClass cls{cl2()};
  auto sets = lindenbaum_sigma_sets(cls, frag, lang, 1);
  TheoryFamily fam = lindenbaum_theories(cls, frag, lang);
  for (const auto& t : fam.theories)
    CHECK(std::find(sets.begin(), sets.end(), t) != sets.end());
}

TEST_CASE("lindenbaum sigma sets match a direct recomputation") {
  Language lang(Signature({{"neg", 1}}), {"p"});
  Fragment frag{{"p"}, 1};
  MatrixClass cls{cl2()};
  auto got = lindenbaum_sigma_sets(cls, frag, lang, 1);

  // direct: for each theory and each p -> image, the preimage inside the fragment
  auto listing = enumerate_fragment(frag, lang);
  std::set<FormulaSet> expected;
  for (const auto& t : lindenbaum_theories(cls, frag, lang).theories) {
    for (const auto& image : listing) {
      Substitution sigma;
      sigma.set("p", image);
      FormulaSet pre;
      for (const auto& f : listing) {
        Formula mapped = apply_substitution(sigma, f);
        if (mapped.depth() <= frag.depth && t.count(mapped)) pre.insert(f);
      }
      expected.insert(pre);
    }
  }
  CHECK(std::set<FormulaSet>(got.begin(), got.end()) == expected);

  // depth-0 images are variable renamings only
  auto renamings = lindenbaum_sigma_sets(cls, frag, lang, 0);
  for (const auto& s : renamings)
    CHECK(std::find(got.begin(), got.end(), s) != got.end());
}
