#include <catch2/catch.hpp>

#include <conseq/conseq.hpp>

#include <algorithm>
#include <set>

#include "test_util.hpp"

using namespace conseq;

namespace {

Language neg_lang() { return Language(Signature({{"neg", 1}}), {"p"}); }
Language neg_and_lang() { return Language(Signature({{"neg", 1}, {"and", 2}}), {"p", "q"}); }
Language full_lang() { return Language(builtin_signature(), {"p", "q"}); }

// Independent fragment oracle: generate all formulas of depth <= d over the
// given variables by unordered recursive closure, as a set.
std::set<Formula> oracle_fragment(const Language& lang, const std::vector<std::string>& vars, int depth) {
  std::set<Formula> current;
  for (const auto& v : vars) current.insert(Formula::var(v));
  for (const auto& c : lang.signature().connectives())
    if (c.arity == 0) current.insert(Formula::app(c.name));
  for (int d = 0; d < depth; ++d) {
    std::set<Formula> next = current;
    for (const auto& c : lang.signature().connectives()) {
      if (c.arity == 0) continue;
      std::vector<Formula> pool(current.begin(), current.end());
      std::vector<std::size_t> idx(static_cast<std::size_t>(c.arity), 0);
      while (true) {
        std::vector<Formula> args;
        for (auto i : idx) args.push_back(pool[i]);
        next.insert(Formula::app(c.name, std::move(args)));
        std::size_t pos = idx.size();
        bool wrapped = true;
        while (pos > 0) {
          --pos;
          if (++idx[pos] < pool.size()) {
            wrapped = false;
            break;
          }
          idx[pos] = 0;
        }
        if (wrapped) break;
      }
    }
    current = std::move(next);
  }
  return current;
}

} // namespace

TEST_CASE("parse_formula reads variables, compounds, and nullary connectives") {
  Language lang = full_lang();
  Formula p = parse_formula("p", lang);
  CHECK(p.is_variable());
  CHECK(p.symbol() == "p");

  Formula f = parse_formula("(imp p (neg q))", lang);
  CHECK(!f.is_variable());
  CHECK(f.symbol() == "imp");
  REQUIRE(f.args().size() == 2);
  CHECK(f.args()[0] == Formula::var("p"));
  CHECK(f.args()[1] == Formula::app("neg", {Formula::var("q")}));

  Language with_bot(Signature({{"bot", 0}, {"neg", 1}}), {"p"});
  Formula bot = parse_formula("bot", with_bot);
  CHECK(!bot.is_variable());
  CHECK(bot.args().empty());
  CHECK(print_formula(bot) == "bot");
}

TEST_CASE("parse_formula rejects malformed input with positions") {
  Language lang = full_lang();
  CHECK_THROWS_AS(parse_formula("(neg p q)", lang), parse_error);
  CHECK_THROWS_AS(parse_formula("(imp p", lang), parse_error);
  CHECK_THROWS_AS(parse_formula("(unknown p)", lang), parse_error);
  CHECK_THROWS_AS(parse_formula("p)", lang), parse_error);
  CHECK_THROWS_AS(parse_formula("(p q)", lang), parse_error);
  CHECK_THROWS_AS(parse_formula("neg", lang), parse_error);
  CHECK_THROWS_AS(parse_formula("", lang), parse_error);

  try {
    parse_formula("(imp p (neg p q))", lang);
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.position() == 7); // the offending '('
  }

  Language bounded(builtin_signature(), {"p"}, false);
  CHECK_THROWS_AS(parse_formula("q", bounded), parse_error);
  CHECK_NOTHROW(parse_formula("p", bounded));
}

TEST_CASE("print then parse is the identity on every enumerated formula") {
  Language lang = full_lang();
  for (const auto& f : enumerate_fragment(Fragment{{"p", "q"}, 2}, lang)) {
    CHECK(parse_formula(print_formula(f), lang) == f);
  }
}

TEST_CASE("variables_of unions occurrences") {
  Language lang = full_lang();
  CHECK(variables_of(FormulaSet{parse_formula("(imp p q)", lang)}) == std::set<std::string>{"p", "q"});
  CHECK(variables_of(FormulaSet{}) == std::set<std::string>{});
  FormulaSet three{parse_formula("(neg p)", lang), parse_formula("q", lang), parse_formula("(imp p p)", lang)};
  CHECK(variables_of(three) == std::set<std::string>{"p", "q"});
}

TEST_CASE("fragment enumeration matches the stated small cases") {
  Language lang = neg_lang();
  auto single = enumerate_fragment(Fragment{{"p"}, 0}, lang);
  REQUIRE(single.size() == 1);
  CHECK(single[0] == Formula::var("p"));

  auto depth1 = enumerate_fragment(Fragment{{"p"}, 1}, lang);
  REQUIRE(depth1.size() == 2);
  CHECK(print_formula(depth1[1]) == "(neg p)");

  auto two_vars = enumerate_fragment(Fragment{{"p", "q"}, 1}, neg_and_lang());
  CHECK(two_vars.size() == 8); // 2 vars + 2 negations + 4 conjunctions
}

TEST_CASE("fragment enumeration is duplicate-free, sound, and complete") {
  for (const Language& lang : {neg_lang(), neg_and_lang(), full_lang()}) {
    std::vector<std::string> vars = lang.named_vars();
    for (int depth = 0; depth <= 2; ++depth) {
      if (lang.signature().connectives().size() >= 4 && depth == 2 && vars.size() >= 2) continue; // too big
      auto listing = enumerate_fragment(Fragment{vars, depth}, lang);
      std::set<Formula> as_set(listing.begin(), listing.end());
      CHECK(as_set.size() == listing.size());
      for (const auto& f : listing) {
        CHECK(f.depth() <= depth);
        for (const auto& v : variables_of(f)) CHECK(std::count(vars.begin(), vars.end(), v) == 1);
      }
      CHECK(as_set == oracle_fragment(lang, vars, depth));
    }
  }
}

TEST_CASE("fragment listings are monotone in vars and depth") {
  Language lang = neg_and_lang();
  auto is_subsequence = [](const std::vector<Formula>& small, const std::vector<Formula>& big) {
    std::size_t j = 0;
    for (const auto& f : small) {
      while (j < big.size() && !(big[j] == f)) ++j;
      if (j == big.size()) return false;
      ++j;
    }
    return true;
  };
  auto small_depth = enumerate_fragment(Fragment{{"p", "q"}, 1}, lang);
  auto big_depth = enumerate_fragment(Fragment{{"p", "q"}, 2}, lang);
  CHECK(is_subsequence(small_depth, big_depth));

  auto small_vars = enumerate_fragment(Fragment{{"p"}, 2}, lang);
  CHECK(is_subsequence(small_vars, big_depth));
}

TEST_CASE("fragment enumeration respects the resource cap") {
  Limits tight;
  tight.max_fragment_size = 10;
  CHECK_THROWS_AS(enumerate_fragment(Fragment{{"p", "q"}, 2}, full_lang(), tight), resource_error);
}

TEST_CASE("substitution applies homomorphically and simultaneously") {
  Language lang = full_lang();
  Substitution s;
  s.set("p", parse_formula("(and r s)", lang));
  CHECK(print_formula(apply_substitution(s, parse_formula("(neg p)", lang))) == "(neg (and r s))");

  Substitution identity;
  Formula f = parse_formula("(imp p (or q p))", lang);
  CHECK(apply_substitution(identity, f) == f);

  Substitution swap;
  swap.set("p", Formula::var("q"));
  swap.set("q", Formula::var("p"));
  CHECK(print_formula(apply_substitution(swap, parse_formula("(imp p q)", lang))) == "(imp q p)");
}

TEST_CASE("substitution properties hold on seeded formulas") {
  Language lang = full_lang();
  testutil::Gen gen(0x5eed);
  std::vector<std::string> vars{"p", "q", "r"};
  for (int i = 0; i < 300; ++i) {
    Formula f = gen.formula(lang, vars, 3);
    Substitution s = gen.substitution(lang, vars, {"s", "t"}, 2);

    // homomorphism over the structure
    if (!f.is_variable()) {
      std::vector<Formula> mapped_args;
      for (const auto& a : f.args()) mapped_args.push_back(apply_substitution(s, a));
      CHECK(apply_substitution(s, f) == Formula::app(f.symbol(), std::move(mapped_args)));
    }

    // vars(sigma(f)) is the union of vars(sigma(x)) over x in vars(f)
    std::set<std::string> expected;
    for (const auto& x : variables_of(f)) {
      Formula image = apply_substitution(s, Formula::var(x));
      for (const auto& v : variables_of(image)) expected.insert(v);
    }
    CHECK(variables_of(apply_substitution(s, f)) == expected);
  }
}

TEST_CASE("language extension and primitivity") {
  Language lang = full_lang();
  Language wider = extend_language(lang, {"r1", "r2"});
  CHECK(wider.named_vars() == std::vector<std::string>{"p", "q", "r1", "r2"});
  CHECK(wider.signature() == lang.signature());
  CHECK(is_primitive_extension(lang, wider));
  CHECK(is_primitive_extension(lang, lang));

  Language same = extend_language(lang, {});
  CHECK(same == lang);

  CHECK_THROWS_AS(extend_language(lang, {"p"}), error);
  CHECK_THROWS_AS(extend_language(lang, {"neg"}), error);

  Language other_sig(Signature({{"neg", 1}}), {"p", "q"});
  CHECK(!is_primitive_extension(lang, other_sig));
  CHECK(!is_primitive_extension(other_sig, lang));
}

TEST_CASE("fresh variables avoid declared names") {
  Language lang(builtin_signature(), {"v0", "v2"});
  std::string fresh = fresh_variable(lang);
  CHECK(fresh == "v1");
  CHECK(fresh_variable(lang, {"v1"}) == "v3");
}

TEST_CASE("language construction rejects clashes") {
  CHECK_THROWS_AS(Language(builtin_signature(), {"neg"}), error);
  CHECK_THROWS_AS(Language(builtin_signature(), {"p", "p"}), error);
  CHECK_THROWS_AS(Signature({{"neg", 1}, {"neg", 2}}), error);
  CHECK_THROWS_AS(Signature({{"", 1}}), error);
}
