#pragma once

#include <string>
#include <vector>

#include "core.hpp"
#include "formula.hpp"
#include "language.hpp"

namespace conseq {

namespace detail {

struct Token {
  enum Kind { LParen, RParen, Ident, End } kind;
  std::string text;
  std::size_t pos;
};

inline std::vector<Token> tokenize_formula(const std::string& text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '(') {
      out.push_back({Token::LParen, "(", i});
      ++i;
      continue;
    }
    if (c == ')') {
      out.push_back({Token::RParen, ")", i});
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < text.size() && text[i] != '(' && text[i] != ')' && text[i] != ' ' && text[i] != '\t' &&
           text[i] != '\n' && text[i] != '\r')
      ++i;
    std::string word = text.substr(start, i - start);
    if (!is_identifier(word)) throw parse_error("not an identifier: '" + word + "'", start);
    out.push_back({Token::Ident, std::move(word), start});
  }
  out.push_back({Token::End, "", text.size()});
  return out;
}

class FormulaParser {
public:
  FormulaParser(std::vector<Token> tokens, const Language& lang) : tokens_(std::move(tokens)), lang_(lang) {}

  Formula parse() {
    Formula f = parse_one();
    if (peek().kind != Token::End) throw parse_error("unexpected trailing input", peek().pos);
    return f;
  }

private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }

  Formula parse_one() {
    const Token& t = next();
    switch (t.kind) {
      case Token::Ident:
        return leaf(t);
      case Token::LParen:
        return compound(t);
      case Token::RParen:
        throw parse_error("unexpected ')'", t.pos);
      case Token::End:
        throw parse_error("unexpected end of input", t.pos);
    }
    throw parse_error("unreachable", t.pos);
  }

  Formula leaf(const Token& t) {
    if (const Connective* c = lang_.signature().find(t.text)) {
      if (c->arity != 0)
        throw parse_error("connective '" + t.text + "' of arity " + std::to_string(c->arity) +
                              " used without arguments",
                          t.pos);
      return Formula::app(t.text);
    }
    if (!lang_.is_variable_name(t.text)) throw parse_error("unknown variable '" + t.text + "'", t.pos);
    return Formula::var(t.text);
  }

  Formula compound(const Token& open) {
    const Token& head = next();
    if (head.kind != Token::Ident) throw parse_error("expected a connective name after '('", head.pos);
    const Connective* c = lang_.signature().find(head.text);
    if (!c) {
      if (lang_.is_variable_name(head.text))
        throw parse_error("variable '" + head.text + "' used as a connective", head.pos);
      throw parse_error("unknown connective '" + head.text + "'", head.pos);
    }
    std::vector<Formula> args;
    while (peek().kind != Token::RParen) {
      if (peek().kind == Token::End) throw parse_error("missing ')'", open.pos);
      args.push_back(parse_one());
    }
    next(); // ')'
    if (args.size() != static_cast<std::size_t>(c->arity))
      throw parse_error("connective '" + head.text + "' expects " + std::to_string(c->arity) +
                            " arguments, got " + std::to_string(args.size()),
                        open.pos);
    return Formula::app(head.text, std::move(args));
  }

  std::vector<Token> tokens_;
  const Language& lang_;
  std::size_t pos_ = 0;
};

} // namespace detail

// Prefix s-expression syntax: a variable, a nullary connective name, or
// `(name arg1 ... argk)` with k = arity(name).
inline Formula parse_formula(const std::string& text, const Language& lang) {
  return detail::FormulaParser(detail::tokenize_formula(text), lang).parse();
}

// Comma-separated formulas; an empty string denotes the empty set.
inline FormulaSet parse_formula_set(const std::string& text, const Language& lang) {
  FormulaSet out;
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    std::string piece = text.substr(start, end - start);
    bool blank = piece.find_first_not_of(" \t\r\n") == std::string::npos;
    if (!blank) out.insert(parse_formula(piece, lang));
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == ',') {
      flush(i);
      start = i + 1;
    }
  }
  flush(text.size());
  return out;
}

} // namespace conseq
