#pragma once

#include <wpkind/expectation.hpp>
#include <wpkind/pgcl/ast.hpp>

#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wpkind::pgcl {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string msg, int line, int col)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
        line_(line),
        col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_, col_;
};

namespace parser_detail {

struct Token {
  enum Kind { Ident, Number, Decimal, Symbol, End } kind = End;
  std::string text;
  int line = 1, col = 1;
};

inline std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t j = 0; j < n; ++j, ++i) {
      if (src[i] == '\n') { ++line; col = 1; } else { ++col; }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '#') {  // comment to end of line
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) { advance(1); continue; }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '\\') {
      std::size_t j = i + (c == '\\' ? 1 : 0);
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      t.kind = Token::Ident;
      t.text = src.substr(i, j - i);
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      bool decimal = false;
      if (j + 1 < src.size() && src[j] == '.' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        decimal = true;
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      t.kind = decimal ? Token::Decimal : Token::Number;
      t.text = src.substr(i, j - i);
      advance(j - i);
    } else {
      static const char* two[] = {":=", "<=", ">=", "!=", "&&", "||", "=>"};
      std::string pair = src.substr(i, 2);
      bool matched = false;
      for (const char* s : two)
        if (pair == s) {
          t.text = s;
          matched = true;
          break;
        }
      if (!matched) t.text = std::string(1, c);
      t.kind = Token::Symbol;
      advance(t.text.size());
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Token::End;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& src, bool allow_rational_consts)
      : toks_(lex(src)), rational_consts_(allow_rational_consts) {}

  // ---- token plumbing ----
  const Token& peek(int ahead = 0) const {
    std::size_t ix = pos_ + static_cast<std::size_t>(ahead);
    return ix < toks_.size() ? toks_[ix] : toks_.back();
  }
  bool at_symbol(const std::string& s) const {
    return peek().kind == Token::Symbol && peek().text == s;
  }
  bool at_ident(const std::string& s) const {
    return peek().kind == Token::Ident && peek().text == s;
  }
  bool accept_symbol(const std::string& s) {
    if (!at_symbol(s)) return false;
    ++pos_;
    return true;
  }
  bool accept_ident(const std::string& s) {
    if (!at_ident(s)) return false;
    ++pos_;
    return true;
  }
  void expect_symbol(const std::string& s) {
    if (!accept_symbol(s)) fail("expected '" + s + "'");
  }
  void expect_ident(const std::string& s) {
    if (!accept_ident(s)) fail("expected '" + s + "'");
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string got = t.kind == Token::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(msg + ", got " + got, t.line, t.col);
  }
  // Statement terminator; the listings omit ';' before a closing brace.
  void expect_stmt_end() {
    if (accept_symbol(";")) return;
    if (!at_symbol("}")) fail("expected ';'");
  }

  // ---- rationals ----
  std::optional<Rational> try_rational() {
    const Token& t = peek();
    if (t.kind == Token::Decimal) {
      Rational r = *parse_rational(t.text);
      ++pos_;
      return r;
    }
    if (t.kind == Token::Number) {
      // "1/3": a fraction, unless the '/' belongs to something else (it never
      // does; the grammar has no division).
      if (peek(1).kind == Token::Symbol && peek(1).text == "/" && peek(2).kind == Token::Number) {
        Rational r(Nat(t.text), Nat(peek(2).text));
        pos_ += 3;
        return r;
      }
      Rational r(Nat(t.text));
      ++pos_;
      return r;
    }
    return std::nullopt;
  }
  Rational expect_rational() {
    auto r = try_rational();
    if (!r) fail("expected a number");
    return *r;
  }

  // ---- arithmetic ----
  bool is_keyword(const std::string& s) const {
    static const std::set<std::string> kw = {"while", "if",   "else", "skip", "tick",
                                             "nat",   "not",  "true", "false"};
    return kw.count(s) > 0;
  }

  TermPtr parse_atom() {
    if (auto r = try_rational()) {
      if (!rational_consts_ && !is_natural(*r)) fail("program constants must be naturals");
      return lit(*r);
    }
    if (peek().kind == Token::Ident && !is_keyword(peek().text)) {
      std::string name = peek().text;
      ++pos_;
      return var(std::move(name));
    }
    if (accept_symbol("(")) {
      TermPtr t = parse_arith();
      expect_symbol(")");
      return t;
    }
    fail("expected an arithmetic expression");
  }

  TermPtr parse_mul() {
    TermPtr t = parse_atom();
    while (at_symbol("*")) {
      ++pos_;
      TermPtr rhs = parse_atom();
      // Linear fragment: one side of '*' must be a constant.
      if (auto* c = std::get_if<Term::Const>(&t->node()))
        t = scale(c->value, rhs);
      else if (auto* c2 = std::get_if<Term::Const>(&rhs->node()))
        t = scale(c2->value, t);
      else
        fail("non-linear product: one factor must be a constant");
    }
    return t;
  }

  TermPtr parse_arith() {
    TermPtr t = parse_mul();
    for (;;) {
      if (accept_symbol("+"))
        t = add(t, parse_mul());
      else if (accept_symbol("-"))
        t = monus(t, parse_mul());  // minus on naturals is monus
      else
        return t;
    }
  }

  // ---- booleans ----
  BoolPtr parse_bool() {  // or-level
    BoolPtr b = parse_bool_and();
    while (accept_symbol("||")) b = lor(b, parse_bool_and());
    return b;
  }
  BoolPtr parse_bool_and() {
    BoolPtr b = parse_bool_unary();
    while (at_symbol("&") || at_symbol("&&")) {
      ++pos_;
      b = land(b, parse_bool_unary());
    }
    return b;
  }
  BoolPtr parse_bool_unary() {
    if (accept_ident("not") || accept_symbol("!")) return lnot(parse_bool_unary());
    if (accept_ident("true")) return btrue();
    if (accept_ident("false")) return bfalse();
    if (at_symbol("(")) {
      // '(' may group a boolean or start an arithmetic comparison; try the
      // comparison first and fall back to boolean grouping.
      std::size_t save = pos_;
      try {
        return parse_comparison();
      } catch (const ParseError&) {
        pos_ = save;
      }
      expect_symbol("(");
      BoolPtr b = parse_bool();
      expect_symbol(")");
      return b;
    }
    return parse_comparison();
  }
  BoolPtr parse_comparison() {
    TermPtr a = parse_arith();
    if (accept_symbol("<")) return less(a, parse_arith());
    if (accept_symbol("<=")) return leq(a, parse_arith());
    if (accept_symbol("=")) return eq(a, parse_arith());
    if (accept_symbol("!=")) return neq(a, parse_arith());
    if (accept_symbol(">")) return greater(a, parse_arith());
    if (accept_symbol(">=")) return geq(a, parse_arith());
    fail("expected a comparison operator");
  }

  // ---- statements ----
  StmtPtr parse_block() {
    expect_symbol("{");
    std::vector<StmtPtr> stmts;
    while (!at_symbol("}")) stmts.push_back(parse_stmt());
    expect_symbol("}");
    if (stmts.empty()) return skip();
    StmtPtr out = stmts.back();
    for (auto it = stmts.rbegin() + 1; it != stmts.rend(); ++it) out = seq(*it, out);
    return out;
  }

  StmtPtr parse_stmt() {
    if (at_ident("while")) fail("nested loops are not supported");
    if (accept_ident("skip")) {
      expect_stmt_end();
      return skip();
    }
    if (accept_ident("tick")) {
      expect_symbol("(");
      const Token& t = peek();
      if (t.kind != Token::Number) fail("tick expects a natural number");
      Nat n(t.text);
      ++pos_;
      expect_symbol(")");
      expect_stmt_end();
      return tick(std::move(n));
    }
    if (accept_ident("if")) {
      expect_symbol("(");
      BoolPtr cond = parse_bool();
      expect_symbol(")");
      StmtPtr then_branch = parse_block();
      accept_ident("else");  // both if(phi){..}{..} and if(phi){..}else{..}
      StmtPtr else_branch = parse_block();
      accept_symbol(";");
      return ite(std::move(cond), std::move(then_branch), std::move(else_branch));
    }
    if (at_symbol("{")) {  // probabilistic choice {c1}[p]{c2}
      StmtPtr lhs = parse_block();
      expect_symbol("[");
      Rational p = expect_rational();
      if (p < 0 || p > 1) fail("choice probability must lie in [0,1]");
      expect_symbol("]");
      StmtPtr rhs = parse_block();
      accept_symbol(";");
      return pchoice(std::move(lhs), std::move(p), std::move(rhs));
    }
    if (peek().kind == Token::Ident && !is_keyword(peek().text)) {
      std::string name = peek().text;
      ++pos_;
      expect_symbol(":=");
      TermPtr first = parse_arith();
      if (accept_symbol(":")) {  // categorical: x := e1 : p1 + e2 : p2 + ...
        std::vector<std::pair<TermPtr, Rational>> opts;
        const Token& here = peek();
        opts.emplace_back(first, expect_rational());
        while (accept_symbol("+")) {
          TermPtr e = parse_arith();
          expect_symbol(":");
          opts.emplace_back(std::move(e), expect_rational());
        }
        expect_stmt_end();
        Rational total = 0;
        for (const auto& [e, w] : opts) {
          if (w <= 0) throw ParseError("categorical weights must be positive", here.line, here.col);
          total += w;
        }
        if (total != 1)
          throw ParseError("categorical weights sum to " + wpkind::to_string(total) + ", expected 1",
                           here.line, here.col);
        return cat_assign(std::move(name), std::move(opts));
      }
      expect_stmt_end();
      return assign(std::move(name), std::move(first));
    }
    fail("expected a statement");
  }

  Program parse_program() {
    Program p;
    while (accept_ident("nat")) {
      if (peek().kind != Token::Ident || is_keyword(peek().text)) fail("expected a variable name");
      p.declarations.push_back(peek().text);
      ++pos_;
      expect_symbol(";");
    }
    if (!at_ident("while"))
      fail("expected 'while' (declarations must be followed directly by the loop)");
    ++pos_;
    expect_symbol("(");
    p.guard = parse_bool();
    expect_symbol(")");
    p.body = parse_block();
    if (peek().kind != Token::End) fail("expected end of input after the loop");
    return p;
  }

  // ---- expectations ----
  // Items chain with +/- left-associatively. Plain arithmetic items merge
  // into a single term, so n+1-x means (n+1)-x; guarded or infinite items
  // join via expectation-level sums, so [x=1]*2 + 3 means ([x=1]*2) + 3.
  LinExpPtr parse_linexp() {
    LinExpPtr h = parse_exp_item();
    for (;;) {
      bool plus = at_symbol("+"), minus = at_symbol("-");
      if (!plus && !minus) return h;
      ++pos_;
      LinExpPtr rhs = parse_exp_item();
      auto* a = std::get_if<LinExp::ETerm>(&h->node());
      auto* b = std::get_if<LinExp::ETerm>(&rhs->node());
      bool both_finite = a && b && !a->value.infinite && !b->value.infinite;
      if (minus) {
        if (!both_finite) fail("'-' requires arithmetic operands; parenthesize");
        h = eterm(monus(a->value.term, b->value.term));
      } else {
        h = both_finite ? eterm(add(a->value.term, b->value.term)) : esum(h, rhs);
      }
    }
  }

  LinExpPtr parse_exp_item() {
    if (accept_symbol("[")) {
      BoolPtr cond = parse_bool();
      expect_symbol("]");
      if (accept_symbol("*")) return guard(std::move(cond), parse_exp_item());
      return guard(std::move(cond), elit(1));  // bare Iverson bracket
    }
    if (accept_ident("inf") || accept_ident("\\infty")) return einf();
    std::size_t save = pos_;
    try {
      return eterm(parse_mul());
    } catch (const ParseError&) {
      pos_ = save;
    }
    expect_symbol("(");
    LinExpPtr h = parse_linexp();
    expect_symbol(")");
    return h;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  bool rational_consts_;
};

}  // namespace parser_detail

/// Parses a single-loop pGCL program and checks its static invariants: all
/// used variables declared, weights and probabilities well-formed.
inline Program parse_program(const std::string& text) {
  parser_detail::Parser p(text, /*allow_rational_consts=*/false);
  Program prog = p.parse_program();

  std::set<std::string> declared(prog.declarations.begin(), prog.declarations.end());
  std::set<std::string> used;
  collect_vars(*prog.guard, used);
  struct Walk {
    std::set<std::string>& used;
    void operator()(const StmtPtr& s) {
      struct V {
        Walk& w;
        std::set<std::string>& used;
        void operator()(const Stmt::Skip&) const {}
        void operator()(const Stmt::Tick&) const {}
        void operator()(const Stmt::Assign& n) const {
          used.insert(n.var);
          collect_vars(*n.expr, used);
        }
        void operator()(const Stmt::Seq& n) const { w(n.first); w(n.second); }
        void operator()(const Stmt::PChoice& n) const { w(n.lhs); w(n.rhs); }
        void operator()(const Stmt::Ite& n) const {
          collect_vars(*n.cond, used);
          w(n.then_branch);
          w(n.else_branch);
        }
        void operator()(const Stmt::CatAssign& n) const {
          used.insert(n.var);
          for (const auto& [e, p] : n.options) collect_vars(*e, used);
        }
      };
      std::visit(V{*this, used}, s->node());
    }
  };
  Walk{used}(prog.body);
  for (const auto& v : used)
    if (!declared.count(v)) throw ParseError("undeclared variable '" + v + "'", 1, 1);
  return prog;
}

/// Parses the expectation concrete syntax, e.g.
/// "[toSend<=4]*(totalFailed+1) + [toSend>4]*inf".
inline LinExpPtr parse_expectation(const std::string& text) {
  parser_detail::Parser p(text, /*allow_rational_consts=*/true);
  LinExpPtr h = p.parse_linexp();
  if (p.peek().kind != parser_detail::Token::End) p.fail("expected end of expectation");
  return h;
}

}  // namespace wpkind::pgcl
