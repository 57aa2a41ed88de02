#pragma once

#include <wpkind/pgcl/ast.hpp>
#include <wpkind/pgcl/printer.hpp>

#include <memory>
#include <set>
#include <string>
#include <variant>

namespace wpkind {

// ---------------------------------------------------------------------------
// Linear expectations: h ::= ee | [phi]*h | h + h, where ee is an extended
// linear expression (a rational-coefficient term, or the atom inf). inf only
// occurs as a whole summand value, never inside arithmetic.
// ---------------------------------------------------------------------------

/// Extended linear expression: a term, or infinity.
struct ExtLin {
  bool infinite = false;
  pgcl::TermPtr term;  // null iff infinite

  static ExtLin inf() { return ExtLin{true, nullptr}; }
  static ExtLin of(pgcl::TermPtr t) { return ExtLin{false, std::move(t)}; }
};

inline ExtRat evaluate(const ExtLin& e, const pgcl::State& s) {
  if (e.infinite) return ExtRat::inf();
  return ExtRat::of(pgcl::eval_rat(*e.term, s));
}

class LinExp;
using LinExpPtr = std::shared_ptr<const LinExp>;

class LinExp {
 public:
  struct ETerm { ExtLin value; };
  struct Guard { pgcl::BoolPtr cond; LinExpPtr inner; };
  struct Sum { LinExpPtr lhs, rhs; };
  using Node = std::variant<ETerm, Guard, Sum>;

  explicit LinExp(Node n) : node_(std::move(n)) {}
  const Node& node() const { return node_; }

 private:
  Node node_;
};

inline LinExpPtr eterm(ExtLin v) { return std::make_shared<LinExp>(LinExp::ETerm{std::move(v)}); }
inline LinExpPtr eterm(pgcl::TermPtr t) { return eterm(ExtLin::of(std::move(t))); }
inline LinExpPtr einf() { return eterm(ExtLin::inf()); }
inline LinExpPtr elit(Rational r) { return eterm(pgcl::lit(std::move(r))); }
inline LinExpPtr guard(pgcl::BoolPtr c, LinExpPtr h) {
  return std::make_shared<LinExp>(LinExp::Guard{std::move(c), std::move(h)});
}
inline LinExpPtr esum(LinExpPtr a, LinExpPtr b) {
  return std::make_shared<LinExp>(LinExp::Sum{std::move(a), std::move(b)});
}

inline ExtRat evaluate(const LinExp& h, const pgcl::State& s) {
  struct V {
    const pgcl::State& s;
    ExtRat operator()(const LinExp::ETerm& n) const { return evaluate(n.value, s); }
    ExtRat operator()(const LinExp::Guard& n) const {
      if (!pgcl::eval_bool(*n.cond, s)) return ExtRat::of(0);
      return evaluate(*n.inner, s);
    }
    ExtRat operator()(const LinExp::Sum& n) const {
      return evaluate(*n.lhs, s) + evaluate(*n.rhs, s);
    }
  };
  return std::visit(V{s}, h.node());
}
inline ExtRat evaluate(const LinExpPtr& h, const pgcl::State& s) { return evaluate(*h, s); }

inline LinExpPtr substitute(const LinExpPtr& h, const std::string& x, const pgcl::TermPtr& e) {
  struct V {
    const std::string& x;
    const pgcl::TermPtr& e;
    const LinExpPtr& self;
    LinExpPtr operator()(const LinExp::ETerm& n) const {
      if (n.value.infinite) return self;
      return eterm(pgcl::subst(n.value.term, x, e));
    }
    LinExpPtr operator()(const LinExp::Guard& n) const {
      return guard(pgcl::subst(n.cond, x, e), substitute(n.inner, x, e));
    }
    LinExpPtr operator()(const LinExp::Sum& n) const {
      return esum(substitute(n.lhs, x, e), substitute(n.rhs, x, e));
    }
  };
  return std::visit(V{x, e, h}, h->node());
}

inline LinExpPtr substitute(const LinExpPtr& h, const pgcl::Subst& sub) {
  struct V {
    const pgcl::Subst& sub;
    const LinExpPtr& self;
    LinExpPtr operator()(const LinExp::ETerm& n) const {
      if (n.value.infinite) return self;
      return eterm(pgcl::subst(n.value.term, sub));
    }
    LinExpPtr operator()(const LinExp::Guard& n) const {
      return guard(pgcl::subst(n.cond, sub), substitute(n.inner, sub));
    }
    LinExpPtr operator()(const LinExp::Sum& n) const {
      return esum(substitute(n.lhs, sub), substitute(n.rhs, sub));
    }
  };
  return std::visit(V{sub, h}, h->node());
}

/// Rescaling c*h: 0*h = 0, c*inf = inf for c > 0, and otherwise the factor
/// distributes through guards and sums into the arithmetic leaves.
inline LinExpPtr rescale(const Rational& c, const LinExpPtr& h) {
  if (c == 0) return elit(0);
  struct V {
    const Rational& c;
    const LinExpPtr& self;
    LinExpPtr operator()(const LinExp::ETerm& n) const {
      if (n.value.infinite) return self;
      return eterm(pgcl::scale(c, n.value.term));
    }
    LinExpPtr operator()(const LinExp::Guard& n) const { return guard(n.cond, rescale(c, n.inner)); }
    LinExpPtr operator()(const LinExp::Sum& n) const {
      return esum(rescale(c, n.lhs), rescale(c, n.rhs));
    }
  };
  return std::visit(V{c, h}, h->node());
}

inline void collect_vars(const LinExp& h, std::set<std::string>& out) {
  struct V {
    std::set<std::string>& out;
    void operator()(const LinExp::ETerm& n) const {
      if (!n.value.infinite) pgcl::collect_vars(*n.value.term, out);
    }
    void operator()(const LinExp::Guard& n) const {
      pgcl::collect_vars(*n.cond, out);
      collect_vars(*n.inner, out);
    }
    void operator()(const LinExp::Sum& n) const { collect_vars(*n.lhs, out); collect_vars(*n.rhs, out); }
  };
  std::visit(V{out}, h.node());
}

// ---------------------------------------------------------------------------
// Printing: the concrete syntax accepted by the expectation parser.
// ---------------------------------------------------------------------------

inline std::string to_string(const ExtLin& e) {
  return e.infinite ? "inf" : pgcl::to_string(e.term);
}

inline std::string to_string(const LinExp& h) {
  struct V {
    std::string operator()(const LinExp::ETerm& n) const {
      if (n.value.infinite) return "inf";
      std::string body = pgcl::to_string(n.value.term);
      return std::holds_alternative<pgcl::Term::Add>(n.value.term->node()) ||
                     std::holds_alternative<pgcl::Term::Monus>(n.value.term->node())
                 ? "(" + body + ")"
                 : body;
    }
    std::string operator()(const LinExp::Guard& n) const {
      return "[" + pgcl::to_string(n.cond) + "]*" + std::visit(V{}, n.inner->node());
    }
    std::string operator()(const LinExp::Sum& n) const {
      return std::visit(V{}, n.lhs->node()) + " + " + std::visit(V{}, n.rhs->node());
    }
  };
  return std::visit(V{}, h.node());
}
inline std::string to_string(const LinExpPtr& h) { return to_string(*h); }

// ---------------------------------------------------------------------------
// Simplification: pointwise-equivalence-preserving cleanup applied after every
// transformer step. Folds constant arithmetic and guards, flattens sums, and
// drops zero-valued summands.
// ---------------------------------------------------------------------------

namespace simplify_detail {

inline std::optional<Rational> const_of(const pgcl::TermPtr& t) {
  if (auto* c = std::get_if<pgcl::Term::Const>(&t->node())) return c->value;
  return std::nullopt;
}

inline pgcl::TermPtr simplify_term(const pgcl::TermPtr& t) {
  using namespace pgcl;
  struct V {
    const TermPtr& self;
    TermPtr operator()(const Term::Const&) const { return self; }
    TermPtr operator()(const Term::Var&) const { return self; }
    TermPtr operator()(const Term::Scale& n) const {
      TermPtr inner = simplify_term(n.operand);
      if (n.factor == 0) return lit(0);
      if (n.factor == 1) return inner;
      if (auto c = const_of(inner)) return lit(n.factor * *c);
      if (auto* s = std::get_if<Term::Scale>(&inner->node()))
        return scale(n.factor * s->factor, s->operand);
      return scale(n.factor, inner);
    }
    TermPtr operator()(const Term::Add& n) const {
      TermPtr a = simplify_term(n.lhs), b = simplify_term(n.rhs);
      auto ca = const_of(a), cb = const_of(b);
      if (ca && cb) return lit(*ca + *cb);
      if (ca && *ca == 0) return b;
      if (cb && *cb == 0) return a;
      return add(a, b);
    }
    TermPtr operator()(const Term::Monus& n) const {
      TermPtr a = simplify_term(n.lhs), b = simplify_term(n.rhs);
      auto ca = const_of(a), cb = const_of(b);
      if (ca && cb) return lit(*cb <= *ca ? *ca - *cb : Rational(0));
      if (cb && *cb == 0) return a;
      if (ca && *ca == 0) return lit(0);
      return monus(a, b);
    }
  };
  return std::visit(V{t}, t->node());
}

/// Three-valued constant folding of guards: nullopt means "not constant".
inline std::optional<bool> const_bool(const pgcl::BoolPtr& b) {
  using namespace pgcl;
  struct V {
    std::optional<bool> operator()(const BoolExpr::Less& n) const {
      auto a = const_of(simplify_term(n.lhs)), c = const_of(simplify_term(n.rhs));
      if (a && c) return *a < *c;
      return std::nullopt;
    }
    std::optional<bool> operator()(const BoolExpr::And& n) const {
      auto a = const_bool(n.lhs), c = const_bool(n.rhs);
      if (a && !*a) return false;
      if (c && !*c) return false;
      if (a && c) return true;
      return std::nullopt;
    }
    std::optional<bool> operator()(const BoolExpr::Not& n) const {
      auto a = const_bool(n.operand);
      if (a) return !*a;
      return std::nullopt;
    }
  };
  return std::visit(V{}, b->node());
}

inline pgcl::BoolPtr simplify_bool(const pgcl::BoolPtr& b) {
  using namespace pgcl;
  struct V {
    const BoolPtr& self;
    BoolPtr operator()(const BoolExpr::Less& n) const {
      return less(simplify_term(n.lhs), simplify_term(n.rhs));
    }
    BoolPtr operator()(const BoolExpr::And& n) const {
      BoolPtr a = simplify_bool(n.lhs), c = simplify_bool(n.rhs);
      auto ca = const_bool(a), cc = const_bool(c);
      if ((ca && !*ca) || (cc && !*cc)) return bfalse();
      if (ca && *ca) return c;
      if (cc && *cc) return a;
      return land(a, c);
    }
    BoolPtr operator()(const BoolExpr::Not& n) const {
      BoolPtr a = simplify_bool(n.operand);
      if (auto* inner = std::get_if<BoolExpr::Not>(&a->node())) return inner->operand;
      if (auto ca = const_bool(a)) return *ca ? bfalse() : btrue();
      return lnot(a);
    }
  };
  return std::visit(V{b}, b->node());
}

inline bool is_zero(const LinExpPtr& h) {
  if (auto* e = std::get_if<LinExp::ETerm>(&h->node()))
    if (!e->value.infinite) {
      auto c = const_of(e->value.term);
      return c && *c == 0;
    }
  return false;
}

}  // namespace simplify_detail

inline pgcl::BoolPtr simplify(const pgcl::BoolPtr& b) { return simplify_detail::simplify_bool(b); }
inline pgcl::TermPtr simplify(const pgcl::TermPtr& t) { return simplify_detail::simplify_term(t); }

inline LinExpPtr simplify(const LinExpPtr& h) {
  using namespace simplify_detail;
  struct V {
    const LinExpPtr& self;
    LinExpPtr operator()(const LinExp::ETerm& n) const {
      if (n.value.infinite) return self;
      return eterm(simplify_term(n.value.term));
    }
    LinExpPtr operator()(const LinExp::Guard& n) const {
      pgcl::BoolPtr c = simplify_bool(n.cond);
      LinExpPtr inner = simplify(n.inner);
      auto cv = const_bool(c);
      if (cv && !*cv) return elit(0);
      if (cv && *cv) return inner;
      if (is_zero(inner)) return elit(0);
      if (auto* g = std::get_if<LinExp::Guard>(&inner->node()))
        return guard(simplify_bool(pgcl::land(c, g->cond)), g->inner);
      return guard(c, inner);
    }
    LinExpPtr operator()(const LinExp::Sum& n) const {
      LinExpPtr a = simplify(n.lhs), b = simplify(n.rhs);
      if (is_zero(a)) return b;
      if (is_zero(b)) return a;
      auto ea = std::get_if<LinExp::ETerm>(&a->node());
      auto eb = std::get_if<LinExp::ETerm>(&b->node());
      if (ea && eb) {
        if (ea->value.infinite || eb->value.infinite) return einf();
        auto ca = const_of(ea->value.term), cb = const_of(eb->value.term);
        if (ca && cb) return elit(*ca + *cb);
        return eterm(simplify_term(pgcl::add(ea->value.term, eb->value.term)));
      }
      return esum(a, b);
    }
  };
  return std::visit(V{h}, h->node());
}

}  // namespace wpkind
