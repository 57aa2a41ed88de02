#pragma once

#include <wpkind/rational.hpp>

#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace wpkind::pgcl {

// ---------------------------------------------------------------------------
// Arithmetic expressions: r | x | r*e | e+e | e-e (monus). Constants are
// rational; program texts only admit naturals, expectations admit rationals.
// ---------------------------------------------------------------------------

class Term;
using TermPtr = std::shared_ptr<const Term>;

class Term {
 public:
  struct Const { Rational value; };
  struct Var { std::string name; };
  struct Scale { Rational factor; TermPtr operand; };
  struct Add { TermPtr lhs, rhs; };
  struct Monus { TermPtr lhs, rhs; };
  using Node = std::variant<Const, Var, Scale, Add, Monus>;

  explicit Term(Node n) : node_(std::move(n)) {}
  const Node& node() const { return node_; }

 private:
  Node node_;
};

inline TermPtr lit(Rational v) { return std::make_shared<Term>(Term::Const{std::move(v)}); }
inline TermPtr lit(long v) { return lit(Rational(v)); }
inline TermPtr var(std::string name) { return std::make_shared<Term>(Term::Var{std::move(name)}); }
inline TermPtr scale(Rational c, TermPtr t) {
  return std::make_shared<Term>(Term::Scale{std::move(c), std::move(t)});
}
inline TermPtr add(TermPtr a, TermPtr b) {
  return std::make_shared<Term>(Term::Add{std::move(a), std::move(b)});
}
inline TermPtr monus(TermPtr a, TermPtr b) {
  return std::make_shared<Term>(Term::Monus{std::move(a), std::move(b)});
}

// ---------------------------------------------------------------------------
// Boolean expressions: e<e | and | not. Everything else is parsed-away sugar.
// ---------------------------------------------------------------------------

class BoolExpr;
using BoolPtr = std::shared_ptr<const BoolExpr>;

class BoolExpr {
 public:
  struct Less { TermPtr lhs, rhs; };
  struct And { BoolPtr lhs, rhs; };
  struct Not { BoolPtr operand; };
  using Node = std::variant<Less, And, Not>;

  explicit BoolExpr(Node n) : node_(std::move(n)) {}
  const Node& node() const { return node_; }

 private:
  Node node_;
};

inline BoolPtr less(TermPtr a, TermPtr b) {
  return std::make_shared<BoolExpr>(BoolExpr::Less{std::move(a), std::move(b)});
}
inline BoolPtr land(BoolPtr a, BoolPtr b) {
  return std::make_shared<BoolExpr>(BoolExpr::And{std::move(a), std::move(b)});
}
inline BoolPtr lnot(BoolPtr a) {
  return std::make_shared<BoolExpr>(BoolExpr::Not{std::move(a)});
}

// Sugar, desugared immediately into the three core connectives.
inline BoolPtr leq(TermPtr a, TermPtr b) { return lnot(less(std::move(b), std::move(a))); }
inline BoolPtr greater(TermPtr a, TermPtr b) { return less(std::move(b), std::move(a)); }
inline BoolPtr geq(TermPtr a, TermPtr b) { return lnot(less(std::move(a), std::move(b))); }
inline BoolPtr eq(const TermPtr& a, const TermPtr& b) {
  return land(lnot(less(a, b)), lnot(less(b, a)));
}
inline BoolPtr neq(const TermPtr& a, const TermPtr& b) { return lnot(eq(a, b)); }
inline BoolPtr lor(BoolPtr a, BoolPtr b) {
  return lnot(land(lnot(std::move(a)), lnot(std::move(b))));
}
inline BoolPtr implies(BoolPtr a, BoolPtr b) {
  return lnot(land(std::move(a), lnot(std::move(b))));
}
inline BoolPtr bfalse() { return less(lit(0), lit(0)); }
inline BoolPtr btrue() { return lnot(bfalse()); }

// ---------------------------------------------------------------------------
// Statements and programs.
// ---------------------------------------------------------------------------

class Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

class Stmt {
 public:
  struct Skip {};
  struct Assign { std::string var; TermPtr expr; };
  struct Seq { StmtPtr first, second; };
  struct PChoice { StmtPtr lhs; Rational prob; StmtPtr rhs; };
  struct Ite { BoolPtr cond; StmtPtr then_branch, else_branch; };
  struct Tick { Nat amount; };
  struct CatAssign { std::string var; std::vector<std::pair<TermPtr, Rational>> options; };
  using Node = std::variant<Skip, Assign, Seq, PChoice, Ite, Tick, CatAssign>;

  explicit Stmt(Node n) : node_(std::move(n)) {}
  const Node& node() const { return node_; }

 private:
  Node node_;
};

inline StmtPtr skip() { return std::make_shared<Stmt>(Stmt::Skip{}); }
inline StmtPtr assign(std::string v, TermPtr e) {
  return std::make_shared<Stmt>(Stmt::Assign{std::move(v), std::move(e)});
}
inline StmtPtr seq(StmtPtr a, StmtPtr b) {
  return std::make_shared<Stmt>(Stmt::Seq{std::move(a), std::move(b)});
}
inline StmtPtr pchoice(StmtPtr a, Rational p, StmtPtr b) {
  return std::make_shared<Stmt>(Stmt::PChoice{std::move(a), std::move(p), std::move(b)});
}
inline StmtPtr ite(BoolPtr c, StmtPtr t, StmtPtr e) {
  return std::make_shared<Stmt>(Stmt::Ite{std::move(c), std::move(t), std::move(e)});
}
inline StmtPtr tick(Nat n) { return std::make_shared<Stmt>(Stmt::Tick{std::move(n)}); }
inline StmtPtr cat_assign(std::string v, std::vector<std::pair<TermPtr, Rational>> opts) {
  return std::make_shared<Stmt>(Stmt::CatAssign{std::move(v), std::move(opts)});
}

/// A single-loop program: declarations, loop guard, loop-free body.
struct Program {
  std::vector<std::string> declarations;
  BoolPtr guard;
  StmtPtr body;
};

// ---------------------------------------------------------------------------
// States map variables to naturals; unmapped variables read as 0.
// ---------------------------------------------------------------------------

using State = std::map<std::string, Nat>;

inline Nat state_get(const State& s, const std::string& x) {
  auto it = s.find(x);
  return it == s.end() ? Nat(0) : it->second;
}

// ---------------------------------------------------------------------------
// Evaluation. eval_rat is total over rational-coefficient terms; eval_nat is
// the program-side view and insists the result is a natural.
// ---------------------------------------------------------------------------

inline Rational eval_rat(const Term& t, const State& s) {
  struct V {
    const State& s;
    Rational operator()(const Term::Const& n) const { return n.value; }
    Rational operator()(const Term::Var& n) const { return Rational(state_get(s, n.name)); }
    Rational operator()(const Term::Scale& n) const { return n.factor * eval_rat(*n.operand, s); }
    Rational operator()(const Term::Add& n) const {
      return eval_rat(*n.lhs, s) + eval_rat(*n.rhs, s);
    }
    Rational operator()(const Term::Monus& n) const {
      Rational a = eval_rat(*n.lhs, s), b = eval_rat(*n.rhs, s);
      return b <= a ? a - b : Rational(0);
    }
  };
  return std::visit(V{s}, t.node());
}

inline Nat eval_nat(const Term& t, const State& s) {
  Rational v = eval_rat(t, s);
  if (!is_natural(v)) throw std::runtime_error("expression does not evaluate to a natural");
  return numerator(v);
}

inline bool eval_bool(const BoolExpr& b, const State& s) {
  struct V {
    const State& s;
    bool operator()(const BoolExpr::Less& n) const {
      return eval_rat(*n.lhs, s) < eval_rat(*n.rhs, s);
    }
    bool operator()(const BoolExpr::And& n) const {
      return eval_bool(*n.lhs, s) && eval_bool(*n.rhs, s);
    }
    bool operator()(const BoolExpr::Not& n) const { return !eval_bool(*n.operand, s); }
  };
  return std::visit(V{s}, b.node());
}

// ---------------------------------------------------------------------------
// Substitution (capture-free; there are no binders).
// ---------------------------------------------------------------------------

inline TermPtr subst(const TermPtr& t, const std::string& x, const TermPtr& e) {
  struct V {
    const std::string& x;
    const TermPtr& e;
    const TermPtr& self;
    TermPtr operator()(const Term::Const&) const { return self; }
    TermPtr operator()(const Term::Var& n) const { return n.name == x ? e : self; }
    TermPtr operator()(const Term::Scale& n) const {
      return scale(n.factor, subst(n.operand, x, e));
    }
    TermPtr operator()(const Term::Add& n) const {
      return add(subst(n.lhs, x, e), subst(n.rhs, x, e));
    }
    TermPtr operator()(const Term::Monus& n) const {
      return monus(subst(n.lhs, x, e), subst(n.rhs, x, e));
    }
  };
  return std::visit(V{x, e, t}, t->node());
}

inline BoolPtr subst(const BoolPtr& b, const std::string& x, const TermPtr& e) {
  struct V {
    const std::string& x;
    const TermPtr& e;
    BoolPtr operator()(const BoolExpr::Less& n) const {
      return less(subst(n.lhs, x, e), subst(n.rhs, x, e));
    }
    BoolPtr operator()(const BoolExpr::And& n) const {
      return land(subst(n.lhs, x, e), subst(n.rhs, x, e));
    }
    BoolPtr operator()(const BoolExpr::Not& n) const { return lnot(subst(n.operand, x, e)); }
  };
  return std::visit(V{x, e}, b->node());
}

/// Parallel substitution x_i -> e_i, applied simultaneously.
using Subst = std::map<std::string, TermPtr>;

inline TermPtr subst(const TermPtr& t, const Subst& sub) {
  struct V {
    const Subst& sub;
    const TermPtr& self;
    TermPtr operator()(const Term::Const&) const { return self; }
    TermPtr operator()(const Term::Var& n) const {
      auto it = sub.find(n.name);
      return it == sub.end() ? self : it->second;
    }
    TermPtr operator()(const Term::Scale& n) const { return scale(n.factor, subst(n.operand, sub)); }
    TermPtr operator()(const Term::Add& n) const {
      return add(subst(n.lhs, sub), subst(n.rhs, sub));
    }
    TermPtr operator()(const Term::Monus& n) const {
      return monus(subst(n.lhs, sub), subst(n.rhs, sub));
    }
  };
  return std::visit(V{sub, t}, t->node());
}

inline BoolPtr subst(const BoolPtr& b, const Subst& sub) {
  struct V {
    const Subst& sub;
    BoolPtr operator()(const BoolExpr::Less& n) const {
      return less(subst(n.lhs, sub), subst(n.rhs, sub));
    }
    BoolPtr operator()(const BoolExpr::And& n) const {
      return land(subst(n.lhs, sub), subst(n.rhs, sub));
    }
    BoolPtr operator()(const BoolExpr::Not& n) const { return lnot(subst(n.operand, sub)); }
  };
  return std::visit(V{sub}, b->node());
}

/// Composition such that applying the result equals applying `inner` first and
/// then `outer`: E[inner][outer] = E[compose(outer, inner)].
inline Subst compose(const Subst& outer, const Subst& inner) {
  Subst out = outer;
  for (const auto& [x, e] : inner) out[x] = subst(e, outer);
  return out;
}

// ---------------------------------------------------------------------------
// Variable collection.
// ---------------------------------------------------------------------------

inline void collect_vars(const Term& t, std::set<std::string>& out) {
  struct V {
    std::set<std::string>& out;
    void operator()(const Term::Const&) const {}
    void operator()(const Term::Var& n) const { out.insert(n.name); }
    void operator()(const Term::Scale& n) const { collect_vars(*n.operand, out); }
    void operator()(const Term::Add& n) const { collect_vars(*n.lhs, out); collect_vars(*n.rhs, out); }
    void operator()(const Term::Monus& n) const { collect_vars(*n.lhs, out); collect_vars(*n.rhs, out); }
  };
  std::visit(V{out}, t.node());
}

inline void collect_vars(const BoolExpr& b, std::set<std::string>& out) {
  struct V {
    std::set<std::string>& out;
    void operator()(const BoolExpr::Less& n) const { collect_vars(*n.lhs, out); collect_vars(*n.rhs, out); }
    void operator()(const BoolExpr::And& n) const { collect_vars(*n.lhs, out); collect_vars(*n.rhs, out); }
    void operator()(const BoolExpr::Not& n) const { collect_vars(*n.operand, out); }
  };
  std::visit(V{out}, b.node());
}

// ---------------------------------------------------------------------------
// Desugaring categorical assignments into right-nested probabilistic choices
// with renormalized conditional probabilities.
// ---------------------------------------------------------------------------

inline StmtPtr desugar(const StmtPtr& s) {
  struct V {
    const StmtPtr& self;
    StmtPtr operator()(const Stmt::Skip&) const { return self; }
    StmtPtr operator()(const Stmt::Assign&) const { return self; }
    StmtPtr operator()(const Stmt::Tick&) const { return self; }
    StmtPtr operator()(const Stmt::Seq& n) const {
      return seq(desugar(n.first), desugar(n.second));
    }
    StmtPtr operator()(const Stmt::PChoice& n) const {
      return pchoice(desugar(n.lhs), n.prob, desugar(n.rhs));
    }
    StmtPtr operator()(const Stmt::Ite& n) const {
      return ite(n.cond, desugar(n.then_branch), desugar(n.else_branch));
    }
    StmtPtr operator()(const Stmt::CatAssign& n) const {
      // Weights sum to 1; split off the head with its weight and renormalize
      // the tail. A single option collapses to a plain assignment.
      StmtPtr out = assign(n.var, n.options.back().first);
      Rational tail_mass = n.options.back().second;
      for (auto it = n.options.rbegin() + 1; it != n.options.rend(); ++it) {
        tail_mass += it->second;
        out = pchoice(assign(n.var, it->first), it->second / tail_mass, out);
      }
      return out;
    }
  };
  return std::visit(V{s}, s->node());
}

}  // namespace wpkind::pgcl
