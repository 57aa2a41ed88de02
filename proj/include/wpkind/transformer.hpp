#pragma once

#include <wpkind/expectation.hpp>
#include <wpkind/gnf.hpp>
#include <wpkind/pgcl/ast.hpp>

#include <functional>
#include <vector>

namespace wpkind {

/// wp reasons about expected values; ert about expected runtimes, where the
/// only cost source is tick(n).
enum class Mode { Wp, Ert };

// ---------------------------------------------------------------------------
// Weakest preexpectation of loop-free statements.
// ---------------------------------------------------------------------------

inline LinExpPtr wp_loopfree(const pgcl::StmtPtr& c, const LinExpPtr& h, Mode mode) {
  using namespace pgcl;
  struct V {
    const LinExpPtr& h;
    Mode mode;
    LinExpPtr operator()(const Stmt::Skip&) const { return h; }
    LinExpPtr operator()(const Stmt::Assign& n) const { return substitute(h, n.var, n.expr); }
    LinExpPtr operator()(const Stmt::Seq& n) const {
      return wp_loopfree(n.first, wp_loopfree(n.second, h, mode), mode);
    }
    LinExpPtr operator()(const Stmt::PChoice& n) const {
      return simplify(esum(rescale(n.prob, wp_loopfree(n.lhs, h, mode)),
                           rescale(1 - n.prob, wp_loopfree(n.rhs, h, mode))));
    }
    LinExpPtr operator()(const Stmt::Ite& n) const {
      return simplify(esum(guard(n.cond, wp_loopfree(n.then_branch, h, mode)),
                           guard(lnot(n.cond), wp_loopfree(n.else_branch, h, mode))));
    }
    LinExpPtr operator()(const Stmt::Tick& n) const {
      if (mode == Mode::Wp) return h;
      return simplify(esum(h, elit(Rational(n.amount))));
    }
    LinExpPtr operator()(const Stmt::CatAssign& n) const {
      LinExpPtr out;
      for (const auto& [e, w] : n.options) {
        LinExpPtr part = rescale(w, substitute(h, n.var, e));
        out = out ? esum(out, part) : part;
      }
      return simplify(out);
    }
  };
  return simplify(std::visit(V{h, mode}, c->node()));
}

// ---------------------------------------------------------------------------
// Characteristic functional of a loop: h |-> [~phi]*g + [phi]*wp(body)(h).
// ---------------------------------------------------------------------------

struct CharacteristicFunctional {
  pgcl::Program program;
  LinExpPtr post;
  Mode mode = Mode::Wp;

  LinExpPtr operator()(const LinExpPtr& h) const {
    return simplify(esum(guard(pgcl::lnot(program.guard), post),
                         guard(program.guard, wp_loopfree(program.body, h, mode))));
  }
};

inline CharacteristicFunctional characteristic_functional(pgcl::Program p, LinExpPtr g,
                                                          Mode mode = Mode::Wp) {
  return CharacteristicFunctional{std::move(p), std::move(g), mode};
}

/// One iteration of the induction operator: Psi_f(h) = Phi(h) min f.
inline LinExpPtr kind_step(const LinExpPtr& f, const CharacteristicFunctional& phi,
                           const LinExpPtr& h, const SatChecker& checker = nullptr) {
  return min_expectation(phi(h), f, checker);
}

// ---------------------------------------------------------------------------
// Branch view of a loop-free body: wp(body)(E) decomposes as
//   sum_b [cond_b] * (prob_b * E[subst_b] + cost_b),
// which is the summation normal form the incremental SMT encoding is built
// from. Costs are nonzero only in ert mode.
// ---------------------------------------------------------------------------

struct BodyBranch {
  pgcl::BoolPtr cond;  // null means true
  Rational prob;
  pgcl::Subst subst;
  Rational cost;
};

namespace transformer_detail {

inline pgcl::BoolPtr conj(const pgcl::BoolPtr& a, const pgcl::BoolPtr& b) {
  if (!a) return b;
  if (!b) return a;
  return pgcl::land(a, b);
}

inline std::vector<BodyBranch> branches_of(const pgcl::StmtPtr& c, Mode mode) {
  using namespace pgcl;
  struct V {
    Mode mode;
    std::vector<BodyBranch> operator()(const Stmt::Skip&) const {
      return {{nullptr, 1, {}, 0}};
    }
    std::vector<BodyBranch> operator()(const Stmt::Tick& n) const {
      return {{nullptr, 1, {}, mode == Mode::Ert ? Rational(n.amount) : Rational(0)}};
    }
    std::vector<BodyBranch> operator()(const Stmt::Assign& n) const {
      return {{nullptr, 1, {{n.var, n.expr}}, 0}};
    }
    std::vector<BodyBranch> operator()(const Stmt::CatAssign& n) const {
      std::vector<BodyBranch> out;
      for (const auto& [e, w] : n.options) out.push_back({nullptr, w, {{n.var, e}}, 0});
      return out;
    }
    std::vector<BodyBranch> operator()(const Stmt::PChoice& n) const {
      std::vector<BodyBranch> out;
      auto take = [&](const StmtPtr& side, const Rational& p) {
        if (p == 0) return;
        for (auto b : branches_of(side, mode)) {
          b.prob *= p;
          b.cost *= p;
          out.push_back(std::move(b));
        }
      };
      take(n.lhs, n.prob);
      take(n.rhs, Rational(1) - n.prob);
      return out;
    }
    std::vector<BodyBranch> operator()(const Stmt::Ite& n) const {
      std::vector<BodyBranch> out;
      for (auto b : branches_of(n.then_branch, mode)) {
        b.cond = conj(n.cond, b.cond);
        out.push_back(std::move(b));
      }
      for (auto b : branches_of(n.else_branch, mode)) {
        b.cond = conj(lnot(n.cond), b.cond);
        out.push_back(std::move(b));
      }
      return out;
    }
    std::vector<BodyBranch> operator()(const Stmt::Seq& n) const {
      auto first = branches_of(n.first, mode);
      auto second = branches_of(n.second, mode);
      std::vector<BodyBranch> out;
      for (const auto& b1 : first) {
        for (const auto& b2 : second) {
          BodyBranch b;
          b.cond = conj(b1.cond, b2.cond ? subst(b2.cond, b1.subst) : nullptr);
          b.prob = b1.prob * b2.prob;
          b.subst = compose(b1.subst, b2.subst);
          b.cost = b1.prob * b2.cost;
          out.push_back(std::move(b));
        }
        // The first statement's own cost is incurred once, independent of how
        // the second statement branches.
        if (b1.cost != 0) out.push_back({b1.cond, 0, {}, b1.cost});
      }
      return out;
    }
  };
  return std::visit(V{mode}, c->node());
}

}  // namespace transformer_detail

inline std::vector<BodyBranch> enumerate_branches(const pgcl::StmtPtr& body, Mode mode) {
  auto out = transformer_detail::branches_of(body, mode);
  for (auto& b : out) {
    if (!b.cond) b.cond = pgcl::btrue();
    b.cond = simplify(b.cond);
  }
  return out;
}

/// Reference expansion of the branch view, for checking it against
/// wp_loopfree: sum_b [cond_b] * (prob_b * E[subst_b] + cost_b).
inline LinExpPtr branches_to_linexp(const std::vector<BodyBranch>& branches, const LinExpPtr& h) {
  LinExpPtr out;
  for (const auto& b : branches) {
    LinExpPtr val = rescale(b.prob, substitute(h, b.subst));
    if (b.cost != 0) val = esum(val, elit(b.cost));
    LinExpPtr part = guard(b.cond, val);
    out = out ? esum(out, part) : part;
  }
  return out ? simplify(out) : elit(0);
}

}  // namespace wpkind
