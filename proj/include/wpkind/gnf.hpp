#pragma once

#include <wpkind/expectation.hpp>

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace wpkind {

// ---------------------------------------------------------------------------
// Guarded normal form: a list of (guard, extended linear expression) pairs
// whose guards partition the state space. Built via the summand product
// construction; summands with unsatisfiable guards are pruned.
// ---------------------------------------------------------------------------

struct GnfCell {
  pgcl::BoolPtr guard;
  ExtLin value;
};

struct Gnf {
  std::vector<GnfCell> cells;
};

/// Satisfiability callback used for pruning. Must return false only for
/// guards that are provably unsatisfiable over natural-valued variables;
/// returning true is always safe. A null checker means constant-fold-only.
using SatChecker = std::function<bool(const pgcl::BoolPtr&)>;

namespace gnf_detail {

struct Summand {
  pgcl::BoolPtr guard;
  ExtLin value;
};

inline void flatten(const LinExpPtr& h, const pgcl::BoolPtr& prefix, std::vector<Summand>& out) {
  struct V {
    const pgcl::BoolPtr& prefix;
    std::vector<Summand>& out;
    void operator()(const LinExp::ETerm& n) const { out.push_back({prefix, n.value}); }
    void operator()(const LinExp::Guard& n) const {
      flatten(n.inner, prefix ? pgcl::land(prefix, n.cond) : n.cond, out);
    }
    void operator()(const LinExp::Sum& n) const {
      flatten(n.lhs, prefix, out);
      flatten(n.rhs, prefix, out);
    }
  };
  std::visit(V{prefix, out}, h->node());
}

inline ExtLin ext_add(const ExtLin& a, const ExtLin& b) {
  if (a.infinite || b.infinite) return ExtLin::inf();  // inf + e = e + inf = inf
  return ExtLin::of(pgcl::add(a.term, b.term));
}

inline bool possibly_sat(const pgcl::BoolPtr& g, const SatChecker& checker) {
  auto cv = simplify_detail::const_bool(g);
  if (cv) return *cv;
  return checker ? checker(g) : true;
}

}  // namespace gnf_detail

/// Summation normal form: flattened (guard, value) summands, with summands
/// sharing a syntactically identical guard merged.
inline std::vector<gnf_detail::Summand> snf(const LinExpPtr& h) {
  std::vector<gnf_detail::Summand> raw;
  gnf_detail::flatten(simplify(h), nullptr, raw);
  std::vector<gnf_detail::Summand> out;
  std::map<std::string, std::size_t> index;
  for (auto& s : raw) {
    if (!s.guard) s.guard = pgcl::btrue();
    s.guard = simplify(s.guard);
    std::string key = pgcl::to_string(s.guard);
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(std::move(key), out.size());
      out.push_back(std::move(s));
    } else {
      out[it->second].value = gnf_detail::ext_add(out[it->second].value, s.value);
    }
  }
  return out;
}

inline Gnf gnf(const LinExpPtr& h, const SatChecker& checker = nullptr) {
  auto summands = snf(h);
  Gnf out;
  // Cell product over {(guard_i, value_i), (~guard_i, 0)}, expanded depth-first
  // so unsatisfiable partial guards cut whole subtrees.
  struct Expand {
    const std::vector<gnf_detail::Summand>& summands;
    const SatChecker& checker;
    Gnf& out;
    void go(std::size_t i, const pgcl::BoolPtr& acc, const std::vector<const ExtLin*>& active) {
      if (i == summands.size()) {
        ExtLin value = ExtLin::of(pgcl::lit(0));
        for (std::size_t j = 0; j < active.size(); ++j)
          value = j == 0 ? *active[j] : gnf_detail::ext_add(value, *active[j]);
        if (!value.infinite) value.term = simplify(value.term);
        out.cells.push_back({acc ? simplify(acc) : pgcl::btrue(), value});
        return;
      }
      const auto& s = summands[i];
      pgcl::BoolPtr with = acc ? pgcl::land(acc, s.guard) : s.guard;
      with = simplify(with);
      if (gnf_detail::possibly_sat(with, checker)) {
        auto next = active;
        next.push_back(&s.value);
        go(i + 1, with, next);
      }
      pgcl::BoolPtr without = acc ? pgcl::land(acc, pgcl::lnot(s.guard)) : pgcl::lnot(s.guard);
      without = simplify(without);
      if (gnf_detail::possibly_sat(without, checker)) go(i + 1, without, active);
    }
  };
  Expand{summands, checker, out}.go(0, nullptr, {});
  return out;
}

inline LinExpPtr to_linexp(const Gnf& g) {
  LinExpPtr out;
  for (const auto& cell : g.cells) {
    LinExpPtr part = guard(cell.guard, eterm(cell.value));
    out = out ? esum(out, part) : part;
  }
  return out ? simplify(out) : elit(0);
}

inline ExtRat evaluate(const Gnf& g, const pgcl::State& s) {
  ExtRat acc = ExtRat::of(0);
  for (const auto& cell : g.cells)
    if (pgcl::eval_bool(*cell.guard, s)) acc = acc + evaluate(cell.value, s);
  return acc;
}

// ---------------------------------------------------------------------------
// Pointwise minimum. Cells are paired up and, where both values are finite,
// the comparison is embedded into the guards; infinities are resolved
// structurally before any comparison is emitted.
// ---------------------------------------------------------------------------

inline LinExpPtr min_expectation(const LinExpPtr& h, const LinExpPtr& h2,
                                 const SatChecker& checker = nullptr) {
  Gnf a = gnf(h, checker), b = gnf(h2, checker);
  LinExpPtr out;
  auto emit = [&out](pgcl::BoolPtr g, const ExtLin& v) {
    auto cv = simplify_detail::const_bool(g);
    if (cv && !*cv) return;
    LinExpPtr part = guard(std::move(g), eterm(v));
    out = out ? esum(out, part) : part;
  };
  for (const auto& ca : a.cells) {
    for (const auto& cb : b.cells) {
      pgcl::BoolPtr both = simplify(pgcl::land(ca.guard, cb.guard));
      if (!gnf_detail::possibly_sat(both, checker)) continue;
      if (ca.value.infinite) {
        emit(both, cb.value);
      } else if (cb.value.infinite) {
        emit(both, ca.value);
      } else {
        emit(simplify(pgcl::land(both, pgcl::leq(ca.value.term, cb.value.term))), ca.value);
        emit(simplify(pgcl::land(both, pgcl::greater(ca.value.term, cb.value.term))), cb.value);
      }
    }
  }
  return out ? simplify(out) : elit(0);
}

}  // namespace wpkind
