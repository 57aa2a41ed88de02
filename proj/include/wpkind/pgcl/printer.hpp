#pragma once

#include <wpkind/pgcl/ast.hpp>

#include <sstream>
#include <string>

namespace wpkind::pgcl {

// Precedence-aware printing. The printed form reparses to a structurally
// identical AST, which also makes it usable as a syntactic identity key.

namespace detail {
enum TermPrec { kAdd = 0, kScale = 1, kAtom = 2 };

inline void print_term(std::ostream& os, const Term& t, TermPrec ctx) {
  struct V {
    std::ostream& os;
    TermPrec ctx;
    void paren(bool need, TermPrec inner, const Term& t) const {
      if (need) os << "(";
      print_term(os, t, inner);
      if (need) os << ")";
    }
    void operator()(const Term::Const& n) const { os << wpkind::to_string(n.value); }
    void operator()(const Term::Var& n) const { os << n.name; }
    void operator()(const Term::Scale& n) const {
      bool need = ctx > kScale;
      if (need) os << "(";
      os << wpkind::to_string(n.factor) << "*";
      print_term(os, *n.operand, kAtom);
      if (need) os << ")";
    }
    void operator()(const Term::Add& n) const {
      bool need = ctx > kAdd;
      if (need) os << "(";
      print_term(os, *n.lhs, kAdd);
      os << " + ";
      print_term(os, *n.rhs, kScale);
      if (need) os << ")";
    }
    void operator()(const Term::Monus& n) const {
      bool need = ctx > kAdd;
      if (need) os << "(";
      print_term(os, *n.lhs, kAdd);
      os << " - ";
      print_term(os, *n.rhs, kScale);
      if (need) os << ")";
    }
  };
  std::visit(V{os, ctx}, t.node());
}

enum BoolPrec { kAnd = 0, kUnary = 1 };

inline void print_bool(std::ostream& os, const BoolExpr& b, BoolPrec ctx) {
  struct V {
    std::ostream& os;
    BoolPrec ctx;
    void operator()(const BoolExpr::Less& n) const {
      print_term(os, *n.lhs, kAdd);
      os << " < ";
      print_term(os, *n.rhs, kAdd);
    }
    void operator()(const BoolExpr::And& n) const {
      bool need = ctx > kAnd;
      if (need) os << "(";
      print_bool(os, *n.lhs, kAnd);
      os << " & ";
      print_bool(os, *n.rhs, kUnary);
      if (need) os << ")";
    }
    void operator()(const BoolExpr::Not& n) const {
      os << "not (";
      print_bool(os, *n.operand, kAnd);
      os << ")";
    }
  };
  std::visit(V{os, ctx}, b.node());
}
}  // namespace detail

inline std::string to_string(const Term& t) {
  std::ostringstream os;
  detail::print_term(os, t, detail::kAdd);
  return os.str();
}
inline std::string to_string(const TermPtr& t) { return to_string(*t); }

inline std::string to_string(const BoolExpr& b) {
  std::ostringstream os;
  detail::print_bool(os, b, detail::kAnd);
  return os.str();
}
inline std::string to_string(const BoolPtr& b) { return to_string(*b); }

namespace detail {
inline void print_stmt(std::ostream& os, const Stmt& s, int indent) {
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  struct V {
    std::ostream& os;
    int indent;
    const std::string& pad;
    void operator()(const Stmt::Skip&) const { os << pad << "skip;\n"; }
    void operator()(const Stmt::Assign& n) const {
      os << pad << n.var << " := ";
      print_term(os, *n.expr, kAdd);
      os << ";\n";
    }
    void operator()(const Stmt::Tick& n) const { os << pad << "tick(" << n.amount.str() << ");\n"; }
    void operator()(const Stmt::Seq& n) const {
      print_stmt(os, *n.first, indent);
      print_stmt(os, *n.second, indent);
    }
    void operator()(const Stmt::PChoice& n) const {
      os << pad << "{\n";
      print_stmt(os, *n.lhs, indent + 1);
      os << pad << "} [" << wpkind::to_string(n.prob) << "] {\n";
      print_stmt(os, *n.rhs, indent + 1);
      os << pad << "}\n";
    }
    void operator()(const Stmt::Ite& n) const {
      os << pad << "if (";
      print_bool(os, *n.cond, kAnd);
      os << ") {\n";
      print_stmt(os, *n.then_branch, indent + 1);
      os << pad << "} else {\n";
      print_stmt(os, *n.else_branch, indent + 1);
      os << pad << "}\n";
    }
    void operator()(const Stmt::CatAssign& n) const {
      os << pad << n.var << " := ";
      bool first = true;
      for (const auto& [e, w] : n.options) {
        if (!first) os << " + ";
        first = false;
        print_term(os, *e, kScale);
        os << " : " << wpkind::to_string(w);
      }
      os << ";\n";
    }
  };
  std::visit(V{os, indent, pad}, s.node());
}
}  // namespace detail

inline std::string to_string(const Stmt& s) {
  std::ostringstream os;
  detail::print_stmt(os, s, 0);
  return os.str();
}

inline std::string to_string(const Program& p) {
  std::ostringstream os;
  for (const auto& d : p.declarations) os << "nat " << d << ";\n";
  os << "while (";
  detail::print_bool(os, *p.guard, detail::kAnd);
  os << ") {\n";
  detail::print_stmt(os, *p.body, 1);
  os << "}\n";
  return os.str();
}

inline std::string to_string(const State& s) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [x, v] : s) {
    if (!first) os << " ";
    first = false;
    os << x << "=" << v.str();
  }
  return os.str();
}

}  // namespace wpkind::pgcl
