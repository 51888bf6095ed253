#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stablecut/core.hpp"
#include "stablecut/rational.hpp"

namespace stablecut {

enum class Relation { le, eq, ge };
enum class LpStatus { optimal, infeasible, unbounded };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    default: return "unbounded";
  }
}

struct Term {
  int var;
  Rational coef;
};

struct Constraint {
  std::vector<Term> terms;
  Relation rel = Relation::le;
  Rational rhs;

  Rational lhs(const std::vector<Rational>& x) const {
    Rational s;
    for (const auto& t : terms) s += t.coef * x[t.var];
    return s;
  }
  bool satisfied_by(const std::vector<Rational>& x) const {
    Rational l = lhs(x);
    switch (rel) {
      case Relation::le: return l <= rhs;
      case Relation::ge: return l >= rhs;
      default: return l == rhs;
    }
  }
};

struct Bounds {
  std::optional<Rational> lo = Rational(0);
  std::optional<Rational> hi;
};

class LpProblem {
 public:
  explicit LpProblem(Sense sense = Sense::minimize) : sense_(sense) {}

  int add_variable(std::optional<Rational> lo = Rational(0), std::optional<Rational> hi = std::nullopt,
                   Rational obj = Rational(0)) {
    if (lo && hi && *lo > *hi) throw std::invalid_argument("variable bounds with lo > hi");
    bounds_.push_back(Bounds{std::move(lo), std::move(hi)});
    obj_.push_back(std::move(obj));
    return num_vars() - 1;
  }

  int add_constraint(Constraint c) {
    for (const auto& t : c.terms)
      if (t.var < 0 || t.var >= num_vars()) throw std::out_of_range("constraint references unknown variable");
    rows_.push_back(std::move(c));
    return num_constraints() - 1;
  }
  int add_constraint(std::vector<Term> terms, Relation rel, Rational rhs) {
    return add_constraint(Constraint{std::move(terms), rel, std::move(rhs)});
  }

  void set_objective(int var, Rational c) { obj_.at(var) = std::move(c); }
  void set_sense(Sense s) { sense_ = s; }
  void set_bounds(int var, std::optional<Rational> lo, std::optional<Rational> hi) {
    if (lo && hi && *lo > *hi) throw std::invalid_argument("variable bounds with lo > hi");
    bounds_.at(var) = Bounds{std::move(lo), std::move(hi)};
  }

  int num_vars() const { return static_cast<int>(obj_.size()); }
  int num_constraints() const { return static_cast<int>(rows_.size()); }
  Sense sense() const { return sense_; }
  const std::vector<Rational>& objective() const { return obj_; }
  const std::vector<Constraint>& constraints() const { return rows_; }
  const Bounds& bounds(int var) const { return bounds_[var]; }

  Rational objective_value(const std::vector<Rational>& x) const {
    Rational s;
    for (int j = 0; j < num_vars(); ++j) s += obj_[j] * x[j];
    return s;
  }
  bool feasible(const std::vector<Rational>& x) const {
    if (static_cast<int>(x.size()) != num_vars()) return false;
    for (int j = 0; j < num_vars(); ++j) {
      if (bounds_[j].lo && x[j] < *bounds_[j].lo) return false;
      if (bounds_[j].hi && x[j] > *bounds_[j].hi) return false;
    }
    for (const auto& r : rows_)
      if (!r.satisfied_by(x)) return false;
    return true;
  }

 private:
  Sense sense_;
  std::vector<Rational> obj_;
  std::vector<Bounds> bounds_;
  std::vector<Constraint> rows_;
};

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<Rational> values;
  Rational objective;
  // Internal standard-form columns that are basic at the returned vertex.
  std::vector<int> basis;
  long pivots = 0;
};

struct SolveOptions {
  // When set, the final tableau is written here (format in README).
  std::ostream* tableau_dump = nullptr;
};

namespace detail {

// Dense exact tableau simplex on  min c.y  s.t.  A y = b (b >= 0), y >= 0.
class Tableau {
 public:
  Tableau(std::vector<std::vector<mpq_class>> rows, std::vector<mpq_class> rhs, std::vector<mpq_class> cost,
          std::vector<int> basis, int num_artificial)
      : a_(std::move(rows)), b_(std::move(rhs)), c_(std::move(cost)), basis_(std::move(basis)),
        ncols_(static_cast<int>(c_.size())), first_art_(ncols_ - num_artificial) {}

  // Returns false if phase one proves infeasibility.
  bool phase_one() {
    if (first_art_ == ncols_) return true;
    std::vector<mpq_class> d(ncols_ + 1);
    for (int j = first_art_; j < ncols_; ++j) d[j] = 1;
    price_out(d);
    run(d, /*allow_art=*/true);
    if (sgn(-d[ncols_]) > 0) return false;
    // Drive zero-valued artificials out of the basis; drop redundant rows.
    for (int r = 0; r < static_cast<int>(a_.size());) {
      if (basis_[r] < first_art_) {
        ++r;
        continue;
      }
      int c = -1;
      for (int j = 0; j < first_art_; ++j)
        if (sgn(a_[r][j]) != 0) {
          c = j;
          break;
        }
      if (c < 0) {
        a_.erase(a_.begin() + r);
        b_.erase(b_.begin() + r);
        basis_.erase(basis_.begin() + r);
        continue;
      }
      pivot(r, c, nullptr);
      ++r;
    }
    return true;
  }

  // Returns false when unbounded.
  bool phase_two() {
    std::vector<mpq_class> d(ncols_ + 1);
    for (int j = 0; j < ncols_; ++j) d[j] = c_[j];
    price_out(d);
    return run(d, /*allow_art=*/false);
  }

  std::vector<mpq_class> primal() const {
    std::vector<mpq_class> y(ncols_);
    for (std::size_t r = 0; r < basis_.size(); ++r) y[basis_[r]] = b_[r];
    return y;
  }
  const std::vector<int>& basis() const { return basis_; }
  long pivots() const { return pivots_; }

  void dump(std::ostream& os) const {
    os << "tableau rows=" << a_.size() << " cols=" << ncols_ << " artificial_from=" << first_art_ << "\n";
    os << "basis:";
    for (int v : basis_) os << ' ' << v;
    os << "\n";
    for (std::size_t r = 0; r < a_.size(); ++r) {
      os << "r" << r << ":";
      for (int j = 0; j < ncols_; ++j) os << ' ' << a_[r][j];
      os << " | " << b_[r] << "\n";
    }
  }

 private:
  // d holds costs in [0, ncols) and the negated objective value at ncols.
  void price_out(std::vector<mpq_class>& d) const {
    for (std::size_t r = 0; r < basis_.size(); ++r) {
      mpq_class f = d[basis_[r]];
      if (sgn(f) == 0) continue;
      for (int j = 0; j < ncols_; ++j)
        if (sgn(a_[r][j]) != 0) d[j] -= f * a_[r][j];
      d[ncols_] -= f * b_[r];
    }
  }

  int ratio_row(int c) const {
    int best = -1;
    mpq_class best_ratio;
    for (std::size_t r = 0; r < a_.size(); ++r) {
      if (sgn(a_[r][c]) <= 0) continue;
      mpq_class q = b_[r] / a_[r][c];
      if (best < 0 || q < best_ratio || (q == best_ratio && basis_[r] < basis_[best])) {
        best = static_cast<int>(r);
        best_ratio = q;
      }
    }
    return best;
  }

  // Largest-coefficient pricing with lowest-index ties; any pivot that would be
  // degenerate is replaced by Bland's choice, so no basis can repeat.
  bool run(std::vector<mpq_class>& d, bool allow_art) {
    const int limit = allow_art ? ncols_ : first_art_;
    for (;;) {
      int c = -1;
      for (int j = 0; j < limit; ++j)
        if (sgn(d[j]) < 0 && (c < 0 || d[j] < d[c])) c = j;
      if (c < 0) return true;
      int r = ratio_row(c);
      if (r < 0) return false;
      if (sgn(b_[r]) == 0) {
        for (int j = 0; j < limit; ++j)
          if (sgn(d[j]) < 0) {
            c = j;
            break;
          }
        r = ratio_row(c);
        if (r < 0) return false;
      }
      pivot(r, c, &d);
    }
  }

  void pivot(int r, int c, std::vector<mpq_class>* d) {
    ++pivots_;
    mpq_class p = a_[r][c];
    std::vector<int> nz;
    for (int j = 0; j < ncols_; ++j)
      if (sgn(a_[r][j]) != 0) {
        a_[r][j] /= p;
        nz.push_back(j);
      }
    b_[r] /= p;
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (static_cast<int>(i) == r || sgn(a_[i][c]) == 0) continue;
      mpq_class f = a_[i][c];
      for (int j : nz) a_[i][j] -= f * a_[r][j];
      b_[i] -= f * b_[r];
    }
    if (d && sgn((*d)[c]) != 0) {
      mpq_class f = (*d)[c];
      for (int j : nz) (*d)[j] -= f * a_[r][j];
      (*d)[ncols_] -= f * b_[r];
    }
    basis_[r] = c;
  }

  std::vector<std::vector<mpq_class>> a_;
  std::vector<mpq_class> b_;
  std::vector<mpq_class> c_;
  std::vector<int> basis_;
  int ncols_;
  int first_art_;
  long pivots_ = 0;
};

}  // namespace detail

inline LpSolution solve(const LpProblem& problem, const SolveOptions& opts = {}) {
  const int nv = problem.num_vars();
  // x_j = base_j + sign_j * y_col_j (- y_col_j+1 when free)
  enum class Kind { fixed, shift, negate, split };
  struct Map {
    Kind kind;
    mpq_class base;
    int col;
  };
  std::vector<Map> map(nv);
  int ncols = 0;
  std::vector<std::pair<int, mpq_class>> upper_rows;  // (col, cap)
  for (int j = 0; j < nv; ++j) {
    const auto& bd = problem.bounds(j);
    if (bd.lo && bd.hi && *bd.lo == *bd.hi) {
      map[j] = {Kind::fixed, bd.lo->mpq(), -1};
    } else if (bd.lo) {
      map[j] = {Kind::shift, bd.lo->mpq(), ncols++};
      if (bd.hi) upper_rows.emplace_back(map[j].col, (*bd.hi - *bd.lo).mpq());
    } else if (bd.hi) {
      map[j] = {Kind::negate, bd.hi->mpq(), ncols++};
    } else {
      map[j] = {Kind::split, 0, ncols};
      ncols += 2;
    }
  }
  const int nstruct = ncols;

  struct Row {
    std::vector<mpq_class> coef;
    int slack_sign;  // +1 for <=, -1 for >=, 0 for =
    mpq_class rhs;
  };
  std::vector<Row> rows;
  for (const auto& con : problem.constraints()) {
    Row row{std::vector<mpq_class>(nstruct), con.rel == Relation::le ? 1 : (con.rel == Relation::ge ? -1 : 0),
            con.rhs.mpq()};
    for (const auto& t : con.terms) {
      const auto& mp = map[t.var];
      const mpq_class& a = t.coef.mpq();
      row.rhs -= a * mp.base;
      switch (mp.kind) {
        case Kind::fixed: break;
        case Kind::shift: row.coef[mp.col] += a; break;
        case Kind::negate: row.coef[mp.col] -= a; break;
        case Kind::split:
          row.coef[mp.col] += a;
          row.coef[mp.col + 1] -= a;
          break;
      }
    }
    rows.push_back(std::move(row));
  }
  for (auto& [col, cap] : upper_rows) {
    Row row{std::vector<mpq_class>(nstruct), 1, cap};
    row.coef[col] = 1;
    rows.push_back(std::move(row));
  }

  // Rows with no variables left are checked directly.
  for (auto it = rows.begin(); it != rows.end();) {
    bool empty = std::all_of(it->coef.begin(), it->coef.end(), [](const mpq_class& q) { return sgn(q) == 0; });
    if (!empty) {
      ++it;
      continue;
    }
    int s = sgn(it->rhs);  // need 0 (rel) rhs
    bool ok = it->slack_sign == 0 ? s == 0 : (it->slack_sign > 0 ? s >= 0 : s <= 0);
    if (!ok) return LpSolution{LpStatus::infeasible, {}, Rational(0), {}, 0};
    it = rows.erase(it);
  }

  const int m = static_cast<int>(rows.size());
  int nslack = 0;
  for (const auto& r : rows)
    if (r.slack_sign != 0) ++nslack;
  for (auto& r : rows)
    if (sgn(r.rhs) < 0) {
      for (auto& q : r.coef) q = -q;
      r.rhs = -r.rhs;
      r.slack_sign = -r.slack_sign;
    }
  int nart = 0;
  for (const auto& r : rows)
    if (r.slack_sign != 1) ++nart;
  const int total = nstruct + nslack + nart;

  std::vector<std::vector<mpq_class>> a(m, std::vector<mpq_class>(total));
  std::vector<mpq_class> b(m);
  std::vector<int> basis(m);
  int s_at = nstruct, art_at = nstruct + nslack;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < nstruct; ++j) a[i][j] = rows[i].coef[j];
    b[i] = rows[i].rhs;
    if (rows[i].slack_sign != 0) {
      a[i][s_at] = rows[i].slack_sign;
      if (rows[i].slack_sign == 1) basis[i] = s_at;
      ++s_at;
    }
    if (rows[i].slack_sign != 1) {
      a[i][art_at] = 1;
      basis[i] = art_at++;
    }
  }

  const bool maximize = problem.sense() == Sense::maximize;
  std::vector<mpq_class> cost(total);
  mpq_class constant;
  for (int j = 0; j < nv; ++j) {
    mpq_class c = problem.objective()[j].mpq();
    if (maximize) c = -c;
    const auto& mp = map[j];
    constant += c * mp.base;
    switch (mp.kind) {
      case Kind::fixed: break;
      case Kind::shift: cost[mp.col] += c; break;
      case Kind::negate: cost[mp.col] -= c; break;
      case Kind::split:
        cost[mp.col] += c;
        cost[mp.col + 1] -= c;
        break;
    }
  }

  detail::Tableau tab(std::move(a), std::move(b), std::move(cost), std::move(basis), nart);
  LpSolution out;
  if (!tab.phase_one()) {
    out.status = LpStatus::infeasible;
    out.pivots = tab.pivots();
    if (opts.tableau_dump) tab.dump(*opts.tableau_dump);
    return out;
  }
  bool bounded = tab.phase_two();
  out.pivots = tab.pivots();
  if (opts.tableau_dump) tab.dump(*opts.tableau_dump);
  if (!bounded) {
    out.status = LpStatus::unbounded;
    return out;
  }
  auto y = tab.primal();
  out.status = LpStatus::optimal;
  out.values.resize(nv);
  for (int j = 0; j < nv; ++j) {
    const auto& mp = map[j];
    mpq_class x = mp.base;
    switch (mp.kind) {
      case Kind::fixed: break;
      case Kind::shift: x += y[mp.col]; break;
      case Kind::negate: x -= y[mp.col]; break;
      case Kind::split: x += y[mp.col] - y[mp.col + 1]; break;
    }
    out.values[j] = Rational(x);
  }
  out.objective = problem.objective_value(out.values);
  out.basis = tab.basis();
  std::sort(out.basis.begin(), out.basis.end());
  return out;
}

// Returns either nothing (candidate satisfies the whole family) or one row it violates.
using SeparationOracle = std::function<std::optional<Constraint>(const std::vector<Rational>&)>;

struct SeparationBudgetExceeded : std::runtime_error {
  LpSolution last;
  explicit SeparationBudgetExceeded(LpSolution s)
      : std::runtime_error("separation round budget exhausted"), last(std::move(s)) {}
};

// Cutting-plane loop. Rows returned by the oracle are appended to `problem`.
inline LpSolution solve_with_separation(LpProblem& problem, const SeparationOracle& oracle, int max_rounds = 10000) {
  for (int round = 0;; ++round) {
    LpSolution sol = solve(problem);
    if (sol.status != LpStatus::optimal || !oracle) return sol;
    auto cut = oracle(sol.values);
    if (!cut) return sol;
    if (cut->satisfied_by(sol.values)) throw std::logic_error("separation oracle returned a satisfied row");
    if (round + 1 >= max_rounds) throw SeparationBudgetExceeded(std::move(sol));
    problem.add_constraint(std::move(*cut));
  }
}

// Same optimum as solve(problem), but rows enter only once violated, the
// `batch` worst per round. Pays off when most rows are slack at the optimum.
// The returned basis refers to the reduced problem.
inline LpSolution solve_lazy(const LpProblem& problem, int batch = 32) {
  LpProblem work(problem.sense());
  for (int j = 0; j < problem.num_vars(); ++j)
    work.add_variable(problem.bounds(j).lo, problem.bounds(j).hi, problem.objective()[j]);
  const auto& rows = problem.constraints();
  std::vector<char> added(rows.size(), 0);
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].rel == Relation::eq) {
      work.add_constraint(rows[i]);
      added[i] = 1;
    }
  for (;;) {
    LpSolution sol = solve(work);
    if (sol.status == LpStatus::infeasible) return sol;
    if (sol.status == LpStatus::unbounded) return solve(problem);
    std::vector<std::pair<Rational, std::size_t>> violated;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (added[i]) continue;
      Rational gap = rows[i].lhs(sol.values) - rows[i].rhs;
      if (rows[i].rel == Relation::ge) gap = -gap;
      if (gap.sign() > 0) violated.push_back({gap, i});
    }
    if (violated.empty()) return sol;
    std::sort(violated.begin(), violated.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? b.first < a.first : a.second < b.second;
    });
    if (static_cast<int>(violated.size()) > batch) violated.resize(batch);
    for (const auto& [gap, i] : violated) {
      work.add_constraint(rows[i]);
      added[i] = 1;
    }
  }
}

inline bool is_integral(const LpSolution& sol, const std::vector<int>& vars) {
  for (int v : vars) {
    const auto& x = sol.values.at(v);
    if (!x.is_zero() && x != Rational(1)) return false;
  }
  return true;
}

inline std::vector<int> all_vars(const LpProblem& p) {
  std::vector<int> v(p.num_vars());
  std::iota(v.begin(), v.end(), 0);
  return v;
}

// Whether every optimal point of `problem` agrees with `sol` on `vars`, which
// must be 0/1 there. Maximizes the L1 distance from `sol` over the optimal face.
inline bool unique_on_vars(LpProblem problem, const LpSolution& sol, const std::vector<int>& vars,
                           const SeparationOracle& oracle = nullptr) {
  if (!is_integral(sol, vars)) throw std::invalid_argument("unique_on_vars needs a 0/1 point");
  std::vector<Term> obj_row;
  for (int j = 0; j < problem.num_vars(); ++j)
    if (!problem.objective()[j].is_zero()) obj_row.push_back({j, problem.objective()[j]});
  problem.add_constraint(std::move(obj_row), Relation::eq, sol.objective);
  for (int j = 0; j < problem.num_vars(); ++j) problem.set_objective(j, 0);
  problem.set_sense(Sense::maximize);
  Rational ones;
  for (int v : vars) {
    if (sol.values[v].is_zero()) {
      problem.set_objective(v, problem.objective()[v] + 1);
    } else {
      problem.set_objective(v, problem.objective()[v] - 1);
      ones += 1;
    }
  }
  LpSolution far = solve_with_separation(problem, oracle);
  if (far.status != LpStatus::optimal) throw std::logic_error("optimal face re-solve failed");
  return far.objective + ones == Rational(0);
}

}  // namespace stablecut
