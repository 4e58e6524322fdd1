#include "promlin/relax.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include "promlin/homsearch.hpp"

namespace promlin {

// ---------------------------------------------------------------------------
// Fraction64

namespace {
std::int64_t to_i64(__int128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min())
    throw ArithmeticOverflow{};
  return static_cast<std::int64_t>(v);
}

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}
}  // namespace

Fraction64 Fraction64::make(__int128 n, __int128 d) {
  if (d == 0) throw ArithmeticOverflow{};
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const __int128 g = n == 0 ? d : gcd128(n, d);
  Fraction64 f;
  f.num = to_i64(n / g);
  f.den = to_i64(d / g);
  return f;
}

Fraction64 Fraction64::operator+(const Fraction64& o) const {
  return make(static_cast<__int128>(num) * o.den +
                  static_cast<__int128>(o.num) * den,
              static_cast<__int128>(den) * o.den);
}
Fraction64 Fraction64::operator-(const Fraction64& o) const {
  return make(static_cast<__int128>(num) * o.den -
                  static_cast<__int128>(o.num) * den,
              static_cast<__int128>(den) * o.den);
}
Fraction64 Fraction64::operator*(const Fraction64& o) const {
  return make(static_cast<__int128>(num) * o.num,
              static_cast<__int128>(den) * o.den);
}
Fraction64 Fraction64::operator/(const Fraction64& o) const {
  if (o.num == 0) throw ArithmeticOverflow{};
  return make(static_cast<__int128>(num) * o.den,
              static_cast<__int128>(den) * o.num);
}
bool Fraction64::operator<(const Fraction64& o) const {
  return static_cast<__int128>(num) * o.den <
         static_cast<__int128>(o.num) * den;
}

// ---------------------------------------------------------------------------
// Exact two-phase tableau simplex with Bland's rule.

namespace {

template <class S>
struct ScalarOps;

template <>
struct ScalarOps<Fraction64> {
  static Fraction64 from_int(int v) { return Fraction64(v); }
  static bool is_zero(const Fraction64& v) { return v.is_zero(); }
  static int sign(const Fraction64& v) { return v.sign(); }
  static mpq_class to_mpq(const Fraction64& v) {
    return mpq_class(static_cast<long>(v.num), static_cast<long>(v.den));
  }
};

template <>
struct ScalarOps<mpq_class> {
  static mpq_class from_int(int v) { return mpq_class(v); }
  static bool is_zero(const mpq_class& v) { return sgn(v) == 0; }
  static int sign(const mpq_class& v) { return sgn(v); }
  static mpq_class to_mpq(const mpq_class& v) { return v; }
};

enum class LPStatus { Infeasible, Optimal, Unbounded };

/// maximize c.x subject to A x = b, x >= 0.
template <class S>
class Simplex {
 public:
  Simplex(const std::vector<std::vector<int>>& a, const std::vector<int>& b,
          int ncols)
      : m_(static_cast<int>(a.size())), n_(ncols) {
    // columns: structural 0..n-1, artificial n..n+m-1; rows 0..m-1, cost row m
    t_.assign(m_ + 1, std::vector<S>(n_ + m_ + 1));
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      const int s = b[i] < 0 ? -1 : 1;
      for (int j = 0; j < n_; ++j) t_[i][j] = ScalarOps<S>::from_int(s * a[i][j]);
      t_[i][n_ + i] = ScalarOps<S>::from_int(1);
      t_[i][n_ + m_] = ScalarOps<S>::from_int(s * b[i]);
      basis_[i] = n_ + i;
    }
  }

  bool feasible() {
    // phase 1: maximize -sum(artificials); cost row = sum of constraint rows
    for (int j = 0; j <= n_ + m_; ++j) {
      S acc = ScalarOps<S>::from_int(0);
      for (int i = 0; i < m_; ++i) acc = acc + t_[i][j];
      t_[m_][j] = acc;
    }
    for (int i = 0; i < m_; ++i) t_[m_][n_ + i] = ScalarOps<S>::from_int(0);
    optimize(n_ + m_);  // artificials allowed to leave, never to re-enter
    if (ScalarOps<S>::sign(t_[m_][n_ + m_]) != 0) return false;
    evict_artificials();
    return true;
  }

  /// From a feasible tableau: maximize c over structural columns.
  LPStatus maximize(const std::vector<S>& c) {
    // rebuild reduced costs for the new objective
    for (int j = 0; j <= n_ + m_; ++j) t_[m_][j] = ScalarOps<S>::from_int(0);
    for (int j = 0; j < n_; ++j) t_[m_][j] = c[j];
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_ && !ScalarOps<S>::is_zero(c[basis_[i]])) {
        const S coef = c[basis_[i]];
        for (int j = 0; j <= n_ + m_; ++j)
          t_[m_][j] = t_[m_][j] - coef * t_[i][j];
      }
    }
    return optimize(n_);
  }

  std::vector<mpq_class> point() const {
    std::vector<mpq_class> x(n_, 0);
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_) x[basis_[i]] = ScalarOps<S>::to_mpq(t_[i][n_ + m_]);
    return x;
  }

  /// After Unbounded: a ray r >= 0 with A r = 0 and c.r > 0.
  std::vector<mpq_class> ray() const {
    std::vector<mpq_class> r(n_, 0);
    r[ray_col_] = 1;
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_) r[basis_[i]] = ScalarOps<S>::to_mpq(-t_[i][ray_col_]);
    return r;
  }

  mpq_class objective() const { return ScalarOps<S>::to_mpq(-t_[m_][n_ + m_]); }

 private:
  // Bland: entering = least column with positive reduced cost; leaving = of
  // the min-ratio rows, the one whose basic variable has the least index.
  LPStatus optimize(int allowed_cols) {
    while (true) {
      int enter = -1;
      for (int j = 0; j < allowed_cols; ++j)
        if (ScalarOps<S>::sign(t_[m_][j]) > 0) {
          enter = j;
          break;
        }
      if (enter < 0) return LPStatus::Optimal;
      int leave = -1;
      for (int i = 0; i < m_; ++i) {
        if (ScalarOps<S>::sign(t_[i][enter]) <= 0) continue;
        if (leave < 0) {
          leave = i;
          continue;
        }
        const S lhs = t_[i][n_ + m_] * t_[leave][enter];
        const S rhs = t_[leave][n_ + m_] * t_[i][enter];
        if (lhs < rhs || (lhs == rhs && basis_[i] < basis_[leave])) leave = i;
      }
      if (leave < 0) {
        ray_col_ = enter;
        return LPStatus::Unbounded;
      }
      pivot(leave, enter);
    }
  }

  void pivot(int row, int col) {
    const S p = t_[row][col];
    for (int j = 0; j <= n_ + m_; ++j) t_[row][j] = t_[row][j] / p;
    for (int i = 0; i <= m_; ++i) {
      if (i == row || ScalarOps<S>::is_zero(t_[i][col])) continue;
      const S f = t_[i][col];
      for (int j = 0; j <= n_ + m_; ++j)
        t_[i][j] = t_[i][j] - f * t_[row][j];
    }
    basis_[row] = col;
  }

  // pivots basic artificials out, or drops redundant rows
  void evict_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      int col = -1;
      for (int j = 0; j < n_; ++j)
        if (!ScalarOps<S>::is_zero(t_[i][j])) {
          col = j;
          break;
        }
      if (col >= 0) {
        pivot(i, col);
      } else {
        // redundant row: zero out so it never constrains again
        for (int j = 0; j <= n_ + m_; ++j) t_[i][j] = ScalarOps<S>::from_int(0);
        t_[i][basis_[i]] = ScalarOps<S>::from_int(1);
      }
    }
  }

  int m_, n_;
  std::vector<std::vector<S>> t_;
  std::vector<int> basis_;
  int ray_col_ = -1;
};

template <class S>
std::optional<SupportResult> support_impl(const RelaxationSystem& sys) {
  Simplex<S> lp(sys.matrix, sys.rhs, sys.cols());
  if (!lp.feasible()) return std::nullopt;
  const int n = sys.cols();
  std::vector<std::vector<mpq_class>> witnesses{lp.point()};
  std::vector<char> in_support(n, 0);
  auto absorb = [&](const std::vector<mpq_class>& w) {
    for (int j = 0; j < n; ++j)
      if (sgn(w[j]) != 0) in_support[j] = 1;
  };
  absorb(witnesses[0]);
  while (true) {
    std::vector<S> c(n, ScalarOps<S>::from_int(0));
    bool any = false;
    for (int j = 0; j < n; ++j)
      if (!in_support[j]) {
        c[j] = ScalarOps<S>::from_int(1);
        any = true;
      }
    if (!any) break;
    const LPStatus st = lp.maximize(c);
    if (st == LPStatus::Unbounded) {
      auto w = lp.point();
      const auto r = lp.ray();
      for (int j = 0; j < n; ++j) w[j] += r[j];
      witnesses.push_back(w);
      absorb(w);
      continue;
    }
    if (sgn(lp.objective()) == 0) break;  // every remaining column is forced 0
    witnesses.push_back(lp.point());
    absorb(witnesses.back());
  }
  SupportResult res;
  res.point.assign(n, 0);
  for (const auto& w : witnesses)
    for (int j = 0; j < n; ++j) res.point[j] += w[j];
  const mpq_class k(static_cast<int>(witnesses.size()));
  for (int j = 0; j < n; ++j) {
    res.point[j] /= k;
    res.point[j].canonicalize();
  }
  for (int j = 0; j < n; ++j)
    if (in_support[j]) res.support.push_back(j);
  // the averaged point must solve the system exactly and realize the support
  for (int i = 0; i < sys.rows(); ++i) {
    mpq_class acc = 0;
    for (int j = 0; j < n; ++j)
      if (sys.matrix[i][j]) acc += sys.matrix[i][j] * res.point[j];
    require(acc == sys.rhs[i], ErrorCode::PreconditionFailed,
            "support point fails substitution check");
  }
  for (int j = 0; j < n; ++j)
    require((sgn(res.point[j]) != 0) == (in_support[j] != 0),
            ErrorCode::PreconditionFailed,
            "support point does not realize the support");
  return res;
}

}  // namespace

// ---------------------------------------------------------------------------
// RelaxationSystem

RelaxationSystem build_relaxation(const RelationalStructure& instance,
                                  const RelationalStructure& a_side,
                                  RelaxMode mode) {
  require(instance.same_signature(a_side), ErrorCode::SignatureMismatch,
          "instance and template signatures differ");
  RelaxationSystem sys;
  sys.mode = mode;
  const int nv = instance.universe_size;
  const int na = a_side.universe_size;
  auto elem_name = [&](int e) {
    return instance.universe_labels.empty() ? "x" + std::to_string(e)
                                            : instance.universe_labels[e];
  };
  auto value_name = [&](int v) {
    return a_side.universe_labels.empty() ? std::to_string(v)
                                          : a_side.universe_labels[v];
  };
  // lambda columns
  std::vector<int> lambda_col(static_cast<size_t>(nv) * na);
  for (int e = 0; e < nv; ++e)
    for (int v = 0; v < na; ++v) {
      lambda_col[static_cast<size_t>(e) * na + v] = sys.cols();
      sys.columns.push_back(RelaxColumn{RelaxColumn::Kind::Lambda, e, v, -1, -1,
                                        "lam(" + elem_name(e) + "," +
                                            value_name(v) + ")"});
    }
  // mu columns per constraint
  struct C {
    int rel;
    const std::vector<int>* scope;
    int first_col;
  };
  std::vector<C> cons;
  for (size_t r = 0; r < instance.relations.size(); ++r)
    for (const auto& t : instance.relations[r].tuples) {
      const int first = sys.cols();
      const int ci = static_cast<int>(cons.size());
      const auto& tgt = a_side.relations[r];
      for (size_t ti = 0; ti < tgt.tuples.size(); ++ti)
        sys.columns.push_back(
            RelaxColumn{RelaxColumn::Kind::Mu, -1, -1, ci, static_cast<int>(ti),
                        "mu(C" + std::to_string(ci) + ",t" + std::to_string(ti) +
                            ")"});
      cons.push_back(C{static_cast<int>(r), &t, first});
    }
  // normalization rows
  for (int e = 0; e < nv; ++e) {
    std::vector<int> row(sys.cols(), 0);
    for (int v = 0; v < na; ++v) row[lambda_col[static_cast<size_t>(e) * na + v]] = 1;
    sys.matrix.push_back(std::move(row));
    sys.rhs.push_back(1);
    sys.row_names.push_back("norm(" + elem_name(e) + ")");
  }
  // marginal rows per (constraint, coordinate, value)
  for (size_t ci = 0; ci < cons.size(); ++ci) {
    const auto& c = cons[ci];
    const auto& tgt = a_side.relations[c.rel];
    for (size_t pos = 0; pos < c.scope->size(); ++pos) {
      const int e = (*c.scope)[pos];
      for (int v = 0; v < na; ++v) {
        std::vector<int> row(sys.cols(), 0);
        for (size_t ti = 0; ti < tgt.tuples.size(); ++ti)
          if (tgt.tuples[ti][pos] == v)
            row[c.first_col + static_cast<int>(ti)] += 1;
        row[lambda_col[static_cast<size_t>(e) * na + v]] -= 1;
        sys.matrix.push_back(std::move(row));
        sys.rhs.push_back(0);
        sys.row_names.push_back("marg(C" + std::to_string(ci) + ",i" +
                                std::to_string(pos) + "," + value_name(v) + ")");
      }
    }
  }
  return sys;
}

RelaxationSystem RelaxationSystem::restricted_to(
    const std::vector<int>& keep_columns) const {
  RelaxationSystem out;
  out.mode = mode;
  out.columns.reserve(keep_columns.size());
  for (int j : keep_columns) out.columns.push_back(columns[j]);
  out.row_names = row_names;
  out.rhs = rhs;
  out.matrix.reserve(matrix.size());
  for (const auto& row : matrix) {
    std::vector<int> r;
    r.reserve(keep_columns.size());
    for (int j : keep_columns) r.push_back(row[j]);
    out.matrix.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hermite-normal-form integer solver (column operations, solutions
// reconstructed through the recorded unimodular transform).

std::optional<std::vector<mpz_class>> hnf_solve(
    const std::vector<std::vector<mpz_class>>& a,
    const std::vector<mpz_class>& b) {
  const int m = static_cast<int>(a.size());
  const int n = m == 0 ? 0 : static_cast<int>(a[0].size());
  if (m == 0) return std::vector<mpz_class>(n, 0);
  std::vector<std::vector<mpz_class>> h = a;
  // u: n x n unimodular with h = a * u maintained columnwise
  std::vector<std::vector<mpz_class>> u(n, std::vector<mpz_class>(n, 0));
  for (int j = 0; j < n; ++j) u[j][j] = 1;

  auto col_combine = [&](int r, int c1, int c2) {
    // unimodular transform making h[r][c2] = 0 and h[r][c1] = gcd
    mpz_class g, p, q;
    mpz_gcdext(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t(),
               h[r][c1].get_mpz_t(), h[r][c2].get_mpz_t());
    const mpz_class x = h[r][c1] / g, y = h[r][c2] / g;
    for (int i = 0; i < m; ++i) {
      const mpz_class n1 = p * h[i][c1] + q * h[i][c2];
      const mpz_class n2 = x * h[i][c2] - y * h[i][c1];
      h[i][c1] = n1;
      h[i][c2] = n2;
    }
    for (int i = 0; i < n; ++i) {
      const mpz_class n1 = p * u[i][c1] + q * u[i][c2];
      const mpz_class n2 = x * u[i][c2] - y * u[i][c1];
      u[i][c1] = n1;
      u[i][c2] = n2;
    }
  };

  std::vector<int> pivot_col_of_row(m, -1);
  int next_col = 0;
  for (int r = 0; r < m && next_col < n; ++r) {
    int nz = -1;
    for (int c = next_col; c < n; ++c)
      if (h[r][c] != 0) {
        nz = c;
        break;
      }
    if (nz < 0) continue;
    if (nz != next_col) {
      std::swap(h[r][nz], h[r][next_col]);
      for (int i = 0; i < m; ++i)
        if (i != r) std::swap(h[i][nz], h[i][next_col]);
      for (int i = 0; i < n; ++i) std::swap(u[i][nz], u[i][next_col]);
    }
    for (int c = next_col + 1; c < n; ++c)
      if (h[r][c] != 0) col_combine(r, next_col, c);
    pivot_col_of_row[r] = next_col;
    ++next_col;
  }

  // back-substitute: h is in column-echelon form (pivots move right as rows
  // descend); free coordinates stay zero
  std::vector<mpz_class> y(n, 0);
  for (int r = 0; r < m; ++r) {
    mpz_class acc = 0;
    for (int c = 0; c < n; ++c)
      if (h[r][c] != 0 && y[c] != 0) acc += h[r][c] * y[c];
    const mpz_class rem = b[r] - acc;
    const int pc = pivot_col_of_row[r];
    if (pc < 0) {
      if (rem != 0) return std::nullopt;
      continue;
    }
    if (rem == 0) continue;
    if (h[r][pc] == 0 || rem % h[r][pc] != 0) return std::nullopt;
    y[pc] = rem / h[r][pc];
  }
  // x = u * y, then verify by substitution
  std::vector<mpz_class> x(n, 0);
  for (int i = 0; i < n; ++i) {
    mpz_class acc = 0;
    for (int j = 0; j < n; ++j)
      if (u[i][j] != 0 && y[j] != 0) acc += u[i][j] * y[j];
    x[i] = acc;
  }
  for (int r = 0; r < m; ++r) {
    mpz_class acc = 0;
    for (int c = 0; c < n; ++c)
      if (a[r][c] != 0 && x[c] != 0) acc += a[r][c] * x[c];
    if (acc != b[r]) return std::nullopt;
  }
  return x;
}

std::optional<std::vector<mpz_class>> integer_affine_feasible(
    const RelaxationSystem& sys) {
  require(sys.mode == RelaxMode::IntegerUnrestricted, ErrorCode::PreconditionFailed,
          "integer feasibility needs integer_unrestricted mode");
  std::vector<std::vector<mpz_class>> a(sys.rows(),
                                        std::vector<mpz_class>(sys.cols(), 0));
  std::vector<mpz_class> b(sys.rows());
  for (int i = 0; i < sys.rows(); ++i) {
    b[i] = sys.rhs[i];
    for (int j = 0; j < sys.cols(); ++j) a[i][j] = sys.matrix[i][j];
  }
  return hnf_solve(a, b);
}

std::optional<SupportResult> rational_feasible_support(const RelaxationSystem& sys) {
  require(sys.mode == RelaxMode::RationalNonnegative, ErrorCode::PreconditionFailed,
          "support computation needs rational_nonnegative mode");
  try {
    return support_impl<Fraction64>(sys);
  } catch (const ArithmeticOverflow&) {
    return support_impl<mpq_class>(sys);
  }
}

// ---------------------------------------------------------------------------
// Decision engines

namespace {

// Deletes columns that are zero in every nonnegative solution for an easy
// structural reason: a lambda whose value fails arc consistency, or a mu
// whose tuple meets a deleted lambda. Equivalent to building the relaxation
// over the arc-consistent domains.
struct Presolve {
  RelaxationSystem reduced;
  bool wiped = false;
};

Presolve presolve_blp(const RelationalStructure& instance,
                      const RelationalStructure& a_side, RelaxMode mode) {
  Presolve out;
  auto domains = arc_consistent_domains(instance, a_side);
  if (!domains) {
    out.wiped = true;
    return out;
  }
  RelaxationSystem full = build_relaxation(instance, a_side, mode);
  std::vector<std::vector<char>> in_dom(
      instance.universe_size, std::vector<char>(a_side.universe_size, 0));
  for (int e = 0; e < instance.universe_size; ++e)
    for (int v : (*domains)[e]) in_dom[e][v] = 1;
  // constraint scopes in build order
  std::vector<const std::vector<int>*> scopes;
  std::vector<int> scope_rel;
  for (size_t r = 0; r < instance.relations.size(); ++r)
    for (const auto& t : instance.relations[r].tuples) {
      scopes.push_back(&t);
      scope_rel.push_back(static_cast<int>(r));
    }
  std::vector<int> keep;
  for (int j = 0; j < full.cols(); ++j) {
    const auto& c = full.columns[j];
    if (c.kind == RelaxColumn::Kind::Lambda) {
      if (in_dom[c.variable][c.value]) keep.push_back(j);
    } else {
      const auto& scope = *scopes[c.constraint];
      const auto& t = a_side.relations[scope_rel[c.constraint]].tuples[c.tuple];
      bool ok = true;
      for (size_t pos = 0; pos < scope.size() && ok; ++pos)
        ok = in_dom[scope[pos]][t[pos]];
      if (ok) keep.push_back(j);
    }
  }
  out.reduced = full.restricted_to(keep);
  // drop rows that became all-zero with zero rhs
  RelaxationSystem pruned;
  pruned.mode = out.reduced.mode;
  pruned.columns = out.reduced.columns;
  for (int i = 0; i < out.reduced.rows(); ++i) {
    bool all_zero = true;
    for (int j = 0; j < out.reduced.cols() && all_zero; ++j)
      all_zero = out.reduced.matrix[i][j] == 0;
    if (all_zero && out.reduced.rhs[i] == 0) continue;
    if (all_zero && out.reduced.rhs[i] != 0) {
      out.wiped = true;
      return out;
    }
    pruned.matrix.push_back(out.reduced.matrix[i]);
    pruned.rhs.push_back(out.reduced.rhs[i]);
    pruned.row_names.push_back(out.reduced.row_names[i]);
  }
  out.reduced = std::move(pruned);
  return out;
}

}  // namespace

bool decide_aip(const RelationalStructure& instance,
                const RelationalStructure& a_side) {
  RelaxationSystem sys =
      build_relaxation(instance, a_side, RelaxMode::IntegerUnrestricted);
  return integer_affine_feasible(sys).has_value();
}

bool decide_blp_aip(const RelationalStructure& instance,
                    const RelationalStructure& a_side) {
  Presolve pre = presolve_blp(instance, a_side, RelaxMode::RationalNonnegative);
  if (pre.wiped) return false;
  auto support = rational_feasible_support(pre.reduced);
  if (!support) return false;
  RelaxationSystem refined = pre.reduced.restricted_to(support->support);
  refined.mode = RelaxMode::IntegerUnrestricted;
  return integer_affine_feasible(refined).has_value();
}

void dump_relaxation(const RelaxationSystem& sys, std::ostream& os) {
  os << "% relaxation " << sys.rows() << " x " << sys.cols() << " mode "
     << (sys.mode == RelaxMode::IntegerUnrestricted ? "integer_unrestricted"
                                                    : "rational_nonnegative")
     << "\n";
  os << "% columns:";
  for (const auto& c : sys.columns) os << ' ' << c.name;
  os << "\n";
  int nnz = 0;
  for (const auto& row : sys.matrix)
    for (int v : row) nnz += v != 0;
  os << sys.rows() << ' ' << sys.cols() << ' ' << nnz << "\n";
  for (int i = 0; i < sys.rows(); ++i)
    for (int j = 0; j < sys.cols(); ++j)
      if (sys.matrix[i][j] != 0)
        os << (i + 1) << ' ' << (j + 1) << ' ' << sys.matrix[i][j] << "\n";
  os << "% rhs\n";
  for (int i = 0; i < sys.rows(); ++i) os << sys.rhs[i] << "\n";
}

}  // namespace promlin
