#pragma once

// Independent ground-truth implementations used only by tests. These must
// stay decoupled from the library's code paths they are checking.

#include <gmpxx.h>

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

#include "promlin/algebra.hpp"
#include "promlin/eqsys.hpp"

namespace promlin::oracle {

// regularity straight from the definition: s^2 t = s and st = ts for some t
inline bool is_regular_def(const Algebra& m, int s) {
  const int s2 = m.product(s, s);
  for (int t = 0; t < m.size(); ++t)
    if (m.product(s2, t) == s && m.product(s, t) == m.product(t, s)) return true;
  return false;
}

// s ⊑ t via a word automaton: states (value, seen-t), words built by
// appending single letters on the right
inline bool divides_def(const Algebra& a, int s, int t) {
  const int n = a.size();
  std::vector<std::vector<char>> state(n, std::vector<char>(2, 0));
  std::vector<std::pair<int, int>> queue;
  for (int x = 0; x < n; ++x) {
    const int f = x == t ? 1 : 0;
    if (!state[x][f]) {
      state[x][f] = 1;
      queue.emplace_back(x, f);
    }
  }
  for (size_t i = 0; i < queue.size(); ++i) {
    auto [v, f] = queue[i];
    for (int x = 0; x < n; ++x) {
      const int nv = a.product(v, x);
      const int nf = f || x == t;
      if (!state[nv][nf]) {
        state[nv][nf] = 1;
        queue.emplace_back(nv, nf);
      }
    }
  }
  return state[s][1] != 0;
}

// every total hom extending phi, by filtering all |M2|^|M1| maps
inline std::vector<std::vector<int>> all_extending_homs_def(const Algebra& m1,
                                                            const Algebra& m2,
                                                            const PartialHom& phi) {
  std::vector<std::vector<int>> out;
  const int n = m1.size();
  std::vector<int> map(n, 0);
  while (true) {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x)
      for (int y = 0; y < n && ok; ++y)
        ok = map[m1.product(x, y)] == m2.product(map[x], map[y]);
    if (ok && m1.has_identity() && m2.has_identity())
      ok = map[m1.identity()] == m2.identity();
    if (ok)
      for (int x : phi.domain.members) ok = ok && map[x] == phi.map[x];
    if (ok) out.push_back(map);
    int i = n - 1;
    for (; i >= 0; --i) {
      if (++map[i] < m2.size()) break;
      map[i] = 0;
    }
    if (i < 0) break;
  }
  return out;
}

inline bool abelian_subset(const Algebra& a, const std::vector<int>& members) {
  for (int x : members)
    for (int y : members)
      if (a.product(x, y) != a.product(y, x)) return false;
  return true;
}

enum class VerdictDef { Tractable, NPHard, IllFormed };

// the dichotomy criterion recomputed definitionally
inline VerdictDef classify_def(const Algebra& m1, const Algebra& m2,
                               const PartialHom& phi) {
  auto homs = all_extending_homs_def(m1, m2, phi);
  if (homs.empty()) return VerdictDef::IllFormed;
  for (const auto& map : homs) {
    std::set<int> image(map.begin(), map.end());
    std::vector<int> img(image.begin(), image.end());
    if (!abelian_subset(m2, img)) continue;
    bool all_regular = true;
    for (int v : img) all_regular = all_regular && is_regular_def(m2, v);
    if (all_regular) return VerdictDef::Tractable;
  }
  return VerdictDef::NPHard;
}

// integer solutions of A v = b with |v_i| <= bound, by direct enumeration
inline std::optional<std::vector<int>> bounded_integer_solution(
    const std::vector<std::vector<int>>& a, const std::vector<int>& b, int bound) {
  const int n = a.empty() ? 0 : static_cast<int>(a[0].size());
  std::vector<int> v(n, -bound);
  while (true) {
    bool ok = true;
    for (size_t r = 0; r < a.size() && ok; ++r) {
      long acc = 0;
      for (int c = 0; c < n; ++c) acc += static_cast<long>(a[r][c]) * v[c];
      ok = acc == b[r];
    }
    if (ok) return v;
    int i = n - 1;
    for (; i >= 0; --i) {
      if (++v[i] <= bound) break;
      v[i] = -bound;
    }
    if (i < 0) return std::nullopt;
  }
}

// union of supports over all basic feasible solutions (vertices) of
// {A v = b, v >= 0}, for systems with at most ~6 columns
inline std::set<int> vertex_support_union(const std::vector<std::vector<int>>& a,
                                          const std::vector<int>& b) {
  const int m = static_cast<int>(a.size());
  const int n = m == 0 ? 0 : static_cast<int>(a[0].size());
  std::set<int> support;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    // solve the system restricted to the chosen columns by rational
    // Gaussian elimination; accept unique nonnegative solutions
    std::vector<int> cols;
    for (int c = 0; c < n; ++c)
      if (mask & (1u << c)) cols.push_back(c);
    const int k = static_cast<int>(cols.size());
    std::vector<std::vector<mpq_class>> t(m, std::vector<mpq_class>(k + 1, 0));
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < k; ++c) t[r][c] = a[r][cols[c]];
      t[r][k] = b[r];
    }
    std::vector<int> pivot_col;
    int row = 0;
    for (int c = 0; c < k && row < m; ++c) {
      int pr = -1;
      for (int r = row; r < m; ++r)
        if (sgn(t[r][c]) != 0) {
          pr = r;
          break;
        }
      if (pr < 0) continue;
      std::swap(t[row], t[pr]);
      for (int r = 0; r < m; ++r) {
        if (r == row || sgn(t[r][c]) == 0) continue;
        const mpq_class f = t[r][c] / t[row][c];
        for (int cc = 0; cc <= k; ++cc) t[r][cc] -= f * t[row][cc];
      }
      pivot_col.push_back(c);
      ++row;
    }
    if (static_cast<int>(pivot_col.size()) < k) continue;  // not a basis
    bool consistent = true;
    for (int r = row; r < m; ++r) consistent = consistent && sgn(t[r][k]) == 0;
    if (!consistent) continue;
    std::vector<mpq_class> x(k, 0);
    bool nonneg = true;
    for (int i = 0; i < static_cast<int>(pivot_col.size()); ++i) {
      x[pivot_col[i]] = t[i][k] / t[i][pivot_col[i]];
      nonneg = nonneg && sgn(x[pivot_col[i]]) >= 0;
    }
    if (!nonneg) continue;
    for (int i = 0; i < k; ++i)
      if (sgn(x[i]) > 0) support.insert(cols[i]);
  }
  return support;
}

// every solution of a canonical system, by plain enumeration
inline std::vector<Assignment> all_solutions_def(const EquationSystem& sys,
                                                 const Algebra& over) {
  std::vector<Assignment> out;
  const int n = sys.num_vars();
  Assignment asg(n, 0);
  if (n == 0) {
    if (check_assignment(sys, over, asg)) out.push_back(asg);
    return out;
  }
  while (true) {
    if (check_assignment(sys, over, asg)) out.push_back(asg);
    int i = n - 1;
    for (; i >= 0; --i) {
      if (++asg[i] < over.size()) break;
      asg[i] = 0;
    }
    if (i < 0) break;
  }
  return out;
}

}  // namespace promlin::oracle
