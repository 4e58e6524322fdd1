#include "promlin/solve.hpp"

#include <algorithm>

#include "promlin/homsearch.hpp"

namespace promlin {

namespace {

struct TranslatedInstance {
  AlgebraPtr m;                  // im(psi) as a standalone algebra
  std::vector<int> to_global;    // local -> S2 index
  std::vector<int> to_local;     // S2 index -> local or -1
  EquationSystem sys;            // constants as local indices
  SubAlgebra all_constants;      // the whole of m
  RelationalStructure a_side;    // Lin(m, m)
};

TranslatedInstance translate(const PLinTemplate& t, const EquationSystem& instance,
                             const PartialHom& psi) {
  TranslatedInstance out;
  auto [alg, members] = psi.image.as_algebra();
  out.m = alg;
  out.to_global = members;
  out.to_local.assign(t.s2->size(), -1);
  for (size_t i = 0; i < members.size(); ++i)
    out.to_local[members[i]] = static_cast<int>(i);
  out.sys.variables = instance.variables;
  for (const auto& eq : instance.equations) {
    if (const auto* m = std::get_if<MulEq>(&eq)) {
      out.sys.equations.push_back(*m);
    } else {
      const auto& f = std::get<FixEq>(eq);
      require(t.phi.defined_at(f.constant), ErrorCode::ConstantOutsideConstants,
              "instance constant outside dom(phi)");
      out.sys.equations.push_back(FixEq{f.x, out.to_local[psi.apply(f.constant)]});
    }
  }
  std::vector<int> all(out.m->size());
  for (int i = 0; i < out.m->size(); ++i) all[i] = i;
  out.all_constants = make_subalgebra(out.m, std::move(all),
                                      out.m->kind() == AlgebraKind::Group
                                          ? SubKind::Subgroup
                                          : SubKind::Submonoid);
  out.a_side = lin_structure(out.m, out.all_constants);
  return out;
}

}  // namespace

SolveReport solve_promise(const PLinTemplate& t, const EquationSystem& instance,
                          const PartialHom& psi) {
  require(psi.total(), ErrorCode::PreconditionFailed,
          "solver needs a total tractability witness");
  SolveReport report;
  report.path = SolvePath::BlpAipSelfReduce;
  TranslatedInstance tr = translate(t, instance, psi);

  EquationSystem work = tr.sys;
  auto accepted = [&]() {
    return decide_blp_aip(system_to_structure(work, tr.all_constants), tr.a_side);
  };
  ++report.decisions_used;
  if (!accepted()) {
    report.violated_variable = -1;
    return report;
  }
  std::vector<int> fixed(tr.sys.num_vars(), -1);
  for (int x = 0; x < tr.sys.num_vars(); ++x) {
    int kept = -1;
    for (int a = 0; a < tr.m->size(); ++a) {
      work.equations.push_back(FixEq{x, a});
      ++report.decisions_used;
      const bool ok = accepted();
      if (ok) {
        kept = a;
        break;
      }
      work.equations.pop_back();
    }
    if (kept < 0) {
      report.violated_variable = x;
      return report;
    }
    fixed[x] = kept;
  }
  // verify over im(psi), then hand back S2 indices
  if (!check_assignment(tr.sys, *tr.m, fixed)) {
    report.violated_variable = -1;
    return report;
  }
  report.assignment.resize(fixed.size());
  for (size_t i = 0; i < fixed.size(); ++i)
    report.assignment[i] = tr.to_global[fixed[i]];
  if (!check_promise_solution(t, instance, report.assignment)) {
    report.violated_variable = -1;
    report.assignment.clear();
    return report;
  }
  report.solved = true;
  return report;
}

namespace {

struct GroupPresentation {
  std::vector<std::vector<mpz_class>> lattice;  // m x m basis columns of L
};

// relation lattice of the Cayley table: u_e together with
// u_i + u_j - u_{ij}, reduced to a square basis
GroupPresentation presentation_of(const Algebra& g) {
  const int m = g.size();
  std::vector<std::vector<mpz_class>> gens;
  {
    std::vector<mpz_class> v(m, 0);
    v[g.identity()] = 1;
    gens.push_back(std::move(v));
  }
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      std::vector<mpz_class> v(m, 0);
      v[i] += 1;
      v[j] += 1;
      v[g.product(i, j)] -= 1;
      bool zero = true;
      for (const auto& c : v) zero = zero && c == 0;
      if (!zero) gens.push_back(std::move(v));
    }
  // column-style Hermite reduction of the m x |gens| matrix to a basis
  const int k = static_cast<int>(gens.size());
  std::vector<std::vector<mpz_class>> h(m, std::vector<mpz_class>(k, 0));
  for (int c = 0; c < k; ++c)
    for (int r = 0; r < m; ++r) h[r][c] = gens[c][r];
  int next_col = 0;
  for (int r = 0; r < m && next_col < k; ++r) {
    int nz = -1;
    for (int c = next_col; c < k; ++c)
      if (h[r][c] != 0) {
        nz = c;
        break;
      }
    if (nz < 0) continue;
    if (nz != next_col)
      for (int i = 0; i < m; ++i) std::swap(h[i][nz], h[i][next_col]);
    for (int c = next_col + 1; c < k; ++c) {
      while (h[r][c] != 0) {
        mpz_class q = h[r][c] / h[r][next_col];
        for (int i = 0; i < m; ++i) h[i][c] -= q * h[i][next_col];
        if (h[r][c] != 0) {
          for (int i = 0; i < m; ++i) std::swap(h[i][c], h[i][next_col]);
        }
      }
    }
    ++next_col;
  }
  GroupPresentation p;
  p.lattice.assign(m, std::vector<mpz_class>(next_col, 0));
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < next_col; ++c) p.lattice[r][c] = h[r][c];
  return p;
}

bool group_system_feasible(const Algebra& g, const GroupPresentation& p,
                           const EquationSystem& sys,
                           const std::vector<std::pair<int, int>>& pins) {
  const int m = g.size();
  const int nv = sys.num_vars();
  const int lat = p.lattice.empty() ? 0 : static_cast<int>(p.lattice[0].size());
  std::vector<const Equation*> eqs;
  for (const auto& e : sys.equations) eqs.push_back(&e);
  std::vector<FixEq> pin_eqs;
  for (auto [x, val] : pins) pin_eqs.push_back(FixEq{x, val});
  const int ne = static_cast<int>(eqs.size() + pin_eqs.size());
  const int rows = ne * m;
  const int cols = nv * m + ne * lat;
  std::vector<std::vector<mpz_class>> a(rows, std::vector<mpz_class>(cols, 0));
  std::vector<mpz_class> b(rows, 0);
  auto fill = [&](int row_block, const Equation& eq) {
    const int r0 = row_block * m;
    const int k0 = nv * m + row_block * lat;
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < lat; ++c) a[r0 + r][k0 + c] = p.lattice[r][c];
    if (const auto* mu = std::get_if<MulEq>(&eq)) {
      for (int r = 0; r < m; ++r) {
        a[r0 + r][mu->x * m + r] += 1;
        a[r0 + r][mu->y * m + r] += 1;
        a[r0 + r][mu->z * m + r] -= 1;
      }
    } else {
      const auto& f = std::get<FixEq>(eq);
      for (int r = 0; r < m; ++r) a[r0 + r][f.x * m + r] += 1;
      b[r0 + f.constant] = 1;
    }
  };
  int block = 0;
  for (const auto* e : eqs) fill(block++, *e);
  for (const auto& f : pin_eqs) fill(block++, Equation{f});
  return hnf_solve(a, b).has_value();
}

}  // namespace

std::optional<Assignment> solve_abelian_group_system(const AlgebraPtr& g,
                                                     const EquationSystem& sys) {
  require(g->kind() == AlgebraKind::Group, ErrorCode::NotAbelian,
          "group solver needs a group");
  require(is_abelian(*g), ErrorCode::NotAbelian,
          "group solver needs an Abelian group");
  GroupPresentation p = presentation_of(*g);
  std::vector<std::pair<int, int>> pins;
  if (!group_system_feasible(*g, p, sys, pins)) return std::nullopt;
  for (int x = 0; x < sys.num_vars(); ++x) {
    bool pinned = false;
    for (int v = 0; v < g->size() && !pinned; ++v) {
      pins.emplace_back(x, v);
      if (group_system_feasible(*g, p, sys, pins))
        pinned = true;
      else
        pins.pop_back();
    }
    require(pinned, ErrorCode::PreconditionFailed,
            "feasible system lost feasibility during pinning");
  }
  Assignment asg(sys.num_vars());
  for (auto [x, v] : pins) asg[x] = v;
  require(check_assignment(sys, *g, asg), ErrorCode::PreconditionFailed,
          "group solver produced an invalid assignment");
  return asg;
}

CrossCheckReport cross_check(const PLinTemplate& t, const EquationSystem& instance) {
  CrossCheckReport rep;
  ClassificationResult cls = t.kind() == AlgebraKind::Group
                                 ? classify_group_template(t)
                                 : classify_monoid_template(t);
  require(cls.verdict == Verdict::Tractable, ErrorCode::PreconditionFailed,
          "cross-check requires a tractable template");
  const PartialHom& psi = *cls.witness;
  TranslatedInstance tr = translate(t, instance, psi);

  const auto brute = brute_force_solve(tr.sys, tr.m);
  rep.paths.push_back({SolvePath::BruteForce, brute.has_value()});

  SolveReport sr = solve_promise(t, instance, psi);
  rep.paths.push_back({SolvePath::BlpAipSelfReduce, sr.solved});

  const bool group_image = tr.m->kind() == AlgebraKind::Group;
  if (group_image) {
    auto direct = solve_abelian_group_system(tr.m, tr.sys);
    rep.paths.push_back({SolvePath::AipGroupDirect, direct.has_value()});
    rep.aip_decision =
        decide_aip(system_to_structure(tr.sys, tr.all_constants), tr.a_side);
  }
  for (const auto& p : rep.paths) rep.agree = rep.agree && p.satisfiable == rep.paths[0].satisfiable;
  if (rep.aip_decision)
    rep.agree = rep.agree && *rep.aip_decision == rep.paths[0].satisfiable;
  return rep;
}

}  // namespace promlin
