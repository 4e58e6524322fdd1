#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "promlin/corpus.hpp"
#include "promlin/homsearch.hpp"
#include "promlin/reduce.hpp"

using namespace promlin;

namespace {

bool semigroups_isomorphic(const Algebra& a, const Algebra& b) {
  if (a.size() != b.size()) return false;
  std::vector<int> perm(a.size());
  for (int i = 0; i < a.size(); ++i) perm[i] = i;
  do {
    bool ok = true;
    for (int x = 0; x < a.size() && ok; ++x)
      for (int y = 0; y < a.size() && ok; ++y)
        ok = perm[a.product(x, y)] == b.product(perm[x], perm[y]);
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

bool hom_equivalent(const SigmaPlusStructure& x, const SigmaPlusStructure& y) {
  return hom_exists(sigma_plus_to_structure(x), sigma_plus_to_structure(y)) &&
         hom_exists(sigma_plus_to_structure(y), sigma_plus_to_structure(x));
}

EquationSystem canonical_phi(const SigmaPlusStructure& inst) {
  auto sw = canonical_SW();
  std::vector<int> all(sw->size());
  for (int i = 0; i < sw->size(); ++i) all[i] = i;
  auto t = make_subalgebra(sw, all, SubKind::Subsemigroup);
  return normalize(phi_system(inst), t, AlgebraKind::Semigroup).system;
}

}  // namespace

TEST_CASE("extended digraphs") {
  Digraph empty;
  auto s0 = digraph_plus(empty);
  CHECK(s0.vertices.size() == 2);
  CHECK(s0.edges.size() == 1);
  Digraph one_edge{{"0", "1"}, {{0, 1}}};
  auto s1 = digraph_plus(one_edge);
  CHECK(s1.vertices.size() == 4);
  CHECK(s1.edges.size() == 2);
  CHECK(s1.p_marks.size() == 1);
  CHECK(s1.q_marks.size() == 1);
}

TEST_CASE("the band of a digraph") {
  Digraph one_edge{{"0", "1"}, {{0, 1}}};
  auto sd = build_SD(one_edge);
  CHECK(sd.algebra->size() == 23);  // 5*(2+2) + (1+1) + 1
  CHECK(sd.s_w.size() == 12);

  const auto& s = *sd.algebra;
  // band laws, exhaustively
  for (int x = 0; x < s.size(); ++x) CHECK(s.product(x, x) == x);
  for (int r = 0; r < s.size(); ++r)
    for (int t = 0; t < s.size(); ++t)
      for (int u = 0; u < s.size(); ++u)
        CHECK(s.product(s.product(r, t), u) == s.product(s.product(t, r), u));

  // similar elements multiply identically on the left
  auto classes = sim_classes(s);
  for (const auto& cls : classes)
    for (int x : cls)
      for (int y : cls)
        for (int t = 0; t < s.size(); ++t)
          CHECK(s.product(x, t) == s.product(y, t));

  // defining product rule: an R-avatar times a left avatar lands in LR
  const int uR = *s.index_of("0^R");
  const int vL = *s.index_of("1^L");
  CHECK(s.product(uR, vL) == *s.index_of("1^LR"));
  // edge avatars resolve to endpoints
  const int eC = *s.index_of("(0,1)^C");
  CHECK(s.product(*s.index_of("p^L"), eC) == *s.index_of("0^LC"));
  CHECK(s.product(*s.index_of("p^R"), eC) == *s.index_of("1^CR"));
}

TEST_CASE("quotients of the bands all match the planted subsemigroup") {
  auto sw_quot = quotient_semilattice(canonical_SW());
  CHECK(sw_quot.algebra->size() == 7);
  for (auto& [name, d] : corpus_digraphs()) {
    auto sd = build_SD(d);
    auto q = quotient_semilattice(sd.algebra);
    CAPTURE(name);
    CHECK(q.algebra->size() == 7);
    CHECK(semigroups_isomorphic(*q.algebra, *sw_quot.algebra));
  }
}

TEST_CASE("the planted subsemigroup embeds in every band") {
  for (auto& [name, d] : corpus_digraphs()) {
    auto sd = build_SD(d);
    const auto& sw = *canonical_SW();
    for (int x = 0; x < sw.size(); ++x)
      for (int y = 0; y < sw.size(); ++y)
        CHECK(sd.sw_embedding[sw.product(x, y)] ==
              sd.algebra->product(sd.sw_embedding[x], sd.sw_embedding[y]));
  }
}

TEST_CASE("the translated system of an instance") {
  SigmaPlusStructure inst;
  inst.vertices = {"a", "b"};
  inst.edges = {{0, 1}};
  auto sys = phi_system(inst);
  CHECK(sys.variables.size() == 7);  // 3 per vertex + 1 per edge
  CHECK(sys.equations.size() == 20);

  SigmaPlusStructure marked = inst;
  marked.p_marks = {0};
  auto sys_p = phi_system(marked);
  CHECK(sys_p.equations.size() == 23);  // three more pinning equations
}

TEST_CASE("homomorphisms induce solutions and back") {
  Digraph d{{"0", "1"}, {{0, 1}}};
  auto sd = build_SD(d);
  SigmaPlusStructure inst;
  inst.vertices = {"a", "b"};
  inst.edges = {{0, 1}};
  auto h = find_homomorphism(sigma_plus_to_structure(inst),
                             sigma_plus_to_structure(sd.d_plus));
  REQUIRE(h.has_value());
  auto sol = solution_from_hom(inst, sd, *h);
  auto gen = remap_constants(phi_system(inst), sd.sw_embedding);
  CHECK(check_general(gen, *sd.algebra, sol));
  auto back = hom_from_solution(inst, sd, sol);
  REQUIRE(back.has_value());
  CHECK(*back == *h);
}

TEST_CASE("semilattice minimal solutions") {
  // two-element chain with s below t
  auto l = Algebra::make_semigroup({"t", "s"}, {0, 1, 1, 1});
  REQUIRE(is_semilattice(*l));
  AlgebraPtr lp = l;
  EquationSystem sys;
  sys.add_mul("x", "y", "x");
  sys.add_fix("y", 0);
  auto sol = solve_semilattice_min(lp, sys);
  REQUIRE(sol.has_value());
  CHECK((*sol)[sys.var_id("x")] == 1);  // s
  CHECK((*sol)[sys.var_id("y")] == 0);  // t

  EquationSystem unsat;
  unsat.add_fix("x", 0);
  unsat.add_fix("x", 1);
  CHECK_FALSE(solve_semilattice_min(lp, unsat).has_value());

  EquationSystem freev;
  freev.ensure_var("x");
  freev.ensure_var("y");
  auto fsol = solve_semilattice_min(lp, freev);
  REQUIRE(fsol.has_value());
  CHECK(*fsol == Assignment{1, 1});  // the bottom everywhere

  CHECK_THROWS_AS(solve_semilattice_min(cyclic_group(2), sys), Error);
}

TEST_CASE("semilattice minima against the enumeration oracle") {
  auto sw_quot = quotient_semilattice(canonical_SW()).algebra;
  std::mt19937_64 rng(808);
  auto t = make_subalgebra(
      sw_quot,
      [&] {
        std::vector<int> all(sw_quot->size());
        for (int i = 0; i < sw_quot->size(); ++i) all[i] = i;
        return all;
      }(),
      SubKind::Subsemigroup);
  for (int trial = 0; trial < 25; ++trial) {
    EquationSystem sys =
        random_instance(sw_quot, t, 1 + rng() % 3, 1 + rng() % 4, rng);
    auto minimal = solve_semilattice_min(sw_quot, sys);
    auto all = oracle::all_solutions_def(sys, *sw_quot);
    if (!minimal) {
      CHECK(all.empty());
      continue;
    }
    REQUIRE_FALSE(all.empty());
    // solutions are closed under pointwise meets
    for (const auto& f : all)
      for (const auto& g : all) {
        Assignment meet(f.size());
        for (size_t i = 0; i < f.size(); ++i)
          meet[i] = sw_quot->product(f[i], g[i]);
        CHECK(check_assignment(sys, *sw_quot, meet));
      }
    // the returned solution is the unique pointwise-divisibility minimum
    int count_min = 0;
    for (const auto& f : all) {
      bool below_all = true;
      for (const auto& g : all)
        for (size_t i = 0; i < f.size() && below_all; ++i)
          below_all = sw_quot->divides(f[i], g[i]);
      if (below_all) {
        ++count_min;
        CHECK(f == *minimal);
      }
    }
    CHECK(count_min == 1);
  }
}

TEST_CASE("rewriting rejects exactly the globally unsolvable systems") {
  // contradictory pins across distinct classes
  EquationSystem sys;
  sys.add_fix("x", 0);   // p^L
  sys.add_fix("x", 2);   // p^R
  auto res = psi(sys);
  CHECK(res.rejected);
  CHECK_FALSE(res.structure.has_value());
  // the certificate is the quotient system, infeasible over the quotient
  auto sw_quot = quotient_semilattice(canonical_SW()).algebra;
  CHECK_FALSE(solve_semilattice_min(sw_quot, res.reject_certificate).has_value());
}

TEST_CASE("a lone pinned variable becomes a marked vertex") {
  EquationSystem sys;
  sys.add_fix("x", 0);  // p^L
  auto res = psi(sys);
  REQUIRE_FALSE(res.rejected);
  REQUIRE(res.structure.has_value());
  CHECK(res.structure->vertices.size() == 1);
  CHECK(res.structure->p_marks.size() == 1);
  CHECK(res.structure->q_marks.empty());
}

TEST_CASE("round trips through the rewriting") {
  auto corpus = corpus_sigma_instances(4, 8, 11);
  for (const auto& inst : corpus) {
    auto x = canonical_phi(inst);
    auto res = psi(x);
    REQUIRE_FALSE(res.rejected);  // translated systems are never rejected
    REQUIRE(res.structure.has_value());
    CHECK(hom_equivalent(inst, *res.structure));
  }
}

TEST_CASE("rewriting outcomes agree with band solvability on random systems") {
  // random canonical systems over the planted constants: psi's verdict must
  // match constrained search over two concrete bands
  std::mt19937_64 rng(2717);
  auto sw = canonical_SW();
  std::vector<int> all(sw->size());
  for (int i = 0; i < sw->size(); ++i) all[i] = i;
  auto t = make_subalgebra(sw, all, SubKind::Subsemigroup);
  std::vector<Digraph> ds = {{{"0", "1"}, {{0, 1}}},
                             {{"0", "1", "2"}, {{0, 1}, {1, 2}}}};
  std::vector<SDResult> sds;
  for (const auto& d : ds) sds.push_back(build_SD(d));
  for (int trial = 0; trial < 30; ++trial) {
    EquationSystem sys = random_instance(sw, t, 1 + rng() % 4, 1 + rng() % 4, rng);
    auto res = psi(sys);
    for (const auto& sd : sds) {
      // solve the original system over S_D directly
      EquationSystem remapped = sys;
      for (auto& eq : remapped.equations)
        if (auto* f = std::get_if<FixEq>(&eq)) f->constant = sd.sw_embedding[f->constant];
      auto inst_struct = system_to_structure(remapped, sd.s_w);
      const bool solvable =
          find_homomorphism(inst_struct, lin_structure(sd.algebra, sd.s_w))
              .has_value();
      if (res.rejected) {
        CHECK_FALSE(solvable);
      } else {
        const bool maps = hom_exists(sigma_plus_to_structure(*res.structure),
                                     sigma_plus_to_structure(sd.d_plus));
        CAPTURE(trial);
        CHECK(solvable == maps);
      }
    }
  }
}

TEST_CASE("component pruning") {
  // a P-marked vertex with a loop cannot map to the single-edge structure
  SigmaPlusStructure bad;
  bad.vertices = {"a"};
  bad.edges = {{0, 0}};
  bad.p_marks = {0};
  auto res = prune_extended_instance(bad);
  CHECK(res.rejected);

  SigmaPlusStructure empty;
  auto res2 = prune_extended_instance(empty);
  CHECK_FALSE(res2.rejected);
  CHECK(res2.accepted_trivially);

  // a marked edge disappears; an unmarked triangle stays
  SigmaPlusStructure mixed;
  mixed.vertices = {"a", "b", "x", "y", "z"};
  mixed.edges = {{0, 1}, {2, 3}, {3, 4}, {4, 2}};
  mixed.p_marks = {0};
  mixed.q_marks = {1};
  auto res3 = prune_extended_instance(mixed);
  CHECK_FALSE(res3.rejected);
  CHECK_FALSE(res3.accepted_trivially);
  CHECK(res3.remaining.vertices.size() == 3);
  CHECK(res3.remaining.edges.size() == 3);
}

TEST_CASE("reduction equivalences across digraph pairs") {
  auto corpus = corpus_sigma_instances(4, 10, 21);
  Digraph one_edge{{"0", "1"}, {{0, 1}}};
  auto rep = reduction_equivalence_check(one_edge, one_edge, corpus);
  CHECK(rep.all_consistent);
  CHECK(rep.per_instance.size() == corpus.size());

  Digraph triangle{{"0", "1", "2"}, {{0, 1}, {1, 2}, {2, 0}}};
  auto rep2 = reduction_equivalence_check(one_edge, triangle, corpus);
  CHECK(rep2.all_consistent);
}
