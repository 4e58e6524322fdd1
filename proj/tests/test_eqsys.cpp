#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "promlin/corpus.hpp"
#include "promlin/eqsys.hpp"
#include "promlin/homsearch.hpp"

using namespace promlin;

namespace {

// all assignments of the original variables satisfying a general system
std::set<std::map<std::string, int>> general_solutions(const GeneralSystem& sys,
                                                       const Algebra& over) {
  std::set<std::map<std::string, int>> out;
  const int n = static_cast<int>(sys.variables.size());
  std::vector<int> vals(n, 0);
  while (true) {
    std::map<std::string, int> asg;
    for (int i = 0; i < n; ++i) asg[sys.variables[i]] = vals[i];
    if (check_general(sys, over, asg)) out.insert(asg);
    int i = n - 1;
    for (; i >= 0; --i) {
      if (++vals[i] < over.size()) break;
      vals[i] = 0;
    }
    if (i < 0) break;
  }
  return out;
}

// solutions of a canonical system projected onto the original variables
// (aliases resolved)
std::set<std::map<std::string, int>> normalized_solutions(
    const NormalizeResult& norm, const std::vector<std::string>& originals,
    const Algebra& over) {
  std::set<std::map<std::string, int>> out;
  for (const auto& sol : oracle::all_solutions_def(norm.system, over)) {
    std::map<std::string, int> proj;
    for (const auto& name : originals) {
      std::string target = name;
      auto it = norm.aliases.find(target);
      if (it != norm.aliases.end()) target = it->second;
      const int id = norm.system.var_id(target);
      REQUIRE(id >= 0);
      proj[name] = sol[id];
    }
    out.insert(proj);
  }
  return out;
}

}  // namespace

TEST_CASE("normalization breaks long equations") {
  // x1 c1 x2 = c2 over M3 with c1 = 1, c2 = eps
  auto m3 = m3_monoid();
  auto t = fixtures::full_subalgebra(m3);
  GeneralSystem sys;
  sys.ensure_var("x1");
  sys.ensure_var("x2");
  sys.equations.push_back(GeneralEquation{
      {Atom::var("x1"), Atom::constant_of(*m3->index_of("1")), Atom::var("x2")},
      {Atom::constant_of(*m3->index_of("eps"))}});
  auto norm = normalize(sys, t, AlgebraKind::Monoid);
  for (const auto& eq : norm.system.equations) {
    const bool is_mul = std::holds_alternative<MulEq>(eq);
    const bool is_fix = std::holds_alternative<FixEq>(eq);
    CHECK((is_mul || is_fix));
  }
  // fresh variables carry the reserved prefix
  for (const auto& v : norm.system.variables)
    if (v != "x1" && v != "x2") CHECK(v.rfind("__n", 0) == 0);
  CHECK(general_solutions(sys, *m3) ==
        normalized_solutions(norm, sys.variables, *m3));
}

TEST_CASE("normalization leaves canonical equations alone") {
  auto z4 = cyclic_group(4);
  auto t = fixtures::full_subalgebra(z4);
  GeneralSystem sys;
  sys.equations.push_back(GeneralEquation{
      {Atom::var("x"), Atom::var("y")}, {Atom::var("z")}});
  sys.ensure_var("x");
  sys.ensure_var("y");
  sys.ensure_var("z");
  auto norm = normalize(sys, t, AlgebraKind::Group);
  REQUIRE(norm.system.equations.size() == 1);
  const auto* m = std::get_if<MulEq>(&norm.system.equations[0]);
  REQUIRE(m != nullptr);
  CHECK(norm.system.variables[m->x] == "x");
  CHECK(norm.system.variables[m->y] == "y");
  CHECK(norm.system.variables[m->z] == "z");
}

TEST_CASE("group-mode inverses eliminate") {
  // x^-1 = c over Z3: solutions biject with the direct system
  auto z3 = cyclic_group(3);
  auto t = fixtures::full_subalgebra(z3);
  GeneralSystem sys;
  sys.ensure_var("x");
  sys.equations.push_back(
      GeneralEquation{{Atom::inv_var("x")}, {Atom::constant_of(1)}});
  auto norm = normalize(sys, t, AlgebraKind::Group);
  for (const auto& eq : norm.system.equations) {
    const bool canonical =
        std::holds_alternative<MulEq>(eq) || std::holds_alternative<FixEq>(eq);
    CHECK(canonical);
  }
  auto sols = normalized_solutions(norm, {"x"}, *z3);
  REQUIRE(sols.size() == 1);
  CHECK(sols.begin()->at("x") == 2);  // 2 = -1 mod 3
}

TEST_CASE("inverse atoms are rejected outside group mode") {
  auto m3 = m3_monoid();
  auto t = fixtures::full_subalgebra(m3);
  GeneralSystem sys;
  sys.ensure_var("x");
  sys.equations.push_back(
      GeneralEquation{{Atom::inv_var("x")}, {Atom::constant_of(0)}});
  CHECK_THROWS_AS(normalize(sys, t, AlgebraKind::Monoid), Error);
}

TEST_CASE("normalization preserves satisfiability on random systems") {
  std::mt19937_64 rng(2024);
  std::vector<AlgebraPtr> algebras = {cyclic_group(4), m3_monoid(),
                                      adjoin_identity(cyclic_group(2))};
  for (const auto& alg : algebras) {
    auto t = fixtures::full_subalgebra(alg);
    for (int trial = 0; trial < 12; ++trial) {
      GeneralSystem sys;
      for (int v = 0; v < 3; ++v) sys.ensure_var("x" + std::to_string(v));
      const int eqs = 1 + static_cast<int>(rng() % 3);
      for (int e = 0; e < eqs; ++e) {
        auto word = [&](int len) {
          std::vector<Atom> w;
          for (int i = 0; i < len; ++i) {
            if (rng() % 3 == 0)
              w.push_back(Atom::constant_of(static_cast<int>(rng() % alg->size())));
            else
              w.push_back(Atom::var("x" + std::to_string(rng() % 3)));
          }
          return w;
        };
        sys.equations.push_back(
            GeneralEquation{word(1 + rng() % 3), word(1 + rng() % 3)});
      }
      auto norm = normalize(sys, t, alg->kind());
      CHECK(general_solutions(sys, *alg) ==
            normalized_solutions(norm, sys.variables, *alg));
    }
  }
}

TEST_CASE("structure round trip") {
  auto z4 = cyclic_group(4);
  auto t = fixtures::full_subalgebra(z4);
  EquationSystem sys;
  sys.add_mul("x", "y", "z");
  sys.add_fix("x", 2);
  auto inst = system_to_structure(sys, t);
  CHECK(inst.universe_size == 3);
  const auto* mul = inst.find("mul");
  REQUIRE(mul != nullptr);
  CHECK(mul->tuples.size() == 1);
  const auto* fix2 = inst.find("fix:2");
  REQUIRE(fix2 != nullptr);
  CHECK(fix2->tuples == std::vector<std::vector<int>>{{0}});
  auto back = structure_to_system(inst, t);
  CHECK(back.variables == sys.variables);
  CHECK(back.equations.size() == sys.equations.size());
  CHECK(std::get<MulEq>(back.equations[0]) == std::get<MulEq>(sys.equations[0]));
  CHECK(std::get<FixEq>(back.equations[1]) == std::get<FixEq>(sys.equations[1]));

  EquationSystem empty;
  auto einst = system_to_structure(empty, t);
  CHECK(einst.universe_size == 0);
  for (const auto& r : einst.relations) CHECK(r.tuples.empty());
}

TEST_CASE("homomorphisms into Lin are exactly the solutions") {
  auto z4 = cyclic_group(4);
  auto t = fixtures::full_subalgebra(z4);
  auto lin = lin_structure(z4, t);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    EquationSystem sys = random_instance(z4, t, 1 + rng() % 4, 1 + rng() % 4, rng);
    auto inst = system_to_structure(sys, t);
    std::set<Assignment> homs;
    enumerate_homomorphisms(inst, lin, [&](const std::vector<int>& h) {
      homs.insert(h);
      return true;
    });
    auto sols = oracle::all_solutions_def(sys, *z4);
    CHECK(homs == std::set<Assignment>(sols.begin(), sols.end()));
  }
}

TEST_CASE("assignment checking") {
  auto z2 = cyclic_group(2);
  EquationSystem sys;
  sys.add_mul("x", "x", "y");
  CHECK(check_assignment(sys, *z2, {1, 0}));
  CHECK_FALSE(check_assignment(sys, *z2, {1, 1}));

  auto ex = fixtures::dihedral_example();
  EquationSystem fixed;
  fixed.add_fix("x", ex.r_d4);
  CHECK(check_promise_solution(ex.phi1, fixed, {ex.r2_s4}));
  CHECK_FALSE(check_promise_solution(ex.phi1, fixed, {ex.r_s4}));
}

TEST_CASE("promise checks compose with homomorphisms") {
  // a hom h: instance -> A-side Lin gives an A-side solution; psi ∘ h then
  // satisfies the B side
  auto ex = fixtures::dihedral_example();
  auto homs = extending_homs(ex.phi1.phi, HomFilter::AbelianImage);
  REQUIRE_FALSE(homs.empty());
  const auto& psi = homs.front();
  EquationSystem sys;
  sys.add_mul("x", "y", "z");
  sys.add_fix("x", ex.r_d4);
  auto a_sols = oracle::all_solutions_def(sys, *ex.d4);
  // Fix over the A side pins to the element itself
  for (const auto& sol : a_sols) {
    if (sol[sys.var_id("x")] != ex.r_d4) continue;
    Assignment mapped(sol.size());
    for (size_t i = 0; i < sol.size(); ++i) mapped[i] = psi.map[sol[i]];
    CHECK(check_promise_solution(ex.phi1, sys, mapped));
  }
}

TEST_CASE("brute force solving") {
  auto m3 = m3_monoid();
  EquationSystem sys;
  sys.add_fix("x", 2);
  auto sol = brute_force_solve(sys, m3);
  REQUIRE(sol.has_value());
  CHECK((*sol)[0] == 2);

  EquationSystem idem;
  idem.add_mul("x", "x", "x");
  auto least = brute_force_solve(idem, m3);
  REQUIRE(least.has_value());
  CHECK((*least)[0] == 0);  // the identity is the least idempotent

  EquationSystem unsat;
  unsat.add_fix("x", 0);
  unsat.add_fix("x", 1);
  CHECK_FALSE(brute_force_solve(unsat, m3).has_value());

  // lexicographically least on a system with several solutions
  auto z4 = cyclic_group(4);
  EquationSystem sq;
  sq.add_mul("x", "x", "y");
  auto s = brute_force_solve(sq, z4);
  REQUIRE(s.has_value());
  CHECK(*s == Assignment{0, 0});

  // budget guard
  auto z8 = cyclic_group(8);
  EquationSystem big;
  for (int v = 0; v < 8; ++v) big.ensure_var("x" + std::to_string(v));
  big.add_mul("x0", "x1", "x2");
  CHECK_THROWS_AS(brute_force_solve(big, z8, {}, 3), Error);
}

TEST_CASE("constants outside T are rejected") {
  auto z4 = cyclic_group(4);
  // T = {0, 2}
  auto t = make_subalgebra(z4, {0, 2}, SubKind::Subgroup);
  GeneralSystem sys;
  sys.ensure_var("x");
  sys.equations.push_back(
      GeneralEquation{{Atom::var("x")}, {Atom::constant_of(1)}});
  CHECK_THROWS_AS(normalize(sys, t, AlgebraKind::Group), Error);
  EquationSystem csys;
  csys.add_fix("x", 1);
  CHECK_THROWS_AS(system_to_structure(csys, t), Error);
}

TEST_CASE("contradictory constant equations become unsatisfiable gadgets") {
  auto z4 = cyclic_group(4);
  auto t = fixtures::full_subalgebra(z4);
  GeneralSystem sys;
  sys.equations.push_back(
      GeneralEquation{{Atom::constant_of(1)}, {Atom::constant_of(2)}});
  auto norm = normalize(sys, t, AlgebraKind::Group);
  CHECK(oracle::all_solutions_def(norm.system, *z4).empty());

  GeneralSystem trivially_true;
  trivially_true.equations.push_back(
      GeneralEquation{{Atom::constant_of(1)}, {Atom::constant_of(1)}});
  auto norm2 = normalize(trivially_true, t, AlgebraKind::Group);
  CHECK(norm2.system.equations.empty());
}

TEST_CASE("template well-formedness") {
  auto ex = fixtures::dihedral_example();
  CHECK(is_well_formed(ex.phi1));
  CHECK(is_well_formed(ex.phi2));  // extends non-Abelian-ly, but extends
  for (const auto& e : corpus_monoids(5))
    CHECK(is_well_formed(fixtures::identity_template(e.algebra)));
}
