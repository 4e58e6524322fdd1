#pragma once

#include "promlin/classify.hpp"
#include "promlin/relax.hpp"

namespace promlin {

enum class SolvePath { BlpAipSelfReduce, AipGroupDirect, BruteForce };

struct SolveReport {
  bool solved = false;
  Assignment assignment;       // into S2 when solved
  int violated_variable = -2;  // -1: initial rejection; >= 0: stuck variable
  std::size_t decisions_used = 0;
  SolvePath path = SolvePath::BlpAipSelfReduce;
};

/// Search-version solving of a tractable template. Constants are translated
/// through the witness, the instance becomes a CSP over im(psi), and
/// variables are pinned one at a time against decide_blp_aip. A false promise
/// surfaces as an unsolved report, never as an exception.
SolveReport solve_promise(const PLinTemplate& t, const EquationSystem& instance,
                          const PartialHom& psi);

/// Exact solving over an Abelian group through the presentation G = Z^m / L
/// with generators all of G and the relation lattice from the Cayley table.
/// Returns the lexicographically least solution. Throws NotAbelian.
std::optional<Assignment> solve_abelian_group_system(const AlgebraPtr& g,
                                                     const EquationSystem& sys);

struct CrossCheckPath {
  SolvePath path;
  bool satisfiable;
};

struct CrossCheckReport {
  bool translated = true;  // instance translated onto im(psi)
  std::vector<CrossCheckPath> paths;
  std::optional<bool> aip_decision;  // only on group images
  bool agree = true;
};

/// Compares brute force, BLP+AIP self-reduction, and (on group images) the
/// direct group solver and the plain AIP decision on the translated CSP.
CrossCheckReport cross_check(const PLinTemplate& t, const EquationSystem& instance);

}  // namespace promlin
