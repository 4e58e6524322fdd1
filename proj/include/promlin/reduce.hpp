#pragma once

#include "promlin/eqsys.hpp"

namespace promlin {

struct Digraph {
  std::vector<std::string> vertices;
  std::vector<std::pair<int, int>> edges;
};

/// A structure over the extended signature: one binary edge relation plus
/// two unary marks.
struct SigmaPlusStructure {
  std::vector<std::string> vertices;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> p_marks, q_marks;
};

/// D+ : two fresh vertices p, q and the edge (p, q); P = {p}, Q = {q}.
SigmaPlusStructure digraph_plus(const Digraph& d);

RelationalStructure sigma_plus_to_structure(const SigmaPlusStructure& s);

struct BandElement {
  enum class Tag { VL, VR, VLC, VLR, VCR, EC, Zero };
  Tag tag = Tag::Zero;
  int vertex = -1;  // V-classes: index into D+ vertices
  int edge = -1;    // EC: index into D+ edges
};

/// The right-normal band of a digraph, with the planted constant
/// subsemigroup. Element order: the five vertex classes (D's vertices then
/// p then q), the edge class (D's edges then (p,q)), then the zero.
struct SDResult {
  AlgebraPtr algebra;
  std::vector<BandElement> elements;
  SubAlgebra s_w;
  std::vector<int> sw_embedding;  // canonical S_W index -> S_D index
  SigmaPlusStructure d_plus;
};
SDResult build_SD(const Digraph& d);

/// The 12-element constant semigroup, shared by every S_D. Canonical order:
/// p^L q^L p^R q^R p^LC q^LC p^LR q^LR p^CR q^CR (p,q)^C 0.
const AlgebraPtr& canonical_SW();

/// The equation system of a sigma-plus instance, with constants given as
/// canonical S_W indices. Remap with remap_constants before solving over a
/// concrete S_D.
GeneralSystem phi_system(const SigmaPlusStructure& instance);
GeneralSystem remap_constants(const GeneralSystem& sys,
                              const std::vector<int>& map);

/// Unique pointwise-minimal solution of a system over a semilattice, by arc
/// consistency followed by per-variable meets; nullopt iff unsatisfiable.
/// Throws NotSemilattice.
std::optional<Assignment> solve_semilattice_min(const AlgebraPtr& semilattice,
                                                const EquationSystem& sys);

struct PsiPass {
  std::string name;
  std::vector<std::string> notes;
};

struct PsiResult {
  bool rejected = false;
  EquationSystem reject_certificate;  // the infeasible quotient system
  std::optional<SigmaPlusStructure> structure;
  std::vector<PsiPass> passes;
};

/// Rewrites a canonical system with constants in S_W into a sigma-plus
/// structure (or rejects, in which case the system is unsolvable over every
/// S_D). Constants must be canonical S_W indices.
PsiResult psi(const EquationSystem& x);

struct PruneResult {
  bool rejected = false;
  bool accepted_trivially = false;
  Digraph remaining;  // instance of the plain digraph problem
};

/// The component-pruning reduction from the extended problem back to plain
/// digraphs: components touching P or Q must map to the single-edge
/// structure W and are removed; components mapping to W are removed; an
/// empty remainder accepts.
PruneResult prune_extended_instance(const SigmaPlusStructure& instance);

struct InstanceEquivalence {
  bool hom_to_d1 = false, hom_to_d2 = false;
  bool phi_solvable_sd1 = false, phi_solvable_sd2 = false;
  bool witnesses_checked = false;
  bool consistent = false;
};

struct EquivalenceReport {
  std::vector<InstanceEquivalence> per_instance;
  bool all_consistent = true;
};

/// For each corpus instance: homomorphisms to D_i+ and solutions of the
/// translated system over S_{D_i} converted into one another and verified;
/// the two existence bits must agree per digraph.
EquivalenceReport reduction_equivalence_check(
    const Digraph& d1, const Digraph& d2,
    const std::vector<SigmaPlusStructure>& corpus);

/// Assignment induced by a homomorphism h: I -> D+ (vertex avatars move to
/// h's image, edge variables to image edges), as S_D element indices keyed
/// by the phi_system variable names.
std::map<std::string, int> solution_from_hom(const SigmaPlusStructure& instance,
                                             const SDResult& sd,
                                             const std::vector<int>& h);

/// The reverse extraction: a solution of phi_system over S_D determines a
/// homomorphism I -> D+ through the vertex parts of the L-avatars.
std::optional<std::vector<int>> hom_from_solution(
    const SigmaPlusStructure& instance, const SDResult& sd,
    const std::map<std::string, int>& solution);

/// Solves phi_system(instance) over S_D by class-constrained search.
std::optional<std::map<std::string, int>> solve_phi_over_sd(
    const SigmaPlusStructure& instance, const SDResult& sd,
    std::uint64_t node_budget = 50'000'000);

}  // namespace promlin
