#pragma once

#include "promlin/eqsys.hpp"

namespace promlin {

enum class Verdict { Tractable, NPHard, IllFormedTemplate };
enum class AlgorithmNote { BlpAip, Aip };
enum class ObstructionReason { NonAbelianImage, NonRegularImageElement };

struct Obstruction {
  PartialHom psi;  // a total extending hom that fails the criterion
  ObstructionReason reason;
  int element = -1;  // least non-regular image element, when applicable
};

struct ClassificationResult {
  Verdict verdict;
  std::optional<PartialHom> witness;  // Tractable: lexicographically least
  std::vector<Obstruction> obstructions;
  bool obstructions_truncated = false;
  AlgorithmNote algorithm_note = AlgorithmNote::BlpAip;
};

/// Tractable iff some extending hom is Abelian with a union-of-subgroups
/// image; NP-hard with a complete obstruction ledger otherwise; ill-formed
/// when no extending hom exists at all. The verdict never depends on
/// `obstruction_cap`.
ClassificationResult classify_monoid_template(const PLinTemplate& t,
                                              std::size_t obstruction_cap = 64);

/// Group specialization: union-of-subgroups is automatic, the algorithm note
/// is AIP.
ClassificationResult classify_group_template(const PLinTemplate& t,
                                             std::size_t obstruction_cap = 64);

/// classify of Lin(M, N) = PLin(M, M, id_N).
ClassificationResult classify_csp(const AlgebraPtr& m, const SubAlgebra& n,
                                  std::size_t obstruction_cap = 64);

/// The middle structure C of the sandwich A -> C -> B: universe im(psi),
/// its multiplication graph, and fix relations interpreted through phi.
RelationalStructure sandwich_structure(const PLinTemplate& t, const PartialHom& psi);

}  // namespace promlin
