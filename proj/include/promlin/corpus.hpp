#pragma once

#include <random>

#include "promlin/eqsys.hpp"
#include "promlin/reduce.hpp"

namespace promlin {

AlgebraPtr trivial_monoid();
AlgebraPtr cyclic_group(int n);
/// Dihedral group of order 2n as permutations of the n-gon's corners.
AlgebraPtr dihedral_group(int n);
/// Symmetric group on n letters, n <= 4; elements ordered lexicographically
/// by one-line notation.
AlgebraPtr symmetric_group(int n);
AlgebraPtr direct_product(const AlgebraPtr& a, const AlgebraPtr& b);
/// A fresh identity adjoined on top (the old identity stays a mere
/// idempotent); the result is a monoid.
AlgebraPtr adjoin_identity(const AlgebraPtr& m);
/// {e, 1, eps} with 1*1 = 1*eps = eps*eps = eps; element order e, 1, eps.
AlgebraPtr m3_monoid();
/// {e, a, ..., a^(n-1)} with a^n = a^(n-1): the threshold cyclic monoid.
AlgebraPtr aperiodic_monoid(int n);
/// Chain semilattice with an identity top: x*y = min(x, y).
AlgebraPtr chain_semilattice_monoid(int n);
/// Right-zero semigroup {a, b} with an adjoined identity: non-Abelian.
AlgebraPtr right_zero_monoid();

struct CorpusEntry {
  std::string name;
  AlgebraPtr algebra;
};

struct CorpusSpec {
  std::uint64_t seed = 7;
  int max_size = 8;
  bool include_groups = true;
  bool include_monoids = true;
  bool include_bands = true;  // S_D of small digraphs
};

/// Deterministic corpus for a given spec; generation re-checks every
/// construction invariant.
std::vector<CorpusEntry> generate_corpus(const CorpusSpec& spec);

/// Monoids (and groups) of the corpus with at most `max_size` elements.
std::vector<CorpusEntry> corpus_monoids(int max_size);
std::vector<CorpusEntry> corpus_groups(int max_size);

/// Small digraphs (up to 3 vertices) used by the reduction suite.
std::vector<std::pair<std::string, Digraph>> corpus_digraphs();

/// Sigma-plus instances with at most `max_vertices` vertices, deterministic
/// for a fixed seed.
std::vector<SigmaPlusStructure> corpus_sigma_instances(int max_vertices,
                                                       int count,
                                                       std::uint64_t seed);

/// A random instance with a planted A-side solution; every Fix constant lies
/// in dom(phi).
EquationSystem planted_instance(const PLinTemplate& t, int num_vars, int num_eqs,
                                std::mt19937_64& rng);

/// A random instance, not necessarily satisfiable.
EquationSystem random_instance(const AlgebraPtr& over, const SubAlgebra& constants,
                               int num_vars, int num_eqs, std::mt19937_64& rng);

}  // namespace promlin
