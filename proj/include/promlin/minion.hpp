#pragma once

#include "promlin/eqsys.hpp"

namespace promlin {

/// A commutative tuple over a monoid whose entries multiply to `target`.
struct MinionElement {
  AlgebraPtr monoid;
  int target;
  std::vector<int> entries;

  int arity() const { return static_cast<int>(entries.size()); }
};

/// Validates pairwise commutation and the prescribed product.
MinionElement make_minion_element(AlgebraPtr monoid, int target,
                                  std::vector<int> entries);

/// The minor along pi: [n] -> [m] (0-based); each output entry multiplies its
/// preimage block, the empty block giving the identity.
MinionElement minor(const MinionElement& b, const std::vector<int>& pi, int m);

/// All arity-n elements, lexicographic. Throws BudgetExceeded past
/// |M|^n > budget.
std::vector<MinionElement> enumerate_minion(const AlgebraPtr& m, int target,
                                            int n, std::uint64_t budget = 1u << 22);

/// 0-based coordinates whose omitted product strictly dominates the full
/// product in the commuting-divisor preorder.
std::vector<int> relevant_coordinates(const MinionElement& b);

struct SelectionReport {
  bool passed = true;
  std::uint64_t elements_checked = 0;
  std::uint64_t minors_checked = 0;
  std::string violation;  // empty when passed
};

/// Checks 1 <= |I(b)| <= |M| for every element up to arity max_n and
/// pi(I(p)) meets I(q) for every minor between enumerated arities. Throws
/// RegularTarget when `target` is regular.
SelectionReport verify_selection_condition(const AlgebraPtr& m, int target,
                                           int max_n,
                                           std::uint64_t budget = 1u << 22);

/// (target, ..., target, b, ..., b) with n+1 targets and n witnesses, where
/// b is the least element with target^2 b = target and commuting. Throws
/// NotRegular.
MinionElement block_symmetric_tuple(const AlgebraPtr& m, int target, int n);

/// An odd-arity map with a closed-form evaluator.
struct SymbolicPolymorphism {
  enum class Shape { BlockSymmetric, Alternating };
  Shape shape;
  PartialHom psi;  // total homomorphism the formula is built from
  int n = 0;       // arity = 2n + 1
  unsigned k = 0;  // block case: s^k = s on im(psi)

  int arity() const { return 2 * n + 1; }
  int eval(std::span<const int> args) const;
  std::vector<int> first_block() const;   // coordinates 0..n
  std::vector<int> second_block() const;  // coordinates n+1..2n
};

SymbolicPolymorphism build_block_symmetric_poly(const PartialHom& psi, int n);
SymbolicPolymorphism build_alternating_poly(const PartialHom& psi, int n);

/// Any evaluable odd/even-arity map over the template's A-side universe.
struct PolyFn {
  int arity;
  int domain_size;
  std::function<int(std::span<const int>)> eval;
};
PolyFn as_polyfn(const SymbolicPolymorphism& p);

/// An explicitly tabulated map A^k -> B.
struct PolymorphismTable {
  int arity;
  int domain_size;
  std::vector<int> table;  // size domain_size^arity, mixed-radix index

  int eval(std::span<const int> args) const;
};
PolyFn as_polyfn(const PolymorphismTable& p);

/// Homomorphism law on generator pairs plus the diagonal law on dom(phi);
/// exhaustive while |M1|^arity stays within `budget` evaluations, seeded
/// sampling beyond.
bool is_plin_polymorphism(const PolyFn& p, const PLinTemplate& t,
                          std::uint64_t budget = 1'000'000,
                          std::uint64_t samples = 20'000,
                          std::uint64_t seed = 12345);

bool check_alternating(const PolyFn& p, std::uint64_t budget = 1'000'000,
                       std::uint64_t samples = 20'000,
                       std::uint64_t seed = 12345);
bool check_2block_symmetric(const PolyFn& p, const std::vector<int>& block1,
                            const std::vector<int>& block2,
                            std::uint64_t budget = 1'000'000,
                            std::uint64_t samples = 20'000,
                            std::uint64_t seed = 12345);

/// True iff no alternating polymorphism of Lin(M, M) exists at the given odd
/// arity, established by exhaustive generator-based enumeration.
bool no_alternating_certificate(const AlgebraPtr& m, int arity,
                                std::uint64_t budget = 1u << 22);

struct FreeStructureTemplate {
  RelationalStructure a;  // the 1-in-3 structure with both constants
  RelationalStructure b;  // free structure over the arity-2 minion elements
  std::vector<std::pair<int, int>> b_universe;  // pairs behind B's indices
};
FreeStructureTemplate free_structure_template(const AlgebraPtr& m, int target);

/// Reads off the minion element of a free-structure polymorphism:
/// entry i = first component of p({i}).
MinionElement xi_map(const PolymorphismTable& p, const AlgebraPtr& m, int target);

struct XiReport {
  bool ok = true;
  std::vector<std::size_t> polymorphism_counts;  // per arity 1..max
  std::vector<std::size_t> minion_counts;
  std::string detail;
};

/// Exhaustively confirms that xi is an arity-preserving bijection commuting
/// with minors between free-structure polymorphisms and minion elements.
XiReport verify_xi_bijection(const AlgebraPtr& m, int target, int max_arity,
                             std::uint64_t budget = 1u << 22);

}  // namespace promlin
