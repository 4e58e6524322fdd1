#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "promlin/util.hpp"

namespace promlin {

enum class AlgebraKind { Semigroup, Monoid, Group };

class Algebra;
using AlgebraPtr = std::shared_ptr<const Algebra>;

/// A finite semigroup, monoid, or group given by its multiplication table.
/// Elements are canonically indexed 0..size()-1; labels are display-only.
/// Instances are immutable after construction and safe to share across
/// threads.
class Algebra : public std::enable_shared_from_this<Algebra> {
 public:
  /// Checks closure and associativity exhaustively; throws InvalidAlgebra.
  static AlgebraPtr make_semigroup(std::vector<std::string> labels,
                                   std::vector<int> table);
  /// Additionally checks e*x = x*e = x.
  static AlgebraPtr make_monoid(std::vector<std::string> labels,
                                std::vector<int> table, int identity);
  /// Inverses are recomputed when absent; checks x*inv(x) = inv(x)*x = e.
  static AlgebraPtr make_group(std::vector<std::string> labels,
                               std::vector<int> table, int identity,
                               std::optional<std::vector<int>> inverse = {});

  /// Componentwise product of `k` copies of `a`. Associativity is inherited,
  /// so the exhaustive table check is skipped.
  static AlgebraPtr make_power(const AlgebraPtr& a, int k);

  AlgebraKind kind() const { return kind_; }
  int size() const { return static_cast<int>(labels_.size()); }
  int product(int a, int b) const { return table_[a * size() + b]; }
  const std::string& label(int i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<int>& table() const { return table_; }
  std::optional<int> index_of(std::string_view label) const;

  bool has_identity() const { return identity_.has_value(); }
  int identity() const;
  int inverse(int a) const;
  const std::optional<std::vector<int>>& inverse_map() const { return inverse_; }

  /// Product of a nonempty word; empty words need an identity.
  int product_word(std::span<const int> word) const;
  /// a^k with k >= 1; k = 0 requires an identity.
  int power(int a, unsigned k) const;

  /// Divisibility preorder: s can be written as a product (of one or more
  /// elements) that includes t as a factor. Cached on first use.
  bool divides(int s, int t) const;  // s ⊑ t
  bool sim(int s, int t) const { return divides(s, t) && divides(t, s); }

  /// s ⊑ t together with a witness word (product = s, contains t).
  std::optional<std::vector<int>> divides_witness(int s, int t) const;

 private:
  Algebra(AlgebraKind kind, std::vector<std::string> labels,
          std::vector<int> table, std::optional<int> identity,
          std::optional<std::vector<int>> inverse);
  void validate(bool check_associativity) const;
  void ensure_div_closure() const;

  AlgebraKind kind_;
  std::vector<std::string> labels_;
  std::vector<int> table_;
  std::optional<int> identity_;
  std::optional<std::vector<int>> inverse_;

  mutable std::mutex div_mutex_;
  mutable std::vector<char> div_;  // div_[s*n+t] = s ⊑ t; lazily filled
  // parent element and side (+1 right, -1 left, 0 root) of the closure BFS,
  // kept to reconstruct witness words
  mutable std::vector<int> div_parent_, div_mult_, div_side_;
};

enum class SubKind { Subsemigroup, Submonoid, Subgroup };

/// A subset of an algebra closed under its multiplication.
struct SubAlgebra {
  AlgebraPtr parent;
  std::vector<int> members;  // sorted, unique
  SubKind kind = SubKind::Subsemigroup;

  bool contains(int x) const;
  int size() const { return static_cast<int>(members.size()); }

  /// Re-indexes the member set as a standalone algebra of the given kind.
  /// Returns the algebra plus the member list mapping local -> parent index.
  std::pair<AlgebraPtr, std::vector<int>> as_algebra() const;
};

/// Validates closure (and the kind-specific identity/inverse conditions).
SubAlgebra make_subalgebra(AlgebraPtr parent, std::vector<int> members,
                           SubKind kind);
/// Closure of `generators` under multiplication (plus the identity for
/// monoid/group parents).
SubAlgebra generated_subalgebra(AlgebraPtr parent,
                                const std::vector<int>& generators);
/// The cyclic submonoid {e, s, s^2, ...}.
SubAlgebra cyclic_submonoid(AlgebraPtr parent, int s);

/// A homomorphism from a sub-algebra of `source` into `target`.
/// `map[x]` is the target index for x in the domain, -1 elsewhere.
struct PartialHom {
  AlgebraPtr source, target;
  SubAlgebra domain;
  std::vector<int> map;
  SubAlgebra image;  // computed and cached by make_partial_hom

  bool total() const { return domain.size() == source->size(); }
  int apply(int x) const { return map[x]; }
  bool defined_at(int x) const { return map[x] >= 0; }
};

/// Checks multiplicativity on the domain and, for monoid/group kinds, that
/// the identity maps to the identity; computes the image sub-algebra.
PartialHom make_partial_hom(AlgebraPtr source, AlgebraPtr target,
                            const SubAlgebra& domain,
                            const std::vector<int>& map);
PartialHom identity_hom(const AlgebraPtr& a, const SubAlgebra& domain);
PartialHom total_identity_hom(const AlgebraPtr& a);

bool is_abelian(const Algebra& a);
bool is_abelian(const SubAlgebra& s);

/// s is regular iff s^k = s for some k > 1, found on the power cycle of s.
bool is_regular(const Algebra& m, int s);

/// The four equivalent regularity certificates. All four are present or all
/// four are absent; each is computed by an independent route.
struct RegularityWitnesses {
  std::optional<unsigned> k_power;           // least k > 1 with s^k = s
  std::optional<int> commuting_t;            // least t: s^2 t = s and st = ts
  std::optional<SubAlgebra> subgroup;        // a subgroup of m containing s
  std::optional<std::vector<int>> square_divisor;  // word = s, contains s^2
  bool all_present() const {
    return k_power && commuting_t && subgroup && square_divisor;
  }
  bool all_absent() const {
    return !k_power && !commuting_t && !subgroup && !square_divisor;
  }
};
RegularityWitnesses regularity_witnesses(const AlgebraPtr& m, int s);

bool is_union_of_subgroups(const Algebra& m);
bool is_union_of_subgroups(const SubAlgebra& s);

inline bool div_preorder(const Algebra& s, int a, int b) { return s.divides(a, b); }

/// a ⊑^Ab b: some c commuting with b satisfies bc = a.
bool ab_preorder(const Algebra& m, int a, int b);
/// a ⊏^Ab b: a ⊑^Ab b holds and b ⊑^Ab a fails.
bool ab_strict(const Algebra& m, int a, int b);

/// Partition of the elements into ∼-classes (s ⊑ t and t ⊑ s), each class
/// sorted, classes ordered by least member.
std::vector<std::vector<int>> sim_classes(const Algebra& s);

struct Quotient {
  AlgebraPtr algebra;              // the quotient semigroup
  std::vector<int> projection;     // element -> class index
  std::vector<std::vector<int>> classes;
};

/// Quotient by ∼. Throws QuotientUndefined when multiplication is not
/// ∼-invariant. When `s` is a right-normal band the result is verified to be
/// a semilattice.
Quotient quotient_semilattice(const AlgebraPtr& s);

bool is_right_normal_band(const Algebra& s);
bool is_semilattice(const Algebra& s);

enum class HomFilter { All, AbelianImage, AbelianUnionOfGroupsImage };

/// Enumerates every total homomorphism extending `phi` that passes `filter`,
/// duplicate-free, by backtracking over a greedily chosen generating set of
/// the source. `emit` may return false to stop early.
void enumerate_extending_homs(const PartialHom& phi, HomFilter filter,
                              const std::function<bool(const PartialHom&)>& emit);
std::vector<PartialHom> extending_homs(const PartialHom& phi, HomFilter filter);

/// Greedy generating set: repeatedly adjoin the least element outside the
/// closure of the current set.
std::vector<int> greedy_generators(const Algebra& a);

}  // namespace promlin
