#pragma once

#include "promlin/corpus.hpp"

namespace promlin::fixtures {

// the square's rotation r and the fixed-point-free reflection f, by one-line
// permutation label
inline int by_label(const Algebra& a, const std::string& l) {
  auto idx = a.index_of(l);
  require(idx.has_value(), ErrorCode::PreconditionFailed, "missing label " + l);
  return *idx;
}

struct DihedralExample {
  AlgebraPtr d4, s4;
  int r_d4, f_d4;        // in D4
  int r_s4, r2_s4, f_s4; // in S4
  PLinTemplate phi1, phi2;
};

inline DihedralExample dihedral_example() {
  DihedralExample ex;
  ex.d4 = dihedral_group(4);
  ex.s4 = symmetric_group(4);
  ex.r_d4 = by_label(*ex.d4, "1230");
  ex.f_d4 = by_label(*ex.d4, "1032");
  ex.r_s4 = by_label(*ex.s4, "1230");
  ex.r2_s4 = by_label(*ex.s4, "2301");
  ex.f_s4 = by_label(*ex.s4, "1032");
  SubAlgebra dom = generated_subalgebra(ex.d4, {ex.r_d4});
  auto build = [&](int r_image) {
    std::vector<int> map(ex.d4->size(), -1);
    for (int x : dom.members) {
      // x = r^k; image = r_image^k
      int k = 0;
      int cur = ex.d4->identity();
      while (cur != x) {
        cur = ex.d4->product(cur, ex.r_d4);
        ++k;
      }
      map[x] = ex.s4->power(r_image, static_cast<unsigned>(k));
    }
    map[ex.d4->identity()] = ex.s4->identity();
    return make_partial_hom(ex.d4, ex.s4, dom, map);
  };
  ex.phi1 = make_plin_template(ex.d4, ex.s4, build(ex.r2_s4));
  ex.phi2 = make_plin_template(ex.d4, ex.s4, build(ex.r_s4));
  return ex;
}

inline PLinTemplate identity_template(const AlgebraPtr& m) {
  return make_plin_template(m, m, total_identity_hom(m));
}

inline SubAlgebra full_subalgebra(const AlgebraPtr& a) {
  std::vector<int> all(a->size());
  for (int i = 0; i < a->size(); ++i) all[i] = i;
  SubKind kind = SubKind::Subsemigroup;
  if (a->kind() == AlgebraKind::Monoid) kind = SubKind::Submonoid;
  if (a->kind() == AlgebraKind::Group) kind = SubKind::Subgroup;
  return make_subalgebra(a, all, kind);
}

}  // namespace promlin::fixtures
