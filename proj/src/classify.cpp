#include "promlin/classify.hpp"

#include <algorithm>

namespace promlin {

namespace {

ClassificationResult classify_impl(const PLinTemplate& t,
                                   std::size_t obstruction_cap, bool group_note) {
  ClassificationResult res;
  std::vector<PartialHom> all = extending_homs(t.phi, HomFilter::All);
  if (all.empty()) {
    res.verdict = Verdict::IllFormedTemplate;
    return res;
  }
  std::optional<PartialHom> witness;
  for (const auto& psi : all) {
    if (!is_abelian(psi.image)) continue;
    bool union_ok = true;
    for (int v : psi.image.members)
      if (!is_regular(*t.s2, v)) {
        union_ok = false;
        break;
      }
    if (!union_ok) continue;
    if (!witness || psi.map < witness->map) witness = psi;
  }
  if (witness) {
    res.verdict = Verdict::Tractable;
    res.witness = std::move(witness);
    res.algorithm_note = group_note ? AlgorithmNote::Aip : AlgorithmNote::BlpAip;
    return res;
  }
  res.verdict = Verdict::NPHard;
  for (const auto& psi : all) {
    Obstruction ob{psi, ObstructionReason::NonAbelianImage, -1};
    if (is_abelian(psi.image)) {
      ob.reason = ObstructionReason::NonRegularImageElement;
      for (int v : psi.image.members)
        if (!is_regular(*t.s2, v)) {
          ob.element = v;
          break;
        }
    }
    if (res.obstructions.size() < obstruction_cap)
      res.obstructions.push_back(std::move(ob));
    else
      res.obstructions_truncated = true;
  }
  return res;
}

}  // namespace

ClassificationResult classify_monoid_template(const PLinTemplate& t,
                                              std::size_t obstruction_cap) {
  require(t.kind() == AlgebraKind::Monoid || t.kind() == AlgebraKind::Group,
          ErrorCode::PreconditionFailed,
          "monoid classification needs monoid or group algebras");
  const bool groups = t.kind() == AlgebraKind::Group;
  return classify_impl(t, obstruction_cap, groups);
}

ClassificationResult classify_group_template(const PLinTemplate& t,
                                             std::size_t obstruction_cap) {
  require(t.kind() == AlgebraKind::Group, ErrorCode::PreconditionFailed,
          "group classification needs group algebras");
  // a monoid homomorphism between groups is a group homomorphism, and group
  // images are unions of subgroups, so the monoid criterion collapses to the
  // existence of an Abelian extending hom
  return classify_impl(t, obstruction_cap, true);
}

ClassificationResult classify_csp(const AlgebraPtr& m, const SubAlgebra& n,
                                  std::size_t obstruction_cap) {
  require(n.parent.get() == m.get(), ErrorCode::PreconditionFailed,
          "constants must form a sub-algebra of the ambient monoid");
  PLinTemplate t = make_plin_template(m, m, identity_hom(m, n));
  return classify_monoid_template(t, obstruction_cap);
}

RelationalStructure sandwich_structure(const PLinTemplate& t, const PartialHom& psi) {
  require(psi.total(), ErrorCode::PreconditionFailed,
          "sandwich needs a total witness");
  const auto& members = psi.image.members;
  std::vector<int> local(t.s2->size(), -1);
  for (size_t i = 0; i < members.size(); ++i) local[members[i]] = static_cast<int>(i);
  RelationalStructure c;
  c.universe_size = static_cast<int>(members.size());
  for (int v : members) c.universe_labels.push_back(t.s2->label(v));
  Relation mul{"mul", 3, {}};
  for (int x : members)
    for (int y : members)
      mul.tuples.push_back({local[x], local[y], local[t.s2->product(x, y)]});
  c.relations.push_back(std::move(mul));
  for (int s : t.phi.domain.members)
    c.relations.push_back(
        Relation{"fix:" + t.s1->label(s), 1, {{local[t.phi.apply(s)]}}});
  return c;
}

}  // namespace promlin
