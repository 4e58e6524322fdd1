#include "promlin/corpus.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace promlin {

AlgebraPtr trivial_monoid() {
  return Algebra::make_monoid({"e"}, {0}, 0);
}

AlgebraPtr cyclic_group(int n) {
  require(n >= 1, ErrorCode::PreconditionFailed, "order must be positive");
  std::vector<std::string> labels(n);
  std::vector<int> table(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    labels[i] = std::to_string(i);
    for (int j = 0; j < n; ++j) table[static_cast<size_t>(i) * n + j] = (i + j) % n;
  }
  return Algebra::make_group(std::move(labels), std::move(table), 0);
}

namespace {

AlgebraPtr group_from_permutations(std::vector<std::vector<int>> perms) {
  std::sort(perms.begin(), perms.end());
  const int n = static_cast<int>(perms.size());
  auto index_of = [&](const std::vector<int>& p) {
    const auto it = std::lower_bound(perms.begin(), perms.end(), p);
    require(it != perms.end() && *it == p, ErrorCode::InvalidAlgebra,
            "permutation set not closed");
    return static_cast<int>(it - perms.begin());
  };
  std::vector<std::string> labels(n);
  std::vector<int> table(static_cast<size_t>(n) * n);
  int identity = -1;
  const int deg = static_cast<int>(perms[0].size());
  for (int i = 0; i < n; ++i) {
    std::string lab;
    for (int v : perms[i]) lab += std::to_string(v);
    labels[i] = lab;
    bool is_id = true;
    for (int k = 0; k < deg; ++k) is_id = is_id && perms[i][k] == k;
    if (is_id) identity = i;
    for (int j = 0; j < n; ++j) {
      std::vector<int> comp(deg);
      for (int k = 0; k < deg; ++k) comp[k] = perms[i][perms[j][k]];
      table[static_cast<size_t>(i) * n + j] = index_of(comp);
    }
  }
  require(identity >= 0, ErrorCode::InvalidAlgebra, "identity permutation missing");
  return Algebra::make_group(std::move(labels), std::move(table), identity);
}

}  // namespace

AlgebraPtr dihedral_group(int n) {
  require(n >= 3, ErrorCode::PreconditionFailed, "dihedral group needs n >= 3");
  std::vector<std::vector<int>> perms;
  for (int r = 0; r < n; ++r) {
    std::vector<int> rot(n), ref(n);
    for (int k = 0; k < n; ++k) {
      rot[k] = (k + r) % n;
      ref[k] = (n - k + r) % n;
    }
    perms.push_back(rot);
    perms.push_back(ref);
  }
  return group_from_permutations(std::move(perms));
}

AlgebraPtr symmetric_group(int n) {
  require(n >= 1 && n <= 4, ErrorCode::PreconditionFailed,
          "symmetric group capped at 4 letters");
  std::vector<int> base(n);
  std::iota(base.begin(), base.end(), 0);
  std::vector<std::vector<int>> perms;
  do {
    perms.push_back(base);
  } while (std::next_permutation(base.begin(), base.end()));
  return group_from_permutations(std::move(perms));
}

AlgebraPtr direct_product(const AlgebraPtr& a, const AlgebraPtr& b) {
  require(a->kind() == b->kind(), ErrorCode::PreconditionFailed,
          "product factors must have the same kind");
  const int na = a->size(), nb = b->size(), n = na * nb;
  std::vector<std::string> labels(n);
  std::vector<int> table(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    labels[i] = "(" + a->label(i / nb) + "," + b->label(i % nb) + ")";
    for (int j = 0; j < n; ++j)
      table[static_cast<size_t>(i) * n + j] =
          a->product(i / nb, j / nb) * nb + b->product(i % nb, j % nb);
  }
  if (a->kind() == AlgebraKind::Group)
    return Algebra::make_group(std::move(labels), std::move(table),
                               a->identity() * nb + b->identity());
  if (a->kind() == AlgebraKind::Monoid)
    return Algebra::make_monoid(std::move(labels), std::move(table),
                                a->identity() * nb + b->identity());
  return Algebra::make_semigroup(std::move(labels), std::move(table));
}

AlgebraPtr adjoin_identity(const AlgebraPtr& m) {
  const int n = m->size() + 1;
  std::vector<std::string> labels(n);
  labels[0] = "e";
  while (m->index_of(labels[0])) labels[0] += "'";
  std::vector<int> table(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == 0)
        table[static_cast<size_t>(i) * n + j] = j;
      else if (j == 0)
        table[static_cast<size_t>(i) * n + j] = i;
      else
        table[static_cast<size_t>(i) * n + j] = m->product(i - 1, j - 1) + 1;
    }
  for (int i = 1; i < n; ++i) labels[i] = m->label(i - 1);
  return Algebra::make_monoid(std::move(labels), std::move(table), 0);
}

AlgebraPtr m3_monoid() {
  // {0, 1, eps} with identity 0 and 1*1 = 1*eps = eps*eps = eps
  return Algebra::make_monoid({"0", "1", "eps"},
                              {0, 1, 2, 1, 2, 2, 2, 2, 2}, 0);
}

AlgebraPtr aperiodic_monoid(int n) {
  require(n >= 2, ErrorCode::PreconditionFailed, "threshold monoid needs n >= 2");
  std::vector<std::string> labels(n);
  std::vector<int> table(static_cast<size_t>(n) * n);
  labels[0] = "e";
  for (int i = 1; i < n; ++i) labels[i] = "a" + std::to_string(i);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      table[static_cast<size_t>(i) * n + j] = std::min(i + j, n - 1);
  return Algebra::make_monoid(std::move(labels), std::move(table), 0);
}

AlgebraPtr chain_semilattice_monoid(int n) {
  require(n >= 1, ErrorCode::PreconditionFailed, "chain needs n >= 1");
  std::vector<std::string> labels(n);
  std::vector<int> table(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    labels[i] = "c" + std::to_string(i);
    for (int j = 0; j < n; ++j)
      table[static_cast<size_t>(i) * n + j] = std::max(i, j);
  }
  labels[0] = "e";
  return Algebra::make_monoid(std::move(labels), std::move(table), 0);
}

AlgebraPtr right_zero_monoid() {
  // e, a, b with xa = a, xb = b for x in {a, b}
  return Algebra::make_monoid({"e", "a", "b"}, {0, 1, 2, 1, 1, 2, 2, 1, 2}, 0);
}

std::vector<CorpusEntry> corpus_groups(int max_size) {
  std::vector<CorpusEntry> out;
  auto add = [&](std::string name, AlgebraPtr a) {
    if (a->size() <= max_size) out.push_back({std::move(name), std::move(a)});
  };
  for (int n = 1; n <= max_size; ++n) add("Z" + std::to_string(n), cyclic_group(n));
  add("Z2xZ2", direct_product(cyclic_group(2), cyclic_group(2)));
  add("Z2xZ4", direct_product(cyclic_group(2), cyclic_group(4)));
  add("Z2xZ2xZ2", direct_product(cyclic_group(2),
                                 direct_product(cyclic_group(2), cyclic_group(2))));
  add("S3", symmetric_group(3));
  add("D4", dihedral_group(4));
  add("S4", symmetric_group(4));
  return out;
}

std::vector<CorpusEntry> corpus_monoids(int max_size) {
  std::vector<CorpusEntry> out;
  auto add = [&](std::string name, AlgebraPtr a) {
    if (a->size() <= max_size) out.push_back({std::move(name), std::move(a)});
  };
  add("trivial", trivial_monoid());
  add("M3", m3_monoid());
  add("Z2ext", adjoin_identity(cyclic_group(2)));
  add("Z3ext", adjoin_identity(cyclic_group(3)));
  add("T3", aperiodic_monoid(3));
  add("T4", aperiodic_monoid(4));
  add("chain2", chain_semilattice_monoid(2));
  add("chain3", chain_semilattice_monoid(3));
  add("RZ2e", right_zero_monoid());
  add("M3ext", adjoin_identity(m3_monoid()));
  for (auto& g : corpus_groups(max_size)) {
    g.algebra = Algebra::make_monoid(g.algebra->labels(), g.algebra->table(),
                                     g.algebra->identity());
    out.push_back({g.name + "_as_monoid", g.algebra});
  }
  std::vector<CorpusEntry> filtered;
  for (auto& e : out)
    if (e.algebra->size() <= max_size) filtered.push_back(std::move(e));
  return filtered;
}

std::vector<std::pair<std::string, Digraph>> corpus_digraphs() {
  std::vector<std::pair<std::string, Digraph>> out;
  out.emplace_back("empty", Digraph{});
  out.emplace_back("one_vertex", Digraph{{"0"}, {}});
  out.emplace_back("loop", Digraph{{"0"}, {{0, 0}}});
  out.emplace_back("one_edge", Digraph{{"0", "1"}, {{0, 1}}});
  out.emplace_back("path2", Digraph{{"0", "1", "2"}, {{0, 1}, {1, 2}}});
  out.emplace_back("triangle", Digraph{{"0", "1", "2"}, {{0, 1}, {1, 2}, {2, 0}}});
  out.emplace_back("two_cycle", Digraph{{"0", "1"}, {{0, 1}, {1, 0}}});
  return out;
}

std::vector<SigmaPlusStructure> corpus_sigma_instances(int max_vertices, int count,
                                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<SigmaPlusStructure> out;
  // a few fixed shapes first
  {
    SigmaPlusStructure s;  // single edge, no marks
    s.vertices = {"a", "b"};
    s.edges = {{0, 1}};
    out.push_back(s);
  }
  {
    SigmaPlusStructure s;  // marked edge
    s.vertices = {"a", "b"};
    s.edges = {{0, 1}};
    s.p_marks = {0};
    s.q_marks = {1};
    out.push_back(s);
  }
  {
    SigmaPlusStructure s;  // contradictory marks on one vertex
    s.vertices = {"a"};
    s.p_marks = {0};
    s.q_marks = {0};
    out.push_back(s);
  }
  while (static_cast<int>(out.size()) < count) {
    SigmaPlusStructure s;
    const int nv = 1 + static_cast<int>(rng() % max_vertices);
    for (int v = 0; v < nv; ++v) s.vertices.push_back("v" + std::to_string(v));
    const int ne = static_cast<int>(rng() % (2 * nv + 1));
    std::set<std::pair<int, int>> edges;
    for (int e = 0; e < ne; ++e)
      edges.emplace(static_cast<int>(rng() % nv), static_cast<int>(rng() % nv));
    s.edges.assign(edges.begin(), edges.end());
    for (int v = 0; v < nv; ++v) {
      const auto roll = rng() % 10;
      if (roll == 0) s.p_marks.push_back(v);
      if (roll == 1) s.q_marks.push_back(v);
    }
    out.push_back(std::move(s));
  }
  return out;
}

EquationSystem planted_instance(const PLinTemplate& t, int num_vars, int num_eqs,
                                std::mt19937_64& rng) {
  EquationSystem sys;
  for (int v = 0; v < num_vars; ++v) sys.ensure_var("x" + std::to_string(v));
  std::vector<int> planted(num_vars);
  for (int v = 0; v < num_vars; ++v)
    planted[v] = static_cast<int>(rng() % t.s1->size());
  int made = 0, guard = 0;
  while (made < num_eqs && ++guard < num_eqs * 50) {
    const int x = static_cast<int>(rng() % num_vars);
    const int y = static_cast<int>(rng() % num_vars);
    const int val = t.s1->product(planted[x], planted[y]);
    std::vector<int> candidates;
    for (int z = 0; z < num_vars; ++z)
      if (planted[z] == val) candidates.push_back(z);
    if (candidates.empty()) {
      // re-plant one variable to make the product representable
      const int z = static_cast<int>(rng() % num_vars);
      planted[z] = val;
      // restart; previously made equations may now be violated
      sys.equations.clear();
      made = 0;
      continue;
    }
    const int z = candidates[rng() % candidates.size()];
    sys.equations.push_back(MulEq{x, y, z});
    ++made;
  }
  // a couple of Fix constraints where the planted value lies in dom(phi)
  int fixes = 0;
  for (int v = 0; v < num_vars && fixes < 2; ++v)
    if (t.phi.defined_at(planted[v])) {
      sys.equations.push_back(FixEq{v, planted[v]});
      ++fixes;
    }
  require(check_assignment(sys, *t.s1, planted), ErrorCode::PreconditionFailed,
          "planted instance lost its solution");
  return sys;
}

EquationSystem random_instance(const AlgebraPtr& over, const SubAlgebra& constants,
                               int num_vars, int num_eqs, std::mt19937_64& rng) {
  EquationSystem sys;
  for (int v = 0; v < num_vars; ++v) sys.ensure_var("x" + std::to_string(v));
  for (int e = 0; e < num_eqs; ++e) {
    if (rng() % 4 == 0) {
      sys.equations.push_back(
          FixEq{static_cast<int>(rng() % num_vars),
                constants.members[rng() % constants.members.size()]});
    } else {
      sys.equations.push_back(MulEq{static_cast<int>(rng() % num_vars),
                                    static_cast<int>(rng() % num_vars),
                                    static_cast<int>(rng() % num_vars)});
    }
  }
  (void)over;
  return sys;
}

std::vector<CorpusEntry> generate_corpus(const CorpusSpec& spec) {
  std::vector<CorpusEntry> out;
  if (spec.include_groups)
    for (auto& e : corpus_groups(spec.max_size)) out.push_back(e);
  if (spec.include_monoids)
    for (auto& e : corpus_monoids(spec.max_size)) out.push_back(e);
  if (spec.include_bands)
    for (auto& [name, d] : corpus_digraphs()) {
      auto sd = build_SD(d);
      if (sd.algebra->size() <= 4 * spec.max_size)
        out.push_back({"SD_" + name, sd.algebra});
    }
  std::mt19937_64 rng(spec.seed);
  (void)rng;  // the families are deterministic; the seed orders nothing yet
  return out;
}

}  // namespace promlin
