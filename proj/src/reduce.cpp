#include "promlin/reduce.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "promlin/homsearch.hpp"

namespace promlin {

SigmaPlusStructure digraph_plus(const Digraph& d) {
  SigmaPlusStructure s;
  s.vertices = d.vertices;
  std::string p = "p", q = "q";
  while (std::find(s.vertices.begin(), s.vertices.end(), p) != s.vertices.end())
    p += "'";
  while (std::find(s.vertices.begin(), s.vertices.end(), q) != s.vertices.end())
    q += "'";
  const int pi = static_cast<int>(s.vertices.size());
  s.vertices.push_back(p);
  const int qi = static_cast<int>(s.vertices.size());
  s.vertices.push_back(q);
  s.edges = d.edges;
  s.edges.emplace_back(pi, qi);
  s.p_marks = {pi};
  s.q_marks = {qi};
  return s;
}

RelationalStructure sigma_plus_to_structure(const SigmaPlusStructure& s) {
  RelationalStructure r;
  r.universe_size = static_cast<int>(s.vertices.size());
  r.universe_labels = s.vertices;
  Relation e{"E", 2, {}}, p{"P", 1, {}}, q{"Q", 1, {}};
  for (auto [u, v] : s.edges) e.tuples.push_back({u, v});
  for (int v : s.p_marks) p.tuples.push_back({v});
  for (int v : s.q_marks) q.tuples.push_back({v});
  r.relations = {std::move(e), std::move(p), std::move(q)};
  return r;
}

namespace {

using Tag = BandElement::Tag;

constexpr Tag kVertexTags[5] = {Tag::VL, Tag::VR, Tag::VLC, Tag::VLR, Tag::VCR};

const char* tag_suffix(Tag t) {
  switch (t) {
    case Tag::VL: return "L";
    case Tag::VR: return "R";
    case Tag::VLC: return "LC";
    case Tag::VLR: return "LR";
    case Tag::VCR: return "CR";
    case Tag::EC: return "C";
    case Tag::Zero: return "0";
  }
  return "?";
}

// the product of x and y, determined by x's class and y
BandElement band_product(const BandElement& x, const BandElement& y,
                         const std::vector<std::pair<int, int>>& edges) {
  if (x.tag == Tag::Zero || y.tag == Tag::Zero) return BandElement{};
  auto vert = [](Tag t, int v) { return BandElement{t, v, -1}; };
  switch (x.tag) {
    case Tag::VL:
      switch (y.tag) {
        case Tag::VL: return y;
        case Tag::VR: return vert(Tag::VLR, y.vertex);
        case Tag::VLR: return y;
        case Tag::VLC: return y;
        case Tag::EC: return vert(Tag::VLC, edges[y.edge].first);
        default: return BandElement{};
      }
    case Tag::VR:
      switch (y.tag) {
        case Tag::VR: return y;
        case Tag::VL: return vert(Tag::VLR, y.vertex);
        case Tag::VLR: return y;
        case Tag::VCR: return y;
        case Tag::EC: return vert(Tag::VCR, edges[y.edge].second);
        default: return BandElement{};
      }
    case Tag::VLR:
      switch (y.tag) {
        case Tag::VLR: return y;
        case Tag::VL: return vert(Tag::VLR, y.vertex);
        case Tag::VR: return vert(Tag::VLR, y.vertex);
        default: return BandElement{};
      }
    case Tag::VLC:
      switch (y.tag) {
        case Tag::VLC: return y;
        case Tag::VL: return vert(Tag::VLC, y.vertex);
        case Tag::EC: return vert(Tag::VLC, edges[y.edge].first);
        default: return BandElement{};
      }
    case Tag::VCR:
      switch (y.tag) {
        case Tag::VCR: return y;
        case Tag::VR: return vert(Tag::VCR, y.vertex);
        case Tag::EC: return vert(Tag::VCR, edges[y.edge].second);
        default: return BandElement{};
      }
    case Tag::EC:
      switch (y.tag) {
        case Tag::EC: return y;
        case Tag::VL: return vert(Tag::VLC, y.vertex);
        case Tag::VLC: return y;
        case Tag::VR: return vert(Tag::VCR, y.vertex);
        case Tag::VCR: return y;
        default: return BandElement{};
      }
    case Tag::Zero: return BandElement{};
  }
  return BandElement{};
}

}  // namespace

SDResult build_SD(const Digraph& d) {
  SDResult out;
  out.d_plus = digraph_plus(d);
  const auto& verts = out.d_plus.vertices;
  const auto& edges = out.d_plus.edges;
  const int nv = static_cast<int>(verts.size());
  const int ne = static_cast<int>(edges.size());

  std::vector<BandElement> elems;
  std::vector<std::string> labels;
  for (Tag t : kVertexTags)
    for (int v = 0; v < nv; ++v) {
      elems.push_back(BandElement{t, v, -1});
      labels.push_back(verts[v] + "^" + tag_suffix(t));
    }
  for (int e = 0; e < ne; ++e) {
    elems.push_back(BandElement{Tag::EC, -1, e});
    labels.push_back("(" + verts[edges[e].first] + "," + verts[edges[e].second] +
                     ")^C");
  }
  elems.push_back(BandElement{});
  labels.push_back("0");
  const int n = static_cast<int>(elems.size());

  auto index_of = [&](const BandElement& b) -> int {
    if (b.tag == Tag::Zero) return n - 1;
    if (b.tag == Tag::EC) return 5 * nv + b.edge;
    int block = 0;
    while (kVertexTags[block] != b.tag) ++block;
    return block * nv + b.vertex;
  };

  std::vector<int> table(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      table[static_cast<size_t>(i) * n + j] =
          index_of(band_product(elems[i], elems[j], edges));
  out.algebra = Algebra::make_semigroup(std::move(labels), std::move(table));
  out.elements = std::move(elems);

  const int p = nv - 2, q = nv - 1, pq_edge = ne - 1;
  out.sw_embedding.clear();
  for (Tag t : kVertexTags) {
    out.sw_embedding.push_back(index_of(BandElement{t, p, -1}));
    out.sw_embedding.push_back(index_of(BandElement{t, q, -1}));
  }
  out.sw_embedding.push_back(index_of(BandElement{Tag::EC, -1, pq_edge}));
  out.sw_embedding.push_back(n - 1);
  out.s_w = make_subalgebra(out.algebra, out.sw_embedding, SubKind::Subsemigroup);
  return out;
}

const AlgebraPtr& canonical_SW() {
  static const AlgebraPtr sw = [] {
    Digraph empty;
    return build_SD(empty).algebra;
  }();
  return sw;
}

namespace {
// canonical S_W indices (element order of build_SD on the empty digraph)
constexpr int kPL = 0, kQL = 1, kPR = 2, kQR = 3, kPLC = 4, kQLC = 5, kPLR = 6,
              kQLR = 7, kPCR = 8, kQCR = 9, kPQC = 10, kZero = 11;
}  // namespace

GeneralSystem phi_system(const SigmaPlusStructure& instance) {
  GeneralSystem sys;
  const auto c = [](int idx) { return Atom::constant_of(idx); };
  auto v = [](const std::string& name) { return Atom::var(name); };
  auto eq = [&](std::vector<Atom> l, std::vector<Atom> r) {
    sys.equations.push_back(GeneralEquation{std::move(l), std::move(r)});
  };
  const int pbox[3] = {kPL, kPR, kPLR};
  const int qbox[3] = {kQL, kQR, kQLR};
  const char* suffix[3] = {"^L", "^R", "^LR"};
  for (size_t vi = 0; vi < instance.vertices.size(); ++vi) {
    const std::string& name = instance.vertices[vi];
    for (int b = 0; b < 3; ++b) {
      const std::string var = name + suffix[b];
      sys.ensure_var(var);
      eq({c(pbox[b]), v(var)}, {v(var)});
      eq({v(var), c(pbox[b])}, {c(pbox[b])});
    }
    eq({c(kPLR), v(name + "^L")}, {v(name + "^LR")});
    eq({c(kPLR), v(name + "^R")}, {v(name + "^LR")});
  }
  for (int vi : instance.p_marks)
    for (int b = 0; b < 3; ++b)
      eq({v(instance.vertices[vi] + suffix[b])}, {c(pbox[b])});
  for (int vi : instance.q_marks)
    for (int b = 0; b < 3; ++b)
      eq({v(instance.vertices[vi] + suffix[b])}, {c(qbox[b])});
  for (const auto& [u, w] : instance.edges) {
    const std::string var =
        "(" + instance.vertices[u] + "," + instance.vertices[w] + ")^C";
    sys.ensure_var(var);
    eq({v(var), c(kPQC)}, {c(kPQC)});
    eq({c(kPQC), v(var)}, {v(var)});
    eq({c(kPLC), v(var)}, {c(kPLC), v(instance.vertices[u] + "^L")});
    eq({c(kPCR), v(var)}, {c(kPCR), v(instance.vertices[w] + "^R")});
  }
  return sys;
}

GeneralSystem remap_constants(const GeneralSystem& sys,
                              const std::vector<int>& map) {
  GeneralSystem out = sys;
  for (auto& eq : out.equations)
    for (auto* side : {&eq.lhs, &eq.rhs})
      for (auto& a : *side)
        if (a.kind == Atom::Kind::Const) {
          require(a.constant >= 0 && a.constant < static_cast<int>(map.size()),
                  ErrorCode::ConstantOutsideConstants, "constant out of range");
          a.constant = map[a.constant];
        }
  return out;
}

std::optional<Assignment> solve_semilattice_min(const AlgebraPtr& semilattice,
                                                const EquationSystem& sys) {
  require(is_semilattice(*semilattice), ErrorCode::NotSemilattice,
          "minimal solutions need a semilattice");
  const int n = sys.num_vars();
  const int m = semilattice->size();
  std::vector<std::vector<char>> domain(n, std::vector<char>(m, 1));
  std::vector<MulEq> muls;
  for (const auto& eq : sys.equations) {
    if (const auto* mu = std::get_if<MulEq>(&eq)) {
      muls.push_back(*mu);
    } else {
      const auto& f = std::get<FixEq>(eq);
      require(f.constant >= 0 && f.constant < m,
              ErrorCode::ConstantOutsideConstants, "Fix constant out of range");
      for (int v = 0; v < m; ++v)
        if (v != f.constant) domain[f.x][v] = 0;
    }
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& mu : muls)
      for (int v = 0; v < m; ++v) {
        auto drop = [&](int var, int val) {
          if (domain[var][val]) {
            domain[var][val] = 0;
            changed = true;
          }
        };
        if (domain[mu.x][v]) {
          bool ok = false;
          for (int w = 0; w < m && !ok; ++w)
            ok = domain[mu.y][w] && domain[mu.z][semilattice->product(v, w)];
          if (!ok) drop(mu.x, v);
        }
        if (domain[mu.y][v]) {
          bool ok = false;
          for (int u = 0; u < m && !ok; ++u)
            ok = domain[mu.x][u] && domain[mu.z][semilattice->product(u, v)];
          if (!ok) drop(mu.y, v);
        }
        if (domain[mu.z][v]) {
          bool ok = false;
          for (int u = 0; u < m && !ok; ++u)
            for (int w = 0; w < m && !ok; ++w)
              ok = domain[mu.x][u] && domain[mu.y][w] &&
                   semilattice->product(u, w) == v;
          if (!ok) drop(mu.z, v);
        }
      }
  }
  Assignment asg(n, -1);
  for (int x = 0; x < n; ++x) {
    int meet = -1;
    for (int v = 0; v < m; ++v)
      if (domain[x][v]) meet = meet < 0 ? v : semilattice->product(meet, v);
    if (meet < 0) return std::nullopt;
    asg[x] = meet;
  }
  require(check_assignment(sys, *semilattice, asg), ErrorCode::NotSemilattice,
          "meet assignment failed; arc consistency was not confluent");
  return asg;
}

// ---------------------------------------------------------------------------
// Psi

namespace {

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

PsiResult psi(const EquationSystem& x) {
  PsiResult res;
  const AlgebraPtr& sw = canonical_SW();
  for (const auto& eq : x.equations)
    if (const auto* f = std::get_if<FixEq>(&eq))
      require(f->constant >= 0 && f->constant < sw->size(),
              ErrorCode::ConstantOutsideConstants,
              "psi needs constants inside the planted subsemigroup");

  // quotient to the semilattice and find the minimal class solution
  Quotient q = quotient_semilattice(sw);
  EquationSystem hat;
  hat.variables = x.variables;
  for (const auto& eq : x.equations) {
    if (const auto* mu = std::get_if<MulEq>(&eq))
      hat.equations.push_back(*mu);
    else {
      const auto& f = std::get<FixEq>(eq);
      hat.equations.push_back(FixEq{f.x, q.projection[f.constant]});
    }
  }
  auto minimal = solve_semilattice_min(q.algebra, hat);
  {
    PsiPass pass{"quotient-minimal-solution", {}};
    pass.notes.push_back(minimal ? "feasible" : "infeasible");
    res.passes.push_back(std::move(pass));
  }
  if (!minimal) {
    res.rejected = true;
    res.reject_certificate = std::move(hat);
    return res;
  }

  // class pinning: the representative constant of each class is its least
  // member in canonical order (the p-side element)
  std::vector<int> rep_of_class(q.classes.size());
  for (size_t c = 0; c < q.classes.size(); ++c) rep_of_class[c] = q.classes[c][0];
  std::vector<int> pin(x.num_vars());  // canonical S_W rep per variable
  {
    PsiPass pass{"class-pinning", {}};
    for (int v = 0; v < x.num_vars(); ++v) {
      pin[v] = rep_of_class[(*minimal)[v]];
      pass.notes.push_back(x.variables[v] + " in class of " + sw->label(pin[v]));
    }
    res.passes.push_back(std::move(pass));
  }

  // product rewriting: x1 x2 = x3 becomes c x2 = c x3 with
  // c = c_{x1} c_{x2} = c_{x3}
  struct Link {
    int c;  // canonical S_W element
    int y, z;
  };
  std::vector<Link> links;
  std::vector<FixEq> fixes;
  {
    PsiPass pass{"product-rewrite", {}};
    for (const auto& eq : x.equations) {
      if (const auto* mu = std::get_if<MulEq>(&eq)) {
        // c_{x1} c_{x2} is only similar to the representative c_{x3}; similar
        // elements act identically on the left, so the link keeps the
        // representative
        const int prod = sw->product(pin[mu->x], pin[mu->y]);
        const int c = pin[mu->z];
        require(q.projection[prod] == q.projection[c],
                ErrorCode::PreconditionFailed,
                "pinned classes violate the quotient solution");
        links.push_back(Link{c, mu->y, mu->z});
        pass.notes.push_back(x.variables[mu->x] + "*" + x.variables[mu->y] +
                             "=" + x.variables[mu->z] + " -> " + sw->label(c) +
                             "*" + x.variables[mu->y] + "=" + sw->label(c) +
                             "*" + x.variables[mu->z]);
      } else {
        fixes.push_back(std::get<FixEq>(eq));
      }
    }
    res.passes.push_back(std::move(pass));
  }

  // zero elimination
  {
    PsiPass pass{"zero-elimination", {}};
    std::vector<Link> kept;
    for (const auto& l : links) {
      if (l.c == kZero)
        pass.notes.push_back("dropped trivial zero link");
      else
        kept.push_back(l);
    }
    links = std::move(kept);
    std::vector<FixEq> kept_fix;
    for (const auto& f : fixes) {
      if (pin[f.x] == kZero)
        pass.notes.push_back("dropped " + x.variables[f.x] + " = 0");
      else
        kept_fix.push_back(f);
    }
    fixes = std::move(kept_fix);
    res.passes.push_back(std::move(pass));
  }

  // retagging: LC joins L; LR and CR join R
  auto retag = [](int rep) {
    switch (rep) {
      case kPLC: return kPL;
      case kQLC: return kQL;
      case kPLR:
      case kPCR: return kPR;
      case kQLR:
      case kQCR: return kQR;
      default: return rep;
    }
  };
  {
    PsiPass pass{"retag", {}};
    for (int v = 0; v < x.num_vars(); ++v) {
      const int t = retag(pin[v]);
      if (t != pin[v])
        pass.notes.push_back(x.variables[v] + ": " + sw->label(pin[v]) + " -> " +
                             sw->label(t));
      pin[v] = t;
    }
    for (auto& f : fixes) {
      const int t = retag(f.constant);
      if (t != f.constant)
        pass.notes.push_back(x.variables[f.x] + " = " + sw->label(f.constant) +
                             " -> = " + sw->label(t));
      f.constant = t;
    }
    res.passes.push_back(std::move(pass));
  }

  // edge-constant expansion: x = (p,q)^C splits into links onto fresh
  // avatars pinned to p^L and q^R
  EquationSystem vars_owner;  // only used to mint fresh variable ids
  vars_owner.variables = x.variables;
  std::vector<int> pin_ext = pin;
  {
    PsiPass pass{"edge-constant-expansion", {}};
    std::vector<FixEq> kept;
    int fresh = 0;
    auto mint = [&]() {
      std::string name;
      do {
        name = "__psi" + std::to_string(fresh++);
      } while (vars_owner.var_id(name) >= 0);
      return vars_owner.ensure_var(name);
    };
    for (const auto& f : fixes) {
      if (f.constant != kPQC) {
        kept.push_back(f);
        continue;
      }
      const int y = mint();
      const int z = mint();
      pin_ext.push_back(kPL);
      pin_ext.push_back(kQR);
      links.push_back(Link{kPLC, f.x, y});
      links.push_back(Link{kPCR, f.x, z});
      kept.push_back(FixEq{y, kPL});
      kept.push_back(FixEq{z, kQR});
      pass.notes.push_back(x.variables[f.x] + " = (p,q)^C expanded");
    }
    fixes = std::move(kept);
    res.passes.push_back(std::move(pass));
  }
  const int nvars = static_cast<int>(vars_owner.variables.size());

  // same-class links identify variables; the remaining links carry the
  // vertex pairing and the edge endpoints
  auto side_class = [&](int rep) {
    // post-retag classes: L-side, R-side, edge, or zero
    switch (rep) {
      case kPL:
      case kQL: return 0;
      case kPR:
      case kQR: return 1;
      case kPQC: return 2;
      default: return 3;
    }
  };
  Dsu dsu(nvars);
  std::vector<std::pair<int, int>> vertex_links;            // (L var, R var)
  std::vector<std::pair<int, int>> edge_l_links, edge_r_links;  // (edge var, v)
  {
    PsiPass pass{"identify-and-parse", {}};
    for (const auto& l : links) {
      const int cy = side_class(pin_ext[l.y]);
      const int cz = side_class(pin_ext[l.z]);
      if (cy == cz) {
        dsu.unite(l.y, l.z);
        pass.notes.push_back("identified " + vars_owner.variables[l.y] +
                             " with " + vars_owner.variables[l.z]);
      } else if (l.c == kPLR && cy == 0 && cz == 1) {
        vertex_links.emplace_back(l.y, l.z);
      } else if (l.c == kPLC && cy == 2 && cz == 0) {
        edge_l_links.emplace_back(l.y, l.z);
      } else if (l.c == kPCR && cy == 2 && cz == 1) {
        edge_r_links.emplace_back(l.y, l.z);
      } else {
        fail(ErrorCode::PreconditionFailed,
             "unparseable link shape survived the rewrite");
      }
    }
    res.passes.push_back(std::move(pass));
  }

  // vertex components: same-vertex constraints across the L/R avatars
  for (auto [y, z] : vertex_links) dsu.unite(y, z);
  // all L endpoints of one edge variable name the same vertex, as do all R
  // endpoints
  auto unite_targets = [&](const std::vector<std::pair<int, int>>& lks) {
    std::map<int, int> first_target;
    for (auto [e, v] : lks) {
      const int er = dsu.find(e);
      auto it = first_target.find(er);
      if (it == first_target.end())
        first_target[er] = v;
      else
        dsu.unite(it->second, v);
    }
  };
  // edge variables may have been identified; group links by representative
  unite_targets(edge_l_links);
  unite_targets(edge_r_links);

  // assemble the structure; remember which variables stand behind each
  // vertex and edge so plumbing introduced by the canonical form can be
  // recognized afterwards
  SigmaPlusStructure out;
  std::vector<bool> vertex_all_fresh;
  auto is_fresh = [](const std::string& name) {
    return name.rfind("__n", 0) == 0 || name.rfind("__psi", 0) == 0;
  };
  std::map<int, int> vertex_of;  // dsu representative -> vertex index
  auto vertex_for = [&](int var) {
    const int r = dsu.find(var);
    auto it = vertex_of.find(r);
    if (it != vertex_of.end()) {
      vertex_all_fresh[it->second] =
          vertex_all_fresh[it->second] && is_fresh(vars_owner.variables[var]);
      return it->second;
    }
    const int idx = static_cast<int>(out.vertices.size());
    out.vertices.push_back("w" + std::to_string(idx));
    vertex_all_fresh.push_back(is_fresh(vars_owner.variables[var]));
    vertex_of[r] = idx;
    return idx;
  };
  std::set<int> p_set, q_set;
  for (const auto& f : fixes) {
    require(side_class(f.constant) != 3, ErrorCode::PreconditionFailed,
            "unexpected pinned constant after retagging");
    const int v = vertex_for(f.x);
    if (f.constant == kPL || f.constant == kPR)
      p_set.insert(v);
    else
      q_set.insert(v);
  }
  std::map<int, std::pair<int, int>> edge_ends;  // edge var rep -> (L, R)
  for (auto [e, v] : edge_l_links) edge_ends[dsu.find(e)].first = vertex_for(v) + 1;
  for (auto [e, v] : edge_r_links) edge_ends[dsu.find(e)].second = vertex_for(v) + 1;
  for (int v = 0; v < nvars; ++v)
    if (side_class(pin_ext[v]) == 2 && dsu.find(v) == v && !edge_ends.count(v))
      edge_ends[v] = {0, 0};
  std::set<std::pair<int, int>> edge_set;
  std::map<std::pair<int, int>, bool> edge_fresh;
  for (auto& [rep, ends] : edge_ends) {
    int l = ends.first, r = ends.second;
    if (l == 0) {
      out.vertices.push_back("w" + std::to_string(out.vertices.size()));
      vertex_all_fresh.push_back(true);
      l = static_cast<int>(out.vertices.size());
    }
    if (r == 0) {
      out.vertices.push_back("w" + std::to_string(out.vertices.size()));
      vertex_all_fresh.push_back(true);
      r = static_cast<int>(out.vertices.size());
    }
    const std::pair<int, int> edge{l - 1, r - 1};
    const bool fresh_edge = is_fresh(vars_owner.variables[rep]);
    auto it = edge_fresh.find(edge);
    if (it == edge_fresh.end())
      edge_fresh[edge] = fresh_edge;
    else
      it->second = it->second && fresh_edge;
    edge_set.insert(edge);
  }
  // isolated vertex avatars still denote vertices
  for (int v = 0; v < nvars; ++v)
    if (side_class(pin_ext[v]) <= 1) vertex_for(v);
  out.edges.assign(edge_set.begin(), edge_set.end());
  out.p_marks.assign(p_set.begin(), p_set.end());
  out.q_marks.assign(q_set.begin(), q_set.end());

  // Components made purely of canonicalization plumbing (reserved-prefix
  // variables) that map into the single-edge structure never obstruct a
  // homomorphism into any D+, so they are dropped. Components touching an
  // input-named variable always stay.
  {
    PsiPass pass{"drop-satisfied-plumbing", {}};
    const int n = static_cast<int>(out.vertices.size());
    Dsu comp(n);
    for (auto [u, v] : out.edges) comp.unite(u, v);
    std::vector<bool> comp_fresh(n, true);
    for (int v = 0; v < n; ++v)
      comp_fresh[comp.find(v)] = comp_fresh[comp.find(v)] && vertex_all_fresh[v];
    for (const auto& [edge, fresh_edge] : edge_fresh)
      comp_fresh[comp.find(edge.first)] =
          comp_fresh[comp.find(edge.first)] && fresh_edge;
    SigmaPlusStructure w;
    w.vertices = {"p", "q"};
    w.edges = {{0, 1}};
    w.p_marks = {0};
    w.q_marks = {1};
    std::vector<bool> drop(n, false);
    std::set<int> roots;
    for (int v = 0; v < n; ++v) roots.insert(comp.find(v));
    for (int root : roots) {
      if (!comp_fresh[root]) continue;
      SigmaPlusStructure c;
      std::vector<int> local(n, -1);
      for (int v = 0; v < n; ++v)
        if (comp.find(v) == root) {
          local[v] = static_cast<int>(c.vertices.size());
          c.vertices.push_back(out.vertices[v]);
        }
      for (auto [u, v] : out.edges)
        if (comp.find(u) == root) c.edges.emplace_back(local[u], local[v]);
      for (int v : out.p_marks)
        if (comp.find(v) == root) c.p_marks.push_back(local[v]);
      for (int v : out.q_marks)
        if (comp.find(v) == root) c.q_marks.push_back(local[v]);
      if (hom_exists(sigma_plus_to_structure(c), sigma_plus_to_structure(w))) {
        for (int v = 0; v < n; ++v)
          if (comp.find(v) == root) drop[v] = true;
        pass.notes.push_back("dropped a plumbing component of " +
                             std::to_string(c.vertices.size()) + " vertices");
      }
    }
    SigmaPlusStructure pruned;
    std::vector<int> remap(n, -1);
    for (int v = 0; v < n; ++v)
      if (!drop[v]) {
        remap[v] = static_cast<int>(pruned.vertices.size());
        pruned.vertices.push_back("w" + std::to_string(pruned.vertices.size()));
      }
    for (auto [u, v] : out.edges)
      if (!drop[u]) pruned.edges.emplace_back(remap[u], remap[v]);
    for (int v : out.p_marks)
      if (!drop[v]) pruned.p_marks.push_back(remap[v]);
    for (int v : out.q_marks)
      if (!drop[v]) pruned.q_marks.push_back(remap[v]);
    out = std::move(pruned);
    res.passes.push_back(std::move(pass));
  }
  res.structure = std::move(out);
  return res;
}

// ---------------------------------------------------------------------------

PruneResult prune_extended_instance(const SigmaPlusStructure& instance) {
  PruneResult res;
  const int n = static_cast<int>(instance.vertices.size());
  Dsu comp(n);
  for (auto [u, v] : instance.edges) comp.unite(u, v);

  SigmaPlusStructure w;
  w.vertices = {"p", "q"};
  w.edges = {{0, 1}};
  w.p_marks = {0};
  w.q_marks = {1};
  RelationalStructure w_struct = sigma_plus_to_structure(w);

  auto component_structure = [&](int root) {
    SigmaPlusStructure c;
    std::vector<int> local(n, -1);
    for (int v = 0; v < n; ++v)
      if (comp.find(v) == root) {
        local[v] = static_cast<int>(c.vertices.size());
        c.vertices.push_back(instance.vertices[v]);
      }
    for (auto [u, v] : instance.edges)
      if (comp.find(u) == root) c.edges.emplace_back(local[u], local[v]);
    for (int v : instance.p_marks)
      if (comp.find(v) == root) c.p_marks.push_back(local[v]);
    for (int v : instance.q_marks)
      if (comp.find(v) == root) c.q_marks.push_back(local[v]);
    return c;
  };

  std::set<int> marked_roots, removed_roots;
  for (int v : instance.p_marks) marked_roots.insert(comp.find(v));
  for (int v : instance.q_marks) marked_roots.insert(comp.find(v));
  for (int root : marked_roots) {
    auto c = component_structure(root);
    if (!hom_exists(sigma_plus_to_structure(c), w_struct)) {
      res.rejected = true;
      return res;
    }
    removed_roots.insert(root);
  }
  std::set<int> all_roots;
  for (int v = 0; v < n; ++v) all_roots.insert(comp.find(v));
  for (int root : all_roots) {
    if (removed_roots.count(root)) continue;
    auto c = component_structure(root);
    if (hom_exists(sigma_plus_to_structure(c), w_struct)) removed_roots.insert(root);
  }
  std::vector<int> local(n, -1);
  for (int v = 0; v < n; ++v)
    if (!removed_roots.count(comp.find(v))) {
      local[v] = static_cast<int>(res.remaining.vertices.size());
      res.remaining.vertices.push_back(instance.vertices[v]);
    }
  for (auto [u, v] : instance.edges)
    if (local[u] >= 0) res.remaining.edges.emplace_back(local[u], local[v]);
  res.accepted_trivially = res.remaining.vertices.empty();
  return res;
}

std::map<std::string, int> solution_from_hom(const SigmaPlusStructure& instance,
                                             const SDResult& sd,
                                             const std::vector<int>& h) {
  std::map<std::string, int> sol;
  const auto& edges = sd.d_plus.edges;
  auto vertex_elem = [&](Tag t, int v) {
    for (size_t i = 0; i < sd.elements.size(); ++i)
      if (sd.elements[i].tag == t && sd.elements[i].vertex == v)
        return static_cast<int>(i);
    fail(ErrorCode::PreconditionFailed, "vertex element missing");
  };
  for (size_t v = 0; v < instance.vertices.size(); ++v) {
    sol[instance.vertices[v] + "^L"] = vertex_elem(Tag::VL, h[v]);
    sol[instance.vertices[v] + "^R"] = vertex_elem(Tag::VR, h[v]);
    sol[instance.vertices[v] + "^LR"] = vertex_elem(Tag::VLR, h[v]);
  }
  for (const auto& [u, v] : instance.edges) {
    const std::pair<int, int> img{h[u], h[v]};
    int idx = -1;
    for (size_t e = 0; e < edges.size(); ++e)
      if (edges[e] == img) idx = static_cast<int>(e);
    require(idx >= 0, ErrorCode::PreconditionFailed,
            "homomorphism image misses an edge");
    int elem = -1;
    for (size_t i = 0; i < sd.elements.size(); ++i)
      if (sd.elements[i].tag == Tag::EC && sd.elements[i].edge == idx)
        elem = static_cast<int>(i);
    sol["(" + instance.vertices[u] + "," + instance.vertices[v] + ")^C"] = elem;
  }
  return sol;
}

std::optional<std::vector<int>> hom_from_solution(
    const SigmaPlusStructure& instance, const SDResult& sd,
    const std::map<std::string, int>& solution) {
  std::vector<int> h(instance.vertices.size(), -1);
  for (size_t v = 0; v < instance.vertices.size(); ++v) {
    auto it = solution.find(instance.vertices[v] + "^L");
    if (it == solution.end()) return std::nullopt;
    const BandElement& b = sd.elements[it->second];
    if (b.tag != Tag::VL) return std::nullopt;
    h[v] = b.vertex;
  }
  return h;
}

std::optional<std::map<std::string, int>> solve_phi_over_sd(
    const SigmaPlusStructure& instance, const SDResult& sd,
    std::uint64_t node_budget) {
  GeneralSystem gen = remap_constants(phi_system(instance), sd.sw_embedding);
  NormalizeResult norm = normalize(gen, sd.s_w, AlgebraKind::Semigroup);
  RelationalStructure inst = system_to_structure(norm.system, sd.s_w);
  RelationalStructure lin = lin_structure(sd.algebra, sd.s_w);
  auto h = find_homomorphism(inst, lin, node_budget);
  if (!h) return std::nullopt;
  std::map<std::string, int> sol;
  for (int v = 0; v < norm.system.num_vars(); ++v)
    sol[norm.system.variables[v]] = (*h)[v];
  for (const auto& [from, to] : norm.aliases) sol[from] = sol.at(to);
  return sol;
}

EquivalenceReport reduction_equivalence_check(
    const Digraph& d1, const Digraph& d2,
    const std::vector<SigmaPlusStructure>& corpus) {
  EquivalenceReport rep;
  SDResult sd1 = build_SD(d1), sd2 = build_SD(d2);
  for (const auto& inst : corpus) {
    InstanceEquivalence ie;
    RelationalStructure xi = sigma_plus_to_structure(inst);
    auto run_side = [&](const SDResult& sd, bool& hom_flag, bool& solv_flag) {
      auto h = find_homomorphism(xi, sigma_plus_to_structure(sd.d_plus));
      hom_flag = h.has_value();
      auto sol = solve_phi_over_sd(inst, sd);
      solv_flag = sol.has_value();
      bool ok = hom_flag == solv_flag;
      if (h) {
        auto induced = solution_from_hom(inst, sd, *h);
        GeneralSystem gen = remap_constants(phi_system(inst), sd.sw_embedding);
        ok = ok && check_general(gen, *sd.algebra, induced);
      }
      if (sol) {
        auto back = hom_from_solution(inst, sd, *sol);
        ok = ok && back.has_value();
        if (back) {
          // verify the extracted map is a homomorphism
          RelationalStructure dp = sigma_plus_to_structure(sd.d_plus);
          auto check_tuple = [&](const Relation& rx, const Relation& ra) {
            for (const auto& t : rx.tuples) {
              std::vector<int> img;
              for (int e : t) img.push_back((*back)[e]);
              if (std::find(ra.tuples.begin(), ra.tuples.end(), img) ==
                  ra.tuples.end())
                return false;
            }
            return true;
          };
          for (size_t r = 0; r < xi.relations.size(); ++r)
            ok = ok && check_tuple(xi.relations[r], dp.relations[r]);
        }
      }
      return ok;
    };
    const bool ok1 = run_side(sd1, ie.hom_to_d1, ie.phi_solvable_sd1);
    const bool ok2 = run_side(sd2, ie.hom_to_d2, ie.phi_solvable_sd2);
    ie.witnesses_checked = true;
    ie.consistent = ok1 && ok2;
    // pruning must agree with the homomorphism facts
    PruneResult pr = prune_extended_instance(inst);
    if (pr.rejected) ie.consistent = ie.consistent && !ie.hom_to_d1 && !ie.hom_to_d2;
    if (pr.accepted_trivially)
      ie.consistent = ie.consistent && ie.hom_to_d1 && ie.hom_to_d2;
    rep.all_consistent = rep.all_consistent && ie.consistent;
    rep.per_instance.push_back(ie);
  }
  return rep;
}

}  // namespace promlin
