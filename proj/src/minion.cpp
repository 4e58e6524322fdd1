#include "promlin/minion.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <unordered_map>

#include "promlin/homsearch.hpp"

namespace promlin {

MinionElement make_minion_element(AlgebraPtr monoid, int target,
                                  std::vector<int> entries) {
  require(monoid->has_identity(), ErrorCode::PreconditionFailed,
          "minion elements live over a monoid");
  require(!entries.empty(), ErrorCode::PreconditionFailed,
          "minion elements have positive arity");
  for (size_t i = 0; i < entries.size(); ++i)
    for (size_t j = i + 1; j < entries.size(); ++j)
      require(monoid->product(entries[i], entries[j]) ==
                  monoid->product(entries[j], entries[i]),
              ErrorCode::PreconditionFailed, "entries must commute pairwise");
  require(monoid->product_word(entries) == target, ErrorCode::PreconditionFailed,
          "entries must multiply to the target");
  return MinionElement{std::move(monoid), target, std::move(entries)};
}

MinionElement minor(const MinionElement& b, const std::vector<int>& pi, int m) {
  require(static_cast<int>(pi.size()) == b.arity(), ErrorCode::PreconditionFailed,
          "pi must cover every coordinate");
  for (int v : pi)
    require(v >= 0 && v < m, ErrorCode::PreconditionFailed, "pi out of range");
  std::vector<int> entries(m, b.monoid->identity());
  for (int i = 0; i < b.arity(); ++i)
    entries[pi[i]] = b.monoid->product(entries[pi[i]], b.entries[i]);
  return make_minion_element(b.monoid, b.target, std::move(entries));
}

std::vector<MinionElement> enumerate_minion(const AlgebraPtr& m, int target,
                                            int n, std::uint64_t budget) {
  require(m->has_identity(), ErrorCode::PreconditionFailed,
          "minion enumeration needs a monoid");
  require(n >= 1, ErrorCode::PreconditionFailed, "arity must be positive");
  require(checked_pow(m->size(), n, budget) <= budget, ErrorCode::BudgetExceeded,
          "minion enumeration budget exceeded");
  std::vector<MinionElement> out;
  std::vector<int> tuple(n, 0);
  std::function<void(int)> dfs = [&](int pos) {
    if (pos == n) {
      if (m->product_word(tuple) == target)
        out.push_back(MinionElement{m, target, tuple});
      return;
    }
    for (int v = 0; v < m->size(); ++v) {
      bool commutes = true;
      for (int i = 0; i < pos && commutes; ++i)
        commutes = m->product(tuple[i], v) == m->product(v, tuple[i]);
      if (!commutes) continue;
      tuple[pos] = v;
      dfs(pos + 1);
    }
  };
  dfs(0);
  return out;
}

std::vector<int> relevant_coordinates(const MinionElement& b) {
  const Algebra& m = *b.monoid;
  std::vector<int> out;
  for (int j = 0; j < b.arity(); ++j) {
    int omitted = m.identity();
    for (int i = 0; i < b.arity(); ++i)
      if (i != j) omitted = m.product(omitted, b.entries[i]);
    // omitted >=Ab full always holds (the omitted product times entry j gives
    // the full one); relevance is failure of the converse
    if (!ab_preorder(m, omitted, b.target)) out.push_back(j);
  }
  return out;
}

namespace {
// all maps [n] -> [m] in lexicographic order
bool advance_map(std::vector<int>& pi, int m) {
  for (int i = static_cast<int>(pi.size()) - 1; i >= 0; --i) {
    if (++pi[i] < m) return true;
    pi[i] = 0;
  }
  return false;
}
}  // namespace

SelectionReport verify_selection_condition(const AlgebraPtr& m, int target,
                                           int max_n, std::uint64_t budget) {
  require(!is_regular(*m, target), ErrorCode::RegularTarget,
          "selection condition is about non-regular targets");
  SelectionReport rep;
  std::vector<std::vector<MinionElement>> by_arity(max_n + 1);
  std::vector<std::vector<std::vector<int>>> relevant(max_n + 1);
  for (int n = 1; n <= max_n; ++n) {
    by_arity[n] = enumerate_minion(m, target, n, budget);
    for (const auto& b : by_arity[n]) {
      auto rel = relevant_coordinates(b);
      ++rep.elements_checked;
      if (rel.empty() || static_cast<int>(rel.size()) > m->size()) {
        rep.passed = false;
        rep.violation = "relevant-coordinate count out of bounds at arity " +
                        std::to_string(n);
        return rep;
      }
      relevant[n].push_back(std::move(rel));
    }
  }
  for (int n = 1; n <= max_n; ++n)
    for (int mm = 1; mm <= max_n; ++mm) {
      std::vector<int> pi(n, 0);
      do {
        for (size_t bi = 0; bi < by_arity[n].size(); ++bi) {
          const auto& b = by_arity[n][bi];
          MinionElement c = minor(b, pi, mm);
          // locate c in the arity-mm enumeration
          const auto& pool = by_arity[mm];
          auto it = std::find_if(pool.begin(), pool.end(), [&](const auto& e) {
            return e.entries == c.entries;
          });
          require(it != pool.end(), ErrorCode::PreconditionFailed,
                  "minor escaped the enumerated minion");
          const auto& rel_b = relevant[n][bi];
          const auto& rel_c = relevant[mm][it - pool.begin()];
          ++rep.minors_checked;
          bool meets = false;
          for (int j : rel_b)
            meets = meets ||
                    std::find(rel_c.begin(), rel_c.end(), pi[j]) != rel_c.end();
          if (!meets) {
            rep.passed = false;
            rep.violation = "pi(I(p)) missed I(q) for a minor from arity " +
                            std::to_string(n) + " to " + std::to_string(mm);
            return rep;
          }
        }
      } while (advance_map(pi, mm));
    }
  return rep;
}

MinionElement block_symmetric_tuple(const AlgebraPtr& m, int target, int n) {
  require(n >= 1, ErrorCode::PreconditionFailed, "block size must be positive");
  int witness = -1;
  const int t2 = m->product(target, target);
  for (int t = 0; t < m->size(); ++t)
    if (m->product(t2, t) == target &&
        m->product(target, t) == m->product(t, target)) {
      witness = t;
      break;
    }
  require(witness >= 0, ErrorCode::NotRegular,
          "target has no regularity witness");
  std::vector<int> entries;
  entries.insert(entries.end(), n + 1, target);
  entries.insert(entries.end(), n, witness);
  return make_minion_element(m, target, std::move(entries));
}

int SymbolicPolymorphism::eval(std::span<const int> args) const {
  const Algebra& tgt = *psi.target;
  require(static_cast<int>(args.size()) == arity(), ErrorCode::PreconditionFailed,
          "arity mismatch");
  if (shape == Shape::BlockSymmetric) {
    int acc = tgt.identity();
    for (int i = 0; i <= n; ++i) acc = tgt.product(acc, psi.apply(args[i]));
    for (int i = n + 1; i < arity(); ++i)
      acc = tgt.product(acc, tgt.power(psi.apply(args[i]), k - 2));
    return acc;
  }
  int acc = tgt.identity();
  for (int i = 0; i < arity(); ++i) {
    const int v = psi.apply(args[i]);
    acc = tgt.product(acc, i % 2 == 0 ? v : tgt.inverse(v));
  }
  return acc;
}

std::vector<int> SymbolicPolymorphism::first_block() const {
  std::vector<int> b;
  for (int i = 0; i <= n; ++i) b.push_back(i);
  return b;
}
std::vector<int> SymbolicPolymorphism::second_block() const {
  std::vector<int> b;
  for (int i = n + 1; i < arity(); ++i) b.push_back(i);
  return b;
}

SymbolicPolymorphism build_block_symmetric_poly(const PartialHom& psi, int n) {
  require(psi.total(), ErrorCode::PreconditionFailed,
          "polymorphism construction needs a total homomorphism");
  require(is_abelian(psi.image), ErrorCode::PreconditionFailed,
          "image must be Abelian");
  // least k > 1 with s^k = s across the image: 1 + lcm of the cycle lengths
  unsigned long long lcm = 1;
  for (int v : psi.image.members) {
    unsigned d = 0;
    for (unsigned cand = 1; cand <= 2u * psi.image.size(); ++cand)
      if (psi.target->power(v, cand + 1) == v) {
        d = cand;
        break;
      }
    require(d >= 1, ErrorCode::PreconditionFailed,
            "image must be a union of subgroups");
    lcm = std::lcm(lcm, static_cast<unsigned long long>(d));
  }
  const unsigned k = static_cast<unsigned>(lcm + 1);
  return SymbolicPolymorphism{SymbolicPolymorphism::Shape::BlockSymmetric, psi,
                              n, k};
}

SymbolicPolymorphism build_alternating_poly(const PartialHom& psi, int n) {
  require(psi.total(), ErrorCode::PreconditionFailed,
          "polymorphism construction needs a total homomorphism");
  require(psi.source->kind() == AlgebraKind::Group &&
              psi.target->kind() == AlgebraKind::Group,
          ErrorCode::PreconditionFailed, "alternating shape needs groups");
  require(is_abelian(psi.image), ErrorCode::PreconditionFailed,
          "image must be Abelian");
  return SymbolicPolymorphism{SymbolicPolymorphism::Shape::Alternating, psi, n,
                              0};
}

PolyFn as_polyfn(const SymbolicPolymorphism& p) {
  return PolyFn{p.arity(), p.psi.source->size(),
                [p](std::span<const int> args) { return p.eval(args); }};
}

int PolymorphismTable::eval(std::span<const int> args) const {
  std::uint64_t idx = 0;
  for (int v : args) idx = idx * domain_size + v;
  return table[idx];
}

PolyFn as_polyfn(const PolymorphismTable& p) {
  return PolyFn{p.arity, p.domain_size,
                [p](std::span<const int> args) { return p.eval(args); }};
}

namespace {

// componentwise product in M^arity
std::vector<int> tuple_product(const Algebra& m, const std::vector<int>& a,
                               const std::vector<int>& b) {
  std::vector<int> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = m.product(a[i], b[i]);
  return out;
}

// tuples over gens(M) and the identity generate M^arity: pad the generator
// words of the coordinates to a common length with identities
std::vector<std::vector<int>> power_generators(const Algebra& m, int arity) {
  std::vector<int> g = greedy_generators(m);
  g.push_back(m.identity());
  std::vector<std::vector<int>> gens;
  std::vector<size_t> pick(arity, 0);
  while (true) {
    std::vector<int> t(arity);
    for (int i = 0; i < arity; ++i) t[i] = g[pick[i]];
    gens.push_back(std::move(t));
    int i = arity - 1;
    for (; i >= 0; --i) {
      if (++pick[i] < g.size()) break;
      pick[i] = 0;
    }
    if (i < 0) break;
  }
  return gens;
}

}  // namespace

bool is_plin_polymorphism(const PolyFn& p, const PLinTemplate& t,
                          std::uint64_t budget, std::uint64_t samples,
                          std::uint64_t seed) {
  const Algebra& m1 = *t.s1;
  const Algebra& m2 = *t.s2;
  require(p.domain_size == m1.size(), ErrorCode::PreconditionFailed,
          "polymorphism domain must match the A side");
  // diagonal law on dom(phi)
  std::vector<int> diag(p.arity);
  for (int s : t.phi.domain.members) {
    std::fill(diag.begin(), diag.end(), s);
    if (p.eval(diag) != t.phi.apply(s)) return false;
  }
  const std::uint64_t total = checked_pow(m1.size(), p.arity, budget);
  if (total <= budget) {
    // homomorphism law against every generator pair: p(x*g) = p(x)p(g)
    const auto gens = power_generators(m1, p.arity);
    std::vector<std::uint64_t> gen_imgs;
    for (const auto& g : gens) gen_imgs.push_back(p.eval(g));
    Odometer od(m1.size(), p.arity);
    do {
      const auto& x = od.digits();
      const int px = p.eval(x);
      for (size_t gi = 0; gi < gens.size(); ++gi) {
        const auto xg = tuple_product(m1, x, gens[gi]);
        if (p.eval(xg) != m2.product(px, static_cast<int>(gen_imgs[gi])))
          return false;
      }
    } while (od.advance());
    return true;
  }
  // seeded sampling on random pairs
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> d(0, m1.size() - 1);
  std::vector<int> x(p.arity), y(p.arity);
  for (std::uint64_t it = 0; it < samples; ++it) {
    for (int i = 0; i < p.arity; ++i) {
      x[i] = d(rng);
      y[i] = d(rng);
    }
    const auto xy = tuple_product(m1, x, y);
    if (p.eval(xy) != m2.product(p.eval(x), p.eval(y))) return false;
  }
  return true;
}

namespace {

// invariance under one transposition, checked exhaustively or by sampling
bool invariant_under_swap(const PolyFn& p, int i, int j, std::uint64_t budget,
                          std::uint64_t samples, std::uint64_t seed) {
  const std::uint64_t total = checked_pow(p.domain_size, p.arity, budget);
  std::vector<int> x(p.arity);
  if (total <= budget) {
    Odometer od(p.domain_size, p.arity);
    do {
      x = od.digits();
      std::swap(x[i], x[j]);
      if (p.eval(od.digits()) != p.eval(x)) return false;
    } while (od.advance());
    return true;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> d(0, p.domain_size - 1);
  for (std::uint64_t it = 0; it < samples; ++it) {
    for (int c = 0; c < p.arity; ++c) x[c] = d(rng);
    auto y = x;
    std::swap(y[i], y[j]);
    if (p.eval(x) != p.eval(y)) return false;
  }
  return true;
}

}  // namespace

bool check_alternating(const PolyFn& p, std::uint64_t budget,
                       std::uint64_t samples, std::uint64_t seed) {
  require(p.arity % 2 == 1, ErrorCode::EvenArity,
          "alternating maps have odd arity");
  // parity-preserving permutations are generated by adjacent transpositions
  // within the odd and within the even positions
  for (int i = 0; i + 2 < p.arity; ++i)
    if (!invariant_under_swap(p, i, i + 2, budget, samples, seed)) return false;
  // identification law: merging coordinates 1,2 onto 1 equals merging onto 2
  const std::uint64_t total = checked_pow(p.domain_size, p.arity, budget);
  std::vector<int> a(p.arity), b(p.arity);
  auto check_pair = [&](const std::vector<int>& x) {
    a = x;
    b = x;
    a[1] = x[0];  // both first coordinates read x[0]
    b[0] = x[1];  // both read x[1]
    return p.eval(a) == p.eval(b);
  };
  if (total <= budget) {
    Odometer od(p.domain_size, p.arity);
    do {
      if (!check_pair(od.digits())) return false;
    } while (od.advance());
    return true;
  }
  std::mt19937_64 rng(seed + 1);
  std::uniform_int_distribution<int> d(0, p.domain_size - 1);
  std::vector<int> x(p.arity);
  for (std::uint64_t it = 0; it < samples; ++it) {
    for (int c = 0; c < p.arity; ++c) x[c] = d(rng);
    if (!check_pair(x)) return false;
  }
  return true;
}

bool check_2block_symmetric(const PolyFn& p, const std::vector<int>& block1,
                            const std::vector<int>& block2, std::uint64_t budget,
                            std::uint64_t samples, std::uint64_t seed) {
  require(p.arity % 2 == 1, ErrorCode::EvenArity,
          "2-block-symmetric maps have odd arity");
  require(static_cast<int>(block1.size() + block2.size()) == p.arity,
          ErrorCode::PreconditionFailed, "blocks must partition the coordinates");
  for (const auto* blk : {&block1, &block2})
    for (size_t i = 0; i + 1 < blk->size(); ++i)
      if (!invariant_under_swap(p, (*blk)[i], (*blk)[i + 1], budget, samples,
                                seed))
        return false;
  return true;
}

bool no_alternating_certificate(const AlgebraPtr& m, int arity,
                                std::uint64_t budget) {
  require(arity % 2 == 1, ErrorCode::EvenArity, "certificate needs odd arity");
  require(checked_pow(m->size(), arity, budget) <= budget,
          ErrorCode::BudgetExceeded, "certificate enumeration budget exceeded");
  AlgebraPtr power = Algebra::make_power(m, arity);
  // the diagonal constraint p(s,...,s) = s as a partial hom from the
  // diagonal submonoid onto M
  std::vector<int> diag_members;
  std::vector<int> map(power->size(), -1);
  for (int s = 0; s < m->size(); ++s) {
    int enc = 0;
    for (int i = 0; i < arity; ++i) enc = enc * m->size() + s;
    diag_members.push_back(enc);
    map[enc] = s;
  }
  SubAlgebra diag = make_subalgebra(power, std::move(diag_members),
                                    power->has_identity() ? SubKind::Submonoid
                                                          : SubKind::Subsemigroup);
  PartialHom phi = make_partial_hom(power, m, diag, map);
  bool found_alternating = false;
  enumerate_extending_homs(phi, HomFilter::All, [&](const PartialHom& h) {
    PolymorphismTable tab{arity, m->size(), h.map};
    if (check_alternating(as_polyfn(tab))) {
      found_alternating = true;
      return false;
    }
    return true;
  });
  return !found_alternating;
}

FreeStructureTemplate free_structure_template(const AlgebraPtr& m, int target) {
  FreeStructureTemplate out;
  out.a.universe_size = 2;
  out.a.universe_labels = {"0", "1"};
  out.a.relations = {Relation{"R", 3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}},
                     Relation{"C0", 1, {{0}}}, Relation{"C1", 1, {{1}}}};
  auto pairs = enumerate_minion(m, target, 2);
  for (const auto& e : pairs) out.b_universe.emplace_back(e.entries[0], e.entries[1]);
  auto index_of_pair = [&](int x, int y) {
    for (size_t i = 0; i < out.b_universe.size(); ++i)
      if (out.b_universe[i] == std::make_pair(x, y)) return static_cast<int>(i);
    return -1;
  };
  out.b.universe_size = static_cast<int>(out.b_universe.size());
  for (auto [x, y] : out.b_universe)
    out.b.universe_labels.push_back("(" + m->label(x) + "," + m->label(y) + ")");
  Relation r{"R", 3, {}};
  for (int c1 = 0; c1 < m->size(); ++c1)
    for (int c2 = 0; c2 < m->size(); ++c2) {
      if (m->product(c1, c2) != m->product(c2, c1)) continue;
      for (int c3 = 0; c3 < m->size(); ++c3) {
        if (m->product(c1, c3) != m->product(c3, c1)) continue;
        if (m->product(c2, c3) != m->product(c3, c2)) continue;
        if (m->product(m->product(c1, c2), c3) != target) continue;
        const int t1 = index_of_pair(c1, m->product(c2, c3));
        const int t2 = index_of_pair(c2, m->product(c1, c3));
        const int t3 = index_of_pair(c3, m->product(c1, c2));
        require(t1 >= 0 && t2 >= 0 && t3 >= 0, ErrorCode::PreconditionFailed,
                "projected pair escaped the arity-2 minion");
        std::vector<int> tuple{t1, t2, t3};
        if (std::find(r.tuples.begin(), r.tuples.end(), tuple) == r.tuples.end())
          r.tuples.push_back(std::move(tuple));
      }
    }
  out.b.relations.push_back(std::move(r));
  const int e = m->identity();
  const int c0 = index_of_pair(e, target);
  const int c1 = index_of_pair(target, e);
  require(c0 >= 0 && c1 >= 0, ErrorCode::PreconditionFailed,
          "constant pairs missing from the arity-2 minion");
  out.b.relations.push_back(Relation{"C0", 1, {{c0}}});
  out.b.relations.push_back(Relation{"C1", 1, {{c1}}});
  // the map 0 -> (e, target), 1 -> (target, e) must be a homomorphism
  for (const auto& t : out.a.relations[0].tuples) {
    std::vector<int> img{t[0] ? c1 : c0, t[1] ? c1 : c0, t[2] ? c1 : c0};
    require(std::find(out.b.relations[0].tuples.begin(),
                      out.b.relations[0].tuples.end(),
                      img) != out.b.relations[0].tuples.end(),
            ErrorCode::PreconditionFailed,
            "canonical constants map is not a homomorphism");
  }
  return out;
}

MinionElement xi_map(const PolymorphismTable& p, const AlgebraPtr& m, int target) {
  require(p.domain_size == 2, ErrorCode::PreconditionFailed,
          "xi reads free-structure polymorphisms");
  FreeStructureTemplate fs = free_structure_template(m, target);
  std::vector<int> entries(p.arity);
  std::vector<int> args(p.arity, 0);
  for (int i = 0; i < p.arity; ++i) {
    std::fill(args.begin(), args.end(), 0);
    args[i] = 1;
    entries[i] = fs.b_universe[p.eval(args)].first;
  }
  return make_minion_element(m, target, std::move(entries));
}

namespace {

// all free-structure polymorphisms of a given arity, as tables over subsets
std::vector<PolymorphismTable> free_polymorphisms(const FreeStructureTemplate& fs,
                                                  int arity,
                                                  std::uint64_t budget) {
  RelationalStructure an = structure_power(fs.a, arity, budget);
  std::vector<PolymorphismTable> out;
  enumerate_homomorphisms(an, fs.b, [&](const std::vector<int>& h) {
    out.push_back(PolymorphismTable{arity, 2, h});
    return true;
  });
  return out;
}

}  // namespace

XiReport verify_xi_bijection(const AlgebraPtr& m, int target, int max_arity,
                             std::uint64_t budget) {
  XiReport rep;
  FreeStructureTemplate fs = free_structure_template(m, target);
  std::vector<std::vector<PolymorphismTable>> polys(max_arity + 1);
  std::vector<std::vector<MinionElement>> minions(max_arity + 1);
  for (int n = 1; n <= max_arity; ++n) {
    polys[n] = free_polymorphisms(fs, n, budget);
    minions[n] = enumerate_minion(m, target, n, budget);
    rep.polymorphism_counts.push_back(polys[n].size());
    rep.minion_counts.push_back(minions[n].size());
    if (polys[n].size() != minions[n].size()) {
      rep.ok = false;
      rep.detail = "counts differ at arity " + std::to_string(n);
      return rep;
    }
    // xi is injective and lands exactly on the enumerated elements
    std::vector<std::vector<int>> images;
    for (const auto& p : polys[n]) {
      MinionElement e = xi_map(p, m, target);
      if (std::find(images.begin(), images.end(), e.entries) != images.end()) {
        rep.ok = false;
        rep.detail = "xi collision at arity " + std::to_string(n);
        return rep;
      }
      images.push_back(e.entries);
      bool in_pool = false;
      for (const auto& q : minions[n]) in_pool = in_pool || q.entries == e.entries;
      if (!in_pool) {
        rep.ok = false;
        rep.detail = "xi image escaped the minion at arity " + std::to_string(n);
        return rep;
      }
    }
    // surjectivity witness: X -> (prod_X b, prod_notX b) inverts xi
    for (const auto& b : minions[n]) {
      std::vector<int> table(1u << n);
      for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        int in = m->identity(), outp = m->identity();
        for (int i = 0; i < n; ++i) {
          // subset encoding: coordinate i is bit (n-1-i) of the mixed-radix
          // index over {0,1}^n
          if (mask & (1u << (n - 1 - i)))
            in = m->product(in, b.entries[i]);
          else
            outp = m->product(outp, b.entries[i]);
        }
        int idx = -1;
        for (size_t u = 0; u < fs.b_universe.size(); ++u)
          if (fs.b_universe[u] == std::make_pair(in, outp)) idx = static_cast<int>(u);
        if (idx < 0) {
          rep.ok = false;
          rep.detail = "surjectivity witness left the free structure";
          return rep;
        }
        table[mask] = idx;
      }
      PolymorphismTable p{n, 2, table};
      MinionElement back = xi_map(p, m, target);
      if (back.entries != b.entries) {
        rep.ok = false;
        rep.detail = "surjectivity witness does not invert xi";
        return rep;
      }
    }
  }
  // minors commute with xi
  for (int n = 1; n <= max_arity && rep.ok; ++n)
    for (int mm = 1; mm <= max_arity && rep.ok; ++mm) {
      std::vector<int> pi(n, 0);
      do {
        for (const auto& p : polys[n]) {
          // table minor: q(Y) = p(pi^{-1}(Y))
          std::vector<int> qt(1u << mm);
          for (std::uint32_t ymask = 0; ymask < (1u << mm); ++ymask) {
            std::uint32_t xmask = 0;
            for (int i = 0; i < n; ++i)
              if (ymask & (1u << (mm - 1 - pi[i]))) xmask |= 1u << (n - 1 - i);
            qt[ymask] = p.table[xmask];
          }
          PolymorphismTable q{mm, 2, qt};
          MinionElement lhs = xi_map(q, m, target);
          MinionElement rhs = minor(xi_map(p, m, target), pi, mm);
          if (lhs.entries != rhs.entries) {
            rep.ok = false;
            rep.detail = "xi does not commute with a minor from arity " +
                         std::to_string(n) + " to " + std::to_string(mm);
          }
        }
      } while (rep.ok && advance_map(pi, mm));
    }
  return rep;
}

}  // namespace promlin
