#include "promlin/algebra.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace promlin {

Algebra::Algebra(AlgebraKind kind, std::vector<std::string> labels,
                 std::vector<int> table, std::optional<int> identity,
                 std::optional<std::vector<int>> inverse)
    : kind_(kind),
      labels_(std::move(labels)),
      table_(std::move(table)),
      identity_(identity),
      inverse_(std::move(inverse)) {}

void Algebra::validate(bool check_associativity) const {
  const int n = size();
  require(n > 0, ErrorCode::InvalidAlgebra, "algebra must be nonempty");
  require(static_cast<int>(table_.size()) == n * n, ErrorCode::InvalidAlgebra,
          "table must be " + std::to_string(n) + "x" + std::to_string(n));
  for (int v : table_)
    require(v >= 0 && v < n, ErrorCode::InvalidAlgebra,
            "table entry out of range");
  if (check_associativity) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const int ij = product(i, j);
        for (int k = 0; k < n; ++k)
          require(product(ij, k) == product(i, product(j, k)),
                  ErrorCode::InvalidAlgebra,
                  "multiplication not associative at (" + labels_[i] + "," +
                      labels_[j] + "," + labels_[k] + ")");
      }
  }
  if (identity_) {
    const int e = *identity_;
    require(e >= 0 && e < n, ErrorCode::InvalidAlgebra, "identity out of range");
    for (int x = 0; x < n; ++x)
      require(product(e, x) == x && product(x, e) == x,
              ErrorCode::InvalidAlgebra, "identity law fails at " + labels_[x]);
  }
  if (inverse_) {
    require(identity_.has_value(), ErrorCode::InvalidAlgebra,
            "inverses need an identity");
    require(static_cast<int>(inverse_->size()) == n, ErrorCode::InvalidAlgebra,
            "inverse map has wrong size");
    for (int x = 0; x < n; ++x) {
      const int y = (*inverse_)[x];
      require(y >= 0 && y < n, ErrorCode::InvalidAlgebra, "inverse out of range");
      require(product(x, y) == *identity_ && product(y, x) == *identity_,
              ErrorCode::InvalidAlgebra, "inverse law fails at " + labels_[x]);
    }
  }
}

AlgebraPtr Algebra::make_semigroup(std::vector<std::string> labels,
                                   std::vector<int> table) {
  AlgebraPtr a(new Algebra(AlgebraKind::Semigroup, std::move(labels),
                           std::move(table), {}, {}));
  a->validate(true);
  return a;
}

AlgebraPtr Algebra::make_monoid(std::vector<std::string> labels,
                                std::vector<int> table, int identity) {
  AlgebraPtr a(new Algebra(AlgebraKind::Monoid, std::move(labels),
                           std::move(table), identity, {}));
  a->validate(true);
  return a;
}

AlgebraPtr Algebra::make_group(std::vector<std::string> labels,
                               std::vector<int> table, int identity,
                               std::optional<std::vector<int>> inverse) {
  if (!inverse) {
    const int n = static_cast<int>(labels.size());
    std::vector<int> inv(n, -1);
    for (int x = 0; x < n; ++x) {
      for (int y = 0; y < n; ++y)
        if (table[x * n + y] == identity && table[y * n + x] == identity) {
          inv[x] = y;
          break;
        }
      require(inv[x] >= 0, ErrorCode::InvalidAlgebra,
              "no inverse for element " + labels[x]);
    }
    inverse = std::move(inv);
  }
  AlgebraPtr a(new Algebra(AlgebraKind::Group, std::move(labels),
                           std::move(table), identity, std::move(inverse)));
  a->validate(true);
  return a;
}

AlgebraPtr Algebra::make_power(const AlgebraPtr& base, int k) {
  require(k >= 1, ErrorCode::PreconditionFailed, "power arity must be >= 1");
  const int n = base->size();
  const std::uint64_t sz = checked_pow(n, k, 1u << 24);
  require(sz <= (1u << 24), ErrorCode::BudgetExceeded,
          "power algebra too large to materialize");
  const int N = static_cast<int>(sz);
  std::vector<std::string> labels(N);
  std::vector<int> decode(static_cast<size_t>(N) * k);
  for (int v = 0; v < N; ++v) {
    int x = v;
    std::string lab;
    for (int i = k - 1; i >= 0; --i) {
      decode[static_cast<size_t>(v) * k + i] = x % n;
      x /= n;
    }
    for (int i = 0; i < k; ++i) {
      if (i) lab += '|';
      lab += base->label(decode[static_cast<size_t>(v) * k + i]);
    }
    labels[v] = lab;
  }
  std::vector<int> table(static_cast<size_t>(N) * N);
  for (int u = 0; u < N; ++u)
    for (int v = 0; v < N; ++v) {
      int w = 0;
      for (int i = 0; i < k; ++i)
        w = w * n + base->product(decode[static_cast<size_t>(u) * k + i],
                                  decode[static_cast<size_t>(v) * k + i]);
      table[static_cast<size_t>(u) * N + v] = w;
    }
  std::optional<int> identity;
  std::optional<std::vector<int>> inverse;
  if (base->has_identity()) {
    int e = 0;
    for (int i = 0; i < k; ++i) e = e * n + base->identity();
    identity = e;
  }
  if (base->kind() == AlgebraKind::Group) {
    std::vector<int> inv(N);
    for (int v = 0; v < N; ++v) {
      int w = 0;
      for (int i = 0; i < k; ++i)
        w = w * n + base->inverse(decode[static_cast<size_t>(v) * k + i]);
      inv[v] = w;
    }
    inverse = std::move(inv);
  }
  AlgebraPtr a(new Algebra(base->kind(), std::move(labels), std::move(table),
                           identity, std::move(inverse)));
  a->validate(false);  // associativity inherited componentwise
  return a;
}

std::optional<int> Algebra::index_of(std::string_view label) const {
  for (int i = 0; i < size(); ++i)
    if (labels_[i] == label) return i;
  return std::nullopt;
}

int Algebra::identity() const {
  require(identity_.has_value(), ErrorCode::PreconditionFailed,
          "algebra has no identity");
  return *identity_;
}

int Algebra::inverse(int a) const {
  require(inverse_.has_value(), ErrorCode::PreconditionFailed,
          "algebra has no inverses");
  return (*inverse_)[a];
}

int Algebra::product_word(std::span<const int> word) const {
  if (word.empty()) return identity();
  int acc = word[0];
  for (size_t i = 1; i < word.size(); ++i) acc = product(acc, word[i]);
  return acc;
}

int Algebra::power(int a, unsigned k) const {
  if (k == 0) return identity();
  int acc = a;
  for (unsigned i = 1; i < k; ++i) acc = product(acc, a);
  return acc;
}

void Algebra::ensure_div_closure() const {
  std::lock_guard<std::mutex> lock(div_mutex_);
  if (!div_.empty()) return;
  const int n = size();
  div_.assign(static_cast<size_t>(n) * n, 0);
  div_parent_.assign(static_cast<size_t>(n) * n, -1);
  div_mult_.assign(static_cast<size_t>(n) * n, -1);
  div_side_.assign(static_cast<size_t>(n) * n, 0);
  // For each t: least-fixpoint closure of {t} under one-sided multiplication
  // by arbitrary elements. Reachable values are exactly the values of words
  // that contain t.
  for (int t = 0; t < n; ++t) {
    auto at = [&](int s) -> size_t { return static_cast<size_t>(s) * n + t; };
    std::deque<int> queue;
    div_[at(t)] = 1;
    queue.push_back(t);
    while (!queue.empty()) {
      const int s = queue.front();
      queue.pop_front();
      for (int m = 0; m < n; ++m) {
        const int r = product(m, s);
        if (!div_[at(r)]) {
          div_[at(r)] = 1;
          div_parent_[at(r)] = s;
          div_mult_[at(r)] = m;
          div_side_[at(r)] = -1;
          queue.push_back(r);
        }
        const int q = product(s, m);
        if (!div_[at(q)]) {
          div_[at(q)] = 1;
          div_parent_[at(q)] = s;
          div_mult_[at(q)] = m;
          div_side_[at(q)] = 1;
          queue.push_back(q);
        }
      }
    }
  }
}

bool Algebra::divides(int s, int t) const {
  ensure_div_closure();
  return div_[static_cast<size_t>(s) * size() + t] != 0;
}

std::optional<std::vector<int>> Algebra::divides_witness(int s, int t) const {
  ensure_div_closure();
  const int n = size();
  if (!div_[static_cast<size_t>(s) * n + t]) return std::nullopt;
  std::vector<std::pair<int, int>> steps;  // (side, multiplier) from s back to t
  int cur = s;
  while (true) {
    const size_t idx = static_cast<size_t>(cur) * n + t;
    if (div_parent_[idx] < 0) break;  // reached the BFS root t
    steps.emplace_back(div_side_[idx], div_mult_[idx]);
    cur = div_parent_[idx];
  }
  std::deque<int> assembled{t};
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    if (it->first < 0)
      assembled.push_front(it->second);
    else
      assembled.push_back(it->second);
  }
  return std::vector<int>(assembled.begin(), assembled.end());
}

bool SubAlgebra::contains(int x) const {
  return std::binary_search(members.begin(), members.end(), x);
}

std::pair<AlgebraPtr, std::vector<int>> SubAlgebra::as_algebra() const {
  const int n = size();
  std::vector<int> local(parent->size(), -1);
  for (int i = 0; i < n; ++i) local[members[i]] = i;
  std::vector<std::string> labels(n);
  std::vector<int> table(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    labels[i] = parent->label(members[i]);
    for (int j = 0; j < n; ++j)
      table[static_cast<size_t>(i) * n + j] =
          local[parent->product(members[i], members[j])];
  }
  switch (kind) {
    case SubKind::Subsemigroup:
      return {Algebra::make_semigroup(std::move(labels), std::move(table)),
              members};
    case SubKind::Submonoid:
      return {Algebra::make_monoid(std::move(labels), std::move(table),
                                   local[parent->identity()]),
              members};
    case SubKind::Subgroup: {
      int e = -1;
      for (int i = 0; i < n && e < 0; ++i)
        if (table[static_cast<size_t>(i) * n + i] == i) {
          bool id = true;
          for (int j = 0; j < n; ++j)
            id = id && table[static_cast<size_t>(i) * n + j] == j &&
                 table[static_cast<size_t>(j) * n + i] == j;
          if (id) e = i;
        }
      require(e >= 0, ErrorCode::InvalidAlgebra, "subgroup has no identity");
      return {Algebra::make_group(std::move(labels), std::move(table), e),
              members};
    }
  }
  fail(ErrorCode::InvalidAlgebra, "unreachable");
}

SubAlgebra make_subalgebra(AlgebraPtr parent, std::vector<int> members,
                           SubKind kind) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  require(!members.empty(), ErrorCode::InvalidAlgebra,
          "sub-algebra must be nonempty");
  for (int x : members)
    require(x >= 0 && x < parent->size(), ErrorCode::InvalidAlgebra,
            "member out of range");
  auto contains = [&](int x) {
    return std::binary_search(members.begin(), members.end(), x);
  };
  for (int x : members)
    for (int y : members)
      require(contains(parent->product(x, y)), ErrorCode::InvalidAlgebra,
              "member set not closed under multiplication");
  if (kind == SubKind::Submonoid)
    require(parent->has_identity() && contains(parent->identity()),
            ErrorCode::InvalidAlgebra, "submonoid must contain the identity");
  if (kind == SubKind::Subgroup) {
    // local identity + member inverses
    int e = -1;
    for (int cand : members) {
      bool id = true;
      for (int x : members)
        id = id && parent->product(cand, x) == x && parent->product(x, cand) == x;
      if (id) {
        e = cand;
        break;
      }
    }
    require(e >= 0, ErrorCode::InvalidAlgebra, "subgroup has no local identity");
    for (int x : members) {
      bool has_inv = false;
      for (int y : members)
        has_inv = has_inv ||
                  (parent->product(x, y) == e && parent->product(y, x) == e);
      require(has_inv, ErrorCode::InvalidAlgebra,
              "subgroup member lacks an inverse");
    }
  }
  return SubAlgebra{std::move(parent), std::move(members), kind};
}

SubAlgebra generated_subalgebra(AlgebraPtr parent,
                                const std::vector<int>& generators) {
  std::set<int> closure(generators.begin(), generators.end());
  if (parent->has_identity()) closure.insert(parent->identity());
  require(!closure.empty(), ErrorCode::InvalidAlgebra,
          "cannot generate from an empty set in a semigroup");
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<int> cur(closure.begin(), closure.end());
    for (int x : cur)
      for (int y : cur) {
        if (closure.insert(parent->product(x, y)).second) grew = true;
      }
  }
  SubKind kind = parent->has_identity() ? SubKind::Submonoid : SubKind::Subsemigroup;
  if (parent->kind() == AlgebraKind::Group) kind = SubKind::Subgroup;
  return make_subalgebra(parent, std::vector<int>(closure.begin(), closure.end()),
                         kind);
}

SubAlgebra cyclic_submonoid(AlgebraPtr parent, int s) {
  require(parent->has_identity(), ErrorCode::PreconditionFailed,
          "cyclic submonoid needs a monoid");
  return generated_subalgebra(std::move(parent), {s});
}

PartialHom make_partial_hom(AlgebraPtr source, AlgebraPtr target,
                            const SubAlgebra& domain,
                            const std::vector<int>& map) {
  require(domain.parent.get() == source.get(), ErrorCode::PreconditionFailed,
          "domain must live in the source algebra");
  require(static_cast<int>(map.size()) == source->size(),
          ErrorCode::PreconditionFailed, "map must cover the source index range");
  for (int x = 0; x < source->size(); ++x) {
    const bool in_dom = domain.contains(x);
    require(in_dom == (map[x] >= 0), ErrorCode::PreconditionFailed,
            "map defined exactly on the domain");
    if (map[x] >= 0)
      require(map[x] < target->size(), ErrorCode::PreconditionFailed,
              "image index out of range");
  }
  for (int x : domain.members)
    for (int y : domain.members)
      require(map[source->product(x, y)] == target->product(map[x], map[y]),
              ErrorCode::PreconditionFailed,
              "map is not multiplicative on its domain");
  if (source->kind() != AlgebraKind::Semigroup &&
      target->kind() != AlgebraKind::Semigroup &&
      domain.contains(source->identity()))
    require(map[source->identity()] == target->identity(),
            ErrorCode::PreconditionFailed, "identity must map to identity");
  std::vector<int> image_members;
  for (int x : domain.members) image_members.push_back(map[x]);
  SubKind image_kind = SubKind::Subsemigroup;
  if (target->kind() == AlgebraKind::Group)
    image_kind = SubKind::Subgroup;
  else if (target->kind() == AlgebraKind::Monoid &&
           domain.kind != SubKind::Subsemigroup)
    image_kind = SubKind::Submonoid;
  SubAlgebra image = make_subalgebra(target, std::move(image_members), image_kind);
  return PartialHom{std::move(source), std::move(target), domain, map,
                    std::move(image)};
}

PartialHom identity_hom(const AlgebraPtr& a, const SubAlgebra& domain) {
  std::vector<int> map(a->size(), -1);
  for (int x : domain.members) map[x] = x;
  return make_partial_hom(a, a, domain, map);
}

PartialHom total_identity_hom(const AlgebraPtr& a) {
  std::vector<int> all(a->size());
  for (int i = 0; i < a->size(); ++i) all[i] = i;
  SubKind kind = SubKind::Subsemigroup;
  if (a->kind() == AlgebraKind::Monoid) kind = SubKind::Submonoid;
  if (a->kind() == AlgebraKind::Group) kind = SubKind::Subgroup;
  return identity_hom(a, make_subalgebra(a, all, kind));
}

bool is_abelian(const Algebra& a) {
  for (int i = 0; i < a.size(); ++i)
    for (int j = i + 1; j < a.size(); ++j)
      if (a.product(i, j) != a.product(j, i)) return false;
  return true;
}

bool is_abelian(const SubAlgebra& s) {
  for (int x : s.members)
    for (int y : s.members)
      if (s.parent->product(x, y) != s.parent->product(y, x)) return false;
  return true;
}

namespace {
// Walks the power cycle s, s^2, ... and returns the least k > 1 with
// s^k = s, if the cycle returns to s.
std::optional<unsigned> power_cycle_return(const Algebra& m, int s) {
  int cur = s;
  std::vector<char> seen(m.size(), 0);
  seen[s] = 1;
  for (unsigned k = 2;; ++k) {
    cur = m.product(cur, s);
    if (cur == s) return k;
    if (seen[cur]) return std::nullopt;  // cycle closed without revisiting s
    seen[cur] = 1;
  }
}
}  // namespace

bool is_regular(const Algebra& m, int s) {
  return power_cycle_return(m, s).has_value();
}

RegularityWitnesses regularity_witnesses(const AlgebraPtr& m, int s) {
  RegularityWitnesses w;
  w.k_power = power_cycle_return(*m, s);

  const int s2 = m->product(s, s);
  for (int t = 0; t < m->size(); ++t)
    if (m->product(s2, t) == s && m->product(s, t) == m->product(t, s)) {
      w.commuting_t = t;
      break;
    }

  // Subgroup search, independent of the power cycle: exhaustive over subsets
  // for small carriers, otherwise the cyclic construction {s^l}.
  if (m->size() <= 12) {
    const int n = m->size();
    for (std::uint32_t mask = 1; mask < (1u << n) && !w.subgroup; ++mask) {
      if (!(mask & (1u << s))) continue;
      std::vector<int> members;
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) members.push_back(i);
      bool closed = true;
      auto in_mask = [&](int x) { return (mask & (1u << x)) != 0; };
      for (int x : members)
        for (int y : members) closed = closed && in_mask(m->product(x, y));
      if (!closed) continue;
      int e = -1;
      for (int cand : members) {
        bool id = true;
        for (int x : members)
          id = id && m->product(cand, x) == x && m->product(x, cand) == x;
        if (id) {
          e = cand;
          break;
        }
      }
      if (e < 0) continue;
      bool all_inv = true;
      for (int x : members) {
        bool has = false;
        for (int y : members)
          has = has || (m->product(x, y) == e && m->product(y, x) == e);
        all_inv = all_inv && has;
      }
      if (all_inv)
        w.subgroup = make_subalgebra(m, std::move(members), SubKind::Subgroup);
    }
  } else if (w.k_power) {
    const unsigned k = *w.k_power;
    std::vector<int> members;
    for (unsigned l = 1; l < k; ++l) members.push_back(m->power(s, l));
    w.subgroup = make_subalgebra(m, std::move(members), SubKind::Subgroup);
  }

  w.square_divisor = m->divides_witness(s, s2);
  if (w.square_divisor) {
    // the witness must actually contain s^2 as a letter
    bool has = false;
    for (int x : *w.square_divisor) has = has || x == s2;
    require(has && m->product_word(*w.square_divisor) == s,
            ErrorCode::InvalidAlgebra, "divisibility witness is inconsistent");
  }
  return w;
}

bool is_union_of_subgroups(const Algebra& m) {
  for (int s = 0; s < m.size(); ++s)
    if (!is_regular(m, s)) return false;
  return true;
}

bool is_union_of_subgroups(const SubAlgebra& sub) {
  // regularity relative to the sub-monoid: witnesses must lie inside
  auto [alg, members] = sub.as_algebra();
  (void)members;
  return is_union_of_subgroups(*alg);
}

bool ab_preorder(const Algebra& m, int a, int b) {
  for (int c = 0; c < m.size(); ++c)
    if (m.product(c, b) == m.product(b, c) && m.product(b, c) == a) return true;
  return false;
}

bool ab_strict(const Algebra& m, int a, int b) {
  return ab_preorder(m, a, b) && !ab_preorder(m, b, a);
}

std::vector<std::vector<int>> sim_classes(const Algebra& s) {
  const int n = s.size();
  std::vector<int> cls(n, -1);
  std::vector<std::vector<int>> classes;
  for (int i = 0; i < n; ++i) {
    if (cls[i] >= 0) continue;
    classes.emplace_back();
    cls[i] = static_cast<int>(classes.size()) - 1;
    classes.back().push_back(i);
    for (int j = i + 1; j < n; ++j)
      if (cls[j] < 0 && s.sim(i, j)) {
        cls[j] = cls[i];
        classes.back().push_back(j);
      }
  }
  return classes;
}

bool is_right_normal_band(const Algebra& s) {
  const int n = s.size();
  for (int x = 0; x < n; ++x)
    if (s.product(x, x) != x) return false;
  for (int r = 0; r < n; ++r)
    for (int t = 0; t < n; ++t)
      for (int u = 0; u < n; ++u)
        if (s.product(s.product(r, t), u) != s.product(s.product(t, r), u))
          return false;
  return true;
}

bool is_semilattice(const Algebra& s) {
  for (int x = 0; x < s.size(); ++x)
    if (s.product(x, x) != x) return false;
  return is_abelian(s);
}

Quotient quotient_semilattice(const AlgebraPtr& s) {
  auto classes = sim_classes(*s);
  const int n = s->size();
  const int q = static_cast<int>(classes.size());
  std::vector<int> proj(n, -1);
  for (int c = 0; c < q; ++c)
    for (int x : classes[c]) proj[x] = c;
  std::vector<int> table(static_cast<size_t>(q) * q, -1);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const int c = proj[s->product(x, y)];
      int& slot = table[static_cast<size_t>(proj[x]) * q + proj[y]];
      if (slot < 0)
        slot = c;
      else
        require(slot == c, ErrorCode::QuotientUndefined,
                "multiplication is not invariant under ∼");
    }
  std::vector<std::string> labels(q);
  for (int c = 0; c < q; ++c) {
    labels[c] = "[" + s->label(classes[c][0]) + "]";
  }
  auto alg = Algebra::make_semigroup(std::move(labels), std::move(table));
  if (is_right_normal_band(*s))
    require(is_semilattice(*alg), ErrorCode::QuotientUndefined,
            "quotient of a right-normal band must be a semilattice");
  return Quotient{std::move(alg), std::move(proj), std::move(classes)};
}

std::vector<int> greedy_generators(const Algebra& a) {
  std::vector<char> closed(a.size(), 0);
  std::vector<int> closure;
  auto close_over = [&]() {
    bool grew = true;
    while (grew) {
      grew = false;
      const size_t sz = closure.size();
      for (size_t i = 0; i < sz; ++i)
        for (size_t j = 0; j < sz; ++j) {
          const int p = a.product(closure[i], closure[j]);
          if (!closed[p]) {
            closed[p] = 1;
            closure.push_back(p);
            grew = true;
          }
        }
    }
  };
  std::vector<int> gens;
  if (a.has_identity()) {
    closed[a.identity()] = 1;
    closure.push_back(a.identity());
  }
  for (int x = 0; x < a.size(); ++x) {
    if (closed[x]) continue;
    gens.push_back(x);
    closed[x] = 1;
    closure.push_back(x);
    close_over();
  }
  return gens;
}

namespace {

struct HomSearch {
  const Algebra& src;
  const Algebra& tgt;
  const PartialHom& phi;
  HomFilter filter;
  const std::function<bool(const PartialHom&)>& emit;
  bool stopped = false;

  // Derivation order: every source element is either a generator
  // (derivation (-1, -1)) or a product of two earlier elements.
  std::vector<int> order;
  std::vector<std::pair<int, int>> derivation;
  std::vector<int> pos_in_order;
  std::vector<int> forced;  // images forced by phi / the identity, else -1

  std::vector<int> img;  // source index -> target index or -1

  void build_order() {
    const int n = src.size();
    pos_in_order.assign(n, -1);
    std::vector<char> in(n, 0);
    auto push = [&](int x, std::pair<int, int> d) {
      in[x] = 1;
      pos_in_order[x] = static_cast<int>(order.size());
      order.push_back(x);
      derivation.push_back(d);
    };
    auto close_over = [&]() {
      for (size_t i = 0; i < order.size(); ++i)
        for (size_t j = 0; j < order.size(); ++j) {
          const int p = src.product(order[i], order[j]);
          if (!in[p]) push(p, {static_cast<int>(i), static_cast<int>(j)});
        }
    };
    // seed with the identity and phi's domain (their images are forced),
    // then extend greedily
    std::vector<int> seed;
    if (src.has_identity()) seed.push_back(src.identity());
    for (int x : phi.domain.members) seed.push_back(x);
    for (int x : seed)
      if (!in[x]) {
        push(x, {-1, -1});
        close_over();
      }
    for (int x = 0; x < n; ++x)
      if (!in[x]) {
        push(x, {-1, -1});
        close_over();
      }
  }

  // end of the derived block starting at `from` (first generator at/after it)
  size_t block_end(size_t from) const {
    size_t next = from;
    while (next < order.size() && derivation[next].first >= 0) ++next;
    return next;
  }

  // Derives images for positions [from, upto) and checks every product that
  // involves a new position and lands inside [0, upto). Pure pruning; the
  // leaf does a complete verification.
  bool derive_and_check(size_t from, size_t upto) {
    for (size_t i = from; i < upto; ++i) {
      const int x = order[i];
      const auto [a, b] = derivation[i];
      if (a >= 0) img[x] = tgt.product(img[order[a]], img[order[b]]);
    }
    for (size_t i = from; i < upto; ++i) {
      const int xi = img[order[i]];
      if (forced[order[i]] >= 0 && xi != forced[order[i]]) return false;
      for (size_t j = 0; j < upto; ++j) {
        const int p = src.product(order[i], order[j]);
        const int q = src.product(order[j], order[i]);
        if (pos_in_order[p] < static_cast<int>(upto) &&
            tgt.product(xi, img[order[j]]) != img[p])
          return false;
        if (pos_in_order[q] < static_cast<int>(upto) &&
            tgt.product(img[order[j]], xi) != img[q])
          return false;
        if (filter != HomFilter::All &&
            tgt.product(xi, img[order[j]]) != tgt.product(img[order[j]], xi))
          return false;
      }
    }
    return true;
  }

  void search(size_t pos) {
    if (stopped) return;
    if (pos == order.size()) {
      finish();
      return;
    }
    const int g = order[pos];
    const size_t upto = block_end(pos + 1);
    const int lo = forced[g] >= 0 ? forced[g] : 0;
    const int hi = forced[g] >= 0 ? forced[g] + 1 : tgt.size();
    for (int v = lo; v < hi && !stopped; ++v) {
      img[g] = v;
      if (derive_and_check(pos, upto)) search(upto);
      for (size_t i = pos; i < upto; ++i) img[order[i]] = -1;
    }
  }

  void finish() {
    const int n = src.size();
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (img[src.product(x, y)] != tgt.product(img[x], img[y])) return;
    if (src.has_identity() && tgt.has_identity() &&
        img[src.identity()] != tgt.identity())
      return;
    for (int x : phi.domain.members)
      if (img[x] != phi.map[x]) return;
    std::vector<char> in_image(tgt.size(), 0);
    for (int x = 0; x < n; ++x) in_image[img[x]] = 1;
    std::vector<int> image_members;
    for (int v = 0; v < tgt.size(); ++v)
      if (in_image[v]) image_members.push_back(v);
    if (filter != HomFilter::All) {
      for (int u : image_members)
        for (int v : image_members)
          if (tgt.product(u, v) != tgt.product(v, u)) return;
    }
    if (filter == HomFilter::AbelianUnionOfGroupsImage) {
      // regularity is intrinsic: the power cycle of an image element stays
      // inside the (closed) image
      for (int u : image_members)
        if (!is_regular(tgt, u)) return;
    }
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    SubKind kind = SubKind::Subsemigroup;
    if (src.kind() == AlgebraKind::Monoid) kind = SubKind::Submonoid;
    if (src.kind() == AlgebraKind::Group) kind = SubKind::Subgroup;
    auto total = make_partial_hom(phi.source, phi.target,
                                  SubAlgebra{phi.source, std::move(all), kind},
                                  img);
    if (!emit(total)) stopped = true;
  }

  void run() {
    build_order();
    img.assign(src.size(), -1);
    forced.assign(src.size(), -1);
    for (int x : phi.domain.members) forced[x] = phi.map[x];
    if (src.has_identity() && tgt.has_identity())
      forced[src.identity()] = tgt.identity();
    search(0);
  }
};

}  // namespace

void enumerate_extending_homs(const PartialHom& phi, HomFilter filter,
                              const std::function<bool(const PartialHom&)>& emit) {
  HomSearch hs{.src = *phi.source, .tgt = *phi.target, .phi = phi,
               .filter = filter, .emit = emit};
  hs.run();
}

std::vector<PartialHom> extending_homs(const PartialHom& phi, HomFilter filter) {
  std::vector<PartialHom> out;
  enumerate_extending_homs(phi, filter, [&](const PartialHom& h) {
    out.push_back(h);
    return true;
  });
  // deterministic order: lexicographic in the full image vector
  std::sort(out.begin(), out.end(),
            [](const PartialHom& a, const PartialHom& b) { return a.map < b.map; });
  return out;
}

}  // namespace promlin
