#include "promlin/homsearch.hpp"

#include <algorithm>
#include <unordered_set>

namespace promlin {

namespace {

struct Constraint {
  const Relation* target;
  std::vector<int> scope;  // instance elements per position
  std::unordered_set<std::uint64_t> tuple_set;
};

std::uint64_t encode(const std::vector<int>& t, int base) {
  std::uint64_t e = 0;
  for (int v : t) e = e * static_cast<std::uint64_t>(base) + v;
  return e;
}

struct Searcher {
  const RelationalStructure& x;
  const RelationalStructure& a;
  std::uint64_t budget;
  std::vector<Constraint> constraints;
  std::vector<std::vector<int>> by_element;  // constraint ids touching e
  std::vector<std::vector<char>> domain;     // [element][value]
  std::uint64_t nodes = 0;

  bool init() {
    require(x.same_signature(a), ErrorCode::SignatureMismatch,
            "instance and target signatures differ");
    domain.assign(x.universe_size, std::vector<char>(a.universe_size, 1));
    by_element.assign(x.universe_size, {});
    for (size_t r = 0; r < x.relations.size(); ++r)
      for (const auto& t : x.relations[r].tuples) {
        Constraint c{&a.relations[r], t, {}};
        for (const auto& at : a.relations[r].tuples)
          c.tuple_set.insert(encode(at, a.universe_size));
        const int id = static_cast<int>(constraints.size());
        for (int e : t)
          if (by_element[e].empty() || by_element[e].back() != id)
            by_element[e].push_back(id);
        constraints.push_back(std::move(c));
      }
    return propagate();
  }

  // arc consistency: a value survives iff every constraint on the element
  // has a supporting target tuple within the current domains
  bool propagate() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& c : constraints) {
        const int k = static_cast<int>(c.scope.size());
        for (int pos = 0; pos < k; ++pos) {
          const int e = c.scope[pos];
          for (int v = 0; v < a.universe_size; ++v) {
            if (!domain[e][v]) continue;
            bool supported = false;
            for (const auto& t : c.target->tuples) {
              if (t[pos] != v) continue;
              bool ok = true;
              for (int q = 0; q < k && ok; ++q) ok = domain[c.scope[q]][t[q]];
              if (ok) {
                supported = true;
                break;
              }
            }
            if (!supported) {
              domain[e][v] = 0;
              changed = true;
            }
          }
        }
      }
    }
    for (int e = 0; e < x.universe_size; ++e) {
      bool any = false;
      for (int v = 0; v < a.universe_size; ++v) any = any || domain[e][v];
      if (!any) return false;
    }
    return true;
  }

  bool consistent_after(int e, const std::vector<int>& asg) const {
    std::vector<int> img;
    for (int cid : by_element[e]) {
      const auto& c = constraints[cid];
      img.clear();
      bool all = true;
      for (int el : c.scope) {
        if (asg[el] < 0) {
          all = false;
          break;
        }
        img.push_back(asg[el]);
      }
      if (all && !c.tuple_set.count(encode(img, a.universe_size))) return false;
    }
    return true;
  }

  // emits homomorphisms in lexicographic order; returns false when stopped
  bool dfs(int e, std::vector<int>& asg,
           const std::function<bool(const std::vector<int>&)>& emit) {
    if (e == x.universe_size) return emit(asg);
    if (++nodes > budget)
      fail(ErrorCode::BudgetExceeded, "homomorphism search budget exceeded");
    for (int v = 0; v < a.universe_size; ++v) {
      if (!domain[e][v]) continue;
      asg[e] = v;
      if (consistent_after(e, asg)) {
        if (!dfs(e + 1, asg, emit)) {
          asg[e] = -1;
          return false;
        }
      }
      asg[e] = -1;
    }
    return true;
  }
};

}  // namespace

std::optional<std::vector<std::vector<int>>> arc_consistent_domains(
    const RelationalStructure& instance, const RelationalStructure& target) {
  Searcher s{.x = instance, .a = target, .budget = 0};
  if (!s.init()) return std::nullopt;
  std::vector<std::vector<int>> out(instance.universe_size);
  for (int e = 0; e < instance.universe_size; ++e)
    for (int v = 0; v < target.universe_size; ++v)
      if (s.domain[e][v]) out[e].push_back(v);
  return out;
}

std::optional<std::vector<int>> find_homomorphism(
    const RelationalStructure& instance, const RelationalStructure& target,
    std::uint64_t node_budget) {
  Searcher s{.x = instance, .a = target, .budget = node_budget};
  if (!s.init()) return std::nullopt;
  std::optional<std::vector<int>> result;
  std::vector<int> asg(instance.universe_size, -1);
  s.dfs(0, asg, [&](const std::vector<int>& h) {
    result = h;
    return false;  // stop at the first (lexicographically least)
  });
  return result;
}

void enumerate_homomorphisms(
    const RelationalStructure& instance, const RelationalStructure& target,
    const std::function<bool(const std::vector<int>&)>& emit,
    std::uint64_t node_budget) {
  Searcher s{.x = instance, .a = target, .budget = node_budget};
  if (!s.init()) return;
  std::vector<int> asg(instance.universe_size, -1);
  s.dfs(0, asg, emit);
}

bool hom_exists(const RelationalStructure& instance,
                const RelationalStructure& target, std::uint64_t node_budget) {
  return find_homomorphism(instance, target, node_budget).has_value();
}

RelationalStructure structure_power(const RelationalStructure& a, int n,
                                    std::uint64_t size_budget) {
  require(n >= 1, ErrorCode::PreconditionFailed, "power must be >= 1");
  const std::uint64_t sz = checked_pow(a.universe_size, n, size_budget);
  require(sz <= size_budget, ErrorCode::BudgetExceeded,
          "structure power too large");
  RelationalStructure p;
  p.universe_size = static_cast<int>(sz);
  for (const auto& r : a.relations) {
    Relation pr{r.name, r.arity, {}};
    // every selection of n tuples from r, combined coordinatewise
    std::vector<size_t> pick(n, 0);
    if (!r.tuples.empty()) {
      while (true) {
        std::vector<int> tuple(r.arity);
        for (int pos = 0; pos < r.arity; ++pos) {
          int enc = 0;
          for (int i = 0; i < n; ++i)
            enc = enc * a.universe_size + r.tuples[pick[i]][pos];
          tuple[pos] = enc;
        }
        pr.tuples.push_back(std::move(tuple));
        int i = n - 1;
        for (; i >= 0; --i) {
          if (++pick[i] < r.tuples.size()) break;
          pick[i] = 0;
        }
        if (i < 0) break;
      }
    }
    p.relations.push_back(std::move(pr));
  }
  return p;
}

}  // namespace promlin
