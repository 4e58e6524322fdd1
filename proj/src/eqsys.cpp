#include "promlin/eqsys.hpp"

#include <algorithm>

#include "promlin/homsearch.hpp"

namespace promlin {

namespace {
int lookup(const std::vector<std::string>& vars, const std::string& name) {
  for (size_t i = 0; i < vars.size(); ++i)
    if (vars[i] == name) return static_cast<int>(i);
  return -1;
}
}  // namespace

int GeneralSystem::var_id(const std::string& name) const {
  return lookup(variables, name);
}
int GeneralSystem::ensure_var(const std::string& name) {
  int id = var_id(name);
  if (id < 0) {
    id = static_cast<int>(variables.size());
    variables.push_back(name);
  }
  return id;
}

int EquationSystem::var_id(const std::string& name) const {
  return lookup(variables, name);
}
int EquationSystem::ensure_var(const std::string& name) {
  int id = var_id(name);
  if (id < 0) {
    id = static_cast<int>(variables.size());
    variables.push_back(name);
  }
  return id;
}
void EquationSystem::add_mul(const std::string& x, const std::string& y,
                             const std::string& z) {
  equations.push_back(MulEq{ensure_var(x), ensure_var(y), ensure_var(z)});
}
void EquationSystem::add_fix(const std::string& x, int constant) {
  equations.push_back(FixEq{ensure_var(x), constant});
}

namespace {

struct Normalizer {
  const SubAlgebra& constants;
  AlgebraKind mode;
  EquationSystem out;
  std::map<std::string, std::string> aliases;
  int fresh_counter = 0;
  std::map<int, int> const_var;     // constant -> variable id carrying it
  std::map<std::string, int> inv_var;  // group mode: x -> fresh var id for x^-1

  std::string fresh() { return "__n" + std::to_string(fresh_counter++); }

  int check_constant(int c) {
    require(constants.contains(c), ErrorCode::ConstantOutsideConstants,
            "constant " + constants.parent->label(c) +
                " lies outside the declared constant sub-algebra");
    return c;
  }

  // variable id whose value is pinned to constant c
  int carrier(int c) {
    check_constant(c);
    auto it = const_var.find(c);
    if (it != const_var.end()) return it->second;
    const int id = out.ensure_var(fresh());
    out.equations.push_back(FixEq{id, c});
    const_var[c] = id;
    return id;
  }

  std::string resolve(std::string name) {
    while (true) {
      auto it = aliases.find(name);
      if (it == aliases.end()) return name;
      name = it->second;
    }
  }

  // variable id for an atom, materializing constants and group inverses
  int atom_var(const Atom& a) {
    switch (a.kind) {
      case Atom::Kind::Var:
        return out.ensure_var(resolve(a.name));
      case Atom::Kind::Const:
        return carrier(a.constant);
      case Atom::Kind::InvVar: {
        require(mode == AlgebraKind::Group, ErrorCode::InvalidAtom,
                "inverted variable " + a.name + " outside group mode");
        const std::string base = resolve(a.name);
        auto it = inv_var.find(base);
        if (it != inv_var.end()) return it->second;
        // x * y = w, w = e makes y carry x^-1
        const int x = out.ensure_var(base);
        const int y = out.ensure_var(fresh());
        const int w = out.ensure_var(fresh());
        out.equations.push_back(MulEq{x, y, w});
        out.equations.push_back(
            FixEq{w, check_constant(constants.parent->identity())});
        inv_var[base] = y;
        return y;
      }
    }
    fail(ErrorCode::InvalidAtom, "unreachable");
  }

  // chains a word (length >= 1) into fresh product variables, returning the
  // variable holding the word's value
  int chain(const std::vector<Atom>& word) {
    int acc = atom_var(word[0]);
    for (size_t i = 1; i < word.size(); ++i) {
      const int next = atom_var(word[i]);
      const int prod = out.ensure_var(fresh());
      out.equations.push_back(MulEq{acc, next, prod});
      acc = prod;
    }
    return acc;
  }

  void identify(const std::string& a, const std::string& b) {
    const std::string ra = resolve(a), rb = resolve(b);
    if (ra == rb) return;
    // keep the lexicographically smaller name
    const std::string keep = std::min(ra, rb), drop = std::max(ra, rb);
    aliases[drop] = keep;
    const int kid = out.ensure_var(keep);
    const int did = out.var_id(drop);
    if (did < 0) return;
    // rewrite equations already emitted
    for (auto& eq : out.equations) {
      if (auto* m = std::get_if<MulEq>(&eq)) {
        if (m->x == did) m->x = kid;
        if (m->y == did) m->y = kid;
        if (m->z == did) m->z = kid;
      } else {
        auto& f = std::get<FixEq>(eq);
        if (f.x == did) f.x = kid;
      }
    }
    for (auto& [c, v] : const_var)
      if (v == did) v = kid;
    for (auto& [n, v] : inv_var)
      if (v == did) v = kid;
    // drop the variable by swapping with the last one
    const int last = out.num_vars() - 1;
    if (did != last) {
      out.variables[did] = out.variables[last];
      for (auto& eq : out.equations) {
        if (auto* m = std::get_if<MulEq>(&eq)) {
          if (m->x == last) m->x = did;
          if (m->y == last) m->y = did;
          if (m->z == last) m->z = did;
        } else {
          auto& f = std::get<FixEq>(eq);
          if (f.x == last) f.x = did;
        }
      }
      for (auto& [c, v] : const_var)
        if (v == last) v = did;
      for (auto& [n, v] : inv_var)
        if (v == last) v = did;
    }
    out.variables.pop_back();
  }

  void contradiction(int c, int d) {
    // only reachable with two distinct constants, both in T
    const int id = out.ensure_var(fresh());
    out.equations.push_back(FixEq{id, c});
    out.equations.push_back(FixEq{id, d});
  }

  void equation(const GeneralEquation& eq) {
    require(!eq.lhs.empty() && !eq.rhs.empty(), ErrorCode::InvalidAtom,
            "equation words must be nonempty");
    // single-atom cases first, before introducing carriers
    if (eq.lhs.size() == 1 && eq.rhs.size() == 1) {
      const Atom &l = eq.lhs[0], &r = eq.rhs[0];
      if (l.kind == Atom::Kind::Const && r.kind == Atom::Kind::Const) {
        check_constant(l.constant);
        check_constant(r.constant);
        if (l.constant != r.constant) contradiction(l.constant, r.constant);
        return;
      }
      if (l.kind == Atom::Kind::Var && r.kind == Atom::Kind::Const) {
        out.equations.push_back(
            FixEq{out.ensure_var(resolve(l.name)), check_constant(r.constant)});
        return;
      }
      if (l.kind == Atom::Kind::Const && r.kind == Atom::Kind::Var) {
        out.equations.push_back(
            FixEq{out.ensure_var(resolve(r.name)), check_constant(l.constant)});
        return;
      }
      if (l.kind == Atom::Kind::Var && r.kind == Atom::Kind::Var) {
        if (mode == AlgebraKind::Semigroup) {
          identify(l.name, r.name);
        } else {
          // x = y via x * e = y
          const int x = out.ensure_var(resolve(l.name));
          const int e = carrier(constants.parent->identity());
          const int y = out.ensure_var(resolve(r.name));
          out.equations.push_back(MulEq{x, e, y});
        }
        return;
      }
      // inverted single atoms fall through to the generic path
    }
    if (eq.rhs.size() == 1 && eq.rhs[0].kind != Atom::Kind::InvVar &&
        eq.lhs.size() > 1) {
      // chain lhs prefix, write final product onto the rhs variable/carrier
      int acc = atom_var(eq.lhs[0]);
      for (size_t i = 1; i + 1 < eq.lhs.size(); ++i) {
        const int next = atom_var(eq.lhs[i]);
        const int prod = out.ensure_var(fresh());
        out.equations.push_back(MulEq{acc, next, prod});
        acc = prod;
      }
      out.equations.push_back(
          MulEq{acc, atom_var(eq.lhs.back()), atom_var(eq.rhs[0])});
      return;
    }
    if (eq.lhs.size() == 1 && eq.lhs[0].kind != Atom::Kind::InvVar &&
        eq.rhs.size() > 1) {
      GeneralEquation flipped{eq.rhs, eq.lhs};
      equation(flipped);
      return;
    }
    // generic: chain both sides, then equate the results
    const int lv = chain(eq.lhs);
    const int rv = chain(eq.rhs);
    if (lv == rv) return;
    if (mode == AlgebraKind::Semigroup) {
      identify(out.variables[lv], out.variables[rv]);
    } else {
      const int e = carrier(constants.parent->identity());
      out.equations.push_back(MulEq{lv, e, rv});
    }
  }
};

}  // namespace

NormalizeResult normalize(const GeneralSystem& input, const SubAlgebra& constants,
                          AlgebraKind mode) {
  if (mode != AlgebraKind::Semigroup)
    require(constants.parent->has_identity(), ErrorCode::PreconditionFailed,
            "monoid/group normalization needs an identity");
  Normalizer n{.constants = constants, .mode = mode};
  for (const auto& v : input.variables) n.out.ensure_var(v);
  for (const auto& eq : input.equations) n.equation(eq);
  // identification may have renamed original variables; drop alias entries
  // whose key was a fresh variable
  std::map<std::string, std::string> aliases;
  for (auto& [k, v] : n.aliases)
    if (k.rfind("__n", 0) != 0) aliases[k] = n.resolve(v);
  return NormalizeResult{std::move(n.out), std::move(aliases)};
}

const Relation* RelationalStructure::find(const std::string& name) const {
  for (const auto& r : relations)
    if (r.name == name) return &r;
  return nullptr;
}

bool RelationalStructure::same_signature(const RelationalStructure& other) const {
  if (relations.size() != other.relations.size()) return false;
  for (size_t i = 0; i < relations.size(); ++i)
    if (relations[i].name != other.relations[i].name ||
        relations[i].arity != other.relations[i].arity)
      return false;
  return true;
}

RelationalStructure lin_structure(const AlgebraPtr& s, const SubAlgebra& constants) {
  require(constants.parent.get() == s.get(), ErrorCode::PreconditionFailed,
          "constants must live in the given algebra");
  RelationalStructure a;
  a.universe_size = s->size();
  a.universe_labels = s->labels();
  Relation mul{"mul", 3, {}};
  for (int x = 0; x < s->size(); ++x)
    for (int y = 0; y < s->size(); ++y) mul.tuples.push_back({x, y, s->product(x, y)});
  a.relations.push_back(std::move(mul));
  for (int t : constants.members)
    a.relations.push_back(Relation{"fix:" + s->label(t), 1, {{t}}});
  return a;
}

RelationalStructure system_to_structure(const EquationSystem& sys,
                                        const SubAlgebra& constants) {
  RelationalStructure x;
  x.universe_size = sys.num_vars();
  x.universe_labels = sys.variables;
  Relation mul{"mul", 3, {}};
  std::map<int, std::vector<std::vector<int>>> fixes;
  for (const auto& eq : sys.equations) {
    if (const auto* m = std::get_if<MulEq>(&eq))
      mul.tuples.push_back({m->x, m->y, m->z});
    else {
      const auto& f = std::get<FixEq>(eq);
      require(constants.contains(f.constant), ErrorCode::ConstantOutsideConstants,
              "Fix constant outside the declared constant sub-algebra");
      fixes[f.constant].push_back({f.x});
    }
  }
  x.relations.push_back(std::move(mul));
  for (int t : constants.members) {
    Relation r{"fix:" + constants.parent->label(t), 1, {}};
    auto it = fixes.find(t);
    if (it != fixes.end()) r.tuples = it->second;
    x.relations.push_back(std::move(r));
  }
  return x;
}

EquationSystem structure_to_system(const RelationalStructure& instance,
                                   const SubAlgebra& constants) {
  EquationSystem sys;
  for (int v = 0; v < instance.universe_size; ++v)
    sys.ensure_var(instance.universe_labels.empty()
                       ? "v" + std::to_string(v)
                       : instance.universe_labels[v]);
  for (const auto& r : instance.relations) {
    if (r.name == "mul") {
      for (const auto& t : r.tuples) sys.equations.push_back(MulEq{t[0], t[1], t[2]});
    } else {
      require(r.name.rfind("fix:", 0) == 0 && r.arity == 1,
              ErrorCode::SignatureMismatch, "unknown relation symbol " + r.name);
      const std::string label = r.name.substr(4);
      auto idx = constants.parent->index_of(label);
      require(idx && constants.contains(*idx), ErrorCode::ConstantOutsideConstants,
              "relation " + r.name + " names no declared constant");
      for (const auto& t : r.tuples) sys.equations.push_back(FixEq{t[0], *idx});
    }
  }
  return sys;
}

PLinTemplate make_plin_template(AlgebraPtr s1, AlgebraPtr s2, PartialHom phi) {
  require(s1->kind() == s2->kind(), ErrorCode::PreconditionFailed,
          "template algebras must be of the same kind");
  require(phi.source.get() == s1.get() && phi.target.get() == s2.get(),
          ErrorCode::PreconditionFailed, "phi must map S1 into S2");
  return PLinTemplate{std::move(s1), std::move(s2), std::move(phi)};
}

bool is_well_formed(const PLinTemplate& t) {
  bool found = false;
  enumerate_extending_homs(t.phi, HomFilter::All, [&](const PartialHom&) {
    found = true;
    return false;
  });
  return found;
}

std::pair<RelationalStructure, RelationalStructure> plin_structures(
    const PLinTemplate& t) {
  RelationalStructure a = lin_structure(t.s1, t.phi.domain);
  RelationalStructure b;
  b.universe_size = t.s2->size();
  b.universe_labels = t.s2->labels();
  Relation mul{"mul", 3, {}};
  for (int x = 0; x < t.s2->size(); ++x)
    for (int y = 0; y < t.s2->size(); ++y)
      mul.tuples.push_back({x, y, t.s2->product(x, y)});
  b.relations.push_back(std::move(mul));
  for (int s : t.phi.domain.members)
    b.relations.push_back(
        Relation{"fix:" + t.s1->label(s), 1, {{t.phi.apply(s)}}});
  return {std::move(a), std::move(b)};
}

bool check_assignment(const EquationSystem& sys, const Algebra& over,
                      const Assignment& asg) {
  if (static_cast<int>(asg.size()) != sys.num_vars()) return false;
  for (int v : asg)
    if (v < 0 || v >= over.size()) return false;
  for (const auto& eq : sys.equations) {
    if (const auto* m = std::get_if<MulEq>(&eq)) {
      if (over.product(asg[m->x], asg[m->y]) != asg[m->z]) return false;
    } else {
      const auto& f = std::get<FixEq>(eq);
      if (asg[f.x] != f.constant) return false;
    }
  }
  return true;
}

bool check_promise_solution(const PLinTemplate& t, const EquationSystem& sys,
                            const Assignment& asg) {
  if (static_cast<int>(asg.size()) != sys.num_vars()) return false;
  for (int v : asg)
    if (v < 0 || v >= t.s2->size()) return false;
  for (const auto& eq : sys.equations) {
    if (const auto* m = std::get_if<MulEq>(&eq)) {
      if (t.s2->product(asg[m->x], asg[m->y]) != asg[m->z]) return false;
    } else {
      const auto& f = std::get<FixEq>(eq);
      if (!t.phi.defined_at(f.constant)) return false;
      if (asg[f.x] != t.phi.apply(f.constant)) return false;
    }
  }
  return true;
}

bool check_general(const GeneralSystem& sys, const Algebra& over,
                   const std::map<std::string, int>& asg) {
  auto eval = [&](const std::vector<Atom>& word) -> std::optional<int> {
    std::optional<int> acc;
    for (const auto& a : word) {
      int v;
      switch (a.kind) {
        case Atom::Kind::Var: {
          auto it = asg.find(a.name);
          if (it == asg.end()) return std::nullopt;
          v = it->second;
          break;
        }
        case Atom::Kind::InvVar: {
          auto it = asg.find(a.name);
          if (it == asg.end()) return std::nullopt;
          v = over.inverse(it->second);
          break;
        }
        case Atom::Kind::Const:
          v = a.constant;
          break;
      }
      acc = acc ? over.product(*acc, v) : v;
    }
    return acc;
  };
  for (const auto& eq : sys.equations) {
    auto l = eval(eq.lhs), r = eval(eq.rhs);
    if (!l || !r || *l != *r) return false;
  }
  return true;
}

std::optional<Assignment> brute_force_solve(
    const EquationSystem& sys, const AlgebraPtr& over,
    const std::function<int(int)>& const_interp, std::uint64_t node_budget) {
  // search directly over per-variable domains with forward checking; the
  // lexicographically least solution comes first
  const int n = sys.num_vars();
  const int m = over->size();
  std::vector<std::vector<char>> domain(n, std::vector<char>(m, 1));
  for (const auto& eq : sys.equations)
    if (const auto* f = std::get_if<FixEq>(&eq)) {
      const int pinned = const_interp ? const_interp(f->constant) : f->constant;
      require(pinned >= 0 && pinned < m, ErrorCode::ConstantOutsideConstants,
              "Fix constant outside the algebra");
      for (int v = 0; v < m; ++v)
        if (v != pinned) domain[f->x][v] = 0;
    }
  std::vector<MulEq> muls;
  for (const auto& eq : sys.equations)
    if (const auto* mu = std::get_if<MulEq>(&eq)) muls.push_back(*mu);

  // arc consistency on the mul constraints
  auto revise = [&]() -> bool {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& mu : muls) {
        for (int v = 0; v < m; ++v) {
          if (domain[mu.x][v]) {
            bool ok = false;
            for (int w = 0; w < m && !ok; ++w)
              ok = domain[mu.y][w] && domain[mu.z][over->product(v, w)];
            if (!ok) {
              domain[mu.x][v] = 0;
              changed = true;
            }
          }
          if (domain[mu.y][v]) {
            bool ok = false;
            for (int u = 0; u < m && !ok; ++u)
              ok = domain[mu.x][u] && domain[mu.z][over->product(u, v)];
            if (!ok) {
              domain[mu.y][v] = 0;
              changed = true;
            }
          }
          if (domain[mu.z][v]) {
            bool ok = false;
            for (int u = 0; u < m && !ok; ++u)
              for (int w = 0; w < m && !ok; ++w)
                ok = domain[mu.x][u] && domain[mu.y][w] &&
                     over->product(u, w) == v;
            if (!ok) {
              domain[mu.z][v] = 0;
              changed = true;
            }
          }
        }
      }
    }
    for (int x = 0; x < n; ++x) {
      bool any = false;
      for (int v = 0; v < m; ++v) any = any || domain[x][v];
      if (!any) return false;
    }
    return true;
  };

  std::uint64_t nodes = 0;
  Assignment asg(n, -1);
  std::function<bool(int)> dfs = [&](int x) -> bool {
    if (x == n) return true;
    if (++nodes > node_budget)
      fail(ErrorCode::BudgetExceeded, "brute-force search budget exceeded");
    for (int v = 0; v < m; ++v) {
      if (!domain[x][v]) continue;
      asg[x] = v;
      bool ok = true;
      for (const auto& mu : muls) {
        const int a = asg[mu.x], b = asg[mu.y], c = asg[mu.z];
        if (a >= 0 && b >= 0 && c >= 0 && over->product(a, b) != c) ok = false;
        if (!ok) break;
      }
      if (ok && dfs(x + 1)) return true;
      asg[x] = -1;
    }
    return false;
  };
  if (!revise()) return std::nullopt;
  if (!dfs(0)) return std::nullopt;
  return asg;
}

}  // namespace promlin
