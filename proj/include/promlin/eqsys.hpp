#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "promlin/algebra.hpp"

namespace promlin {

/// One symbol of a general equation word.
struct Atom {
  enum class Kind { Var, InvVar, Const };
  Kind kind;
  std::string name;   // Var / InvVar
  int constant = -1;  // Const: ambient element index

  static Atom var(std::string n) { return {Kind::Var, std::move(n), -1}; }
  static Atom inv_var(std::string n) { return {Kind::InvVar, std::move(n), -1}; }
  static Atom constant_of(int c) { return {Kind::Const, {}, c}; }
  bool operator==(const Atom&) const = default;
};

/// x_1 ... x_n = y_1 ... y_m over an ambient algebra.
struct GeneralEquation {
  std::vector<Atom> lhs, rhs;
};

struct GeneralSystem {
  std::vector<std::string> variables;
  std::vector<GeneralEquation> equations;

  int var_id(const std::string& name) const;
  int ensure_var(const std::string& name);
};

/// Canonical equations: x*y = z over variables, or x = c for a constant.
struct MulEq {
  int x, y, z;
  bool operator==(const MulEq&) const = default;
};
struct FixEq {
  int x;
  int constant;  // ambient element index
  bool operator==(const FixEq&) const = default;
};
using Equation = std::variant<MulEq, FixEq>;

struct EquationSystem {
  std::vector<std::string> variables;  // index = variable id
  std::vector<Equation> equations;

  int var_id(const std::string& name) const;
  int ensure_var(const std::string& name);
  int num_vars() const { return static_cast<int>(variables.size()); }
  void add_mul(const std::string& x, const std::string& y, const std::string& z);
  void add_fix(const std::string& x, int constant);
};

/// Assignment of element indices to all variables of a system.
using Assignment = std::vector<int>;

struct NormalizeResult {
  EquationSystem system;
  /// Variables eliminated by identification (semigroup mode x = y), mapped
  /// to their surviving representative.
  std::map<std::string, std::string> aliases;
};

/// Rewrites a general system into canonical Mul/Fix form, preserving
/// satisfiability in both directions. Fresh variables are named "__n<k>".
/// Group mode replaces inverted variables through fresh variables and an
/// identity constant. Throws InvalidAtom for inverses outside group mode and
/// ConstantOutsideConstants for constants not in `constants`.
NormalizeResult normalize(const GeneralSystem& input, const SubAlgebra& constants,
                          AlgebraKind mode);

struct Relation {
  std::string name;
  int arity;
  std::vector<std::vector<int>> tuples;
};

struct RelationalStructure {
  int universe_size = 0;
  std::vector<std::string> universe_labels;  // optional; empty = numeric
  std::vector<Relation> relations;

  const Relation* find(const std::string& name) const;
  bool same_signature(const RelationalStructure& other) const;
};

/// Lin(S, T): universe S, the multiplication graph, and one singleton unary
/// relation per constant in T.
RelationalStructure lin_structure(const AlgebraPtr& s, const SubAlgebra& constants);

/// Instance form of a system: universe = variables, "mul" tuples, and one
/// unary tuple per Fix. The signature lists every constant of `constants` so
/// instances are comparable with lin_structure.
RelationalStructure system_to_structure(const EquationSystem& sys,
                                        const SubAlgebra& constants);
EquationSystem structure_to_system(const RelationalStructure& instance,
                                   const SubAlgebra& constants);

/// The pair (A, B) of a promise template with a hom A -> B required for
/// well-formedness (checked separately; see is_well_formed).
struct PLinTemplate {
  AlgebraPtr s1, s2;
  PartialHom phi;  // dom(phi) within s1, image within s2

  AlgebraKind kind() const { return s1->kind(); }
};
PLinTemplate make_plin_template(AlgebraPtr s1, AlgebraPtr s2, PartialHom phi);
bool is_well_formed(const PLinTemplate& t);

/// A-side and B-side relational structures of the template. The B-side
/// interprets each constant t as phi(t).
std::pair<RelationalStructure, RelationalStructure> plin_structures(
    const PLinTemplate& t);

bool check_assignment(const EquationSystem& sys, const Algebra& over,
                      const Assignment& asg);
/// Fix(x, t) over the B side requires asg(x) = phi(t).
bool check_promise_solution(const PLinTemplate& t, const EquationSystem& sys,
                            const Assignment& asg_into_s2);
bool check_general(const GeneralSystem& sys, const Algebra& over,
                   const std::map<std::string, int>& asg);

/// Ground-truth solver: deterministic lexicographically-least solution.
/// `const_interp` maps each Fix constant to the element it pins (identity by
/// default). Throws BudgetExceeded past `node_budget` search nodes.
std::optional<Assignment> brute_force_solve(
    const EquationSystem& sys, const AlgebraPtr& over,
    const std::function<int(int)>& const_interp = {},
    std::uint64_t node_budget = 50'000'000);

}  // namespace promlin
