#include "promlin/json_io.hpp"

#include <fstream>
#include <sstream>

namespace promlin {

namespace {
[[noreturn]] void bad(const std::string& what) {
  fail(ErrorCode::MalformedInput, what);
}

int element_index(const Algebra& a, const json& j) {
  if (j.is_number_integer()) {
    const int v = j.get<int>();
    if (v < 0 || v >= a.size()) bad("element index out of range");
    return v;
  }
  if (j.is_string()) {
    auto idx = a.index_of(j.get<std::string>());
    if (!idx) bad("unknown element label " + j.get<std::string>());
    return *idx;
  }
  bad("element must be an index or a label");
}
}  // namespace

AlgebraPtr algebra_from_json(const json& j) {
  try {
    if (!j.is_object()) bad("algebra must be an object");
    const std::string kind = j.value("kind", "");
    std::vector<std::string> labels;
    for (const auto& l : j.at("elements")) {
      if (l.is_string())
        labels.push_back(l.get<std::string>());
      else
        labels.push_back(l.dump());
    }
    const int n = static_cast<int>(labels.size());
    std::vector<int> table;
    for (const auto& row : j.at("table")) {
      if (static_cast<int>(row.size()) != n) bad("table must be square");
      for (const auto& v : row) table.push_back(v.get<int>());
    }
    if (static_cast<int>(table.size()) != n * n) bad("table must be square");
    if (kind == "semigroup") return Algebra::make_semigroup(labels, table);
    if (kind == "monoid")
      return Algebra::make_monoid(labels, table, j.at("identity").get<int>());
    if (kind == "group") {
      std::optional<std::vector<int>> inverse;
      if (j.contains("inverse"))
        inverse = j.at("inverse").get<std::vector<int>>();
      return Algebra::make_group(labels, table, j.at("identity").get<int>(),
                                 std::move(inverse));
    }
    bad("kind must be semigroup, monoid, or group");
  } catch (const json::exception& e) {
    bad(std::string("algebra: ") + e.what());
  }
}

json algebra_to_json(const Algebra& a) {
  json j;
  switch (a.kind()) {
    case AlgebraKind::Semigroup: j["kind"] = "semigroup"; break;
    case AlgebraKind::Monoid: j["kind"] = "monoid"; break;
    case AlgebraKind::Group: j["kind"] = "group"; break;
  }
  j["elements"] = a.labels();
  json table = json::array();
  for (int i = 0; i < a.size(); ++i) {
    json row = json::array();
    for (int k = 0; k < a.size(); ++k) row.push_back(a.product(i, k));
    table.push_back(std::move(row));
  }
  j["table"] = std::move(table);
  if (a.has_identity()) j["identity"] = a.identity();
  if (a.kind() == AlgebraKind::Group) {
    std::vector<int> inv(a.size());
    for (int i = 0; i < a.size(); ++i) inv[i] = a.inverse(i);
    j["inverse"] = inv;
  }
  return j;
}

PartialHom partial_hom_from_json(const json& j, AlgebraPtr source,
                                 AlgebraPtr target) {
  try {
    std::vector<int> members;
    for (const auto& m : j.at("domain")) members.push_back(element_index(*source, m));
    SubKind kind = SubKind::Subsemigroup;
    if (source->kind() == AlgebraKind::Monoid) kind = SubKind::Submonoid;
    if (source->kind() == AlgebraKind::Group) kind = SubKind::Subgroup;
    SubAlgebra domain = make_subalgebra(source, members, kind);
    std::vector<int> map(source->size(), -1);
    for (const auto& [k, v] : j.at("map").items()) {
      int src;
      try {
        src = std::stoi(k);
      } catch (...) {
        auto idx = source->index_of(k);
        if (!idx) bad("unknown source element " + k);
        src = *idx;
      }
      if (src < 0 || src >= source->size()) bad("map key out of range");
      map[src] = element_index(*target, v);
    }
    return make_partial_hom(std::move(source), std::move(target), domain, map);
  } catch (const json::exception& e) {
    bad(std::string("partial hom: ") + e.what());
  }
}

json partial_hom_to_json(const PartialHom& h) {
  json j;
  j["domain"] = h.domain.members;
  json map = json::object();
  for (int x : h.domain.members) map[std::to_string(x)] = h.map[x];
  j["map"] = std::move(map);
  return j;
}

PLinTemplate template_from_json(const json& j) {
  try {
    AlgebraPtr m1 = algebra_from_json(j.at("m1"));
    AlgebraPtr m2 = algebra_from_json(j.at("m2"));
    PartialHom phi = partial_hom_from_json(j.at("phi"), m1, m2);
    return make_plin_template(std::move(m1), std::move(m2), std::move(phi));
  } catch (const json::exception& e) {
    bad(std::string("template: ") + e.what());
  }
}

json template_to_json(const PLinTemplate& t) {
  json j;
  j["m1"] = algebra_to_json(*t.s1);
  j["m2"] = algebra_to_json(*t.s2);
  j["phi"] = partial_hom_to_json(t.phi);
  return j;
}

EquationSystem system_from_json(const json& j, const Algebra& constants_in) {
  try {
    EquationSystem sys;
    for (const auto& v : j.at("variables")) sys.ensure_var(v.get<std::string>());
    for (const auto& eq : j.at("equations")) {
      if (eq.contains("mul")) {
        const auto& m = eq.at("mul");
        if (m.size() != 3) bad("mul takes three variables");
        sys.equations.push_back(MulEq{sys.ensure_var(m[0].get<std::string>()),
                                      sys.ensure_var(m[1].get<std::string>()),
                                      sys.ensure_var(m[2].get<std::string>())});
      } else if (eq.contains("fix")) {
        const auto& f = eq.at("fix");
        if (f.size() != 2) bad("fix takes a variable and a constant");
        sys.equations.push_back(FixEq{sys.ensure_var(f[0].get<std::string>()),
                                      element_index(constants_in, f[1])});
      } else {
        bad("equation must be mul or fix");
      }
    }
    return sys;
  } catch (const json::exception& e) {
    bad(std::string("system: ") + e.what());
  }
}

json system_to_json(const EquationSystem& sys, const Algebra& constants_in) {
  json j;
  j["variables"] = sys.variables;
  json eqs = json::array();
  for (const auto& eq : sys.equations) {
    if (const auto* m = std::get_if<MulEq>(&eq)) {
      eqs.push_back({{"mul",
                      {sys.variables[m->x], sys.variables[m->y],
                       sys.variables[m->z]}}});
    } else {
      const auto& f = std::get<FixEq>(eq);
      eqs.push_back(
          {{"fix", {sys.variables[f.x], constants_in.label(f.constant)}}});
    }
  }
  j["equations"] = std::move(eqs);
  return j;
}

GeneralSystem general_system_from_text(const std::string& text,
                                       const Algebra& constants_in) {
  GeneralSystem sys;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    GeneralEquation eq;
    std::vector<Atom>* side = &eq.lhs;
    std::string tok;
    while (ls >> tok) {
      if (tok == "=") {
        if (side == &eq.rhs) bad("more than one '=' in an equation");
        side = &eq.rhs;
      } else if (tok.rfind("c:", 0) == 0) {
        auto idx = constants_in.index_of(tok.substr(2));
        if (!idx) bad("unknown constant label " + tok.substr(2));
        side->push_back(Atom::constant_of(*idx));
      } else if (tok.size() > 3 && tok.substr(tok.size() - 3) == "^-1") {
        side->push_back(Atom::inv_var(tok.substr(0, tok.size() - 3)));
      } else {
        side->push_back(Atom::var(tok));
      }
    }
    if (eq.lhs.empty() || eq.rhs.empty()) bad("equation needs both sides");
    for (const auto& a : eq.lhs)
      if (a.kind != Atom::Kind::Const) sys.ensure_var(a.name);
    for (const auto& a : eq.rhs)
      if (a.kind != Atom::Kind::Const) sys.ensure_var(a.name);
    sys.equations.push_back(std::move(eq));
  }
  return sys;
}

std::string general_system_to_text(const GeneralSystem& sys,
                                   const Algebra& constants_in) {
  std::ostringstream out;
  for (const auto& eq : sys.equations) {
    auto word = [&](const std::vector<Atom>& w, bool first) {
      bool lead = first;
      for (const auto& a : w) {
        if (!lead) out << ' ';
        lead = false;
        switch (a.kind) {
          case Atom::Kind::Var: out << a.name; break;
          case Atom::Kind::InvVar: out << a.name << "^-1"; break;
          case Atom::Kind::Const: out << "c:" << constants_in.label(a.constant); break;
        }
      }
    };
    word(eq.lhs, true);
    out << " = ";
    word(eq.rhs, true);
    out << "\n";
  }
  return out.str();
}

Digraph digraph_from_json(const json& j) {
  try {
    Digraph d;
    for (const auto& v : j.at("vertices"))
      d.vertices.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    auto vertex_id = [&](const json& v) {
      const std::string label = v.is_string() ? v.get<std::string>() : v.dump();
      for (size_t i = 0; i < d.vertices.size(); ++i)
        if (d.vertices[i] == label) return static_cast<int>(i);
      bad("unknown vertex " + label);
    };
    for (const auto& e : j.at("edges")) {
      if (e.size() != 2) bad("edge must be a pair");
      d.edges.emplace_back(vertex_id(e[0]), vertex_id(e[1]));
    }
    return d;
  } catch (const json::exception& e) {
    bad(std::string("digraph: ") + e.what());
  }
}

json digraph_to_json(const Digraph& d) {
  json j;
  j["vertices"] = d.vertices;
  json edges = json::array();
  for (auto [u, v] : d.edges) edges.push_back({d.vertices[u], d.vertices[v]});
  j["edges"] = std::move(edges);
  return j;
}

SigmaPlusStructure sigma_plus_from_json(const json& j) {
  try {
    Digraph d = digraph_from_json(j);
    SigmaPlusStructure s;
    s.vertices = d.vertices;
    s.edges = d.edges;
    auto vertex_id = [&](const json& v) {
      const std::string label = v.is_string() ? v.get<std::string>() : v.dump();
      for (size_t i = 0; i < s.vertices.size(); ++i)
        if (s.vertices[i] == label) return static_cast<int>(i);
      bad("unknown vertex " + label);
    };
    for (const auto& v : j.value("P", json::array())) s.p_marks.push_back(vertex_id(v));
    for (const auto& v : j.value("Q", json::array())) s.q_marks.push_back(vertex_id(v));
    return s;
  } catch (const json::exception& e) {
    bad(std::string("sigma-plus structure: ") + e.what());
  }
}

json sigma_plus_to_json(const SigmaPlusStructure& s) {
  json j;
  j["vertices"] = s.vertices;
  json edges = json::array();
  for (auto [u, v] : s.edges) edges.push_back({s.vertices[u], s.vertices[v]});
  j["edges"] = std::move(edges);
  json p = json::array(), q = json::array();
  for (int v : s.p_marks) p.push_back(s.vertices[v]);
  for (int v : s.q_marks) q.push_back(s.vertices[v]);
  j["P"] = std::move(p);
  j["Q"] = std::move(q);
  return j;
}

json classification_to_json(const ClassificationResult& r, const PLinTemplate& t) {
  json j;
  switch (r.verdict) {
    case Verdict::Tractable: j["verdict"] = "tractable"; break;
    case Verdict::NPHard: j["verdict"] = "np_hard"; break;
    case Verdict::IllFormedTemplate: j["verdict"] = "ill_formed_template"; break;
  }
  if (r.verdict == Verdict::Tractable) {
    j["algorithm"] = r.algorithm_note == AlgorithmNote::Aip ? "aip" : "blp_aip";
    json w = json::object();
    for (int x = 0; x < t.s1->size(); ++x)
      w[t.s1->label(x)] = t.s2->label(r.witness->map[x]);
    j["witness"] = std::move(w);
  }
  if (r.verdict == Verdict::NPHard) {
    json obs = json::array();
    for (const auto& o : r.obstructions) {
      json jo;
      json m = json::object();
      for (int x = 0; x < t.s1->size(); ++x)
        m[t.s1->label(x)] = t.s2->label(o.psi.map[x]);
      jo["psi"] = std::move(m);
      jo["reason"] = o.reason == ObstructionReason::NonAbelianImage
                         ? "non_abelian_image"
                         : "non_regular_image_element";
      if (o.element >= 0) jo["element"] = t.s2->label(o.element);
      obs.push_back(std::move(jo));
    }
    j["obstructions"] = std::move(obs);
    j["obstructions_truncated"] = r.obstructions_truncated;
  }
  return j;
}

json assignment_to_json(const Assignment& a, const EquationSystem& sys,
                        const Algebra& over) {
  json j = json::object();
  for (int x = 0; x < sys.num_vars(); ++x) j[sys.variables[x]] = over.label(a[x]);
  return j;
}

Assignment assignment_from_json(const json& j, const EquationSystem& sys,
                                const Algebra& over) {
  Assignment a(sys.num_vars(), -1);
  for (const auto& [k, v] : j.items()) {
    const int x = sys.var_id(k);
    if (x < 0) bad("assignment names unknown variable " + k);
    a[x] = element_index(over, v);
  }
  for (int x = 0; x < sys.num_vars(); ++x)
    if (a[x] < 0) bad("assignment misses variable " + sys.variables[x]);
  return a;
}

json solve_report_to_json(const SolveReport& r, const EquationSystem& sys,
                          const Algebra& s2) {
  json j;
  j["solved"] = r.solved;
  j["decisions_used"] = r.decisions_used;
  switch (r.path) {
    case SolvePath::BlpAipSelfReduce: j["path"] = "blp_aip_selfreduce"; break;
    case SolvePath::AipGroupDirect: j["path"] = "aip_group_direct"; break;
    case SolvePath::BruteForce: j["path"] = "brute_force"; break;
  }
  if (r.solved)
    j["assignment"] = assignment_to_json(r.assignment, sys, s2);
  else
    j["violated_variable"] =
        r.violated_variable >= 0 ? json(sys.variables[r.violated_variable])
                                 : json(nullptr);
  return j;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    bad(std::string("parse error in ") + path + ": " + e.what());
  }
  return j;
}

}  // namespace promlin
