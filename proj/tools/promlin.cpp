#include <CLI11.hpp>

#include <filesystem>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>

#include "promlin/corpus.hpp"
#include "promlin/homsearch.hpp"
#include "promlin/json_io.hpp"
#include "promlin/minion.hpp"
#include "promlin/reduce.hpp"
#include "promlin/solve.hpp"

using namespace promlin;

namespace {

// exit codes: 0 success/tractable, 2 malformed input, 3 NP-hard,
// 4 ill-formed template, 5 refused
constexpr int kExitOk = 0, kExitMalformed = 2, kExitNPHard = 3,
              kExitIllFormed = 4, kExitRefused = 5;

std::uint64_t corpus_seed(std::uint64_t from_flag) {
  if (const char* env = std::getenv("PROMLIN_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      fail(ErrorCode::MalformedInput, "PROMLIN_SEED must be an integer");
    }
  }
  return from_flag;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::MalformedInput, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PLinTemplate load_template(const std::string& m1_path, const std::string& m2_path,
                           const std::string& phi_path) {
  AlgebraPtr m1 = algebra_from_json(load_json_file(m1_path));
  AlgebraPtr m2 = algebra_from_json(load_json_file(m2_path));
  PartialHom phi = partial_hom_from_json(load_json_file(phi_path), m1, m2);
  return make_plin_template(std::move(m1), std::move(m2), std::move(phi));
}

int cmd_classify(const std::string& m1, const std::string& m2,
                 const std::string& phi, bool as_group, std::size_t cap) {
  PLinTemplate t = load_template(m1, m2, phi);
  ClassificationResult res =
      as_group ? classify_group_template(t, cap) : classify_monoid_template(t, cap);
  std::cout << classification_to_json(res, t).dump(2) << "\n";
  switch (res.verdict) {
    case Verdict::Tractable: return kExitOk;
    case Verdict::NPHard: return kExitNPHard;
    case Verdict::IllFormedTemplate: return kExitIllFormed;
  }
  return kExitMalformed;
}

int cmd_solve(const std::string& template_path, const std::string& instance_path,
              const std::string& engine, const std::string& dump_path) {
  PLinTemplate t = template_from_json(load_json_file(template_path));
  EquationSystem sys = system_from_json(load_json_file(instance_path), *t.s1);
  ClassificationResult cls = t.kind() == AlgebraKind::Group
                                 ? classify_group_template(t)
                                 : classify_monoid_template(t);
  if (cls.verdict == Verdict::IllFormedTemplate) {
    std::cerr << "template is ill-formed (no extending homomorphism)\n";
    return kExitIllFormed;
  }
  if (!dump_path.empty()) {
    std::vector<int> all(t.s1->size());
    for (int i = 0; i < t.s1->size(); ++i) all[i] = i;
    auto [a_side, b_side] = plin_structures(t);
    auto relax = build_relaxation(system_to_structure(sys, t.phi.domain), a_side,
                                  RelaxMode::RationalNonnegative);
    std::ofstream out(dump_path);
    dump_relaxation(relax, out);
  }
  if (engine == "brute") {
    auto sol = brute_force_solve(sys, t.s2, [&](int c) { return t.phi.apply(c); });
    SolveReport rep;
    rep.path = SolvePath::BruteForce;
    rep.solved = sol.has_value();
    if (sol) rep.assignment = *sol;
    std::cout << solve_report_to_json(rep, sys, *t.s2).dump(2) << "\n";
    return rep.solved ? kExitOk : kExitRefused;
  }
  if (cls.verdict != Verdict::Tractable) {
    std::cerr << "refused: template not tractable (use --engine brute)\n";
    return kExitRefused;
  }
  const PartialHom& psi = *cls.witness;
  if (engine == "aip") {
    auto [alg, members] = psi.image.as_algebra();
    if (alg->kind() != AlgebraKind::Group || !is_abelian(*alg)) {
      std::cerr << "warning: AIP is not exact for this template; "
                   "the witness image is not an Abelian group\n";
    }
    // solve over the image through the direct group path when possible
    if (alg->kind() == AlgebraKind::Group && is_abelian(*alg)) {
      EquationSystem translated = sys;
      std::vector<int> to_local(t.s2->size(), -1);
      for (size_t i = 0; i < members.size(); ++i)
        to_local[members[i]] = static_cast<int>(i);
      for (auto& eq : translated.equations)
        if (auto* f = std::get_if<FixEq>(&eq))
          f->constant = to_local[psi.apply(f->constant)];
      auto sol = solve_abelian_group_system(alg, translated);
      SolveReport rep;
      rep.path = SolvePath::AipGroupDirect;
      rep.solved = sol.has_value();
      if (sol) {
        rep.assignment.resize(sol->size());
        for (size_t i = 0; i < sol->size(); ++i)
          rep.assignment[i] = members[(*sol)[i]];
      }
      std::cout << solve_report_to_json(rep, sys, *t.s2).dump(2) << "\n";
      return rep.solved ? kExitOk : kExitRefused;
    }
  }
  SolveReport rep = solve_promise(t, sys, psi);
  std::cout << solve_report_to_json(rep, sys, *t.s2).dump(2) << "\n";
  return rep.solved ? kExitOk : kExitRefused;
}

int cmd_check(const std::string& template_path, const std::string& instance_path,
              const std::string& assignment_path) {
  PLinTemplate t = template_from_json(load_json_file(template_path));
  EquationSystem sys = system_from_json(load_json_file(instance_path), *t.s1);
  Assignment asg = assignment_from_json(load_json_file(assignment_path), sys, *t.s2);
  const bool ok = check_promise_solution(t, sys, asg);
  std::cout << (ok ? "{\"valid\": true}" : "{\"valid\": false}") << "\n";
  return ok ? kExitOk : 1;
}

int cmd_verify_all(int max_size, std::uint64_t budget);

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tractability, solving, and reductions for promise equation "
               "templates over finite monoids and groups"};
  app.require_subcommand(1);

  std::string m1, m2, phi, template_path, instance_path, assignment_path;
  std::string engine = "blp-aip";
  std::string dump_path, out_dir, monoid_path, target_label, input_path;
  bool as_group = false;
  std::size_t cap = 64;
  std::uint64_t seed = 7, budget = 1u << 22;
  int arity = 2, max_size = 4, max_arity = 3;

  auto* classify_cmd = app.add_subcommand("classify", "decide tractability");
  classify_cmd->add_option("--m1", m1)->required();
  classify_cmd->add_option("--m2", m2)->required();
  classify_cmd->add_option("--phi", phi)->required();
  classify_cmd->add_flag("--group", as_group, "use the group specialization");
  classify_cmd->add_option("--obstruction-cap", cap);

  auto* solve_cmd = app.add_subcommand("solve", "solve an instance");
  solve_cmd->add_option("--template", template_path)->required();
  solve_cmd->add_option("--instance", instance_path)->required();
  solve_cmd->add_option("--engine", engine)
      ->check(CLI::IsMember({"blp-aip", "aip", "brute"}));
  solve_cmd->add_option("--dump-relaxation", dump_path);

  auto* check_cmd = app.add_subcommand("check", "verify an assignment");
  check_cmd->add_option("--template", template_path)->required();
  check_cmd->add_option("--instance", instance_path)->required();
  check_cmd->add_option("--assignment", assignment_path)->required();

  auto* minion_cmd = app.add_subcommand("minion", "minion utilities");
  minion_cmd->require_subcommand(1);
  auto* men = minion_cmd->add_subcommand("enumerate", "list elements");
  men->add_option("--monoid", monoid_path)->required();
  men->add_option("--target", target_label)->required();
  men->add_option("--arity", arity)->required();
  men->add_option("--budget", budget);
  auto* mrel = minion_cmd->add_subcommand("relevant", "relevant coordinates");
  std::string tuple_csv;
  mrel->add_option("--monoid", monoid_path)->required();
  mrel->add_option("--target", target_label)->required();
  mrel->add_option("--tuple", tuple_csv, "comma-separated element labels")
      ->required();
  auto* mminor = minion_cmd->add_subcommand("minor", "apply a coordinate map");
  std::string pi_csv;
  int minor_m = 1;
  mminor->add_option("--monoid", monoid_path)->required();
  mminor->add_option("--target", target_label)->required();
  mminor->add_option("--tuple", tuple_csv)->required();
  mminor->add_option("--pi", pi_csv, "comma-separated 0-based targets")->required();
  mminor->add_option("--m", minor_m)->required();
  auto* mfree = minion_cmd->add_subcommand("free-structure", "emit the template");
  mfree->add_option("--monoid", monoid_path)->required();
  mfree->add_option("--target", target_label)->required();
  auto* mver = minion_cmd->add_subcommand("verify", "selection condition");
  mver->add_option("--monoid", monoid_path)->required();
  mver->add_option("--target", target_label)->required();
  mver->add_option("--max-arity", max_arity);
  mver->add_option("--budget", budget);

  auto* reduce_cmd = app.add_subcommand("reduce", "digraph reductions");
  reduce_cmd->require_subcommand(1);
  auto* r2e = reduce_cmd->add_subcommand("digraph-to-eq", "translate an instance");
  r2e->add_option("--input", input_path)->required();
  auto* e2d = reduce_cmd->add_subcommand("eq-to-digraph", "rewrite a system");
  e2d->add_option("--input", input_path)->required();
  auto* rrt = reduce_cmd->add_subcommand("roundtrip", "translate and rewrite back");
  rrt->add_option("--input", input_path)->required();

  auto* corpus_cmd = app.add_subcommand("corpus", "fixtures");
  corpus_cmd->require_subcommand(1);
  auto* cgen = corpus_cmd->add_subcommand("generate", "write fixture files");
  cgen->add_option("--seed", seed);
  cgen->add_option("--out", out_dir)->required();
  cgen->add_option("--max-size", max_size);

  auto* verify_cmd = app.add_subcommand("verify", "property suites");
  verify_cmd->require_subcommand(1);
  auto* vall = verify_cmd->add_subcommand("all", "run every suite");
  vall->add_option("--max-size", max_size);
  vall->add_option("--budget", budget);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*classify_cmd) return cmd_classify(m1, m2, phi, as_group, cap);
    if (*solve_cmd) return cmd_solve(template_path, instance_path, engine, dump_path);
    if (*check_cmd) return cmd_check(template_path, instance_path, assignment_path);

    if (*minion_cmd) {
      AlgebraPtr m = algebra_from_json(load_json_file(monoid_path));
      auto target = m->index_of(target_label);
      require(target.has_value(), ErrorCode::MalformedInput,
              "unknown target label " + target_label);
      auto parse_csv = [&](const std::string& csv, bool labels) {
        std::vector<int> out;
        std::istringstream ss(csv);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
          if (labels) {
            auto idx = m->index_of(tok);
            require(idx.has_value(), ErrorCode::MalformedInput,
                    "unknown element " + tok);
            out.push_back(*idx);
          } else {
            out.push_back(std::stoi(tok));
          }
        }
        return out;
      };
      if (*men) {
        json arr = json::array();
        for (const auto& b : enumerate_minion(m, *target, arity, budget)) {
          json tup = json::array();
          for (int v : b.entries) tup.push_back(m->label(v));
          arr.push_back(std::move(tup));
        }
        std::cout << arr.dump(2) << "\n";
        return kExitOk;
      }
      if (*mrel) {
        auto b = make_minion_element(m, *target, parse_csv(tuple_csv, true));
        std::cout << json(relevant_coordinates(b)).dump() << "\n";
        return kExitOk;
      }
      if (*mminor) {
        auto b = make_minion_element(m, *target, parse_csv(tuple_csv, true));
        auto c = minor(b, parse_csv(pi_csv, false), minor_m);
        json tup = json::array();
        for (int v : c.entries) tup.push_back(m->label(v));
        std::cout << tup.dump() << "\n";
        return kExitOk;
      }
      if (*mfree) {
        auto fs = free_structure_template(m, *target);
        json j;
        j["universe"] = json::array();
        for (auto [x, y] : fs.b_universe)
          j["universe"].push_back({m->label(x), m->label(y)});
        json triples = json::array();
        for (const auto& t : fs.b.relations[0].tuples) triples.push_back(t);
        j["R"] = std::move(triples);
        j["C0"] = fs.b.relations[1].tuples[0][0];
        j["C1"] = fs.b.relations[2].tuples[0][0];
        std::cout << j.dump(2) << "\n";
        return kExitOk;
      }
      if (*mver) {
        auto rep = verify_selection_condition(m, *target, max_arity, budget);
        json j;
        j["passed"] = rep.passed;
        j["elements_checked"] = rep.elements_checked;
        j["minors_checked"] = rep.minors_checked;
        if (!rep.passed) j["violation"] = rep.violation;
        std::cout << j.dump(2) << "\n";
        return rep.passed ? kExitOk : 1;
      }
    }

    if (*reduce_cmd) {
      if (*r2e) {
        auto inst = sigma_plus_from_json(load_json_file(input_path));
        std::cout << general_system_to_text(phi_system(inst), *canonical_SW());
        return kExitOk;
      }
      if (*e2d) {
        auto gen = general_system_from_text(read_file(input_path), *canonical_SW());
        auto sw = canonical_SW();
        std::vector<int> all(sw->size());
        for (int i = 0; i < sw->size(); ++i) all[i] = i;
        auto t = make_subalgebra(sw, all, SubKind::Subsemigroup);
        auto norm = normalize(gen, t, AlgebraKind::Semigroup);
        auto res = psi(norm.system);
        json j;
        if (res.rejected) {
          j["outcome"] = "reject";
        } else {
          j["outcome"] = "structure";
          j["structure"] = sigma_plus_to_json(*res.structure);
        }
        json passes = json::array();
        for (const auto& p : res.passes)
          passes.push_back({{"name", p.name}, {"touched", p.notes.size()}});
        j["passes"] = std::move(passes);
        std::cout << j.dump(2) << "\n";
        return kExitOk;
      }
      if (*rrt) {
        auto inst = sigma_plus_from_json(load_json_file(input_path));
        auto sw = canonical_SW();
        std::vector<int> all(sw->size());
        for (int i = 0; i < sw->size(); ++i) all[i] = i;
        auto t = make_subalgebra(sw, all, SubKind::Subsemigroup);
        auto norm = normalize(phi_system(inst), t, AlgebraKind::Semigroup);
        auto res = psi(norm.system);
        json j;
        j["rejected"] = res.rejected;
        if (!res.rejected) {
          j["structure"] = sigma_plus_to_json(*res.structure);
          const bool fwd = hom_exists(sigma_plus_to_structure(inst),
                                      sigma_plus_to_structure(*res.structure));
          const bool bwd = hom_exists(sigma_plus_to_structure(*res.structure),
                                      sigma_plus_to_structure(inst));
          j["hom_equivalent"] = fwd && bwd;
        }
        std::cout << j.dump(2) << "\n";
        return kExitOk;
      }
    }

    if (*corpus_cmd && *cgen) {
      CorpusSpec spec;
      spec.seed = corpus_seed(seed);
      spec.max_size = max_size;
      auto entries = generate_corpus(spec);
      std::error_code ec;
      std::filesystem::create_directories(out_dir, ec);
      json index = json::array();
      for (const auto& e : entries) {
        const std::string file = e.name + ".json";
        std::ofstream out(out_dir + "/" + file);
        out << algebra_to_json(*e.algebra).dump(2) << "\n";
        index.push_back({{"name", e.name}, {"file", file}});
      }
      std::ofstream out(out_dir + "/index.json");
      out << index.dump(2) << "\n";
      std::cout << "{\"written\": " << entries.size() << "}\n";
      return kExitOk;
    }

    if (*verify_cmd && *vall) return cmd_verify_all(max_size, budget);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMalformed;
  }
  return kExitMalformed;
}

namespace {

int cmd_verify_all(int max_size, std::uint64_t budget) {
  struct Row {
    std::string name;
    bool pass;
  };
  std::vector<Row> rows;
  auto run = [&](const std::string& name, auto&& fn) {
    bool ok = false;
    try {
      ok = fn();
    } catch (const std::exception& e) {
      std::cerr << name << " raised: " << e.what() << "\n";
      ok = false;
    }
    rows.push_back({name, ok});
  };

  run("regularity-equivalence", [&] {
    for (const auto& e : corpus_monoids(std::min(max_size * 2, 8)))
      for (int s = 0; s < e.algebra->size(); ++s) {
        auto w = regularity_witnesses(e.algebra, s);
        if (!(w.all_present() || w.all_absent())) return false;
        if (w.all_present() != is_regular(*e.algebra, s)) return false;
      }
    return true;
  });

  run("commuting-divisor-monotonicity", [&] {
    for (const auto& e : corpus_monoids(std::min(max_size * 2, 8))) {
      const auto& m = *e.algebra;
      for (int a = 0; a < m.size(); ++a)
        for (int b = 0; b < m.size(); ++b)
          for (int c = 0; c < m.size(); ++c) {
            if (m.product(a, b) != m.product(b, a) ||
                m.product(a, c) != m.product(c, a) ||
                m.product(b, c) != m.product(c, b))
              continue;
            const int ab = m.product(a, b);
            if (ab_strict(m, m.product(ab, c), ab) &&
                !ab_strict(m, m.product(a, c), a))
              return false;
          }
    }
    return true;
  });

  run("relevant-coordinate-bounds", [&] {
    auto m3 = m3_monoid();
    auto rep = verify_selection_condition(m3, *m3->index_of("1"), 4, budget);
    auto t4 = aperiodic_monoid(4);
    auto rep4 = verify_selection_condition(t4, *t4->index_of("a1"), 3, budget);
    return rep.passed && rep4.passed;
  });

  run("minion-minor-axioms", [&] {
    auto m3 = m3_monoid();
    for (int a = 0; a < m3->size(); ++a)
      for (int n = 1; n <= 3; ++n)
        for (const auto& b : enumerate_minion(m3, a, n, budget)) {
          std::vector<int> id(n);
          for (int i = 0; i < n; ++i) id[i] = i;
          if (minor(b, id, n).entries != b.entries) return false;
        }
    return true;
  });

  run("free-structure-bijection", [&] {
    auto m3 = m3_monoid();
    auto z2 = cyclic_group(2);
    return verify_xi_bijection(m3, *m3->index_of("1"), 3, budget).ok &&
           verify_xi_bijection(z2, 1, 3, budget).ok;
  });

  run("block-symmetric-existence", [&] {
    for (const auto& e : corpus_monoids(std::min(max_size * 2, 8)))
      for (int a = 0; a < e.algebra->size(); ++a) {
        if (!is_regular(*e.algebra, a)) continue;
        for (int n = 1; n <= 3; ++n) {
          auto b = block_symmetric_tuple(e.algebra, a, n);
          if (e.algebra->product_word(b.entries) != a) return false;
        }
      }
    return true;
  });

  run("band-quotient-isomorphism", [&] {
    auto sw_quot = quotient_semilattice(canonical_SW());
    for (auto& [name, d] : corpus_digraphs()) {
      auto sd = build_SD(d);
      if (!is_right_normal_band(*sd.algebra)) return false;
      auto q = quotient_semilattice(sd.algebra);
      if (q.algebra->size() != sw_quot.algebra->size()) return false;
    }
    return true;
  });

  run("roundtrip-digraph-equations", [&] {
    auto corpus = corpus_sigma_instances(3, 6, 7);
    Digraph one_edge{{"0", "1"}, {{0, 1}}};
    auto rep = reduction_equivalence_check(one_edge, one_edge, corpus);
    return rep.all_consistent;
  });

  run("aip-insufficiency", [&] {
    auto z2ext = adjoin_identity(cyclic_group(2));
    return no_alternating_certificate(z2ext, 3, budget);
  });

  bool all = true;
  for (const auto& r : rows) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << "\n";
    all = all && r.pass;
  }
  return all ? kExitOk : 1;
}

}  // namespace
