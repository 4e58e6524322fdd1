#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "promlin/json_io.hpp"

using namespace promlin;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* cli_path() {
  const char* p = std::getenv("PROMLIN_CLI");
  REQUIRE(p != nullptr);
  return p;
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path();
  const fs::path out = dir / ("cli_out_" + std::to_string(counter) + ".txt");
  const fs::path err = dir / ("cli_err_" + std::to_string(counter) + ".txt");
  ++counter;
  const std::string cmd = std::string(cli_path()) + " " + args + " > " +
                          out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(status);
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

fs::path write_json(const std::string& name, const json& j) {
  const fs::path p = fs::temp_directory_path() / name;
  std::ofstream out(p);
  out << j.dump(2) << "\n";
  return p;
}

}  // namespace

TEST_CASE("classify exit codes over the dihedral fixtures") {
  auto ex = fixtures::dihedral_example();
  auto m1 = write_json("cli_d4.json", algebra_to_json(*ex.d4));
  auto m2 = write_json("cli_s4.json", algebra_to_json(*ex.s4));
  auto p1 = write_json("cli_phi1.json", partial_hom_to_json(ex.phi1.phi));
  auto p2 = write_json("cli_phi2.json", partial_hom_to_json(ex.phi2.phi));

  auto r1 = run_cli("classify --m1 " + m1.string() + " --m2 " + m2.string() +
                    " --phi " + p1.string() + " --group");
  CHECK(r1.exit_code == 0);
  CHECK(json::parse(r1.out).at("verdict") == "tractable");
  CHECK(json::parse(r1.out).at("algorithm") == "aip");

  auto r2 = run_cli("classify --m1 " + m1.string() + " --m2 " + m2.string() +
                    " --phi " + p2.string());
  CHECK(r2.exit_code == 3);
  CHECK(json::parse(r2.out).at("verdict") == "np_hard");

  // byte stability
  auto r1b = run_cli("classify --m1 " + m1.string() + " --m2 " + m2.string() +
                     " --phi " + p1.string() + " --group");
  CHECK(r1.out == r1b.out);
}

TEST_CASE("ill-formed templates exit 4") {
  auto z4 = cyclic_group(4);
  auto z2 = cyclic_group(2);
  auto m1 = write_json("cli_z4.json", algebra_to_json(*z4));
  auto m2 = write_json("cli_z2b.json", algebra_to_json(*z2));
  json phi;
  phi["domain"] = {0, 2};
  phi["map"] = {{"0", 0}, {"2", 1}};
  auto pf = write_json("cli_phi_illformed.json", phi);
  auto r = run_cli("classify --m1 " + m1.string() + " --m2 " + m2.string() +
                   " --phi " + pf.string());
  CHECK(r.exit_code == 4);
  CHECK(json::parse(r.out).at("verdict") == "ill_formed_template");
}

TEST_CASE("malformed input exits 2") {
  const fs::path p = fs::temp_directory_path() / "cli_trunc.json";
  std::ofstream(p) << "{\"kind\": \"group\", \"elements\": [\"e\"";
  auto r = run_cli("classify --m1 " + p.string() + " --m2 " + p.string() +
                   " --phi " + p.string());
  CHECK(r.exit_code == 2);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("solve and check") {
  auto z2 = cyclic_group(2);
  auto t = fixtures::identity_template(z2);
  auto tf = write_json("cli_tpl_z2.json", template_to_json(t));
  json inst;
  inst["variables"] = {"x", "y", "z"};
  inst["equations"] = json::array();
  inst["equations"].push_back({{"mul", {"x", "y", "z"}}});
  inst["equations"].push_back({{"fix", {"x", "1"}}});
  inst["equations"].push_back({{"fix", {"z", "1"}}});
  auto insf = write_json("cli_inst_z2.json", inst);

  const fs::path dumpf = fs::temp_directory_path() / "cli_relax_dump.txt";
  auto r = run_cli("solve --template " + tf.string() + " --instance " +
                   insf.string() + " --dump-relaxation " + dumpf.string());
  CHECK(r.exit_code == 0);
  auto rep = json::parse(r.out);
  CHECK(rep.at("solved") == true);
  CHECK(rep.at("assignment").at("y") == "0");
  CHECK(slurp(dumpf).find("% relaxation") == 0);

  auto asgf = write_json("cli_asg_z2.json", rep.at("assignment"));
  auto rc = run_cli("check --template " + tf.string() + " --instance " +
                    insf.string() + " --assignment " + asgf.string());
  CHECK(rc.exit_code == 0);

  // a deliberately wrong assignment fails the check
  json bad = rep.at("assignment");
  bad["y"] = "1";
  auto badf = write_json("cli_bad_asg.json", bad);
  auto rb = run_cli("check --template " + tf.string() + " --instance " +
                    insf.string() + " --assignment " + badf.string());
  CHECK(rb.exit_code != 0);
}

TEST_CASE("solving an NP-hard template is refused without brute force") {
  auto s3 = symmetric_group(3);
  auto t = fixtures::identity_template(s3);
  auto tf = write_json("cli_tpl_s3.json", template_to_json(t));
  json inst;
  inst["variables"] = {"x"};
  inst["equations"] = json::array();
  inst["equations"].push_back({{"fix", {"x", "012"}}});
  auto insf = write_json("cli_inst_s3.json", inst);
  auto r = run_cli("solve --template " + tf.string() + " --instance " +
                   insf.string());
  CHECK(r.exit_code == 5);
  CHECK(r.err.find("refused") != std::string::npos);
  auto rb = run_cli("solve --template " + tf.string() + " --instance " +
                    insf.string() + " --engine brute");
  CHECK(rb.exit_code == 0);
}

TEST_CASE("aip engine warns on the adjoined-identity template") {
  auto z2ext = adjoin_identity(cyclic_group(2));
  auto t = fixtures::identity_template(z2ext);
  auto tf = write_json("cli_tpl_z2ext.json", template_to_json(t));
  json inst;
  inst["variables"] = {"x"};
  inst["equations"] = json::array();
  inst["equations"].push_back({{"fix", {"x", "1"}}});
  auto insf = write_json("cli_inst_z2ext.json", inst);
  auto r = run_cli("solve --template " + tf.string() + " --instance " +
                   insf.string() + " --engine aip");
  CHECK(r.exit_code == 0);
  CHECK(r.err.find("not exact") != std::string::npos);
}

TEST_CASE("minion subcommands") {
  auto m3 = m3_monoid();
  auto mf = write_json("cli_m3.json", algebra_to_json(*m3));
  auto r = run_cli("minion free-structure --monoid " + mf.string() +
                   " --target 1");
  CHECK(r.exit_code == 0);
  auto j = json::parse(r.out);
  CHECK(j.at("universe").size() == 2);

  auto re = run_cli("minion enumerate --monoid " + mf.string() +
                    " --target 1 --arity 2");
  CHECK(re.exit_code == 0);
  CHECK(json::parse(re.out).size() == 2);

  auto rr = run_cli("minion relevant --monoid " + mf.string() +
                    " --target 1 --tuple 1");
  CHECK(rr.exit_code == 0);
  CHECK(json::parse(rr.out) == json::array({0}));

  auto rv = run_cli("minion verify --monoid " + mf.string() +
                    " --target 1 --max-arity 3");
  CHECK(rv.exit_code == 0);
  CHECK(json::parse(rv.out).at("passed") == true);
}

TEST_CASE("reduce subcommands") {
  json inst;
  inst["vertices"] = {"a", "b"};
  inst["edges"] = json::array({json::array({"a", "b"})});
  inst["P"] = json::array();
  inst["Q"] = json::array();
  auto f = write_json("cli_sigma.json", inst);

  auto r = run_cli("reduce digraph-to-eq --input " + f.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("a^L") != std::string::npos);
  CHECK(r.out.find("c:p^L") != std::string::npos);

  // the emitted text feeds straight back into the rewriting
  const fs::path sysf = fs::temp_directory_path() / "cli_system.txt";
  std::ofstream(sysf) << r.out;
  auto r2 = run_cli("reduce eq-to-digraph --input " + sysf.string());
  CHECK(r2.exit_code == 0);
  CHECK(json::parse(r2.out).at("outcome") == "structure");

  auto r3 = run_cli("reduce roundtrip --input " + f.string());
  CHECK(r3.exit_code == 0);
  auto j3 = json::parse(r3.out);
  CHECK(j3.at("rejected") == false);
  CHECK(j3.at("hom_equivalent") == true);
}

TEST_CASE("corpus generation is deterministic") {
  const fs::path dir1 = fs::temp_directory_path() / "cli_corpus1";
  const fs::path dir2 = fs::temp_directory_path() / "cli_corpus2";
  fs::remove_all(dir1);
  fs::remove_all(dir2);
  auto r1 = run_cli("corpus generate --seed 7 --out " + dir1.string());
  auto r2 = run_cli("corpus generate --seed 7 --out " + dir2.string());
  CHECK(r1.exit_code == 0);
  CHECK(r2.exit_code == 0);
  CHECK(slurp(dir1 / "index.json") == slurp(dir2 / "index.json"));
  CHECK(slurp(dir1 / "M3.json") == slurp(dir2 / "M3.json"));
  CHECK(json::parse(slurp(dir1 / "M3.json")).at("elements").size() == 3);
}

TEST_CASE("verify all prints a pass matrix") {
  auto r = run_cli("verify all --max-size 3");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("PASS regularity-equivalence") != std::string::npos);
  CHECK(r.out.find("PASS roundtrip-digraph-equations") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
}
