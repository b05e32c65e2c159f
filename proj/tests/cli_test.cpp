#include <doctest.h>

#include <string>

#include "support.hpp"

using namespace episolve;
using testsupport::fixture_path;
using testsupport::read_file;
using testsupport::run_command;
using testsupport::RunResult;
using testsupport::write_file;

namespace {

std::string cli() { return std::string(EPISOLVE_CLI_PATH); }

Json out_json(const RunResult& r) { return Json::parse(r.out); }

}  // namespace

TEST_CASE("validate: accepted, rejected, and unreadable inputs") {
  RunResult ok = run_command(cli() + " validate " + fixture_path("three_states.json"));
  CHECK(ok.exit_code == 0);
  Json j = out_json(ok);
  CHECK(j["kind"] == "kripke");
  CHECK(j["valid"] == true);

  // Parseable but semantically broken: a vertex outside every facet.
  std::string bad = "/tmp/episolve_cli_invalid.json";
  write_file(bad, R"({
    "kind": "simplicial",
    "agents": ["a0", "a1"],
    "vertices": [{"id": "v0", "color": "a0"}, {"id": "v1", "color": "a1"}],
    "facets": [{"id": "f0", "vertices": ["v0"]}]
  })");
  RunResult invalid = run_command(cli() + " validate " + bad);
  CHECK(invalid.exit_code == 1);
  Json ji = out_json(invalid);
  CHECK(ji["valid"] == false);
  CHECK(!ji["errors"].empty());

  std::string garbage = "/tmp/episolve_cli_garbage.json";
  write_file(garbage, "not json at all");
  CHECK(run_command(cli() + " validate " + garbage).exit_code == 2);
  CHECK(run_command(cli() + " validate /tmp/episolve_no_such_file.json").exit_code == 2);
}

TEST_CASE("validate checks task carriers") {
  RunResult ok = run_command(cli() + " validate " + fixture_path("consensus.json"));
  CHECK(ok.exit_code == 0);

  std::string broken = "/tmp/episolve_cli_badtask.json";
  Json t = Json::parse(read_file(fixture_path("consensus.json")));
  t["delta"]["e2"] = Json::array();  // nothing permitted for e2
  write_file(broken, t.dump());
  RunResult invalid = run_command(cli() + " validate " + broken);
  CHECK(invalid.exit_code == 1);
  CHECK(out_json(invalid)["valid"] == false);
}

TEST_CASE("check evaluates formulas at states") {
  RunResult t = run_command(cli() + " check " + fixture_path("three_states.json") +
                            " --state alpha --formula \"K a0 !l1\"");
  CHECK(t.exit_code == 0);
  Json j = out_json(t);
  CHECK(j["value"] == true);
  CHECK(j["state"] == "alpha");

  RunResult f = run_command(cli() + " check " + fixture_path("three_states.json") +
                            " --state alpha --formula \"K a0 l0\"");
  CHECK(f.exit_code == 1);
  CHECK(out_json(f)["value"] == false);

  // Simplicial inputs are interpreted through their facet states.
  RunResult s = run_command(cli() + " check " + fixture_path("square.json") +
                            " --state e1 --formula \"K a0 !l0\"");
  CHECK(s.exit_code == 0);

  // Action bindings resolve [name] against --action files.
  RunResult u = run_command(cli() + " check " + fixture_path("three_states.json") +
                            " --state alpha --formula \"[iis] true\" --action " +
                            fixture_path("iis2.json"));
  CHECK(u.exit_code == 0);

  RunResult cc = run_command(cli() + " check " + fixture_path("three_states.json") +
                             " --state alpha --formula \"C {a0,a1} true\" --cross-check");
  CHECK(cc.exit_code == 0);

  CHECK(run_command(cli() + " check " + fixture_path("three_states.json") +
                    " --state nowhere --formula \"l0\"")
            .exit_code == 2);
  CHECK(run_command(cli() + " check " + fixture_path("three_states.json") +
                    " --state alpha --formula \"K\"")
            .exit_code == 2);
}

TEST_CASE("solve reports verdicts and writes witnesses") {
  RunResult strict = run_command(cli() + " solve " + fixture_path("consensus.json") +
                                 " --rounds 1");
  CHECK(strict.exit_code == 1);
  Json js = out_json(strict);
  CHECK(js["verdict"] == "Unsolvable");
  CHECK(js["solvable"] == false);
  CHECK(js["rounds"] == 1);
  CHECK(js["stats"]["nodes"].get<std::uint64_t>() > 0);

  std::string wpath = "/tmp/episolve_cli_witness.json";
  RunResult relaxed = run_command(cli() + " solve " + fixture_path("pseudo_consensus.json") +
                                  " --rounds 1 --witness " + wpath);
  CHECK(relaxed.exit_code == 0);
  Json jr = out_json(relaxed);
  CHECK(jr["verdict"] == "Solvable");
  CHECK(jr["decisions"].is_object());
  Json w = Json::parse(read_file(wpath));
  CHECK(w["map"].is_object());
  CHECK(w["decisions"].is_object());
  CHECK(w["map"].size() == 12);  // one entry per subdivision vertex

  RunResult seeded = run_command(cli() + " solve " + fixture_path("pseudo_consensus.json") +
                                 " --rounds 1 --seed 42");
  CHECK(seeded.exit_code == 0);
}

TEST_CASE("obstruct certifies or abstains") {
  RunResult strict = run_command(cli() + " obstruct " + fixture_path("consensus.json") +
                                 " --rounds 1");
  CHECK(strict.exit_code == 1);
  Json js = out_json(strict);
  CHECK(js["status"] == "OBSTRUCTED");
  CHECK(js["h1_rank_pi"] == 1);
  CHECK(js["betti1_delta"] == 0);

  RunResult relaxed = run_command(cli() + " obstruct " + fixture_path("pseudo_consensus.json") +
                                  " --rounds 1");
  CHECK(relaxed.exit_code == 0);
  CHECK(out_json(relaxed)["status"] == "INCONCLUSIVE");
}

TEST_CASE("betti and components stay consistent with the library") {
  RunResult b = run_command(cli() + " betti " + fixture_path("square.json"));
  CHECK(b.exit_code == 0);
  Json jb = out_json(b);
  CHECK(jb["b0"] == 1);
  CHECK(jb["b1"] == 1);

  RunResult c = run_command(cli() + " components " + fixture_path("square.json"));
  CHECK(c.exit_code == 0);
  CHECK(out_json(c)["count"] == 1);

  RunResult ca = run_command(cli() + " components " + fixture_path("square.json") +
                             " --agents a0");
  CHECK(ca.exit_code == 0);
  Json jc = out_json(ca);
  CHECK(jc["count"] == 2);
  CHECK(jc["components"].size() == 2);

  RunResult ck = run_command(cli() + " components " + fixture_path("three_states.json") +
                             " --agents a0");
  CHECK(out_json(ck)["count"] == 2);
}

TEST_CASE("protocol emits the subdivision and its projection") {
  std::string ppath = "/tmp/episolve_cli_protocol.json";
  std::string pipath = "/tmp/episolve_cli_pi.json";
  RunResult r = run_command(cli() + " protocol " + fixture_path("square.json") +
                            " --rounds 1 -o " + ppath + " --pi " + pipath);
  CHECK(r.exit_code == 0);
  ModelFile mf = read_model_file(ppath);
  const auto& sm = std::get<SimplicialModel>(mf.value);
  CHECK(sm.complex.n_facets() == 12);
  Json pi = Json::parse(read_file(pipath));
  CHECK(pi["map"].size() == 12);
  // Projection values name input vertices.
  for (const auto& [from, to] : pi["map"].items())
    CHECK(contains(std::vector<std::string>{"v00", "v01", "v10", "v11"},
                   to.get<std::string>()));
}

TEST_CASE("convert moves between the two model kinds") {
  std::string spath = "/tmp/episolve_cli_converted_s.json";
  RunResult to_s = run_command(cli() + " convert " + fixture_path("three_states.json") +
                               " --to simplicial -o " + spath);
  CHECK(to_s.exit_code == 0);
  const auto& sm = std::get<SimplicialModel>(read_model_file(spath).value);
  CHECK(sm.complex.n_facets() == 3);
  CHECK(sm.complex.n_vertices() == 4);

  std::string kpath = "/tmp/episolve_cli_converted_k.json";
  RunResult to_k = run_command(cli() + " convert " + fixture_path("square.json") +
                               " --to kripke -o " + kpath);
  CHECK(to_k.exit_code == 0);
  const auto& km = std::get<KripkeModel>(read_model_file(kpath).value);
  CHECK(km.frame.n_states() == 4);

  // Improper models cannot cross to the simplicial side.
  std::string improper = "/tmp/episolve_cli_improper.json";
  write_file(improper, R"({
    "kind": "kripke",
    "agents": ["a0", "a1"],
    "states": ["x", "y"],
    "relations": {"a0": [["x", "y"]], "a1": [["x", "y"]]}
  })");
  CHECK(run_command(cli() + " convert " + improper + " --to simplicial").exit_code == 2);
}

TEST_CASE("update applies an action model") {
  std::string opath = "/tmp/episolve_cli_updated.json";
  std::string prpath = "/tmp/episolve_cli_projection.json";
  RunResult r = run_command(cli() + " update " + fixture_path("three_states.json") + " " +
                            fixture_path("iis2.json") + " -o " + opath + " --projection " +
                            prpath);
  CHECK(r.exit_code == 0);
  const auto& km = std::get<KripkeModel>(read_model_file(opath).value);
  CHECK(km.frame.n_states() == 9);
  Json pr = Json::parse(read_file(prpath));
  CHECK(pr["map"].size() == 9);
  CHECK(pr["map"]["(alpha,a0+a1)"] == "alpha");
}

TEST_CASE("export-dot renders graphs to stdout or a file") {
  RunResult k = run_command(cli() + " export-dot " + fixture_path("three_states.json"));
  CHECK(k.exit_code == 0);
  CHECK(k.out.find("graph kripke {") == 0);

  RunResult s = run_command(cli() + " export-dot " + fixture_path("square.json"));
  CHECK(s.out.find("graph simplicial {") == 0);

  RunResult a = run_command(cli() + " export-dot " + fixture_path("iis2.json"));
  CHECK(a.out.find("graph action {") == 0);
}

TEST_CASE("the canon switch renames emitted ids positionally") {
  RunResult r = run_command("EPISOLVE_CANON=1 " + cli() + " protocol " +
                            fixture_path("square.json") + " --rounds 1");
  CHECK(r.exit_code == 0);
  Json j = out_json(r);
  CHECK(j["vertices"][0]["id"] == "v000");
  CHECK(j["facets"][0]["id"] == "f000");

  RunResult plain = run_command(cli() + " protocol " + fixture_path("square.json") +
                                " --rounds 1");
  CHECK(Json::parse(plain.out)["vertices"][0]["id"] == "r1_v000000");
}

TEST_CASE("bad invocations exit with 2") {
  CHECK(run_command(cli() + " frobnicate").exit_code == 2);
  CHECK(run_command(cli()).exit_code == 2);
  CHECK(run_command(cli() + " check " + fixture_path("three_states.json")).exit_code == 2);
  CHECK(run_command(cli() + " convert " + fixture_path("square.json") + " --to nonsense")
            .exit_code == 2);
  CHECK(run_command(cli() + " update " + fixture_path("three_states.json") + " " +
                    fixture_path("square.json"))
            .exit_code == 2);
}

TEST_CASE("help is reachable") {
  CHECK(run_command(cli() + " --help").exit_code == 0);
  CHECK(run_command(cli() + " solve --help").exit_code == 0);
}
