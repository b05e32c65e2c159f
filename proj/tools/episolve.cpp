// Command-line front end: validate/convert model files, run product updates,
// build protocol complexes, evaluate formulas, decide task solvability, and
// compute the homology obstruction.
//
// Exit codes: 0 = success (true / Solvable / INCONCLUSIVE), 1 = negative
// verdict (false / Unsolvable / invalid model / OBSTRUCTED), 2 = error.
// Verdict JSON goes to stdout; warnings and errors go to stderr.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <episolve/episolve.hpp>

namespace {

using episolve::Json;

void print_warnings(const episolve::ValidationReport& report) {
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
}

episolve::ModelFile load(const std::string& path) {
  episolve::ModelFile mf = episolve::read_model_file(path);
  print_warnings(mf.report);
  return mf;
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) episolve::fail(episolve::ErrorCode::kInvalidArgument, "cannot write file: " + out_path);
  out << text;
}

// Emits a model document, canonicalizing ids when EPISOLVE_CANON=1.
Json model_json(const episolve::ModelFile& mf) {
  const bool canon = episolve::canon_env_enabled();
  return std::visit(
      [&](const auto& m) { return episolve::to_json(canon ? episolve::canonicalize_ids(m) : m); },
      mf.value);
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

const episolve::KripkeModel& as_kripke(const episolve::ModelFile& mf, const std::string& cmd) {
  if (!std::holds_alternative<episolve::KripkeModel>(mf.value))
    episolve::fail(episolve::ErrorCode::kInvalidArgument,
                   cmd + " needs a kripke model file, got kind: " + mf.kind);
  return std::get<episolve::KripkeModel>(mf.value);
}

const episolve::TaskSpec& as_task(const episolve::ModelFile& mf, const std::string& cmd) {
  if (!std::holds_alternative<episolve::TaskSpec>(mf.value))
    episolve::fail(episolve::ErrorCode::kInvalidArgument,
                   cmd + " needs a task file, got kind: " + mf.kind);
  return std::get<episolve::TaskSpec>(mf.value);
}

// Accepts a simplicial file directly or transports a kripke file across the
// equivalence (which requires a proper frame).
episolve::SimplicialModel as_simplicial(const episolve::ModelFile& mf) {
  if (std::holds_alternative<episolve::SimplicialModel>(mf.value))
    return std::get<episolve::SimplicialModel>(mf.value);
  if (std::holds_alternative<episolve::KripkeModel>(mf.value))
    return episolve::model_to_simplicial(std::get<episolve::KripkeModel>(mf.value));
  episolve::fail(episolve::ErrorCode::kInvalidArgument,
                 "expected a kripke or simplicial model file, got kind: " + mf.kind);
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_validate(const std::string& path) {
  episolve::ValidationReport report;
  std::string kind = "unknown";
  try {
    episolve::ModelFile mf = episolve::read_model_file(path);
    kind = mf.kind;
    report.merge(mf.report);
    if (const auto* m = std::get_if<episolve::KripkeModel>(&mf.value)) {
      report.merge(episolve::validate_model(*m));
    } else if (const auto* m = std::get_if<episolve::SimplicialModel>(&mf.value)) {
      report.merge(episolve::validate_simplicial_model(*m));
    } else if (const auto* a = std::get_if<episolve::ActionModel>(&mf.value)) {
      report.merge(episolve::validate_action_model(*a));
    } else if (const auto* t = std::get_if<episolve::TaskSpec>(&mf.value)) {
      report.merge(episolve::validate_carrier(*t));
    }
  } catch (const episolve::Error& e) {
    if (e.code == episolve::ErrorCode::kParse) throw;  // unreadable file: exit 2
    report.error(e.what());                            // well-formed but invalid: exit 1
  }
  Json j;
  j["kind"] = kind;
  j["valid"] = report.ok();
  j["errors"] = report.errors;
  j["warnings"] = report.warnings;
  std::cout << j.dump(2) << "\n";
  return report.ok() ? 0 : 1;
}

int cmd_convert(const std::string& path, const std::string& to, const std::string& out_path) {
  episolve::ModelFile mf = load(path);
  episolve::ModelFile converted;
  if (to == "kripke") {
    converted.kind = "kripke";
    if (std::holds_alternative<episolve::KripkeModel>(mf.value))
      converted.value = std::get<episolve::KripkeModel>(mf.value);
    else
      converted.value = episolve::simplicial_to_model(as_simplicial(mf));
  } else if (to == "simplicial") {
    converted.kind = "simplicial";
    converted.value = as_simplicial(mf);
  } else {
    episolve::fail(episolve::ErrorCode::kInvalidArgument, "--to must be kripke or simplicial");
  }
  write_output(episolve::dump_model_file(model_json(converted)), out_path);
  return 0;
}

int cmd_update(const std::string& model_path, const std::string& action_path,
               const std::string& out_path, const std::string& projection_path) {
  episolve::ModelFile mf = load(model_path);
  episolve::ModelFile af = load(action_path);
  const episolve::KripkeModel& m = as_kripke(mf, "update");
  if (!std::holds_alternative<episolve::ActionModel>(af.value))
    episolve::fail(episolve::ErrorCode::kInvalidArgument,
                   "update needs an action file, got kind: " + af.kind);
  const auto& act = std::get<episolve::ActionModel>(af.value);

  episolve::UpdateResult res = episolve::product_update(m, act);
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";

  episolve::ModelFile out;
  out.kind = "kripke";
  out.value = res.model;
  write_output(episolve::dump_model_file(model_json(out)), out_path);

  if (!projection_path.empty()) {
    const bool canon = episolve::canon_env_enabled();
    Json pj;
    Json map = Json::object();
    for (int s = 0; s < res.model.frame.n_states(); ++s) {
      std::string key = res.model.frame.states[static_cast<std::size_t>(s)];
      if (canon) key = episolve::detail::positional_id("s", s, res.model.frame.n_states());
      map[key] = m.frame.states[static_cast<std::size_t>(
          res.projection.map[static_cast<std::size_t>(s)])];
    }
    pj["map"] = std::move(map);
    write_output(pj.dump(2) + "\n", projection_path);
  }
  return 0;
}

int cmd_protocol(const std::string& path, int rounds, const std::string& out_path,
                 const std::string& pi_path) {
  episolve::SimplicialModel input = as_simplicial(load(path));
  episolve::ProtocolResult res = episolve::protocol_complex(input, rounds);

  episolve::ModelFile out;
  out.kind = "simplicial";
  out.value = res.model;
  write_output(episolve::dump_model_file(model_json(out)), out_path);

  if (!pi_path.empty()) {
    const bool canon = episolve::canon_env_enabled();
    Json pj;
    Json map = Json::object();
    for (int v = 0; v < res.model.complex.n_vertices(); ++v) {
      std::string key = res.model.complex.vertex_ids[static_cast<std::size_t>(v)];
      if (canon) key = episolve::detail::positional_id("v", v, res.model.complex.n_vertices());
      map[key] = input.complex.vertex_ids[static_cast<std::size_t>(
          res.pi.map[static_cast<std::size_t>(v)])];
    }
    pj["map"] = std::move(map);
    write_output(pj.dump(2) + "\n", pi_path);
  }
  return 0;
}

int cmd_check(const std::string& path, const std::string& state, const std::string& formula_text,
              const std::vector<std::string>& action_paths, bool cross_check) {
  episolve::ModelFile mf = load(path);
  episolve::KripkeModel m = std::holds_alternative<episolve::SimplicialModel>(mf.value)
                                ? episolve::simplicial_to_model(as_simplicial(mf))
                                : as_kripke(mf, "check");

  episolve::ActionBindings actions;
  for (const auto& ap : action_paths) {
    episolve::ModelFile af = load(ap);
    if (!std::holds_alternative<episolve::ActionModel>(af.value))
      episolve::fail(episolve::ErrorCode::kInvalidArgument,
                     "--action needs an action file, got kind: " + af.kind);
    auto act = std::get<episolve::ActionModel>(af.value);
    actions.emplace(act.name, std::move(act));
  }

  episolve::Formula f = episolve::parse_formula(formula_text);
  episolve::EvalOptions opts;
  opts.cross_check_common = cross_check;
  bool value = episolve::eval(m, state, f, actions, opts);

  Json j;
  j["state"] = state;
  j["formula"] = f.to_string();
  j["value"] = value;
  std::cout << j.dump(2) << "\n";
  return value ? 0 : 1;
}

int cmd_solve(const std::string& path, int rounds, std::optional<std::uint64_t> seed,
              const std::string& witness_path) {
  episolve::TaskSpec task = as_task(load(path), "solve");
  episolve::SolveOptions options;
  options.seed = seed;
  episolve::TaskRun run = episolve::solve_task(task, rounds, options);

  Json j;
  j["solvable"] = run.verdict.solvable;
  j["verdict"] = run.verdict.solvable ? "Solvable" : "Unsolvable";
  j["rounds"] = rounds;
  Json stats;
  stats["nodes"] = run.verdict.stats.nodes;
  stats["backtracks"] = run.verdict.stats.backtracks;
  stats["seconds"] = run.verdict.stats.seconds;
  j["stats"] = std::move(stats);

  if (run.verdict.witness) {
    Json decisions = Json::object();
    for (const auto& [vid, d] : run.verdict.decision_map) {
      Json e;
      e["agent"] = d.agent;
      e["literals"] = d.literals;
      decisions[vid] = std::move(e);
    }
    j["decisions"] = decisions;

    if (!witness_path.empty()) {
      const episolve::ChromaticMap& w = *run.verdict.witness;
      Json wj;
      Json map = Json::object();
      for (int v = 0; v < w.source.n_vertices(); ++v)
        map[w.source.vertex_ids[static_cast<std::size_t>(v)]] =
            w.target.vertex_ids[static_cast<std::size_t>(w.map[static_cast<std::size_t>(v)])];
      wj["map"] = std::move(map);
      wj["decisions"] = std::move(decisions);
      write_output(wj.dump(2) + "\n", witness_path);
    }
  } else if (!witness_path.empty()) {
    std::cerr << "warning: task is unsolvable at " << rounds
              << " round(s); no witness file written\n";
  }
  std::cout << j.dump(2) << "\n";
  return run.verdict.solvable ? 0 : 1;
}

int cmd_components(const std::string& path, const std::string& agents_csv) {
  episolve::ModelFile mf = load(path);
  std::vector<std::string> group = split_csv(agents_csv);

  episolve::Partition parts;
  std::vector<std::string> ids;
  if (const auto* m = std::get_if<episolve::KripkeModel>(&mf.value)) {
    parts = episolve::connected_components(m->frame, group);
    ids = m->frame.states;
  } else if (const auto* m = std::get_if<episolve::SimplicialModel>(&mf.value)) {
    parts = episolve::connected_components(m->complex, group);
    ids = m->complex.facet_ids;
  } else {
    episolve::fail(episolve::ErrorCode::kInvalidArgument,
                   "components needs a kripke or simplicial model file, got kind: " + mf.kind);
  }

  Json comps = Json::array();
  for (const auto& cls : parts.classes()) {
    Json c = Json::array();
    for (int i : cls) c.push_back(ids[static_cast<std::size_t>(i)]);
    comps.push_back(std::move(c));
  }
  Json j;
  j["count"] = parts.class_count();
  j["components"] = std::move(comps);
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_betti(const std::string& path) {
  episolve::SimplicialModel m = as_simplicial(load(path));
  auto [b0, b1] = episolve::betti_numbers(m.complex);
  Json j;
  j["b0"] = b0;
  j["b1"] = b1;
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_obstruct(const std::string& path, int rounds) {
  episolve::TaskSpec task = as_task(load(path), "obstruct");
  episolve::ObstructionReport r = episolve::obstruction_report(task, rounds);
  Json j;
  j["status"] = episolve::to_string(r.status);
  j["rounds"] = r.rounds;
  j["h1_rank_pi"] = r.h1_rank_pi;
  j["betti1_delta"] = r.betti1_delta;
  j["betti_protocol"] = {r.betti_p.first, r.betti_p.second};
  j["betti_input"] = {r.betti_input.first, r.betti_input.second};
  j["betti_delta"] = {r.betti_delta.first, r.betti_delta.second};
  std::cout << j.dump(2) << "\n";
  return r.status == episolve::ObstructionStatus::kObstructed ? 1 : 0;
}

int cmd_export_dot(const std::string& path, const std::string& out_path) {
  episolve::ModelFile mf = load(path);
  std::string dot;
  if (const auto* m = std::get_if<episolve::KripkeModel>(&mf.value))
    dot = episolve::export_dot(*m);
  else if (const auto* m = std::get_if<episolve::SimplicialModel>(&mf.value))
    dot = episolve::export_dot(*m);
  else if (const auto* a = std::get_if<episolve::ActionModel>(&mf.value))
    dot = episolve::export_dot(*a);
  else
    episolve::fail(episolve::ErrorCode::kInvalidArgument,
                   "export-dot needs a kripke, simplicial, or action file, got kind: " + mf.kind);
  write_output(dot, out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"epistemic models, chromatic complexes, and task solvability"};
  app.require_subcommand(1);
  int rc = 0;

  std::string v_path;
  auto* validate = app.add_subcommand("validate", "Parse and validate a model file");
  validate->add_option("file", v_path, "JSON model file")->required();
  validate->callback([&] { rc = cmd_validate(v_path); });

  std::string c_path, c_to, c_out;
  auto* convert = app.add_subcommand("convert", "Convert between kripke and simplicial models");
  convert->add_option("file", c_path, "JSON model file")->required();
  convert->add_option("--to", c_to, "target kind: kripke | simplicial")->required();
  convert->add_option("-o,--output", c_out, "output file (default: stdout)");
  convert->callback([&] { rc = cmd_convert(c_path, c_to, c_out); });

  std::string u_model, u_action, u_out, u_proj;
  auto* update = app.add_subcommand("update", "Product update of a kripke model by an action model");
  update->add_option("model", u_model, "kripke model file")->required();
  update->add_option("action", u_action, "action model file")->required();
  update->add_option("-o,--output", u_out, "output file (default: stdout)");
  update->add_option("--projection", u_proj, "write the state projection map to this file");
  update->callback([&] { rc = cmd_update(u_model, u_action, u_out, u_proj); });

  std::string p_path, p_out, p_pi;
  int p_rounds = 1;
  auto* protocol = app.add_subcommand("protocol", "Iterated immediate-snapshot protocol complex");
  protocol->add_option("file", p_path, "input model file (simplicial, or kripke via conversion)")
      ->required();
  protocol->add_option("--rounds", p_rounds, "number of rounds (default 1)");
  protocol->add_option("-o,--output", p_out, "output file (default: stdout)");
  protocol->add_option("--pi", p_pi, "write the vertex projection map to this file");
  protocol->callback([&] { rc = cmd_protocol(p_path, p_rounds, p_out, p_pi); });

  std::string k_path, k_state, k_formula;
  std::vector<std::string> k_actions;
  bool k_cross = false;
  auto* check = app.add_subcommand("check", "Evaluate an epistemic formula at a state");
  check->add_option("file", k_path, "model file")->required();
  check->add_option("--state", k_state, "state to evaluate at")->required();
  check->add_option("--formula", k_formula, "formula, e.g. \"K a0 !l1\"")->required();
  check->add_option("--action", k_actions, "action model file for [name] operators (repeatable)");
  check->add_flag("--cross-check", k_cross,
                  "verify common knowledge against the fixpoint computation");
  check->callback([&] { rc = cmd_check(k_path, k_state, k_formula, k_actions, k_cross); });

  std::string s_path, s_witness;
  int s_rounds = 1;
  std::uint64_t s_seed = 0;
  bool s_has_seed = false;
  auto* solve = app.add_subcommand("solve", "Decide task solvability at a round count");
  solve->add_option("file", s_path, "task file")->required();
  solve->add_option("--rounds", s_rounds, "number of protocol rounds (default 1)");
  solve->add_option("--seed", s_seed, "shuffle search order (verdict is order-independent)")
      ->each([&](const std::string&) { s_has_seed = true; });
  solve->add_option("--witness", s_witness, "write the witness map to this file when solvable");
  solve->callback([&] {
    rc = cmd_solve(s_path, s_rounds,
                   s_has_seed ? std::optional<std::uint64_t>(s_seed) : std::nullopt, s_witness);
  });

  std::string m_path, m_agents;
  auto* components = app.add_subcommand("components", "Connected components, optionally per group");
  components->add_option("file", m_path, "model file")->required();
  components->add_option("--agents", m_agents, "comma-separated group (default: all agents)");
  components->callback([&] { rc = cmd_components(m_path, m_agents); });

  std::string b_path;
  auto* betti = app.add_subcommand("betti", "Mod-2 Betti numbers b0, b1 of a complex");
  betti->add_option("file", b_path, "model file")->required();
  betti->callback([&] { rc = cmd_betti(b_path); });

  std::string o_path;
  int o_rounds = 1;
  auto* obstruct = app.add_subcommand("obstruct", "Homology obstruction to solvability");
  obstruct->add_option("file", o_path, "task file")->required();
  obstruct->add_option("--rounds", o_rounds, "number of protocol rounds (default 1)");
  obstruct->callback([&] { rc = cmd_obstruct(o_path, o_rounds); });

  std::string d_path, d_out;
  auto* export_dot = app.add_subcommand("export-dot", "Render a model as Graphviz DOT");
  export_dot->add_option("file", d_path, "model file")->required();
  export_dot->add_option("-o,--output", d_out, "output file (default: stdout)");
  export_dot->callback([&] { rc = cmd_export_dot(d_path, d_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const episolve::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
