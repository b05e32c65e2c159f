#pragma once

// JSON file formats and DOT export.
//
// One JSON document per model, discriminated by "kind":
//
//   kripke:     agents, ap (atoms with optional owners), states, relations,
//               valuations
//   simplicial: agents, ap (owners required), vertices (id/color/literals),
//               facets (vertices, optional id)
//   action:     agents, points, relations, preconditions (formula strings),
//               optional name
//   task:       input (model doc), output (model doc of the same kind),
//               delta (input id -> output ids)
//
// Relations are given per agent as groups of mutually indistinguishable
// states; a two-element group is an edge. Groups are closed into an
// equivalence, with a warning when closure adds anything beyond the literal
// groups. Unknown fields are rejected. Emission is deterministic (sorted keys,
// two-space indent) and parse(emit(x)) == x, so canonicalized files are
// byte-stable across round trips.

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "episolve/common.hpp"
#include "episolve/kripke.hpp"
#include "episolve/logic.hpp"
#include "episolve/simplicial.hpp"
#include "episolve/tasks.hpp"

namespace episolve {

using Json = nlohmann::json;

struct ModelFile {
  std::variant<KripkeModel, SimplicialModel, ActionModel, TaskSpec> value;
  std::string kind;
  ValidationReport report;  // parse-time warnings (closure, subsumption, ...)
};

namespace detail {

inline bool printable_id(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < 0x21 || c > 0x7e) return false;
  return true;
}

inline bool word_id(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return s != "true" && s != "false" && s != "K" && s != "E" && s != "C";
}

inline void reject_unknown_fields(const Json& j, const std::vector<std::string>& allowed,
                                  const std::string& where) {
  for (const auto& [key, _] : j.items())
    if (!contains(allowed, key))
      fail(ErrorCode::kParse, "unknown field \"" + key + "\" in " + where);
}

inline const Json& require(const Json& j, const std::string& key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) fail(ErrorCode::kParse, where + " is missing \"" + key + "\"");
  return *it;
}

inline std::vector<std::string> string_list(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(ErrorCode::kParse, where + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& x : j) {
    if (!x.is_string()) fail(ErrorCode::kParse, where + " must be an array of strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

inline std::vector<std::string> agent_list(const Json& j, const std::string& where) {
  std::vector<std::string> agents = string_list(j, where);
  for (const auto& a : agents)
    if (!word_id(a))
      fail(ErrorCode::kParse, "agent name \"" + a + "\" must be a word over [A-Za-z0-9_]");
  return agents;
}

inline std::vector<AtomDecl> atom_list(const Json& j, bool owner_required) {
  if (!j.is_array()) fail(ErrorCode::kParse, "\"ap\" must be an array");
  std::vector<AtomDecl> out;
  for (const auto& entry : j) {
    if (!entry.is_object()) fail(ErrorCode::kParse, "\"ap\" entries must be objects");
    reject_unknown_fields(entry, {"name", "owner"}, "an atom declaration");
    AtomDecl d;
    d.name = require(entry, "name", "atom declaration").get<std::string>();
    if (!word_id(d.name))
      fail(ErrorCode::kParse, "atom name \"" + d.name + "\" must be a word over [A-Za-z0-9_]");
    if (entry.contains("owner")) d.owner = entry["owner"].get<std::string>();
    if (owner_required && d.owner.empty())
      fail(ErrorCode::kParse, "atom " + d.name + " needs an \"owner\"");
    out.push_back(std::move(d));
  }
  return out;
}

inline void check_id(const std::string& id, const std::string& what) {
  if (!printable_id(id))
    fail(ErrorCode::kParse, what + " id \"" + id + "\" must be nonempty printable ASCII without spaces");
}

// Relations object -> named groups; also reports a warning when equivalence
// closure merges beyond the groups as written.
inline RelationGroups relation_groups(const Json& j, const std::vector<std::string>& ids,
                                      const std::string& what, ValidationReport& report) {
  if (!j.is_object()) fail(ErrorCode::kParse, "\"relations\" must be an object keyed by agent");
  RelationGroups groups;
  for (const auto& [agent, glist] : j.items()) {
    if (!glist.is_array()) fail(ErrorCode::kParse, "relations for " + agent + " must be an array");
    std::vector<std::vector<std::string>> gs;
    for (const auto& g : glist) gs.push_back(string_list(g, "a relation group"));
    groups[agent] = std::move(gs);
  }

  // Closure warning: rebuild the partition and compare classes to the groups.
  for (const auto& [agent, gs] : groups) {
    std::vector<std::vector<int>> idx_groups;
    for (const auto& g : gs) {
      std::vector<int> ig;
      for (const auto& id : g) {
        int k = index_of(ids, id);
        if (k < 0) fail(ErrorCode::kParse, what + " relations mention unknown id: " + id);
        ig.push_back(k);
      }
      std::sort(ig.begin(), ig.end());
      ig.erase(std::unique(ig.begin(), ig.end()), ig.end());
      idx_groups.push_back(std::move(ig));
    }
    Partition p = Partition::from_groups(static_cast<int>(ids.size()), idx_groups);
    for (const auto& cls : p.classes()) {
      if (cls.size() < 2) continue;
      bool literal = false;
      for (const auto& g : idx_groups)
        if (g == cls) { literal = true; break; }
      if (!literal)
        report.warn("relation for " + agent + " closed into an equivalence class of " +
                    std::to_string(cls.size()) + " " + what + "s");
    }
  }
  return groups;
}

inline std::map<std::string, std::vector<std::string>> literal_map(const Json& j,
                                                                   const std::string& what) {
  if (!j.is_object()) fail(ErrorCode::kParse, what + " must be an object");
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& [id, lits] : j.items()) out[id] = string_list(lits, what + " entry");
  return out;
}

inline KripkeModel parse_kripke(const Json& j, ValidationReport& report) {
  reject_unknown_fields(j, {"kind", "agents", "ap", "states", "relations", "valuations"},
                        "a kripke document");
  std::vector<std::string> agents = agent_list(require(j, "agents", "kripke document"), "\"agents\"");
  std::vector<std::string> states = string_list(require(j, "states", "kripke document"), "\"states\"");
  for (const auto& s : states) check_id(s, "state");
  std::sort(states.begin(), states.end());

  RelationGroups groups;
  if (j.contains("relations")) groups = relation_groups(j["relations"], states, "state", report);
  KripkeFrame frame = make_frame(agents, states, groups);

  std::vector<AtomDecl> atoms;
  if (j.contains("ap")) atoms = atom_list(j["ap"], /*owner_required=*/false);
  std::map<std::string, std::vector<std::string>> valuations;
  if (j.contains("valuations")) valuations = literal_map(j["valuations"], "\"valuations\"");
  return make_model(std::move(frame), std::move(atoms), valuations);
}

inline SimplicialModel parse_simplicial(const Json& j, ValidationReport& report) {
  reject_unknown_fields(j, {"kind", "agents", "ap", "vertices", "facets"}, "a simplicial document");
  std::vector<std::string> agents =
      agent_list(require(j, "agents", "simplicial document"), "\"agents\"");

  std::vector<VertexDecl> vertices;
  std::map<std::string, std::vector<std::string>> vlits;
  for (const auto& v : require(j, "vertices", "simplicial document")) {
    if (!v.is_object()) fail(ErrorCode::kParse, "\"vertices\" entries must be objects");
    reject_unknown_fields(v, {"id", "color", "literals"}, "a vertex");
    VertexDecl d;
    d.id = require(v, "id", "vertex").get<std::string>();
    check_id(d.id, "vertex");
    d.color = require(v, "color", "vertex " + d.id).get<std::string>();
    if (v.contains("literals")) vlits[d.id] = string_list(v["literals"], "vertex literals");
    vertices.push_back(std::move(d));
  }

  std::vector<FacetDecl> facets;
  for (const auto& f : require(j, "facets", "simplicial document")) {
    if (!f.is_object()) fail(ErrorCode::kParse, "\"facets\" entries must be objects");
    reject_unknown_fields(f, {"id", "vertices"}, "a facet");
    FacetDecl d;
    if (f.contains("id")) {
      d.id = f["id"].get<std::string>();
      check_id(d.id, "facet");
    }
    d.vertices = string_list(require(f, "vertices", "facet"), "facet vertices");
    facets.push_back(std::move(d));
  }

  std::vector<AtomDecl> atoms;
  if (j.contains("ap")) atoms = atom_list(j["ap"], /*owner_required=*/true);
  ChromaticComplex complex = make_complex(agents, vertices, facets, &report);
  return make_simplicial_model(std::move(complex), std::move(atoms), vlits);
}

inline ActionModel parse_action(const Json& j, ValidationReport& report) {
  reject_unknown_fields(j, {"kind", "name", "agents", "points", "relations", "preconditions"},
                        "an action document");
  std::string name = j.contains("name") ? j["name"].get<std::string>() : std::string("act");
  if (!word_id(name)) fail(ErrorCode::kParse, "action name must be a word over [A-Za-z0-9_]");
  std::vector<std::string> agents = agent_list(require(j, "agents", "action document"), "\"agents\"");
  std::vector<std::string> points = string_list(require(j, "points", "action document"), "\"points\"");
  for (const auto& p : points) check_id(p, "point");
  std::sort(points.begin(), points.end());

  RelationGroups groups;
  if (j.contains("relations")) groups = relation_groups(j["relations"], points, "point", report);

  std::map<std::string, Formula> preconditions;
  if (j.contains("preconditions")) {
    if (!j["preconditions"].is_object())
      fail(ErrorCode::kParse, "\"preconditions\" must be an object keyed by point");
    for (const auto& [pid, text] : j["preconditions"].items()) {
      if (!text.is_string()) fail(ErrorCode::kParse, "precondition for " + pid + " must be a string");
      preconditions.emplace(pid, parse_formula(text.get<std::string>()));
    }
  }
  return make_action_model(name, agents, points, groups, preconditions);
}

inline TaskSpec parse_task(const Json& j, ValidationReport& report) {
  reject_unknown_fields(j, {"kind", "input", "output", "delta"}, "a task document");
  const Json& in = require(j, "input", "task document");
  const Json& out = require(j, "output", "task document");
  std::string in_kind = require(in, "kind", "task input").get<std::string>();
  std::string out_kind = require(out, "kind", "task output").get<std::string>();
  if (in_kind != out_kind)
    fail(ErrorCode::kParse, "task input and output must be of the same kind");

  std::map<std::string, std::vector<std::string>> delta;
  for (const auto& [in_id, outs] : require(j, "delta", "task document").items())
    delta[in_id] = string_list(outs, "delta entry");

  if (in_kind == "kripke")
    return make_kripke_task(parse_kripke(in, report), parse_kripke(out, report), std::move(delta));
  if (in_kind == "simplicial")
    return make_simplicial_task(parse_simplicial(in, report), parse_simplicial(out, report),
                                std::move(delta));
  fail(ErrorCode::kParse, "task models must be kripke or simplicial, got: " + in_kind);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline Json to_json(const KripkeModel& m) {
  Json j;
  j["kind"] = "kripke";
  j["agents"] = m.frame.agents;
  Json ap = Json::array();
  for (std::size_t i = 0; i < m.ap.size(); ++i) {
    Json a;
    a["name"] = m.ap[i];
    if (m.owner[i] >= 0) a["owner"] = m.frame.agents[static_cast<std::size_t>(m.owner[i])];
    ap.push_back(std::move(a));
  }
  j["ap"] = std::move(ap);
  j["states"] = m.frame.states;
  Json rel = Json::object();
  for (int a = 0; a < m.frame.n_agents(); ++a) {
    Json groups = Json::array();
    for (const auto& cls : m.frame.rel[static_cast<std::size_t>(a)].classes()) {
      if (cls.size() < 2) continue;
      Json g = Json::array();
      for (int s : cls) g.push_back(m.frame.states[static_cast<std::size_t>(s)]);
      groups.push_back(std::move(g));
    }
    if (!groups.empty()) rel[m.frame.agents[static_cast<std::size_t>(a)]] = std::move(groups);
  }
  j["relations"] = std::move(rel);
  Json vals = Json::object();
  for (int s = 0; s < m.frame.n_states(); ++s)
    vals[m.frame.states[static_cast<std::size_t>(s)]] = state_literals(m, s);
  j["valuations"] = std::move(vals);
  return j;
}

inline Json to_json(const SimplicialModel& m) {
  Json j;
  j["kind"] = "simplicial";
  j["agents"] = m.complex.agents;
  Json ap = Json::array();
  for (std::size_t i = 0; i < m.ap.size(); ++i) {
    Json a;
    a["name"] = m.ap[i];
    a["owner"] = m.complex.agents[static_cast<std::size_t>(m.owner[i])];
    ap.push_back(std::move(a));
  }
  j["ap"] = std::move(ap);
  Json vs = Json::array();
  for (int v = 0; v < m.complex.n_vertices(); ++v) {
    Json e;
    e["id"] = m.complex.vertex_ids[static_cast<std::size_t>(v)];
    e["color"] =
        m.complex.agents[static_cast<std::size_t>(m.complex.vertex_color[static_cast<std::size_t>(v)])];
    e["literals"] = vertex_literal_strings(m, v);
    vs.push_back(std::move(e));
  }
  j["vertices"] = std::move(vs);
  Json fs = Json::array();
  for (int i = 0; i < m.complex.n_facets(); ++i) {
    Json e;
    e["id"] = m.complex.facet_ids[static_cast<std::size_t>(i)];
    Json members = Json::array();
    for (int v : m.complex.facets[static_cast<std::size_t>(i)])
      members.push_back(m.complex.vertex_ids[static_cast<std::size_t>(v)]);
    e["vertices"] = std::move(members);
    fs.push_back(std::move(e));
  }
  j["facets"] = std::move(fs);
  return j;
}

inline Json to_json(const ActionModel& a) {
  Json j;
  j["kind"] = "action";
  j["name"] = a.name;
  j["agents"] = a.agents;
  j["points"] = a.points;
  Json rel = Json::object();
  for (std::size_t ai = 0; ai < a.agents.size(); ++ai) {
    Json groups = Json::array();
    for (const auto& cls : a.rel[ai].classes()) {
      if (cls.size() < 2) continue;
      Json g = Json::array();
      for (int p : cls) g.push_back(a.points[static_cast<std::size_t>(p)]);
      groups.push_back(std::move(g));
    }
    if (!groups.empty()) rel[a.agents[ai]] = std::move(groups);
  }
  j["relations"] = std::move(rel);
  Json pre = Json::object();
  for (std::size_t p = 0; p < a.points.size(); ++p)
    pre[a.points[p]] = a.pre[p].to_string();
  j["preconditions"] = std::move(pre);
  return j;
}

inline Json to_json(const TaskSpec& t) {
  Json j;
  j["kind"] = "task";
  if (t.kind == TaskSpec::Kind::kKripke) {
    j["input"] = to_json(*t.kripke_input);
    j["output"] = to_json(*t.kripke_output);
  } else {
    j["input"] = to_json(*t.simplicial_input);
    j["output"] = to_json(*t.simplicial_output);
  }
  Json delta = Json::object();
  for (const auto& [k, v] : t.delta) delta[k] = v;
  j["delta"] = std::move(delta);
  return j;
}

inline std::string dump_model_file(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

inline ModelFile parse_model_file(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::kParse, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorCode::kParse, "top-level JSON value must be an object");
  std::string kind = detail::require(j, "kind", "model document").get<std::string>();

  ModelFile out;
  out.kind = kind;
  if (kind == "kripke")
    out.value = detail::parse_kripke(j, out.report);
  else if (kind == "simplicial")
    out.value = detail::parse_simplicial(j, out.report);
  else if (kind == "action")
    out.value = detail::parse_action(j, out.report);
  else if (kind == "task")
    out.value = detail::parse_task(j, out.report);
  else
    fail(ErrorCode::kParse, "unknown kind: " + kind);
  return out;
}

inline ModelFile read_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kParse, "cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model_file(buf.str());
}

// ---------------------------------------------------------------------------
// Canonical renaming
// ---------------------------------------------------------------------------

namespace detail {

inline std::string positional_id(const std::string& prefix, int i, int count) {
  int width = 3;
  for (int c = 1000; count > c; c *= 10) ++width;
  std::string num = std::to_string(i);
  if (static_cast<int>(num.size()) < width) num.insert(num.begin(), width - num.size(), '0');
  return prefix + num;
}

}  // namespace detail

// Rename states to s000, s001, ... in canonical order. Relations and
// valuations are positional, so only the names change.
inline KripkeModel canonicalize_ids(const KripkeModel& m) {
  KripkeModel out = m;
  for (int s = 0; s < out.frame.n_states(); ++s)
    out.frame.states[static_cast<std::size_t>(s)] =
        detail::positional_id("s", s, out.frame.n_states());
  return out;
}

// Rename vertices to v000... (canonical vertex order) and facets to f000...
// (canonical facet order).
inline SimplicialModel canonicalize_ids(const SimplicialModel& m) {
  SimplicialModel out = m;
  for (int v = 0; v < out.complex.n_vertices(); ++v)
    out.complex.vertex_ids[static_cast<std::size_t>(v)] =
        detail::positional_id("v", v, out.complex.n_vertices());
  for (int i = 0; i < out.complex.n_facets(); ++i)
    out.complex.facet_ids[static_cast<std::size_t>(i)] =
        detail::positional_id("f", i, out.complex.n_facets());
  return out;
}

inline ActionModel canonicalize_ids(const ActionModel& a) {
  ActionModel out = a;
  for (std::size_t p = 0; p < out.points.size(); ++p)
    out.points[p] = detail::positional_id("p", static_cast<int>(p),
                                          static_cast<int>(out.points.size()));
  return out;
}

inline TaskSpec canonicalize_ids(const TaskSpec& t) {
  TaskSpec out = t;
  if (t.kind == TaskSpec::Kind::kKripke) {
    // Rename through the id maps so delta stays aligned.
    std::map<std::string, std::string> in_names, out_names;
    for (int s = 0; s < t.kripke_input->frame.n_states(); ++s)
      in_names[t.kripke_input->frame.states[static_cast<std::size_t>(s)]] =
          detail::positional_id("s", s, t.kripke_input->frame.n_states());
    for (int s = 0; s < t.kripke_output->frame.n_states(); ++s)
      out_names[t.kripke_output->frame.states[static_cast<std::size_t>(s)]] =
          detail::positional_id("s", s, t.kripke_output->frame.n_states());
    out.kripke_input = canonicalize_ids(*t.kripke_input);
    out.kripke_output = canonicalize_ids(*t.kripke_output);
    out.delta.clear();
    for (const auto& [k, vs] : t.delta) {
      std::vector<std::string> mapped;
      for (const auto& v : vs) mapped.push_back(out_names.at(v));
      std::sort(mapped.begin(), mapped.end());
      out.delta[in_names.at(k)] = std::move(mapped);
    }
  } else {
    std::map<std::string, std::string> in_names, out_names;
    for (int i = 0; i < t.simplicial_input->complex.n_facets(); ++i)
      in_names[t.simplicial_input->complex.facet_ids[static_cast<std::size_t>(i)]] =
          detail::positional_id("f", i, t.simplicial_input->complex.n_facets());
    for (int i = 0; i < t.simplicial_output->complex.n_facets(); ++i)
      out_names[t.simplicial_output->complex.facet_ids[static_cast<std::size_t>(i)]] =
          detail::positional_id("f", i, t.simplicial_output->complex.n_facets());
    out.simplicial_input = canonicalize_ids(*t.simplicial_input);
    out.simplicial_output = canonicalize_ids(*t.simplicial_output);
    out.delta.clear();
    for (const auto& [k, vs] : t.delta) {
      std::vector<std::string> mapped;
      for (const auto& v : vs) mapped.push_back(out_names.at(v));
      std::sort(mapped.begin(), mapped.end());
      out.delta[in_names.at(k)] = std::move(mapped);
    }
  }
  return out;
}

// Whether the CLI should canonicalize ids before emitting (EPISOLVE_CANON=1).
inline bool canon_env_enabled() {
  const char* v = std::getenv("EPISOLVE_CANON");
  return v != nullptr && std::string(v) == "1";
}

// ---------------------------------------------------------------------------
// DOT export
// ---------------------------------------------------------------------------

namespace detail {

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace detail

// Kripke 1-skeleton: nodes labeled with state and literals, one undirected
// edge per related pair, labeled by the agents that cannot tell them apart.
inline std::string export_dot(const KripkeModel& m) {
  std::ostringstream out;
  out << "graph kripke {\n  node [shape=box];\n";
  for (int s = 0; s < m.frame.n_states(); ++s) {
    // Escape each fragment on its own so the "\n" line breaks survive.
    std::string label = detail::dot_escape(m.frame.states[static_cast<std::size_t>(s)]);
    std::vector<std::string> lits = state_literals(m, s);
    if (!lits.empty()) label += "\\n" + detail::dot_escape(join_strings(lits, " "));
    out << "  n" << s << " [label=\"" << label << "\"];\n";
  }
  for (int u = 0; u < m.frame.n_states(); ++u)
    for (int v = u + 1; v < m.frame.n_states(); ++v) {
      std::vector<std::string> agents;
      for (int a = 0; a < m.frame.n_agents(); ++a)
        if (m.frame.related(a, u, v)) agents.push_back(m.frame.agents[static_cast<std::size_t>(a)]);
      if (agents.empty()) continue;
      out << "  n" << u << " -- n" << v << " [label=\""
          << detail::dot_escape(join_strings(agents, ",")) << "\"];\n";
    }
  out << "}\n";
  return out.str();
}

// Complex 1-skeleton: nodes carry color (and literals when decorated).
inline std::string export_dot(const SimplicialModel& m) {
  std::ostringstream out;
  out << "graph simplicial {\n  node [shape=ellipse];\n";
  for (int v = 0; v < m.complex.n_vertices(); ++v) {
    std::string label =
        detail::dot_escape(m.complex.vertex_ids[static_cast<std::size_t>(v)]) + "\\n" +
        detail::dot_escape(m.complex.agents[static_cast<std::size_t>(
            m.complex.vertex_color[static_cast<std::size_t>(v)])]);
    std::vector<std::string> lits = vertex_literal_strings(m, v);
    if (!lits.empty()) label += "\\n" + detail::dot_escape(join_strings(lits, " "));
    out << "  n" << v << " [label=\"" << label << "\"];\n";
  }
  std::vector<std::pair<int, int>> edges;
  for (const auto& f : m.complex.facets)
    for (std::size_t i = 0; i < f.size(); ++i)
      for (std::size_t j = i + 1; j < f.size(); ++j) edges.emplace_back(f[i], f[j]);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (auto [u, v] : edges) out << "  n" << u << " -- n" << v << ";\n";
  out << "}\n";
  return out.str();
}

inline std::string export_dot(const ChromaticComplex& c) {
  return export_dot(make_simplicial_model(c, {}, {}));
}

// Action models render like frames, with preconditions in the node labels.
inline std::string export_dot(const ActionModel& a) {
  std::ostringstream out;
  out << "graph action {\n  node [shape=box];\n";
  for (int p = 0; p < a.n_points(); ++p) {
    std::string label = detail::dot_escape(a.points[static_cast<std::size_t>(p)]) + "\\npre: " +
                        detail::dot_escape(a.pre[static_cast<std::size_t>(p)].to_string());
    out << "  n" << p << " [label=\"" << label << "\"];\n";
  }
  for (int u = 0; u < a.n_points(); ++u)
    for (int v = u + 1; v < a.n_points(); ++v) {
      std::vector<std::string> agents;
      for (std::size_t ai = 0; ai < a.agents.size(); ++ai)
        if (a.rel[ai].related(u, v)) agents.push_back(a.agents[ai]);
      if (agents.empty()) continue;
      out << "  n" << u << " -- n" << v << " [label=\""
          << detail::dot_escape(join_strings(agents, ",")) << "\"];\n";
    }
  out << "}\n";
  return out.str();
}

}  // namespace episolve
