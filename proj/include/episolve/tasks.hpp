#pragma once

// Distributed tasks and their solvability.
//
// A task pairs an input model with an output model of the same kind plus a
// relation Δ from input states/facets to permitted output states/facets. The
// carrier condition makes Δ locally consistent: indistinguishable inputs must
// admit indistinguishable outputs.
//
// Solvability after r rounds asks for a chromatic map h from the r-round
// protocol complex P into the Δ-restricted subproduct Δ* ⊆ I × O with
// π_I ∘ h = π_I: every process decides an output vertex, decisions within a
// reachable configuration sit in a common permitted pair, and nobody forgets
// its own input. The search runs on the simplicial side; Kripke tasks are
// transported through the equivalence first.

#include <chrono>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "episolve/common.hpp"
#include "episolve/equivalence.hpp"
#include "episolve/kripke.hpp"
#include "episolve/protocol.hpp"
#include "episolve/simplicial.hpp"

namespace episolve {

// ---------------------------------------------------------------------------
// Task specifications
// ---------------------------------------------------------------------------

struct TaskSpec {
  enum class Kind { kKripke, kSimplicial };
  Kind kind = Kind::kSimplicial;
  std::optional<KripkeModel> kripke_input, kripke_output;
  std::optional<SimplicialModel> simplicial_input, simplicial_output;
  // Input state/facet id -> permitted output state/facet ids.
  std::map<std::string, std::vector<std::string>> delta;

  bool operator==(const TaskSpec&) const = default;
};

namespace detail {

inline void check_task_ids(const TaskSpec& t, const std::vector<std::string>& input_ids,
                           const std::vector<std::string>& output_ids) {
  for (const auto& [in_id, outs] : t.delta) {
    if (!contains(input_ids, in_id))
      fail(ErrorCode::kInvalidArgument, "delta mentions unknown input id: " + in_id);
    for (const auto& out_id : outs)
      if (!contains(output_ids, out_id))
        fail(ErrorCode::kInvalidArgument, "delta mentions unknown output id: " + out_id);
  }
}

}  // namespace detail

inline TaskSpec make_kripke_task(KripkeModel input, KripkeModel output,
                                 std::map<std::string, std::vector<std::string>> delta) {
  if (input.frame.agents != output.frame.agents)
    fail(ErrorCode::kInvalidArgument, "task input and output must share the agent list");
  TaskSpec t;
  t.kind = TaskSpec::Kind::kKripke;
  t.kripke_input = std::move(input);
  t.kripke_output = std::move(output);
  t.delta = std::move(delta);
  detail::check_task_ids(t, t.kripke_input->frame.states, t.kripke_output->frame.states);
  return t;
}

inline TaskSpec make_simplicial_task(SimplicialModel input, SimplicialModel output,
                                     std::map<std::string, std::vector<std::string>> delta) {
  if (input.complex.agents != output.complex.agents)
    fail(ErrorCode::kInvalidArgument, "task input and output must share the agent list");
  TaskSpec t;
  t.kind = TaskSpec::Kind::kSimplicial;
  t.simplicial_input = std::move(input);
  t.simplicial_output = std::move(output);
  t.delta = std::move(delta);
  detail::check_task_ids(t, t.simplicial_input->complex.facet_ids,
                         t.simplicial_output->complex.facet_ids);
  return t;
}

// Kripke tasks become simplicial ones; ids are preserved because the functor
// names facets after states. Simplicial tasks pass through unchanged.
inline TaskSpec task_to_simplicial(const TaskSpec& t) {
  if (t.kind == TaskSpec::Kind::kSimplicial) return t;
  return make_simplicial_task(model_to_simplicial(*t.kripke_input),
                              model_to_simplicial(*t.kripke_output), t.delta);
}

// ---------------------------------------------------------------------------
// Carrier validation
// ---------------------------------------------------------------------------

// Checks that Δ is total with nonempty images and satisfies the carrier
// condition: whenever two inputs are a-indistinguishable, some pair of their
// permitted outputs is a-indistinguishable too.
inline ValidationReport validate_carrier(const TaskSpec& task) {
  ValidationReport r;
  // Work on the Kripke side, where the condition is stated; simplicial tasks
  // transport losslessly (facets become states, sharing a vertex becomes
  // a-relatedness).
  KripkeModel in =
      task.kind == TaskSpec::Kind::kKripke ? *task.kripke_input : simplicial_to_model(*task.simplicial_input);
  KripkeModel out =
      task.kind == TaskSpec::Kind::kKripke ? *task.kripke_output : simplicial_to_model(*task.simplicial_output);

  std::vector<std::vector<int>> delta(static_cast<std::size_t>(in.frame.n_states()));
  for (int u = 0; u < in.frame.n_states(); ++u) {
    const auto& uid = in.frame.states[static_cast<std::size_t>(u)];
    auto it = task.delta.find(uid);
    if (it == task.delta.end() || it->second.empty()) {
      r.error("delta gives no output for input " + uid);
      continue;
    }
    for (const auto& oid : it->second) {
      int w = out.frame.state_index(oid);
      if (w < 0)
        r.error("delta at " + uid + " names unknown output " + oid);
      else if (!contains(delta[static_cast<std::size_t>(u)], w))
        delta[static_cast<std::size_t>(u)].push_back(w);
    }
  }
  if (!r.ok()) return r;

  for (int a = 0; a < in.frame.n_agents(); ++a)
    for (const auto& cls : in.frame.rel[static_cast<std::size_t>(a)].classes())
      for (std::size_t i = 0; i < cls.size(); ++i)
        for (std::size_t j = i + 1; j < cls.size(); ++j) {
          bool ok = false;
          for (int w : delta[static_cast<std::size_t>(cls[i])]) {
            for (int x : delta[static_cast<std::size_t>(cls[j])])
              if (out.frame.related(a, w, x)) { ok = true; break; }
            if (ok) break;
          }
          if (!ok)
            r.error("carrier condition fails for agent " + in.frame.agents[static_cast<std::size_t>(a)] +
                    " between inputs " + in.frame.states[static_cast<std::size_t>(cls[i])] + " and " +
                    in.frame.states[static_cast<std::size_t>(cls[j])]);
        }
  return r;
}

// ---------------------------------------------------------------------------
// The Δ-restricted subproduct Δ* ⊆ I × O
// ---------------------------------------------------------------------------

// Simplicial form: one facet per permitted (input facet, output facet) pair,
// with color-matched vertex pairs. Built directly on the permitted pairs —
// never through the full product — so literal clashes outside Δ cannot
// spuriously fail the construction.
struct DeltaSubmodel {
  SimplicialModel model;
  ChromaticMap pi_input;   // Δ* → I
  ChromaticMap pi_output;  // Δ* → O
};

inline DeltaSubmodel build_delta_submodel(const TaskSpec& task_any_kind) {
  TaskSpec task = task_to_simplicial(task_any_kind);
  const SimplicialModel& in = *task.simplicial_input;
  const SimplicialModel& out = *task.simplicial_output;

  ValidationReport carrier = validate_carrier(task);
  if (!carrier.ok())
    fail(ErrorCode::kInvalidArgument, "build_delta_submodel: " + carrier.errors.front());

  // Merged atom set; owners must agree on shared atoms.
  std::vector<AtomDecl> atoms;
  for (std::size_t j = 0; j < in.ap.size(); ++j)
    atoms.push_back(AtomDecl{in.ap[j], in.complex.agents[static_cast<std::size_t>(in.owner[j])]});
  for (std::size_t j = 0; j < out.ap.size(); ++j) {
    const std::string& name = out.ap[j];
    const std::string& owner = out.complex.agents[static_cast<std::size_t>(out.owner[j])];
    bool merged = false;
    for (const auto& d : atoms)
      if (d.name == name) {
        if (d.owner != owner)
          fail(ErrorCode::kInvalidArgument, "input and output disagree on the owner of atom " + name);
        merged = true;
      }
    if (!merged) atoms.push_back(AtomDecl{name, owner});
  }

  std::map<std::pair<int, int>, std::string> pair_vertices;
  std::map<std::string, std::vector<std::string>> vlits;
  std::vector<FacetDecl> facets;
  for (const auto& [in_id, out_ids] : task.delta) {
    int fi = in.complex.facet_index(in_id);
    for (const auto& out_id : out_ids) {
      int fo = out.complex.facet_index(out_id);
      FacetDecl fd;
      fd.id = pair_id(in_id, out_id);
      for (int color = 0; color < in.complex.n_agents(); ++color) {
        int v = in.complex.facet_vertex(fi, color);
        int w = out.complex.facet_vertex(fo, color);
        auto key = std::make_pair(v, w);
        auto it = pair_vertices.find(key);
        if (it == pair_vertices.end()) {
          std::string id = pair_id(in.complex.vertex_ids[static_cast<std::size_t>(v)],
                                   out.complex.vertex_ids[static_cast<std::size_t>(w)]);
          it = pair_vertices.emplace(key, id).first;
          std::vector<std::string> lits = vertex_literal_strings(in, v);
          for (auto& l : vertex_literal_strings(out, w)) lits.push_back(l);
          // A shared atom appearing with both polarities is a genuine clash.
          std::map<std::string, bool> seen;
          for (const auto& ls : lits) {
            Literal lit = parse_literal(ls);
            auto sit = seen.find(lit.atom);
            if (sit != seen.end() && sit->second != lit.positive)
              fail(ErrorCode::kInconsistentValuation,
                   "pair " + id + " joins clashing literals over atom " + lit.atom);
            seen.emplace(lit.atom, lit.positive);
          }
          std::vector<std::string> dedup;
          for (const auto& [atom, pos] : seen) dedup.push_back(literal_string(atom, pos));
          vlits[id] = std::move(dedup);
        }
        fd.vertices.push_back(it->second);
      }
      facets.push_back(std::move(fd));
    }
  }

  DeltaSubmodel d;
  d.model = make_simplicial_model(
      make_complex(in.complex.agents,
                   [&] {
                     std::vector<VertexDecl> vs;
                     for (const auto& [key, id] : pair_vertices)
                       vs.push_back(VertexDecl{
                           id, in.complex.agents[static_cast<std::size_t>(
                                   in.complex.vertex_color[static_cast<std::size_t>(key.first)])]});
                     return vs;
                   }(),
                   facets),
      atoms, vlits);
  d.pi_input.source = d.model.complex;
  d.pi_input.target = in.complex;
  d.pi_output.source = d.model.complex;
  d.pi_output.target = out.complex;
  d.pi_input.map.assign(static_cast<std::size_t>(d.model.complex.n_vertices()), -1);
  d.pi_output.map.assign(static_cast<std::size_t>(d.model.complex.n_vertices()), -1);
  for (const auto& [key, id] : pair_vertices) {
    int pv = d.model.complex.vertex_index(id);
    d.pi_input.map[static_cast<std::size_t>(pv)] = key.first;
    d.pi_output.map[static_cast<std::size_t>(pv)] = key.second;
  }
  return d;
}

// Kripke form of Δ*, for tasks given on that side: states are the permitted
// (input, output) pairs, related componentwise, valuations merged.
struct DeltaSubmodelKripke {
  KripkeModel model;
  FrameMorphism pi_input;
  FrameMorphism pi_output;
};

inline DeltaSubmodelKripke build_delta_submodel_kripke(const TaskSpec& task) {
  if (task.kind != TaskSpec::Kind::kKripke)
    fail(ErrorCode::kInvalidArgument, "build_delta_submodel_kripke needs a Kripke task");
  const KripkeModel& in = *task.kripke_input;
  const KripkeModel& out = *task.kripke_output;

  ValidationReport carrier = validate_carrier(task);
  if (!carrier.ok())
    fail(ErrorCode::kInvalidArgument, "build_delta_submodel: " + carrier.errors.front());

  std::vector<std::pair<int, int>> pairs;
  std::vector<std::string> ids;
  for (const auto& [in_id, out_ids] : task.delta) {
    int u = in.frame.state_index(in_id);
    for (const auto& out_id : out_ids) {
      pairs.emplace_back(u, out.frame.state_index(out_id));
      ids.push_back(pair_id(in_id, out_id));
    }
  }
  std::vector<int> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return ids[static_cast<std::size_t>(i)] < ids[static_cast<std::size_t>(j)]; });

  DeltaSubmodelKripke d;
  d.model.frame.agents = in.frame.agents;
  std::vector<std::pair<int, int>> sorted_pairs;
  for (int i : order) {
    d.model.frame.states.push_back(ids[static_cast<std::size_t>(i)]);
    sorted_pairs.push_back(pairs[static_cast<std::size_t>(i)]);
  }
  pairs = std::move(sorted_pairs);

  for (int a = 0; a < in.frame.n_agents(); ++a) {
    const auto& pi_rel = in.frame.rel[static_cast<std::size_t>(a)];
    const auto& po_rel = out.frame.rel[static_cast<std::size_t>(a)];
    std::vector<int> cls(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k)
      cls[k] = pi_rel.class_index(pairs[k].first) * (po_rel.class_count() + 1) +
               po_rel.class_index(pairs[k].second);
    d.model.frame.rel.push_back(Partition::from_class_of(cls));
  }

  // Atom merge mirrors model_product, but only over surviving pairs.
  d.model.ap = in.ap;
  d.model.owner = in.owner;
  for (std::size_t j = 0; j < out.ap.size(); ++j) {
    int k = index_of(d.model.ap, out.ap[j]);
    if (k < 0) {
      auto pos = std::lower_bound(d.model.ap.begin(), d.model.ap.end(), out.ap[j]);
      int at = static_cast<int>(pos - d.model.ap.begin());
      d.model.ap.insert(pos, out.ap[j]);
      d.model.owner.insert(d.model.owner.begin() + at, out.owner[j]);
    } else if (d.model.owner[static_cast<std::size_t>(k)] != out.owner[j]) {
      fail(ErrorCode::kInvalidArgument, "input and output disagree on the owner of atom " + out.ap[j]);
    }
  }
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    auto [u, w] = pairs[k];
    std::vector<bool> row(d.model.ap.size(), false);
    for (std::size_t j = 0; j < d.model.ap.size(); ++j) {
      int ji = in.atom_index(d.model.ap[j]);
      int jo = out.atom_index(d.model.ap[j]);
      if (ji >= 0 && jo >= 0 && in.truth(u, ji) != out.truth(w, jo))
        fail(ErrorCode::kInconsistentValuation, "pair " + d.model.frame.states[k] +
                                                    " joins clashing literals over atom " + d.model.ap[j]);
      row[j] = ji >= 0 ? in.truth(u, ji) : out.truth(w, jo);
    }
    d.model.val.push_back(std::move(row));
  }

  d.pi_input.source = d.model.frame;
  d.pi_input.target = in.frame;
  d.pi_output.source = d.model.frame;
  d.pi_output.target = out.frame;
  for (auto [u, w] : pairs) {
    d.pi_input.map.push_back(u);
    d.pi_output.map.push_back(w);
  }
  return d;
}

// ---------------------------------------------------------------------------
// Solvability search
// ---------------------------------------------------------------------------

struct SolveStats {
  std::uint64_t nodes = 0;
  std::uint64_t backtracks = 0;
  double seconds = 0.0;
};

struct DecisionEntry {
  std::string agent;
  std::vector<std::string> literals;
};

struct SolvabilityVerdict {
  bool solvable = false;
  std::optional<ChromaticMap> witness;                // P → Δ*
  std::map<std::string, DecisionEntry> decision_map;  // P vertex id -> decision
  SolveStats stats;
};

struct SolveOptions {
  // Shuffles variable and value orders. The verdict is order-independent;
  // the reported witness may differ. Without a seed the search is canonical
  // and the witness is the lexicographically least one.
  std::optional<std::uint64_t> seed;
};

// Per-vertex decisions read off a witness: the literals of the output vertex
// it maps to (through π_O).
inline std::map<std::string, DecisionEntry> extract_decision_map(
    const ChromaticMap& witness, const DeltaSubmodel& delta, const SimplicialModel& output) {
  std::map<std::string, DecisionEntry> out;
  for (int v = 0; v < witness.source.n_vertices(); ++v) {
    int dv = witness.map[static_cast<std::size_t>(v)];
    int ov = delta.pi_output.map[static_cast<std::size_t>(dv)];
    DecisionEntry e;
    e.agent = witness.source.agents[static_cast<std::size_t>(
        witness.source.vertex_color[static_cast<std::size_t>(v)])];
    e.literals = vertex_literal_strings(output, ov);
    out.emplace(witness.source.vertex_ids[static_cast<std::size_t>(v)], std::move(e));
  }
  return out;
}

// Backtracking search for a chromatic map h : P → Δ* with π_I ∘ h = π_I.
// Variables are P's vertices, domains are color- and input-compatible Δ*
// vertices, and every P-facet must land on a Δ*-facet. Forward checking: each
// P-facet keeps its list of still-possible image facets.
inline SolvabilityVerdict check_solvability(const ChromaticComplex& p, const ChromaticMap& pi,
                                            const DeltaSubmodel& delta,
                                            const SolveOptions& options = {}) {
  auto clock_start = std::chrono::steady_clock::now();
  SolvabilityVerdict verdict;
  const ChromaticComplex& d = delta.model.complex;

  if (pi.source.vertex_ids != p.vertex_ids)
    fail(ErrorCode::kInvalidArgument, "check_solvability: pi must be defined on P");
  if (pi.target.vertex_ids != delta.pi_input.target.vertex_ids)
    fail(ErrorCode::kInvalidArgument, "check_solvability: pi and delta target different inputs");

  const int N = p.n_vertices();
  std::vector<std::vector<int>> domains(static_cast<std::size_t>(N));
  for (int v = 0; v < N; ++v)
    for (int w = 0; w < d.n_vertices(); ++w)
      if (p.vertex_color[static_cast<std::size_t>(v)] == d.vertex_color[static_cast<std::size_t>(w)] &&
          pi.map[static_cast<std::size_t>(v)] == delta.pi_input.map[static_cast<std::size_t>(w)])
        domains[static_cast<std::size_t>(v)].push_back(w);

  std::vector<int> var_order(static_cast<std::size_t>(N));
  std::iota(var_order.begin(), var_order.end(), 0);
  if (options.seed) {
    std::mt19937_64 rng(*options.seed);
    std::shuffle(var_order.begin(), var_order.end(), rng);
    for (auto& dom : domains) std::shuffle(dom.begin(), dom.end(), rng);
  }

  std::vector<std::vector<int>> incident(static_cast<std::size_t>(N));
  for (int fi = 0; fi < p.n_facets(); ++fi)
    for (int v : p.facets[static_cast<std::size_t>(fi)])
      incident[static_cast<std::size_t>(v)].push_back(fi);

  // candidates[fi] = Δ*-facet indices still consistent with the assignment.
  std::vector<std::vector<int>> candidates(static_cast<std::size_t>(p.n_facets()));
  for (int fi = 0; fi < p.n_facets(); ++fi) {
    for (int gi = 0; gi < d.n_facets(); ++gi) candidates[static_cast<std::size_t>(fi)].push_back(gi);
  }

  std::vector<int> assignment(static_cast<std::size_t>(N), -1);
  // Saved candidate lists for restoration, one snapshot per assignment level.
  std::vector<std::vector<std::pair<int, std::vector<int>>>> trail;

  auto value_ok = [&](int v, int w) {
    // Every incident facet must retain a candidate whose color(v)-vertex is w.
    for (int fi : incident[static_cast<std::size_t>(v)]) {
      bool any = false;
      for (int gi : candidates[static_cast<std::size_t>(fi)])
        if (d.facet_vertex(gi, p.vertex_color[static_cast<std::size_t>(v)]) == w) { any = true; break; }
      if (!any) return false;
    }
    return true;
  };

  auto assign = [&](int v, int w) {
    assignment[static_cast<std::size_t>(v)] = w;
    trail.emplace_back();
    for (int fi : incident[static_cast<std::size_t>(v)]) {
      std::vector<int> filtered;
      for (int gi : candidates[static_cast<std::size_t>(fi)])
        if (d.facet_vertex(gi, p.vertex_color[static_cast<std::size_t>(v)]) == w)
          filtered.push_back(gi);
      trail.back().emplace_back(fi, std::move(candidates[static_cast<std::size_t>(fi)]));
      candidates[static_cast<std::size_t>(fi)] = std::move(filtered);
    }
  };

  auto unassign = [&](int v) {
    assignment[static_cast<std::size_t>(v)] = -1;
    for (auto& [fi, saved] : trail.back()) candidates[static_cast<std::size_t>(fi)] = std::move(saved);
    trail.pop_back();
  };

  std::uint64_t nodes = 0, backtracks = 0;
  // Depth-first over var_order with per-level value cursors.
  std::vector<std::size_t> cursor(static_cast<std::size_t>(N), 0);
  int level = 0;
  while (level >= 0 && level < N) {
    int v = var_order[static_cast<std::size_t>(level)];
    const auto& dom = domains[static_cast<std::size_t>(v)];
    bool advanced = false;
    for (std::size_t k = cursor[static_cast<std::size_t>(level)]; k < dom.size(); ++k) {
      int w = dom[k];
      ++nodes;
      if (!value_ok(v, w)) continue;
      assign(v, w);
      cursor[static_cast<std::size_t>(level)] = k + 1;
      ++level;
      if (level < N) cursor[static_cast<std::size_t>(level)] = 0;
      advanced = true;
      break;
    }
    if (advanced) continue;
    // No value fits: back up.
    ++backtracks;
    --level;
    if (level >= 0) unassign(var_order[static_cast<std::size_t>(level)]);
  }
  const bool found = level == N;

  verdict.stats.nodes = nodes;
  verdict.stats.backtracks = backtracks;
  verdict.solvable = found;
  if (found) {
    ChromaticMap h;
    h.source = p;
    h.target = d;
    h.map = assignment;
    verdict.witness = std::move(h);
  }
  verdict.stats.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start).count();
  return verdict;
}

// Independent witness verification: chromatic-map laws plus the commuting
// triangle, checked by direct loops rather than the search machinery.
inline bool check_witness(const ChromaticComplex& p, const ChromaticMap& pi,
                          const DeltaSubmodel& delta, const ChromaticMap& h) {
  const ChromaticComplex& d = delta.model.complex;
  if (h.source.vertex_ids != p.vertex_ids || h.target.vertex_ids != d.vertex_ids) return false;
  if (static_cast<int>(h.map.size()) != p.n_vertices()) return false;
  for (int v = 0; v < p.n_vertices(); ++v) {
    int w = h.map[static_cast<std::size_t>(v)];
    if (w < 0 || w >= d.n_vertices()) return false;
    if (p.vertex_color[static_cast<std::size_t>(v)] != d.vertex_color[static_cast<std::size_t>(w)])
      return false;
    if (delta.pi_input.map[static_cast<std::size_t>(w)] != pi.map[static_cast<std::size_t>(v)])
      return false;  // someone would forget its own input
  }
  for (const auto& facet : p.facets) {
    std::vector<int> image;
    for (int v : facet) image.push_back(h.map[static_cast<std::size_t>(v)]);
    std::sort(image.begin(), image.end());
    if (!std::binary_search(d.facets.begin(), d.facets.end(), image)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// End-to-end driver
// ---------------------------------------------------------------------------

struct TaskRun {
  SolvabilityVerdict verdict;
  ProtocolResult protocol;     // P and π_I : P → I
  DeltaSubmodel delta;         // Δ* with its projections
  SimplicialModel input;       // the (possibly transported) input model
  SimplicialModel output;      // likewise
};

// Build P for the given number of rounds, build Δ*, and search. Kripke tasks
// are transported to the simplicial side first.
inline TaskRun solve_task(const TaskSpec& task_any_kind, int rounds,
                          const SolveOptions& options = {}) {
  TaskSpec task = task_to_simplicial(task_any_kind);
  TaskRun run;
  run.input = *task.simplicial_input;
  run.output = *task.simplicial_output;
  run.delta = build_delta_submodel(task);
  run.protocol = protocol_complex(run.input, rounds);
  run.verdict =
      check_solvability(run.protocol.model.complex, run.protocol.pi, run.delta, options);
  if (run.verdict.witness)
    run.verdict.decision_map = extract_decision_map(*run.verdict.witness, run.delta, run.output);
  return run;
}

}  // namespace episolve
