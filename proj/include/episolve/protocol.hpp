#pragma once

// Immediate-snapshot protocol structure.
//
// A one-round schedule is an ordered partition of the agents into concurrency
// blocks; agents in earlier blocks write and are seen by everyone from their
// own block onward. Agent a's view under schedule p is the union of blocks up
// to and including a's own.
//
// protocol_complex iterates the one-round construction with full-information
// vertices: after a round, an agent's new vertex is determined by its color
// and the set of previous-round vertices it saw. Iterating therefore re-derives
// views over round-(r-1) states, which is exactly the standard chromatic
// subdivision of the previous complex. The accompanying action models expose
// the same round on the Kripke side: the plain one (preconditions all true)
// matches the complex construction on single-facet inputs, while the
// input-aware one (one point per schedule and input state, precondition
// pinning the state) matches it on every input.

#include <map>
#include <string>
#include <vector>

#include "episolve/common.hpp"
#include "episolve/equivalence.hpp"
#include "episolve/logic.hpp"
#include "episolve/simplicial.hpp"

namespace episolve {

// ---------------------------------------------------------------------------
// Ordered partitions (schedules)
// ---------------------------------------------------------------------------

struct OrderedPartition {
  std::vector<std::vector<int>> blocks;  // agent indices; each block sorted

  bool operator==(const OrderedPartition&) const = default;
};

// Rendered with '+' inside a block and '|' between blocks, e.g. "a0+a2|a1".
inline std::string schedule_string(const OrderedPartition& p, const std::vector<std::string>& agents) {
  std::vector<std::string> parts;
  for (const auto& b : p.blocks) {
    std::vector<std::string> names;
    for (int a : b) names.push_back(agents[static_cast<std::size_t>(a)]);
    parts.push_back(join_strings(names, "+"));
  }
  return join_strings(parts, "|");
}

namespace detail {

inline void enumerate_partitions_rec(const std::vector<int>& remaining, OrderedPartition& acc,
                                     std::vector<OrderedPartition>& out) {
  if (remaining.empty()) {
    out.push_back(acc);
    return;
  }
  const int k = static_cast<int>(remaining.size());
  // Nonempty subsets of `remaining` as the next block, in ascending bitmask
  // order over positions (a fixed, documented enumeration order).
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    std::vector<int> block, rest;
    for (int i = 0; i < k; ++i)
      ((mask >> i) & 1u ? block : rest).push_back(remaining[static_cast<std::size_t>(i)]);
    acc.blocks.push_back(block);
    enumerate_partitions_rec(rest, acc, out);
    acc.blocks.pop_back();
  }
}

}  // namespace detail

// All ordered partitions of {0, ..., n_agents-1}. (3, 13, 75 of them for
// 2, 3, 4 agents — the Fubini numbers.)
inline std::vector<OrderedPartition> enumerate_ordered_partitions(int n_agents) {
  if (n_agents <= 0) fail(ErrorCode::kInvalidArgument, "need at least one agent");
  if (n_agents > 16) fail(ErrorCode::kInvalidArgument, "schedule enumeration capped at 16 agents");
  std::vector<int> all(static_cast<std::size_t>(n_agents));
  std::iota(all.begin(), all.end(), 0);
  std::vector<OrderedPartition> out;
  OrderedPartition acc;
  detail::enumerate_partitions_rec(all, acc, out);
  return out;
}

// Agents visible to `agent` under schedule p: everything up to and including
// its own block, sorted.
inline std::vector<int> iis_view(int agent, const OrderedPartition& p) {
  std::vector<int> view;
  for (const auto& b : p.blocks) {
    view.insert(view.end(), b.begin(), b.end());
    if (contains(b, agent)) {
      std::sort(view.begin(), view.end());
      return view;
    }
  }
  fail(ErrorCode::kInvalidArgument, "agent does not occur in the schedule");
}

// ---------------------------------------------------------------------------
// Action models for one immediate-snapshot round
// ---------------------------------------------------------------------------

// One point per schedule, precondition true; a cannot tell two schedules
// apart iff they give it the same view.
inline ActionModel iis_one_round_action_model(const std::vector<std::string>& agents) {
  auto schedules = enumerate_ordered_partitions(static_cast<int>(agents.size()));
  std::vector<std::string> points;
  for (const auto& p : schedules) points.push_back(schedule_string(p, agents));

  RelationGroups groups;
  for (int a = 0; a < static_cast<int>(agents.size()); ++a) {
    std::map<std::vector<int>, std::vector<std::string>> by_view;
    for (const auto& p : schedules)
      by_view[iis_view(a, p)].push_back(schedule_string(p, agents));
    for (auto& [view, ids] : by_view) groups[agents[static_cast<std::size_t>(a)]].push_back(ids);
  }
  return make_action_model("iis", agents, points, groups, {});
}

// One point per (schedule, state of m), precondition the state's literal
// conjunction. Two points look alike to a iff the views coincide and the
// states are indistinguishable to every agent in that view. Updating m with
// this model gives exactly the one-round protocol model, for any input —
// including inputs where the plain model above conflates too much (an agent
// that saw only itself must still distinguish worlds it can distinguish, and
// the plain model's product cannot express that the *adversary's* schedule
// point carries no information about the input).
//
// Preconditions pin states through literals, so the states of m must carry
// pairwise distinct valuations.
inline ActionModel iis_input_aware_action_model(const KripkeModel& m) {
  for (int s = 0; s < m.frame.n_states(); ++s)
    for (int t = s + 1; t < m.frame.n_states(); ++t)
      if (m.val[static_cast<std::size_t>(s)] == m.val[static_cast<std::size_t>(t)])
        fail(ErrorCode::kInvalidArgument,
             "input-aware action model needs pairwise distinct valuations; states " +
                 m.frame.states[static_cast<std::size_t>(s)] + " and " +
                 m.frame.states[static_cast<std::size_t>(t)] + " coincide");

  const auto& agents = m.frame.agents;
  auto schedules = enumerate_ordered_partitions(m.frame.n_agents());

  std::vector<std::string> points;
  std::map<std::string, Formula> preconditions;
  for (const auto& p : schedules) {
    std::string ps = schedule_string(p, agents);
    for (int s = 0; s < m.frame.n_states(); ++s) {
      std::string id = pair_id(ps, m.frame.states[static_cast<std::size_t>(s)]);
      points.push_back(id);
      Formula pre = Formula::truth();
      bool first = true;
      for (std::size_t j = 0; j < m.ap.size(); ++j) {
        Formula lit = m.val[static_cast<std::size_t>(s)][j] ? Formula::atom(m.ap[j])
                                                            : Formula::negation(Formula::atom(m.ap[j]));
        pre = first ? lit : Formula::conjunction(std::move(pre), std::move(lit));
        first = false;
      }
      preconditions.emplace(std::move(id), std::move(pre));
    }
  }

  RelationGroups groups;
  for (int a = 0; a < static_cast<int>(agents.size()); ++a) {
    // Key: the view, plus the view agents' equivalence classes of the state.
    std::map<std::pair<std::vector<int>, std::vector<int>>, std::vector<std::string>> by_key;
    for (const auto& p : schedules) {
      std::vector<int> view = iis_view(a, p);
      for (int s = 0; s < m.frame.n_states(); ++s) {
        std::vector<int> state_key;
        for (int b : view)
          state_key.push_back(m.frame.rel[static_cast<std::size_t>(b)].class_index(s));
        by_key[{view, state_key}].push_back(
            pair_id(schedule_string(p, agents), m.frame.states[static_cast<std::size_t>(s)]));
      }
    }
    for (auto& [key, ids] : by_key) groups[agents[static_cast<std::size_t>(a)]].push_back(ids);
  }
  return make_action_model("iis_aware", agents, points, groups, preconditions);
}

// ---------------------------------------------------------------------------
// Protocol complexes
// ---------------------------------------------------------------------------

struct ProtocolResult {
  SimplicialModel model;
  ChromaticMap pi;  // onto the input complex (composed across rounds)
};

namespace detail {

// One immediate-snapshot round on the simplicial side. A new vertex is the
// pair (color, set of previous vertices seen); facets come from (facet,
// schedule) pairs. Vertex ids are positional ("r3_v000007"), zero-padded so
// the canonical sorted order equals creation order.
inline ProtocolResult protocol_one_round(const SimplicialModel& in, int round_tag) {
  const auto& agents = in.complex.agents;
  auto schedules = enumerate_ordered_partitions(in.complex.n_agents());

  using VertexKey = std::pair<int, std::vector<int>>;  // (color, seen prev vertices)
  std::map<VertexKey, int> vertex_of_key;
  std::vector<VertexKey> keys;  // by new vertex number
  std::vector<FacetDecl> facets;

  auto vertex_name = [&](int k) {
    std::string num = std::to_string(k);
    if (num.size() < 6) num.insert(num.begin(), 6 - num.size(), '0');
    return "r" + std::to_string(round_tag) + "_v" + num;
  };

  for (int fi = 0; fi < in.complex.n_facets(); ++fi) {
    for (const auto& p : schedules) {
      FacetDecl fd;
      fd.id = pair_id(in.complex.facet_ids[static_cast<std::size_t>(fi)],
                      schedule_string(p, agents));
      for (int a = 0; a < in.complex.n_agents(); ++a) {
        std::vector<int> seen;
        for (int b : iis_view(a, p)) seen.push_back(in.complex.facet_vertex(fi, b));
        std::sort(seen.begin(), seen.end());
        VertexKey key{a, std::move(seen)};
        auto it = vertex_of_key.find(key);
        if (it == vertex_of_key.end()) {
          it = vertex_of_key.emplace(key, static_cast<int>(keys.size())).first;
          keys.push_back(it->first);
        }
        fd.vertices.push_back(vertex_name(it->second));
      }
      facets.push_back(std::move(fd));
    }
  }

  std::vector<VertexDecl> vertices;
  for (std::size_t k = 0; k < keys.size(); ++k)
    vertices.push_back(VertexDecl{vertex_name(static_cast<int>(k)),
                                  agents[static_cast<std::size_t>(keys[k].first)]});

  // A new vertex inherits the literals of the previous vertex of its own
  // color, which is part of its key (an agent always sees itself).
  std::vector<AtomDecl> atoms;
  for (std::size_t j = 0; j < in.ap.size(); ++j)
    atoms.push_back(AtomDecl{in.ap[j], agents[static_cast<std::size_t>(in.owner[j])]});
  std::map<std::string, std::vector<std::string>> vlits;
  std::vector<int> prev_of(keys.size(), -1);
  for (std::size_t k = 0; k < keys.size(); ++k) {
    int color = keys[k].first;
    for (int pv : keys[k].second)
      if (in.complex.vertex_color[static_cast<std::size_t>(pv)] == color) prev_of[k] = pv;
    vlits[vertex_name(static_cast<int>(k))] =
        vertex_literal_strings(in, prev_of[static_cast<std::size_t>(k)]);
  }

  ProtocolResult out;
  out.model = make_simplicial_model(make_complex(agents, vertices, facets), atoms, vlits);
  out.pi.source = out.model.complex;
  out.pi.target = in.complex;
  out.pi.map.assign(static_cast<std::size_t>(out.model.complex.n_vertices()), -1);
  for (std::size_t k = 0; k < keys.size(); ++k) {
    int v = out.model.complex.vertex_index(vertex_name(static_cast<int>(k)));
    out.pi.map[static_cast<std::size_t>(v)] = prev_of[k];
  }
  return out;
}

}  // namespace detail

// Protocol complex after `rounds` immediate-snapshot rounds, with the carrier
// map onto the input complex. rounds = 0 returns the input with the identity.
inline ProtocolResult protocol_complex(const SimplicialModel& input, int rounds) {
  if (rounds < 0) fail(ErrorCode::kInvalidArgument, "rounds must be nonnegative");
  ValidationReport r = validate_simplicial_model(input);
  if (!r.ok()) fail(ErrorCode::kInvalidArgument, "protocol_complex: " + r.errors.front());

  ProtocolResult acc;
  acc.model = input;
  acc.pi.source = input.complex;
  acc.pi.target = input.complex;
  acc.pi.map.resize(static_cast<std::size_t>(input.complex.n_vertices()));
  std::iota(acc.pi.map.begin(), acc.pi.map.end(), 0);

  for (int r_i = 1; r_i <= rounds; ++r_i) {
    ProtocolResult step = detail::protocol_one_round(acc.model, r_i);
    acc.pi = compose(acc.pi, step.pi);
    acc.model = std::move(step.model);
  }
  return acc;
}

// The standard chromatic subdivision of a bare complex: one protocol round
// with no literals in play.
inline ChromaticComplex standard_chromatic_subdivision(const ChromaticComplex& c) {
  SimplicialModel m = make_simplicial_model(c, {}, {});
  return protocol_complex(m, 1).model.complex;
}

}  // namespace episolve
