#pragma once

// Multi-agent S5 Kripke frames and models.
//
// A frame stores one partition of the state set per agent, so every relation
// is an equivalence by construction. States are kept sorted by id; partitions
// are canonical; hence structurally equal values denote equal frames and every
// iteration order below is deterministic.
//
// A model adds an ordered atom set and, per state, a consistent and maximal
// set of literals over those atoms — i.e. exactly one polarity per atom, which
// we store as one bool per (state, atom).

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "episolve/common.hpp"

namespace episolve {

// ---------------------------------------------------------------------------
// Frames
// ---------------------------------------------------------------------------

struct KripkeFrame {
  std::vector<std::string> agents;   // nonempty, unique, in user-given order
  std::vector<std::string> states;   // nonempty, unique, sorted
  std::vector<Partition> rel;        // one per agent, over the states

  int n_states() const { return static_cast<int>(states.size()); }
  int n_agents() const { return static_cast<int>(agents.size()); }

  int state_index(std::string_view id) const { return index_of(states, id); }
  int agent_index(std::string_view a) const {
    for (int i = 0; i < n_agents(); ++i)
      if (agents[static_cast<std::size_t>(i)] == a) return i;
    return -1;
  }
  bool related(int agent, int u, int v) const {
    return rel[static_cast<std::size_t>(agent)].related(u, v);
  }

  bool operator==(const KripkeFrame&) const = default;
};

// Named relation groups: agent id -> list of state groups; each group's states
// end up mutually related (a 2-element group is an edge). Agents omitted from
// the map get the identity relation.
using RelationGroups = std::map<std::string, std::vector<std::vector<std::string>>>;

inline KripkeFrame make_frame(std::vector<std::string> agents,
                              std::vector<std::string> states,
                              const RelationGroups& groups) {
  if (agents.empty()) fail(ErrorCode::kInvalidArgument, "frame needs at least one agent");
  if (states.empty()) fail(ErrorCode::kInvalidArgument, "frame needs at least one state");
  for (std::size_t i = 0; i < agents.size(); ++i)
    for (std::size_t j = i + 1; j < agents.size(); ++j)
      if (agents[i] == agents[j])
        fail(ErrorCode::kInvalidArgument, "duplicate agent id: " + agents[i]);

  std::sort(states.begin(), states.end());
  for (std::size_t i = 1; i < states.size(); ++i)
    if (states[i - 1] == states[i])
      fail(ErrorCode::kInvalidArgument, "duplicate state id: " + states[i]);

  KripkeFrame f;
  f.agents = std::move(agents);
  f.states = std::move(states);
  f.rel.reserve(f.agents.size());
  for (const auto& a : f.agents) {
    auto it = groups.find(a);
    if (it == groups.end()) {
      f.rel.push_back(Partition::identity(f.n_states()));
      continue;
    }
    std::vector<std::vector<int>> idx_groups;
    for (const auto& g : it->second) {
      std::vector<int> ig;
      for (const auto& id : g) {
        int k = f.state_index(id);
        if (k < 0) fail(ErrorCode::kInvalidArgument, "relation for agent " + a + " mentions unknown state: " + id);
        ig.push_back(k);
      }
      idx_groups.push_back(std::move(ig));
    }
    f.rel.push_back(Partition::from_groups(f.n_states(), idx_groups));
  }
  for (const auto& [a, _] : groups)
    if (f.agent_index(a) < 0)
      fail(ErrorCode::kInvalidArgument, "relations mention unknown agent: " + a);
  return f;
}

inline ValidationReport validate_frame(const KripkeFrame& f) {
  ValidationReport r;
  if (f.agents.empty()) r.error("no agents");
  if (f.states.empty()) r.error("no states");
  if (!sorted_unique(f.states)) r.error("states are not sorted and unique");
  for (std::size_t i = 0; i < f.agents.size(); ++i)
    for (std::size_t j = i + 1; j < f.agents.size(); ++j)
      if (f.agents[i] == f.agents[j]) r.error("duplicate agent id: " + f.agents[i]);
  if (f.rel.size() != f.agents.size()) {
    r.error("relation count differs from agent count");
    return r;
  }
  for (int a = 0; a < f.n_agents(); ++a) {
    const auto& p = f.rel[static_cast<std::size_t>(a)];
    if (p.size() != f.n_states())
      r.error("relation for agent " + f.agents[static_cast<std::size_t>(a)] +
              " is over the wrong number of states");
  }
  return r;
}

// Proper: no two distinct states are related by every agent.
inline bool is_proper(const KripkeFrame& f) {
  return meet_all(f.n_states(), f.rel).is_identity();
}

// ---------------------------------------------------------------------------
// Frame morphisms
// ---------------------------------------------------------------------------

// A function on states that preserves every agent's relation. Stored with its
// endpoints so composition and transport can check compatibility.
struct FrameMorphism {
  KripkeFrame source;
  KripkeFrame target;
  std::vector<int> map;  // source state index -> target state index

  int operator()(int u) const { return map[static_cast<std::size_t>(u)]; }
};

inline bool is_morphism(const KripkeFrame& m, const KripkeFrame& n, const std::vector<int>& f) {
  if (m.agents != n.agents) return false;
  if (static_cast<int>(f.size()) != m.n_states()) return false;
  for (int v : f)
    if (v < 0 || v >= n.n_states()) return false;
  for (int a = 0; a < m.n_agents(); ++a)
    for (const auto& cls : m.rel[static_cast<std::size_t>(a)].classes())
      for (std::size_t i = 1; i < cls.size(); ++i)
        if (!n.related(a, f[static_cast<std::size_t>(cls[0])], f[static_cast<std::size_t>(cls[i])]))
          return false;
  return true;
}

inline bool is_morphism(const FrameMorphism& h) { return is_morphism(h.source, h.target, h.map); }

inline FrameMorphism compose(const FrameMorphism& g, const FrameMorphism& f) {
  // g after f.
  if (f.target.states != g.source.states)
    fail(ErrorCode::kInvalidArgument, "morphism composition endpoint mismatch");
  FrameMorphism h;
  h.source = f.source;
  h.target = g.target;
  h.map.reserve(f.map.size());
  for (int u : f.map) h.map.push_back(g.map[static_cast<std::size_t>(u)]);
  return h;
}

// Generated id for a product state.
inline std::string pair_id(const std::string& a, const std::string& b) {
  return "(" + a + "," + b + ")";
}

struct FrameProduct {
  KripkeFrame product;
  FrameMorphism pi_left;
  FrameMorphism pi_right;
};

// Product frame: all state pairs, related componentwise.
inline FrameProduct frame_product(const KripkeFrame& m, const KripkeFrame& n) {
  if (m.agents != n.agents)
    fail(ErrorCode::kInvalidArgument, "frame product requires identical agent lists");

  // Pair ids sort by (left, right) because states are sorted and '(' prefixes
  // are common; build in that order and remember the index map.
  KripkeFrame p;
  p.agents = m.agents;
  std::vector<std::pair<int, int>> pairs;
  for (int u = 0; u < m.n_states(); ++u)
    for (int v = 0; v < n.n_states(); ++v) {
      p.states.push_back(pair_id(m.states[static_cast<std::size_t>(u)],
                                 n.states[static_cast<std::size_t>(v)]));
      pairs.emplace_back(u, v);
    }
  // Sort states with their pair tags to restore the canonical id order.
  std::vector<int> order(p.states.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return p.states[static_cast<std::size_t>(i)] < p.states[static_cast<std::size_t>(j)];
  });
  std::vector<std::string> sorted_states;
  std::vector<std::pair<int, int>> sorted_pairs;
  for (int i : order) {
    sorted_states.push_back(p.states[static_cast<std::size_t>(i)]);
    sorted_pairs.push_back(pairs[static_cast<std::size_t>(i)]);
  }
  p.states = std::move(sorted_states);
  pairs = std::move(sorted_pairs);
  for (std::size_t i = 1; i < p.states.size(); ++i)
    if (p.states[i - 1] == p.states[i])
      fail(ErrorCode::kInvalidArgument, "generated product ids collide: " + p.states[i] +
                                            " (state ids may not contain ',' or parentheses)");

  for (int a = 0; a < p.n_agents(); ++a) {
    std::vector<int> cls(pairs.size());
    const auto& pm = m.rel[static_cast<std::size_t>(a)];
    const auto& pn = n.rel[static_cast<std::size_t>(a)];
    for (std::size_t k = 0; k < pairs.size(); ++k)
      cls[k] = pm.class_index(pairs[k].first) * (pn.class_count() + 1) + pn.class_index(pairs[k].second);
    p.rel.push_back(Partition::from_class_of(cls));
  }

  FrameProduct out;
  out.pi_left.source = p;
  out.pi_left.target = m;
  out.pi_right.source = p;
  out.pi_right.target = n;
  for (auto [u, v] : pairs) {
    out.pi_left.map.push_back(u);
    out.pi_right.map.push_back(v);
  }
  out.product = std::move(p);
  return out;
}

// ---------------------------------------------------------------------------
// Isomorphism search
// ---------------------------------------------------------------------------

namespace detail {

// Per-state signature that any isomorphism must preserve: the multiset of
// class sizes indexed by agent.
inline std::vector<int> state_signature(const KripkeFrame& f, int u) {
  std::vector<int> sig;
  sig.reserve(f.rel.size());
  for (const auto& p : f.rel) sig.push_back(static_cast<int>(p.class_members_of(u).size()));
  return sig;
}

// Backtracking search for a relation-preserving bijection, trying states and
// images in canonical (sorted-id) order so the first hit is the
// lexicographically least witness.
template <typename Extra>
std::optional<std::vector<int>> find_bijection(const KripkeFrame& m, const KripkeFrame& n,
                                               const Extra& extra_ok) {
  if (m.agents != n.agents || m.n_states() != n.n_states()) return std::nullopt;
  const int N = m.n_states();
  std::vector<std::vector<int>> sig_m, sig_n;
  for (int u = 0; u < N; ++u) sig_m.push_back(state_signature(m, u));
  for (int v = 0; v < N; ++v) sig_n.push_back(state_signature(n, v));

  std::vector<int> img(static_cast<std::size_t>(N), -1);
  std::vector<bool> used(static_cast<std::size_t>(N), false);

  auto consistent = [&](int u, int v) {
    if (sig_m[static_cast<std::size_t>(u)] != sig_n[static_cast<std::size_t>(v)]) return false;
    if (!extra_ok(u, v)) return false;
    for (int a = 0; a < m.n_agents(); ++a)
      for (int w = 0; w < u; ++w) {
        bool src = m.related(a, u, w);
        bool dst = n.related(a, v, img[static_cast<std::size_t>(w)]);
        if (src != dst) return false;
      }
    return true;
  };

  // Iterative DFS over assignment prefixes.
  int u = 0;
  std::vector<int> attempt(static_cast<std::size_t>(N), 0);
  while (true) {
    if (u == N) return img;
    bool advanced = false;
    for (int v = attempt[static_cast<std::size_t>(u)]; v < N; ++v) {
      if (used[static_cast<std::size_t>(v)] || !consistent(u, v)) continue;
      img[static_cast<std::size_t>(u)] = v;
      used[static_cast<std::size_t>(v)] = true;
      attempt[static_cast<std::size_t>(u)] = v + 1;
      ++u;
      if (u < N) attempt[static_cast<std::size_t>(u)] = 0;
      advanced = true;
      break;
    }
    if (advanced) continue;
    // exhausted images for u: backtrack
    if (u == 0) return std::nullopt;
    --u;
    used[static_cast<std::size_t>(img[static_cast<std::size_t>(u)])] = false;
    img[static_cast<std::size_t>(u)] = -1;
  }
}

}  // namespace detail

// Relation-preserving bijection in both directions; returns the
// lexicographically least witness (under canonical state order), if any.
inline std::optional<FrameMorphism> frames_isomorphic(const KripkeFrame& m, const KripkeFrame& n) {
  auto img = detail::find_bijection(m, n, [](int, int) { return true; });
  if (!img) return std::nullopt;
  return FrameMorphism{m, n, *img};
}

// ---------------------------------------------------------------------------
// Models
// ---------------------------------------------------------------------------

// One literal per atom per state: val[s][j] is the polarity of atom j at s.
// `owner[j]` is the agent index owning atom j, or -1 when unowned; ownership
// is only required by the operations that say so.
struct KripkeModel {
  KripkeFrame frame;
  std::vector<std::string> ap;  // sorted, unique
  std::vector<int> owner;       // parallel to ap; agent index or -1
  std::vector<std::vector<bool>> val;  // state-major

  int atom_index(std::string_view name) const { return index_of(ap, name); }
  bool truth(int state, int atom) const {
    return val[static_cast<std::size_t>(state)][static_cast<std::size_t>(atom)];
  }

  bool operator==(const KripkeModel&) const = default;
};

// Literal spelled as "p" or "!p".
struct Literal {
  std::string atom;
  bool positive = true;
};

inline Literal parse_literal(std::string_view s) {
  bool positive = true;
  if (!s.empty() && s[0] == '!') {
    positive = false;
    s.remove_prefix(1);
  }
  if (s.empty()) fail(ErrorCode::kInvalidArgument, "empty literal");
  return Literal{std::string(s), positive};
}

inline std::string literal_string(const std::string& atom, bool positive) {
  return positive ? atom : "!" + atom;
}

struct AtomDecl {
  std::string name;
  std::string owner;  // empty = unowned
};

// Valuations: state id -> literal strings. Every atom must be assigned exactly
// once per state (the stored form is maximal and consistent by construction).
inline KripkeModel make_model(KripkeFrame frame, std::vector<AtomDecl> atoms,
                              const std::map<std::string, std::vector<std::string>>& valuations) {
  std::sort(atoms.begin(), atoms.end(), [](const AtomDecl& x, const AtomDecl& y) { return x.name < y.name; });
  for (std::size_t i = 1; i < atoms.size(); ++i)
    if (atoms[i - 1].name == atoms[i].name)
      fail(ErrorCode::kInvalidArgument, "duplicate atom: " + atoms[i].name);

  KripkeModel m;
  m.frame = std::move(frame);
  for (const auto& d : atoms) {
    m.ap.push_back(d.name);
    if (d.owner.empty()) {
      m.owner.push_back(-1);
    } else {
      int a = m.frame.agent_index(d.owner);
      if (a < 0) fail(ErrorCode::kInvalidArgument, "atom " + d.name + " owned by unknown agent: " + d.owner);
      m.owner.push_back(a);
    }
  }

  const int n_ap = static_cast<int>(m.ap.size());
  m.val.assign(static_cast<std::size_t>(m.frame.n_states()),
               std::vector<bool>(static_cast<std::size_t>(n_ap), false));
  std::vector<std::vector<bool>> assigned(static_cast<std::size_t>(m.frame.n_states()),
                                          std::vector<bool>(static_cast<std::size_t>(n_ap), false));
  for (const auto& [sid, lits] : valuations) {
    int s = m.frame.state_index(sid);
    if (s < 0) fail(ErrorCode::kInvalidArgument, "valuation for unknown state: " + sid);
    for (const auto& lit_s : lits) {
      Literal lit = parse_literal(lit_s);
      int j = m.atom_index(lit.atom);
      if (j < 0) fail(ErrorCode::kInvalidArgument, "valuation at " + sid + " uses unknown atom: " + lit.atom);
      if (assigned[static_cast<std::size_t>(s)][static_cast<std::size_t>(j)] &&
          m.val[static_cast<std::size_t>(s)][static_cast<std::size_t>(j)] != lit.positive)
        fail(ErrorCode::kInconsistentValuation,
             "state " + sid + " assigns both polarities of " + lit.atom);
      assigned[static_cast<std::size_t>(s)][static_cast<std::size_t>(j)] = true;
      m.val[static_cast<std::size_t>(s)][static_cast<std::size_t>(j)] = lit.positive;
    }
  }
  for (int s = 0; s < m.frame.n_states(); ++s)
    for (int j = 0; j < n_ap; ++j)
      if (!assigned[static_cast<std::size_t>(s)][static_cast<std::size_t>(j)])
        fail(ErrorCode::kInvalidArgument, "state " + m.frame.states[static_cast<std::size_t>(s)] +
                                              " does not assign atom " + m.ap[static_cast<std::size_t>(j)]);
  return m;
}

inline ValidationReport validate_model(const KripkeModel& m) {
  ValidationReport r = validate_frame(m.frame);
  if (!sorted_unique(m.ap) && !m.ap.empty()) r.error("atoms are not sorted and unique");
  if (m.owner.size() != m.ap.size()) r.error("owner list length differs from atom list");
  for (int o : m.owner)
    if (o < -1 || o >= m.frame.n_agents()) r.error("atom owner out of range");
  if (m.val.size() != static_cast<std::size_t>(m.frame.n_states()))
    r.error("valuation row count differs from state count");
  for (const auto& row : m.val)
    if (row.size() != m.ap.size()) r.error("valuation row length differs from atom count");
  return r;
}

// Literal set of a state, in atom order.
inline std::vector<std::string> state_literals(const KripkeModel& m, int s) {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < m.ap.size(); ++j)
    out.push_back(literal_string(m.ap[j], m.val[static_cast<std::size_t>(s)][j]));
  return out;
}

// Model morphism: frame morphism whose images only lose information —
// L(f(s)) ⊆ L(s). With maximal valuations this says every target atom also
// appears in the source with the same truth value at s.
inline bool is_model_morphism(const KripkeModel& m, const KripkeModel& n, const std::vector<int>& f) {
  if (!is_morphism(m.frame, n.frame, f)) return false;
  std::vector<int> src_atom(n.ap.size(), -1);
  for (std::size_t j = 0; j < n.ap.size(); ++j) {
    src_atom[j] = m.atom_index(n.ap[j]);
    if (src_atom[j] < 0) return false;  // target literal over an atom the source lacks
  }
  for (int s = 0; s < m.frame.n_states(); ++s)
    for (std::size_t j = 0; j < n.ap.size(); ++j)
      if (n.val[static_cast<std::size_t>(f[static_cast<std::size_t>(s)])][j] !=
          m.val[static_cast<std::size_t>(s)][static_cast<std::size_t>(src_atom[j])])
        return false;
  return true;
}

struct ModelProduct {
  KripkeModel product;
  FrameMorphism pi_left;
  FrameMorphism pi_right;
};

// Product model over the product frame; the valuation of a pair is the union
// of the factors' literal sets, which must agree on shared atoms.
inline ModelProduct model_product(const KripkeModel& m, const KripkeModel& n) {
  FrameProduct fp = frame_product(m.frame, n.frame);

  // Merge atom sets; owners must agree where atoms coincide.
  std::vector<std::string> ap = m.ap;
  std::vector<int> owner = m.owner;
  for (std::size_t j = 0; j < n.ap.size(); ++j) {
    int k = index_of(ap, n.ap[j]);
    if (k < 0) {
      auto pos = std::lower_bound(ap.begin(), ap.end(), n.ap[j]);
      int at = static_cast<int>(pos - ap.begin());
      ap.insert(pos, n.ap[j]);
      owner.insert(owner.begin() + at, n.owner[j]);
    } else if (owner[static_cast<std::size_t>(k)] != n.owner[j]) {
      fail(ErrorCode::kInvalidArgument, "product factors disagree on the owner of atom " + n.ap[j]);
    }
  }

  KripkeModel p;
  p.frame = fp.product;
  p.ap = std::move(ap);
  p.owner = std::move(owner);
  p.val.assign(static_cast<std::size_t>(p.frame.n_states()),
               std::vector<bool>(p.ap.size(), false));
  for (int s = 0; s < p.frame.n_states(); ++s) {
    int u = fp.pi_left.map[static_cast<std::size_t>(s)];
    int v = fp.pi_right.map[static_cast<std::size_t>(s)];
    for (std::size_t j = 0; j < p.ap.size(); ++j) {
      int jm = m.atom_index(p.ap[j]);
      int jn = n.atom_index(p.ap[j]);
      bool bit = false;
      if (jm >= 0 && jn >= 0) {
        bool bm = m.truth(u, jm), bn = n.truth(v, jn);
        if (bm != bn)
          fail(ErrorCode::kInconsistentValuation,
               "product pair " + p.frame.states[static_cast<std::size_t>(s)] +
                   " joins clashing literals over atom " + p.ap[j]);
        bit = bm;
      } else if (jm >= 0) {
        bit = m.truth(u, jm);
      } else {
        bit = n.truth(v, jn);
      }
      p.val[static_cast<std::size_t>(s)][j] = bit;
    }
  }

  return ModelProduct{std::move(p), std::move(fp.pi_left), std::move(fp.pi_right)};
}

// Frame isomorphism that additionally preserves valuations exactly (the atom
// sets must coincide). Not required by the core API but convenient for tests
// and round-trip checks.
inline std::optional<FrameMorphism> models_isomorphic(const KripkeModel& m, const KripkeModel& n) {
  if (m.ap != n.ap) return std::nullopt;
  auto img = detail::find_bijection(m.frame, n.frame, [&](int u, int v) {
    return m.val[static_cast<std::size_t>(u)] == n.val[static_cast<std::size_t>(v)];
  });
  if (!img) return std::nullopt;
  return FrameMorphism{m.frame, n.frame, *img};
}

}  // namespace episolve
