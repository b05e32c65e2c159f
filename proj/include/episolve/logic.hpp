#pragma once

// Epistemic formulas and their dynamics over S5 models.
//
// Grammar (concrete syntax, parse_formula):
//   expr    := unary ('&' unary)*
//   unary   := '!' unary | 'K' AGENT unary | 'E' group unary | 'C' group unary
//            | '[' NAME ']' unary | primary
//   primary := 'true' | 'false' | ATOM | '(' expr ')'
//   group   := '{' AGENT (',' AGENT)* '}'
// ATOM/AGENT/NAME are words over [A-Za-z0-9_]; K, E, C, true, false reserved.
//
// E_B f abbreviates the conjunction of K_b f over b in B. C_B f is common
// knowledge; it is evaluated through the reachability characterization (f must
// hold everywhere in the B-reachable component) with a greatest-fixpoint
// evaluator available as a cross-check — the two must agree, and
// EvalOptions::cross_check_common makes every C evaluation assert it.
//
// [α] f quantifies over the action points applicable at the current state:
// after every applicable point of α, f holds in the updated model.

#include <cctype>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "episolve/common.hpp"
#include "episolve/kripke.hpp"

namespace episolve {

// ---------------------------------------------------------------------------
// Formulas (immutable, shared subtrees)
// ---------------------------------------------------------------------------

class Formula {
 public:
  enum class Kind { kTrue, kFalse, kAtom, kNot, kAnd, kKnows, kEveryone, kCommon, kBox };

  static Formula truth() { return Formula({Kind::kTrue, {}, {}, {}}); }
  static Formula falsity() { return Formula({Kind::kFalse, {}, {}, {}}); }
  static Formula atom(std::string name) {
    return Formula({Kind::kAtom, std::move(name), {}, {}});
  }
  static Formula negation(Formula f) {
    return Formula({Kind::kNot, {}, {}, {std::move(f)}});
  }
  static Formula conjunction(Formula a, Formula b) {
    return Formula({Kind::kAnd, {}, {}, {std::move(a), std::move(b)}});
  }
  static Formula knows(std::string agent, Formula f) {
    return Formula({Kind::kKnows, std::move(agent), {}, {std::move(f)}});
  }
  static Formula everyone_knows(std::vector<std::string> group, Formula f) {
    return Formula({Kind::kEveryone, {}, std::move(group), {std::move(f)}});
  }
  static Formula common_knowledge(std::vector<std::string> group, Formula f) {
    return Formula({Kind::kCommon, {}, std::move(group), {std::move(f)}});
  }
  static Formula box(std::string action, Formula f) {
    return Formula({Kind::kBox, std::move(action), {}, {std::move(f)}});
  }

  Kind kind() const { return node_->kind; }
  const std::string& text() const { return node_->text; }  // atom / agent / action name
  const std::vector<std::string>& group() const { return node_->group; }
  const Formula& child(std::size_t i = 0) const { return node_->children[i]; }
  std::size_t arity() const { return node_->children.size(); }

  // Maximum nesting depth of epistemic/dynamic operators.
  int modal_depth() const {
    int d = 0;
    for (const auto& ch : node_->children) d = std::max(d, ch.modal_depth());
    switch (kind()) {
      case Kind::kKnows:
      case Kind::kEveryone:
      case Kind::kCommon:
      case Kind::kBox:
        return d + 1;
      default:
        return d;
    }
  }

  std::string to_string() const {
    switch (kind()) {
      case Kind::kTrue: return "true";
      case Kind::kFalse: return "false";
      case Kind::kAtom: return text();
      case Kind::kNot: return "!" + wrap(child());
      case Kind::kAnd: return wrap(child(0)) + " & " + wrap(child(1));
      case Kind::kKnows: return "K " + text() + " " + wrap(child());
      case Kind::kEveryone: return "E {" + join_strings(group(), ",") + "} " + wrap(child());
      case Kind::kCommon: return "C {" + join_strings(group(), ",") + "} " + wrap(child());
      case Kind::kBox: return "[" + text() + "] " + wrap(child());
    }
    return "";
  }

  bool operator==(const Formula& other) const {
    if (node_ == other.node_) return true;
    if (kind() != other.kind() || text() != other.text() || group() != other.group() ||
        arity() != other.arity())
      return false;
    for (std::size_t i = 0; i < arity(); ++i)
      if (!(child(i) == other.child(i))) return false;
    return true;
  }

 private:
  struct Node {
    Kind kind;
    std::string text;
    std::vector<std::string> group;
    std::vector<Formula> children;
  };

  explicit Formula(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}

  static std::string wrap(const Formula& f) {
    // Parenthesize conjunctions under tighter operators so to_string output
    // re-parses to the same tree.
    if (f.kind() == Kind::kAnd) return "(" + f.to_string() + ")";
    return f.to_string();
  }

  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Formula parser
// ---------------------------------------------------------------------------

namespace detail {

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view src) : src_(src) {}

  Formula parse() {
    Formula f = expr();
    skip_ws();
    if (pos_ != src_.size()) fail(ErrorCode::kParse, err("trailing input"));
    return f;
  }

 private:
  std::string err(const std::string& what) const {
    return "formula parse error at offset " + std::to_string(pos_) + ": " + what;
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static bool word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  std::string word() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < src_.size() && word_char(src_[pos_])) ++pos_;
    if (pos_ == start) fail(ErrorCode::kParse, err("expected a name"));
    return std::string(src_.substr(start, pos_ - start));
  }

  std::vector<std::string> agent_group() {
    if (!eat('{')) fail(ErrorCode::kParse, err("expected '{'"));
    std::vector<std::string> group;
    group.push_back(word());
    while (eat(',')) group.push_back(word());
    if (!eat('}')) fail(ErrorCode::kParse, err("expected '}'"));
    return group;
  }

  Formula expr() {
    Formula f = unary();
    while (eat('&')) f = Formula::conjunction(std::move(f), unary());
    return f;
  }

  Formula unary() {
    skip_ws();
    if (eat('!')) return Formula::negation(unary());
    if (eat('[')) {
      std::string name = word();
      if (!eat(']')) fail(ErrorCode::kParse, err("expected ']'"));
      return Formula::box(std::move(name), unary());
    }
    // K/E/C are reserved words, only recognized when a whole word.
    std::size_t save = pos_;
    if (pos_ < src_.size() && word_char(src_[pos_])) {
      std::string w = word();
      // Read the agent/group before the operand; argument lists would leave
      // the evaluation order up to the compiler.
      if (w == "K") {
        std::string agent = word();
        Formula body = unary();
        return Formula::knows(std::move(agent), std::move(body));
      }
      if (w == "E") {
        std::vector<std::string> group = agent_group();
        Formula body = unary();
        return Formula::everyone_knows(std::move(group), std::move(body));
      }
      if (w == "C") {
        std::vector<std::string> group = agent_group();
        Formula body = unary();
        return Formula::common_knowledge(std::move(group), std::move(body));
      }
      if (w == "true") return Formula::truth();
      if (w == "false") return Formula::falsity();
      pos_ = save;
    }
    if (eat('(')) {
      Formula f = expr();
      if (!eat(')')) fail(ErrorCode::kParse, err("expected ')'"));
      return f;
    }
    std::string name = word();
    if (name == "K" || name == "E" || name == "C")
      fail(ErrorCode::kParse, err("reserved word used as atom"));
    return Formula::atom(std::move(name));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Formula parse_formula(std::string_view src) { return detail::FormulaParser(src).parse(); }

// ---------------------------------------------------------------------------
// Action models
// ---------------------------------------------------------------------------

// Like a frame, but points carry preconditions instead of valuations.
struct ActionModel {
  std::string name;  // how [name] refers to it
  std::vector<std::string> agents;
  std::vector<std::string> points;  // sorted, unique
  std::vector<Partition> rel;       // per agent, over points
  std::vector<Formula> pre;         // per point

  int n_points() const { return static_cast<int>(points.size()); }
  int point_index(std::string_view id) const { return index_of(points, id); }

  bool operator==(const ActionModel&) const = default;
};

inline ActionModel make_action_model(std::string name, std::vector<std::string> agents,
                                     std::vector<std::string> points, const RelationGroups& groups,
                                     const std::map<std::string, Formula>& preconditions) {
  // Reuse the frame constructor for sorting/closure, then attach formulas.
  KripkeFrame f = make_frame(std::move(agents), std::move(points), groups);
  ActionModel a;
  a.name = std::move(name);
  a.agents = std::move(f.agents);
  a.points = std::move(f.states);
  a.rel = std::move(f.rel);
  a.pre.assign(a.points.size(), Formula::truth());
  for (const auto& [pid, formula] : preconditions) {
    int p = a.point_index(pid);
    if (p < 0) fail(ErrorCode::kInvalidArgument, "precondition for unknown point: " + pid);
    a.pre[static_cast<std::size_t>(p)] = formula;
  }
  return a;
}

inline ValidationReport validate_action_model(const ActionModel& a) {
  KripkeFrame f;
  f.agents = a.agents;
  f.states = a.points;
  f.rel = a.rel;
  ValidationReport r = validate_frame(f);
  if (a.pre.size() != a.points.size()) r.error("precondition count differs from point count");
  return r;
}

// Formula [name] resolution: name -> action model.
using ActionBindings = std::map<std::string, ActionModel>;

// ---------------------------------------------------------------------------
// Product update
// ---------------------------------------------------------------------------

struct UpdateResult {
  KripkeModel model;
  FrameMorphism projection;  // onto the original model's frame
  bool proper = true;
  std::vector<std::string> warnings;
};

struct EvalOptions {
  // Evaluate every C through both the reachability characterization and the
  // greatest fixpoint, asserting agreement.
  bool cross_check_common = false;
};

inline bool eval(const KripkeModel& m, int state, const Formula& f, const ActionBindings& actions,
                 const EvalOptions& opts);

// Updated model: pairs (s, p) with s satisfying pre(p), related componentwise,
// valuation inherited from the state. Fails with kEmptyProduct when no pair
// survives; warns (and reports proper=false) when distinct survivors are
// related by every agent.
inline UpdateResult product_update(const KripkeModel& m, const ActionModel& act,
                                   const ActionBindings& actions = {},
                                   const EvalOptions& opts = {}) {
  if (m.frame.agents != act.agents)
    fail(ErrorCode::kInvalidArgument, "product update requires identical agent lists");

  std::vector<std::pair<int, int>> pairs;  // (state, point)
  for (int s = 0; s < m.frame.n_states(); ++s)
    for (int p = 0; p < act.n_points(); ++p)
      if (eval(m, s, act.pre[static_cast<std::size_t>(p)], actions, opts)) pairs.emplace_back(s, p);
  if (pairs.empty())
    fail(ErrorCode::kEmptyProduct, "no state satisfies any precondition of action " +
                                       (act.name.empty() ? std::string("<unnamed>") : act.name));

  std::vector<std::string> ids;
  ids.reserve(pairs.size());
  for (auto [s, p] : pairs)
    ids.push_back(pair_id(m.frame.states[static_cast<std::size_t>(s)],
                          act.points[static_cast<std::size_t>(p)]));
  std::vector<int> order(ids.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return ids[static_cast<std::size_t>(i)] < ids[static_cast<std::size_t>(j)];
  });

  UpdateResult out;
  out.model.frame.agents = m.frame.agents;
  std::vector<std::pair<int, int>> sorted_pairs;
  for (int i : order) {
    out.model.frame.states.push_back(ids[static_cast<std::size_t>(i)]);
    sorted_pairs.push_back(pairs[static_cast<std::size_t>(i)]);
  }
  for (std::size_t i = 1; i < out.model.frame.states.size(); ++i)
    if (out.model.frame.states[i - 1] == out.model.frame.states[i])
      fail(ErrorCode::kInvalidArgument, "generated update ids collide: " + out.model.frame.states[i]);
  pairs = std::move(sorted_pairs);

  for (int a = 0; a < m.frame.n_agents(); ++a) {
    const auto& pm = m.frame.rel[static_cast<std::size_t>(a)];
    const auto& pa = act.rel[static_cast<std::size_t>(a)];
    std::vector<int> cls(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k)
      cls[k] = pm.class_index(pairs[k].first) * (pa.class_count() + 1) + pa.class_index(pairs[k].second);
    out.model.frame.rel.push_back(Partition::from_class_of(cls));
  }

  out.model.ap = m.ap;
  out.model.owner = m.owner;
  for (auto [s, p] : pairs) {
    (void)p;
    out.model.val.push_back(m.val[static_cast<std::size_t>(s)]);
  }

  out.projection.source = out.model.frame;
  out.projection.target = m.frame;
  for (auto [s, p] : pairs) {
    (void)p;
    out.projection.map.push_back(s);
  }

  out.proper = is_proper(out.model.frame);
  if (!out.proper)
    out.warnings.push_back("updated model is not proper; quotient() merges duplicate survivors");
  return out;
}

// ---------------------------------------------------------------------------
// Common knowledge and evaluation
// ---------------------------------------------------------------------------

namespace detail {

inline Partition group_reachability(const KripkeFrame& f, const std::vector<int>& agent_idxs) {
  std::vector<Partition> ps;
  for (int a : agent_idxs) ps.push_back(f.rel[static_cast<std::size_t>(a)]);
  return join_all(f.n_states(), ps);
}

inline std::vector<int> resolve_group(const KripkeFrame& f, const std::vector<std::string>& group) {
  if (group.empty()) fail(ErrorCode::kInvalidArgument, "empty agent group");
  std::vector<int> idxs;
  for (const auto& a : group) {
    int i = f.agent_index(a);
    if (i < 0) fail(ErrorCode::kInvalidArgument, "unknown agent in group: " + a);
    idxs.push_back(i);
  }
  return idxs;
}

struct EvalContext {
  const ActionBindings* actions;
  EvalOptions opts;
  // Updated models are computed once per action name and reused across the
  // formula; keyed by name since the base model is fixed per context.
  std::map<std::string, UpdateResult> updates;
};

inline bool eval_node(const KripkeModel& m, int s, const Formula& f, EvalContext& ctx);

// Greatest fixpoint of X = {s : f holds at s and every B-step from s stays in X}.
inline std::vector<bool> common_fixpoint(const KripkeModel& m, const std::vector<int>& agents,
                                         const Formula& f, EvalContext& ctx) {
  const int n = m.frame.n_states();
  std::vector<bool> x(static_cast<std::size_t>(n), true);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int s = 0; s < n; ++s) {
      if (!x[static_cast<std::size_t>(s)]) continue;
      bool keep = eval_node(m, s, f, ctx);
      for (std::size_t k = 0; keep && k < agents.size(); ++k)
        for (int t : m.frame.rel[static_cast<std::size_t>(agents[k])].class_members_of(s))
          if (!x[static_cast<std::size_t>(t)]) { keep = false; break; }
      if (!keep) {
        x[static_cast<std::size_t>(s)] = false;
        changed = true;
      }
    }
  }
  return x;
}

inline bool eval_node(const KripkeModel& m, int s, const Formula& f, EvalContext& ctx) {
  using Kind = Formula::Kind;
  switch (f.kind()) {
    case Kind::kTrue: return true;
    case Kind::kFalse: return false;
    case Kind::kAtom: {
      int j = m.atom_index(f.text());
      if (j < 0) fail(ErrorCode::kInvalidArgument, "formula uses unknown atom: " + f.text());
      return m.truth(s, j);
    }
    case Kind::kNot: return !eval_node(m, s, f.child(), ctx);
    case Kind::kAnd: return eval_node(m, s, f.child(0), ctx) && eval_node(m, s, f.child(1), ctx);
    case Kind::kKnows: {
      int a = m.frame.agent_index(f.text());
      if (a < 0) fail(ErrorCode::kInvalidArgument, "formula uses unknown agent: " + f.text());
      for (int t : m.frame.rel[static_cast<std::size_t>(a)].class_members_of(s))
        if (!eval_node(m, t, f.child(), ctx)) return false;
      return true;
    }
    case Kind::kEveryone: {
      for (int a : resolve_group(m.frame, f.group()))
        for (int t : m.frame.rel[static_cast<std::size_t>(a)].class_members_of(s))
          if (!eval_node(m, t, f.child(), ctx)) return false;
      return true;
    }
    case Kind::kCommon: {
      std::vector<int> agents = resolve_group(m.frame, f.group());
      Partition reach = group_reachability(m.frame, agents);
      bool by_components = true;
      for (int t : reach.class_members_of(s))
        if (!eval_node(m, t, f.child(), ctx)) { by_components = false; break; }
      if (ctx.opts.cross_check_common) {
        std::vector<bool> fix = common_fixpoint(m, agents, f.child(), ctx);
        for (int t = 0; t < m.frame.n_states(); ++t) {
          bool comp = true;
          for (int u : reach.class_members_of(t))
            if (!eval_node(m, u, f.child(), ctx)) { comp = false; break; }
          if (comp != fix[static_cast<std::size_t>(t)])
            fail(ErrorCode::kInvalidArgument,
                 "common-knowledge evaluations disagree at state " +
                     m.frame.states[static_cast<std::size_t>(t)]);
        }
      }
      return by_components;
    }
    case Kind::kBox: {
      auto it = ctx.updates.find(f.text());
      if (it == ctx.updates.end()) {
        if (!ctx.actions) fail(ErrorCode::kInvalidArgument, "no action bound to name: " + f.text());
        auto ait = ctx.actions->find(f.text());
        if (ait == ctx.actions->end())
          fail(ErrorCode::kInvalidArgument, "no action bound to name: " + f.text());
        UpdateResult u;
        try {
          u = product_update(m, ait->second, *ctx.actions, ctx.opts);
        } catch (const Error& e) {
          if (e.code != ErrorCode::kEmptyProduct) throw;
          // Empty update: [α]f is vacuously true everywhere.
          it = ctx.updates.emplace(f.text(), UpdateResult{}).first;
          it->second.model.frame.agents = m.frame.agents;  // marker: no states
          return true;
        }
        it = ctx.updates.emplace(f.text(), std::move(u)).first;
      }
      const UpdateResult& u = it->second;
      if (u.model.frame.states.empty()) return true;  // vacuous (see above)
      for (int t = 0; t < u.model.frame.n_states(); ++t) {
        if (u.projection.map[static_cast<std::size_t>(t)] != s) continue;
        if (!eval(u.model, t, f.child(), ctx.actions ? *ctx.actions : ActionBindings{}, ctx.opts))
          return false;
      }
      return true;
    }
  }
  return false;
}

}  // namespace detail

inline bool eval(const KripkeModel& m, int state, const Formula& f,
                 const ActionBindings& actions = {}, const EvalOptions& opts = {}) {
  if (state < 0 || state >= m.frame.n_states())
    fail(ErrorCode::kInvalidArgument, "eval: state index out of range");
  detail::EvalContext ctx{&actions, opts, {}};
  return detail::eval_node(m, state, f, ctx);
}

inline bool eval(const KripkeModel& m, std::string_view state, const Formula& f,
                 const ActionBindings& actions = {}, const EvalOptions& opts = {}) {
  int s = m.frame.state_index(state);
  if (s < 0) fail(ErrorCode::kInvalidArgument, "eval: unknown state: " + std::string(state));
  return eval(m, s, f, actions, opts);
}

// The B-reachability class of a state: exactly where C_B truths are decided.
inline std::vector<std::string> common_knowledge_class(const KripkeFrame& f,
                                                       const std::vector<std::string>& group,
                                                       std::string_view state) {
  int s = f.state_index(state);
  if (s < 0) fail(ErrorCode::kInvalidArgument, "unknown state: " + std::string(state));
  Partition reach = detail::group_reachability(f, detail::resolve_group(f, group));
  std::vector<std::string> out;
  for (int t : reach.class_members_of(s)) out.push_back(f.states[static_cast<std::size_t>(t)]);
  return out;
}

// ---------------------------------------------------------------------------
// Group restriction and quotient
// ---------------------------------------------------------------------------

// Forget everything outside the group B: agents outside B get the identity
// relation (they now distinguish everything), and atoms owned outside B are
// dropped. Requires ownership for every atom. The result is always proper.
inline KripkeModel restrict_to_group(const KripkeModel& m, const std::vector<std::string>& group) {
  std::vector<int> agents = detail::resolve_group(m.frame, group);
  for (std::size_t j = 0; j < m.ap.size(); ++j)
    if (m.owner[j] < 0)
      fail(ErrorCode::kMissingOwnership,
           "restrict_to_group needs an owner for every atom; " + m.ap[j] + " has none");

  KripkeModel out;
  out.frame.agents = m.frame.agents;
  out.frame.states = m.frame.states;
  for (int a = 0; a < m.frame.n_agents(); ++a)
    out.frame.rel.push_back(contains(agents, a) ? m.frame.rel[static_cast<std::size_t>(a)]
                                                : Partition::identity(m.frame.n_states()));
  for (std::size_t j = 0; j < m.ap.size(); ++j) {
    if (!contains(agents, m.owner[j])) continue;
    out.ap.push_back(m.ap[j]);
    out.owner.push_back(m.owner[j]);
  }
  out.val.assign(static_cast<std::size_t>(m.frame.n_states()), {});
  for (int s = 0; s < m.frame.n_states(); ++s)
    for (std::size_t j = 0; j < m.ap.size(); ++j)
      if (contains(agents, m.owner[j]))
        out.val[static_cast<std::size_t>(s)].push_back(m.val[static_cast<std::size_t>(s)][j]);
  return out;
}

struct QuotientResult {
  KripkeModel model;
  FrameMorphism projection;
};

// Merge states that no agent can tell apart and that carry the same
// valuation. The result is proper unless two merged-distinct states still
// coincide everywhere — impossible, so it always is.
inline QuotientResult quotient(const KripkeModel& m) {
  Partition everyone = meet_all(m.frame.n_states(), m.frame.rel);
  // Refine by valuation equality.
  std::vector<int> cls(static_cast<std::size_t>(m.frame.n_states()));
  std::vector<std::vector<bool>> reps;
  for (int s = 0; s < m.frame.n_states(); ++s) {
    int base = everyone.class_index(s) * (m.frame.n_states() + 1);
    // Distinguish differing valuations inside a class by searching previous
    // members of the same class.
    int tag = 0;
    bool found = false;
    for (int t = 0; t < s; ++t) {
      if (everyone.class_index(t) != everyone.class_index(s)) continue;
      if (m.val[static_cast<std::size_t>(t)] == m.val[static_cast<std::size_t>(s)]) {
        cls[static_cast<std::size_t>(s)] = cls[static_cast<std::size_t>(t)];
        found = true;
        break;
      }
      ++tag;
    }
    if (!found) cls[static_cast<std::size_t>(s)] = base + tag;
  }
  Partition merged = Partition::from_class_of(cls);

  QuotientResult out;
  out.model.frame.agents = m.frame.agents;
  std::vector<int> rep_state;  // class -> representative (least member)
  std::vector<std::string> ids;
  for (const auto& c : merged.classes()) {
    rep_state.push_back(c.front());
    ids.push_back(m.frame.states[static_cast<std::size_t>(c.front())]);
  }
  out.model.frame.states = ids;
  std::sort(out.model.frame.states.begin(), out.model.frame.states.end());

  // class -> new state index
  std::vector<int> new_index(rep_state.size());
  for (std::size_t k = 0; k < rep_state.size(); ++k)
    new_index[k] = out.model.frame.state_index(ids[k]);

  for (int a = 0; a < m.frame.n_agents(); ++a) {
    std::vector<int> acls(out.model.frame.states.size());
    for (std::size_t k = 0; k < rep_state.size(); ++k)
      acls[static_cast<std::size_t>(new_index[k])] =
          m.frame.rel[static_cast<std::size_t>(a)].class_index(rep_state[k]);
    out.model.frame.rel.push_back(Partition::from_class_of(acls));
  }
  out.model.ap = m.ap;
  out.model.owner = m.owner;
  out.model.val.assign(out.model.frame.states.size(), {});
  for (std::size_t k = 0; k < rep_state.size(); ++k)
    out.model.val[static_cast<std::size_t>(new_index[k])] =
        m.val[static_cast<std::size_t>(rep_state[k])];

  out.projection.source = m.frame;
  out.projection.target = out.model.frame;
  out.projection.map.assign(static_cast<std::size_t>(m.frame.n_states()), -1);
  for (int s = 0; s < m.frame.n_states(); ++s)
    out.projection.map[static_cast<std::size_t>(s)] =
        new_index[static_cast<std::size_t>(merged.class_index(s))];
  return out;
}

}  // namespace episolve
