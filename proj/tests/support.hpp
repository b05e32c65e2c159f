#pragma once

// Shared test helpers: in-code copies of the fixture models, random
// generators for frames/complexes/models/formulas, an independent
// ordered-partition counter, and a small subprocess runner for CLI tests.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <episolve/episolve.hpp>

#ifndef EPISOLVE_FIXTURES_DIR
#define EPISOLVE_FIXTURES_DIR "fixtures"
#endif

namespace testsupport {

using namespace episolve;

inline std::string fixture_path(const std::string& name) {
  return std::string(EPISOLVE_FIXTURES_DIR) + "/" + name;
}

// ---------------------------------------------------------------------------
// Fixture builders (mirroring fixtures/*.json)
// ---------------------------------------------------------------------------

inline KripkeModel three_states_model() {
  KripkeFrame f = make_frame({"a0", "a1"}, {"alpha", "beta", "gamma"},
                             {{"a0", {{"beta", "gamma"}}}, {"a1", {{"alpha", "beta"}}}});
  return make_model(std::move(f), {{"l0", "a0"}, {"l1", "a1"}},
                    {{"alpha", {"!l0", "!l1"}}, {"beta", {"l0", "!l1"}}, {"gamma", {"l0", "l1"}}});
}

inline SimplicialModel segment_model() {
  ChromaticComplex c = make_complex({"a0", "a1"}, {{"i0", "a0"}, {"i1", "a1"}},
                                    {{"e0", {"i0", "i1"}}});
  return make_simplicial_model(std::move(c), {{"l0", "a0"}, {"l1", "a1"}},
                               {{"i0", {"!l0"}}, {"i1", {"l1"}}});
}

inline SimplicialModel square_model() {
  ChromaticComplex c = make_complex(
      {"a0", "a1"},
      {{"v00", "a0"}, {"v01", "a0"}, {"v10", "a1"}, {"v11", "a1"}},
      {{"e1", {"v00", "v10"}}, {"e2", {"v10", "v01"}}, {"e3", {"v01", "v11"}},
       {"e4", {"v11", "v00"}}});
  return make_simplicial_model(
      std::move(c), {{"l0", "a0"}, {"l1", "a1"}},
      {{"v00", {"!l0"}}, {"v01", {"l0"}}, {"v10", {"!l1"}}, {"v11", {"l1"}}});
}

inline SimplicialModel triangle_model() {
  ChromaticComplex c = make_complex({"a0", "a1", "a2"},
                                    {{"t0", "a0"}, {"t1", "a1"}, {"t2", "a2"}},
                                    {{"f0", {"t0", "t1", "t2"}}});
  return make_simplicial_model(std::move(c), {{"l0", "a0"}, {"l1", "a1"}, {"l2", "a2"}},
                               {{"t0", {"!l0"}}, {"t1", {"!l1"}}, {"t2", {"!l2"}}});
}

inline SimplicialModel consensus_output_model(bool with_mixed_facet = false) {
  std::vector<FacetDecl> facets = {{"d0", {"o00", "o10"}}, {"d1", {"o01", "o11"}}};
  if (with_mixed_facet) facets.push_back({"dm", {"o00", "o11"}});
  ChromaticComplex c = make_complex(
      {"a0", "a1"}, {{"o00", "a0"}, {"o01", "a0"}, {"o10", "a1"}, {"o11", "a1"}}, facets);
  return make_simplicial_model(
      std::move(c), {{"d0", "a0"}, {"d1", "a1"}},
      {{"o00", {"!d0"}}, {"o01", {"d0"}}, {"o10", {"!d1"}}, {"o11", {"d1"}}});
}

inline TaskSpec consensus_task() {
  return make_simplicial_task(square_model(), consensus_output_model(false),
                              {{"e1", {"d0"}},
                               {"e2", {"d0", "d1"}},
                               {"e3", {"d1"}},
                               {"e4", {"d0", "d1"}}});
}

inline TaskSpec pseudo_consensus_task() {
  return make_simplicial_task(square_model(), consensus_output_model(true),
                              {{"e1", {"d0"}},
                               {"e2", {"d0", "d1", "dm"}},
                               {"e3", {"d1"}},
                               {"e4", {"d0", "d1", "dm"}}});
}

inline TaskSpec identity_task() {
  return make_simplicial_task(square_model(), square_model(),
                              {{"e1", {"e1"}}, {"e2", {"e2"}}, {"e3", {"e3"}}, {"e4", {"e4"}}});
}

// Octahedron boundary as a 3-colored complex: two vertices per color, all
// eight color-transversal triangles.
inline ChromaticComplex octahedron_complex() {
  std::vector<VertexDecl> vs = {{"u0", "a0"}, {"w0", "a0"}, {"u1", "a1"},
                                {"w1", "a1"}, {"u2", "a2"}, {"w2", "a2"}};
  std::vector<FacetDecl> fs;
  for (const std::string x : {"u0", "w0"})
    for (const std::string y : {"u1", "w1"})
      for (const std::string z : {"u2", "w2"})
        fs.push_back({"", {x, y, z}});
  return make_complex({"a0", "a1", "a2"}, vs, fs);
}

// ---------------------------------------------------------------------------
// Independent ordered-partition counter
// ---------------------------------------------------------------------------

// Counts maps f : [n] -> [n] whose image is exactly {0, ..., k-1} for some k.
// Such maps are exactly the block-index assignments of ordered partitions, so
// this brute force agrees with the enumerator without sharing any code.
inline long long count_ordered_partitions_brute(int n) {
  long long total = 0;
  std::vector<int> f(static_cast<std::size_t>(n), 0);
  while (true) {
    int max_used = -1;
    bool initial_segment = true;
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (int x : f) {
      used[static_cast<std::size_t>(x)] = true;
      if (x > max_used) max_used = x;
    }
    for (int v = 0; v <= max_used; ++v)
      if (!used[static_cast<std::size_t>(v)]) initial_segment = false;
    if (initial_segment) ++total;

    int i = n - 1;
    while (i >= 0 && f[static_cast<std::size_t>(i)] == n - 1) {
      f[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
    ++f[static_cast<std::size_t>(i)];
  }
  return total;
}

// ---------------------------------------------------------------------------
// Random generators
// ---------------------------------------------------------------------------

inline int rand_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline Partition random_partition(std::mt19937_64& rng, int n) {
  std::vector<int> cls(static_cast<std::size_t>(n));
  for (int& c : cls) c = rand_int(rng, 0, n - 1);
  return Partition::from_class_of(cls);
}

// Random proper frame: random per-agent partitions, then split states apart
// until the meet is the identity.
inline KripkeFrame random_proper_frame(std::mt19937_64& rng, int max_states, int max_agents) {
  int n = rand_int(rng, 2, max_states);
  int k = rand_int(rng, 2, max_agents);
  std::vector<std::string> agents, states;
  for (int a = 0; a < k; ++a) agents.push_back("a" + std::to_string(a));
  for (int s = 0; s < n; ++s) states.push_back("s" + std::to_string(s));

  std::vector<Partition> rel;
  for (int a = 0; a < k; ++a) rel.push_back(random_partition(rng, n));

  while (true) {
    Partition m = meet_all(n, rel);
    if (m.is_identity()) break;
    const std::vector<std::vector<int>>& classes = m.classes();
    std::vector<int> big;
    for (std::size_t c = 0; c < classes.size(); ++c)
      if (classes[c].size() > 1) big.push_back(static_cast<int>(c));
    int c = big[static_cast<std::size_t>(rand_int(rng, 0, static_cast<int>(big.size()) - 1))];
    int victim = classes[static_cast<std::size_t>(c)][1];
    int agent = rand_int(rng, 0, k - 1);
    std::vector<int> cls(static_cast<std::size_t>(n));
    for (int u = 0; u < n; ++u) cls[static_cast<std::size_t>(u)] =
        rel[static_cast<std::size_t>(agent)].class_index(u);
    cls[static_cast<std::size_t>(victim)] = n;  // fresh singleton class
    rel[static_cast<std::size_t>(agent)] = Partition::from_class_of(cls);
  }

  RelationGroups groups;
  for (int a = 0; a < k; ++a) {
    std::vector<std::vector<std::string>> gs;
    for (const auto& cls : rel[static_cast<std::size_t>(a)].classes()) {
      if (cls.size() < 2) continue;
      std::vector<std::string> g;
      for (int s : cls) g.push_back(states[static_cast<std::size_t>(s)]);
      gs.push_back(std::move(g));
    }
    if (!gs.empty()) groups[agents[static_cast<std::size_t>(a)]] = std::move(gs);
  }
  return make_frame(agents, states, groups);
}

// Random model whose atoms are all owned and agent-local (constant on the
// owner's classes), so it transports to the simplicial side.
inline KripkeModel random_local_model(std::mt19937_64& rng, const KripkeFrame& f,
                                      int max_atoms = 3) {
  int n_atoms = rand_int(rng, 1, max_atoms);
  std::vector<AtomDecl> atoms;
  std::vector<int> owner_of;
  for (int p = 0; p < n_atoms; ++p) {
    int owner = rand_int(rng, 0, f.n_agents() - 1);
    atoms.push_back({"p" + std::to_string(p), f.agents[static_cast<std::size_t>(owner)]});
    owner_of.push_back(owner);
  }
  std::map<std::string, std::vector<std::string>> vals;
  for (const auto& s : f.states) vals[s] = {};
  for (int p = 0; p < n_atoms; ++p) {
    const Partition& part = f.rel[static_cast<std::size_t>(owner_of[static_cast<std::size_t>(p)])];
    for (const auto& cls : part.classes()) {
      bool value = rand_int(rng, 0, 1) == 1;
      for (int s : cls)
        vals[f.states[static_cast<std::size_t>(s)]].push_back(
            (value ? "" : "!") + atoms[static_cast<std::size_t>(p)].name);
    }
  }
  return make_model(f, atoms, vals);
}

// Random model with unowned atoms valued freely per state.
inline KripkeModel random_model(std::mt19937_64& rng, const KripkeFrame& f, int max_atoms = 3) {
  int n_atoms = rand_int(rng, 1, max_atoms);
  std::vector<AtomDecl> atoms;
  for (int p = 0; p < n_atoms; ++p) atoms.push_back({"p" + std::to_string(p), ""});
  std::map<std::string, std::vector<std::string>> vals;
  for (const auto& s : f.states) {
    std::vector<std::string> lits;
    for (int p = 0; p < n_atoms; ++p)
      lits.push_back((rand_int(rng, 0, 1) == 1 ? "" : "!") + atoms[static_cast<std::size_t>(p)].name);
    vals[s] = std::move(lits);
  }
  return make_model(f, atoms, vals);
}

// Random pure chromatic complex: facets reuse existing vertices of the right
// color or mint fresh ones. Every vertex belongs to the facet that minted it.
inline ChromaticComplex random_complex(std::mt19937_64& rng, int max_facets, int max_agents = 3) {
  int k = rand_int(rng, 2, max_agents);
  int n_facets = rand_int(rng, 1, max_facets);
  std::vector<std::string> agents;
  for (int a = 0; a < k; ++a) agents.push_back("a" + std::to_string(a));

  std::vector<VertexDecl> vertices;
  std::vector<std::vector<std::string>> pool(static_cast<std::size_t>(k));
  std::vector<FacetDecl> facets;
  for (int i = 0; i < n_facets; ++i) {
    FacetDecl f;
    for (int a = 0; a < k; ++a) {
      auto& p = pool[static_cast<std::size_t>(a)];
      if (!p.empty() && rand_int(rng, 0, 2) > 0) {
        f.vertices.push_back(p[static_cast<std::size_t>(
            rand_int(rng, 0, static_cast<int>(p.size()) - 1))]);
      } else {
        std::string id = "c" + std::to_string(a) + "_" + std::to_string(p.size());
        p.push_back(id);
        vertices.push_back({id, agents[static_cast<std::size_t>(a)]});
        f.vertices.push_back(id);
      }
    }
    facets.push_back(std::move(f));
  }
  ValidationReport report;  // duplicate facets are dropped with a warning
  return make_complex(agents, vertices, facets, &report);
}

// Random epistemic formula over the given atoms/agents (no action operators).
inline Formula random_formula(std::mt19937_64& rng, const std::vector<std::string>& atoms,
                              const std::vector<std::string>& agents, int depth) {
  int pick = depth <= 0 ? rand_int(rng, 0, 1) : rand_int(rng, 0, 6);
  auto subgroup = [&] {
    std::vector<std::string> g;
    for (const auto& a : agents)
      if (rand_int(rng, 0, 1) == 1) g.push_back(a);
    if (g.empty()) g.push_back(agents[static_cast<std::size_t>(
        rand_int(rng, 0, static_cast<int>(agents.size()) - 1))]);
    return g;
  };
  switch (pick) {
    case 0:
      return Formula::atom(atoms[static_cast<std::size_t>(
          rand_int(rng, 0, static_cast<int>(atoms.size()) - 1))]);
    case 1:
      return rand_int(rng, 0, 1) == 1 ? Formula::truth() : Formula::falsity();
    case 2:
      return Formula::negation(random_formula(rng, atoms, agents, depth - 1));
    case 3:
      return Formula::conjunction(random_formula(rng, atoms, agents, depth - 1),
                                  random_formula(rng, atoms, agents, depth - 1));
    case 4:
      return Formula::knows(agents[static_cast<std::size_t>(
                                rand_int(rng, 0, static_cast<int>(agents.size()) - 1))],
                            random_formula(rng, atoms, agents, depth - 1));
    case 5:
      return Formula::everyone_knows(subgroup(), random_formula(rng, atoms, agents, depth - 1));
    default:
      return Formula::common_knowledge(subgroup(), random_formula(rng, atoms, agents, depth - 1));
  }
}

// ---------------------------------------------------------------------------
// Subprocess runner (for CLI tests)
// ---------------------------------------------------------------------------

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

// Runs `command` through the shell, capturing stdout/stderr to temp files.
inline RunResult run_command(const std::string& command) {
  static int counter = 0;
  std::string tag = std::to_string(counter++);
  std::string out_path = "/tmp/episolve_test_out_" + tag;
  std::string err_path = "/tmp/episolve_test_err_" + tag;
  std::string full = command + " > " + out_path + " 2> " + err_path;
  int status = std::system(full.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(out_path);
  r.err = read_file(err_path);
  std::remove(out_path.c_str());
  std::remove(err_path.c_str());
  return r;
}

}  // namespace testsupport
