#pragma once

// Pure chromatic simplicial complexes, given by their facets.
//
// Colors are the agents. Purity means every facet has exactly one vertex of
// each color, so all facets share the dimension |agents| - 1 and a complex is
// fully described by its facet list. Vertices are sorted by id and facets are
// sorted by their (sorted) member index lists, so equal values denote equal
// complexes and iteration is deterministic everywhere.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "episolve/common.hpp"
#include "episolve/kripke.hpp"  // Literal helpers, AtomDecl

namespace episolve {

struct ChromaticComplex {
  std::vector<std::string> agents;       // the colors, in user-given order
  std::vector<std::string> vertex_ids;   // sorted, unique
  std::vector<int> vertex_color;         // per vertex, index into agents
  std::vector<std::vector<int>> facets;  // each sorted; list sorted lexicographically
  std::vector<std::string> facet_ids;    // parallel to facets, unique

  int n_vertices() const { return static_cast<int>(vertex_ids.size()); }
  int n_facets() const { return static_cast<int>(facets.size()); }
  int n_agents() const { return static_cast<int>(agents.size()); }

  int vertex_index(std::string_view id) const { return index_of(vertex_ids, id); }
  int facet_index(std::string_view id) const {
    for (int i = 0; i < n_facets(); ++i)
      if (facet_ids[static_cast<std::size_t>(i)] == id) return i;
    return -1;
  }
  int agent_index(std::string_view a) const {
    for (int i = 0; i < n_agents(); ++i)
      if (agents[static_cast<std::size_t>(i)] == a) return i;
    return -1;
  }
  // The vertex of a given color inside a facet (facets are pure, so it is
  // unique when the complex validates).
  int facet_vertex(int facet, int color) const {
    for (int v : facets[static_cast<std::size_t>(facet)])
      if (vertex_color[static_cast<std::size_t>(v)] == color) return v;
    return -1;
  }

  bool operator==(const ChromaticComplex&) const = default;
};

struct VertexDecl {
  std::string id;
  std::string color;
};

struct FacetDecl {
  std::string id;  // empty = auto ("f0", "f1", ... by final canonical position)
  std::vector<std::string> vertices;
};

// Canonicalizing constructor. Duplicate facets and facets strictly contained
// in another are dropped with a warning (reported through *report when given).
inline ChromaticComplex make_complex(std::vector<std::string> agents,
                                     const std::vector<VertexDecl>& vertices,
                                     const std::vector<FacetDecl>& facet_decls,
                                     ValidationReport* report = nullptr) {
  if (agents.empty()) fail(ErrorCode::kInvalidArgument, "complex needs at least one color");
  for (std::size_t i = 0; i < agents.size(); ++i)
    for (std::size_t j = i + 1; j < agents.size(); ++j)
      if (agents[i] == agents[j]) fail(ErrorCode::kInvalidArgument, "duplicate color: " + agents[i]);

  ChromaticComplex c;
  c.agents = std::move(agents);

  std::vector<VertexDecl> vs = vertices;
  std::sort(vs.begin(), vs.end(), [](const VertexDecl& x, const VertexDecl& y) { return x.id < y.id; });
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i && vs[i - 1].id == vs[i].id) fail(ErrorCode::kInvalidArgument, "duplicate vertex id: " + vs[i].id);
    int color = c.agent_index(vs[i].color);
    if (color < 0) fail(ErrorCode::kInvalidArgument, "vertex " + vs[i].id + " has unknown color: " + vs[i].color);
    c.vertex_ids.push_back(vs[i].id);
    c.vertex_color.push_back(color);
  }

  // Explicit ids must be unique even when subsumption would later drop one
  // of the carriers; declaring the same id twice is a malformed input.
  {
    std::vector<std::string> ids;
    for (const auto& fd : facet_decls)
      if (!fd.id.empty()) ids.push_back(fd.id);
    std::sort(ids.begin(), ids.end());
    for (std::size_t i = 1; i < ids.size(); ++i)
      if (ids[i - 1] == ids[i])
        fail(ErrorCode::kInvalidArgument, "duplicate facet id: " + ids[i]);
  }

  struct RawFacet {
    std::vector<int> members;
    std::string id;
  };
  std::vector<RawFacet> raw;
  for (const auto& fd : facet_decls) {
    RawFacet rf;
    rf.id = fd.id;
    for (const auto& vid : fd.vertices) {
      int v = c.vertex_index(vid);
      if (v < 0) fail(ErrorCode::kInvalidArgument, "facet mentions unknown vertex: " + vid);
      rf.members.push_back(v);
    }
    std::sort(rf.members.begin(), rf.members.end());
    rf.members.erase(std::unique(rf.members.begin(), rf.members.end()), rf.members.end());
    if (rf.members.empty()) fail(ErrorCode::kInvalidArgument, "empty facet");
    raw.push_back(std::move(rf));
  }

  // Drop subsumed facets (duplicates or strict subsets of another facet).
  auto subset_of = [](const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  };
  std::vector<bool> keep(raw.size(), true);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    for (std::size_t j = 0; j < raw.size() && keep[i]; ++j) {
      if (i == j || !keep[j]) continue;
      if (raw[i].members == raw[j].members ? i > j : subset_of(raw[i].members, raw[j].members)) {
        keep[i] = false;
        if (report)
          report->warn("facet " + (raw[i].id.empty() ? "#" + std::to_string(i) : raw[i].id) +
                       " is subsumed by another facet; dropped");
      }
    }
  }
  std::vector<RawFacet> kept;
  for (std::size_t i = 0; i < raw.size(); ++i)
    if (keep[i]) kept.push_back(std::move(raw[i]));

  std::sort(kept.begin(), kept.end(),
            [](const RawFacet& x, const RawFacet& y) { return x.members < y.members; });
  for (std::size_t i = 0; i < kept.size(); ++i) {
    c.facets.push_back(kept[i].members);
    c.facet_ids.push_back(kept[i].id.empty() ? "f" + std::to_string(i) : kept[i].id);
  }
  for (std::size_t i = 0; i < c.facet_ids.size(); ++i)
    for (std::size_t j = i + 1; j < c.facet_ids.size(); ++j)
      if (c.facet_ids[i] == c.facet_ids[j])
        fail(ErrorCode::kInvalidArgument, "duplicate facet id: " + c.facet_ids[i]);
  return c;
}

inline ValidationReport validate_complex(const ChromaticComplex& c) {
  ValidationReport r;
  if (c.agents.empty()) r.error("no colors");
  if (!sorted_unique(c.vertex_ids) && !c.vertex_ids.empty()) r.error("vertices not sorted and unique");
  if (c.vertex_color.size() != c.vertex_ids.size()) r.error("vertex color list length mismatch");
  if (c.facet_ids.size() != c.facets.size()) r.error("facet id list length mismatch");
  if (c.facets.empty()) r.error("no facets");

  std::vector<int> degree(c.vertex_ids.size(), 0);
  for (int i = 0; i < c.n_facets(); ++i) {
    const auto& f = c.facets[static_cast<std::size_t>(i)];
    if (static_cast<int>(f.size()) != c.n_agents()) {
      r.error("facet " + c.facet_ids[static_cast<std::size_t>(i)] + " has " + std::to_string(f.size()) +
              " vertices; purity requires " + std::to_string(c.n_agents()));
      continue;
    }
    std::vector<bool> seen(c.agents.size(), false);
    for (int v : f) {
      if (v < 0 || v >= c.n_vertices()) {
        r.error("facet " + c.facet_ids[static_cast<std::size_t>(i)] + " has an out-of-range vertex");
        continue;
      }
      ++degree[static_cast<std::size_t>(v)];
      int col = c.vertex_color[static_cast<std::size_t>(v)];
      if (seen[static_cast<std::size_t>(col)])
        r.error("facet " + c.facet_ids[static_cast<std::size_t>(i)] + " repeats color " +
                c.agents[static_cast<std::size_t>(col)]);
      seen[static_cast<std::size_t>(col)] = true;
    }
  }
  for (int v = 0; v < c.n_vertices(); ++v)
    if (degree[static_cast<std::size_t>(v)] == 0)
      r.error("vertex " + c.vertex_ids[static_cast<std::size_t>(v)] + " lies in no facet");
  for (std::size_t i = 1; i < c.facets.size(); ++i)
    if (c.facets[i - 1] == c.facets[i]) r.error("duplicate facet");
  return r;
}

// Facets containing a vertex, as facet indices in canonical order.
inline std::vector<int> facets_containing(const ChromaticComplex& c, int vertex) {
  std::vector<int> out;
  for (int i = 0; i < c.n_facets(); ++i)
    if (std::binary_search(c.facets[static_cast<std::size_t>(i)].begin(),
                           c.facets[static_cast<std::size_t>(i)].end(), vertex))
      out.push_back(i);
  return out;
}

// ---------------------------------------------------------------------------
// Chromatic maps
// ---------------------------------------------------------------------------

// A simplicial map that preserves colors; stored with endpoints like
// FrameMorphism.
struct ChromaticMap {
  ChromaticComplex source;
  ChromaticComplex target;
  std::vector<int> map;  // source vertex index -> target vertex index

  int operator()(int v) const { return map[static_cast<std::size_t>(v)]; }
};

inline bool is_chromatic_map(const ChromaticComplex& c, const ChromaticComplex& d,
                             const std::vector<int>& f) {
  if (c.agents != d.agents) return false;
  if (static_cast<int>(f.size()) != c.n_vertices()) return false;
  for (int v = 0; v < c.n_vertices(); ++v) {
    int w = f[static_cast<std::size_t>(v)];
    if (w < 0 || w >= d.n_vertices()) return false;
    if (c.vertex_color[static_cast<std::size_t>(v)] != d.vertex_color[static_cast<std::size_t>(w)])
      return false;
  }
  for (const auto& facet : c.facets) {
    std::vector<int> image;
    for (int v : facet) image.push_back(f[static_cast<std::size_t>(v)]);
    std::sort(image.begin(), image.end());
    // Color preservation on a pure facet keeps all images distinct, so the
    // image must itself be a facet of the target.
    if (!std::binary_search(d.facets.begin(), d.facets.end(), image)) return false;
  }
  return true;
}

inline bool is_chromatic_map(const ChromaticMap& h) {
  return is_chromatic_map(h.source, h.target, h.map);
}

inline ChromaticMap compose(const ChromaticMap& g, const ChromaticMap& f) {
  if (f.target.vertex_ids != g.source.vertex_ids)
    fail(ErrorCode::kInvalidArgument, "chromatic map composition endpoint mismatch");
  ChromaticMap h;
  h.source = f.source;
  h.target = g.target;
  h.map.reserve(f.map.size());
  for (int v : f.map) h.map.push_back(g.map[static_cast<std::size_t>(v)]);
  return h;
}

struct ComplexProduct {
  ChromaticComplex product;
  ChromaticMap pi_left;
  ChromaticMap pi_right;
};

// Product complex: one facet per facet pair, matching vertices by color; the
// vertex set is the set of color-matched pairs that actually occur.
inline ComplexProduct complex_product(const ChromaticComplex& c, const ChromaticComplex& d) {
  if (c.agents != d.agents)
    fail(ErrorCode::kInvalidArgument, "complex product requires identical color lists");

  std::map<std::pair<int, int>, std::string> pair_vertices;  // (v in c, w in d) -> id
  std::vector<FacetDecl> facets;
  for (std::size_t i = 0; i < c.facets.size(); ++i)
    for (std::size_t j = 0; j < d.facets.size(); ++j) {
      FacetDecl fd;
      fd.id = pair_id(c.facet_ids[i], d.facet_ids[j]);
      for (int color = 0; color < c.n_agents(); ++color) {
        int v = c.facet_vertex(static_cast<int>(i), color);
        int w = d.facet_vertex(static_cast<int>(j), color);
        auto key = std::make_pair(v, w);
        auto it = pair_vertices.find(key);
        if (it == pair_vertices.end())
          it = pair_vertices.emplace(key, pair_id(c.vertex_ids[static_cast<std::size_t>(v)],
                                                  d.vertex_ids[static_cast<std::size_t>(w)])).first;
        fd.vertices.push_back(it->second);
      }
      facets.push_back(std::move(fd));
    }

  std::vector<VertexDecl> vertices;
  for (const auto& [key, id] : pair_vertices)
    vertices.push_back(VertexDecl{id, c.agents[static_cast<std::size_t>(c.vertex_color[static_cast<std::size_t>(key.first)])]});

  ComplexProduct out;
  out.product = make_complex(c.agents, vertices, facets);
  out.pi_left.source = out.product;
  out.pi_left.target = c;
  out.pi_right.source = out.product;
  out.pi_right.target = d;
  out.pi_left.map.assign(static_cast<std::size_t>(out.product.n_vertices()), -1);
  out.pi_right.map.assign(static_cast<std::size_t>(out.product.n_vertices()), -1);
  for (const auto& [key, id] : pair_vertices) {
    int pv = out.product.vertex_index(id);
    out.pi_left.map[static_cast<std::size_t>(pv)] = key.first;
    out.pi_right.map[static_cast<std::size_t>(pv)] = key.second;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Isomorphism search
// ---------------------------------------------------------------------------

namespace detail {

// Backtracking over vertices in canonical order; candidates must match color
// and incidence degree, partial assignments must keep completed facets on
// facets. First full hit is the lexicographically least witness.
template <typename Extra>
std::optional<std::vector<int>> find_complex_bijection(const ChromaticComplex& c,
                                                       const ChromaticComplex& d,
                                                       const Extra& extra_ok) {
  if (c.agents != d.agents) return std::nullopt;
  if (c.n_vertices() != d.n_vertices() || c.n_facets() != d.n_facets()) return std::nullopt;
  const int N = c.n_vertices();

  std::vector<std::vector<int>> inc_c(static_cast<std::size_t>(N));
  for (int i = 0; i < c.n_facets(); ++i)
    for (int v : c.facets[static_cast<std::size_t>(i)]) inc_c[static_cast<std::size_t>(v)].push_back(i);

  std::vector<int> deg_d(static_cast<std::size_t>(d.n_vertices()), 0);
  for (const auto& f : d.facets)
    for (int w : f) ++deg_d[static_cast<std::size_t>(w)];

  std::vector<int> img(static_cast<std::size_t>(N), -1);
  std::vector<bool> used(static_cast<std::size_t>(N), false);

  auto consistent = [&](int v, int w) {
    if (c.vertex_color[static_cast<std::size_t>(v)] != d.vertex_color[static_cast<std::size_t>(w)])
      return false;
    if (static_cast<int>(inc_c[static_cast<std::size_t>(v)].size()) != deg_d[static_cast<std::size_t>(w)])
      return false;
    if (!extra_ok(v, w)) return false;
    img[static_cast<std::size_t>(v)] = w;  // tentatively, for the facet check below
    for (int fi : inc_c[static_cast<std::size_t>(v)]) {
      std::vector<int> image;
      bool complete = true;
      for (int u : c.facets[static_cast<std::size_t>(fi)]) {
        int x = img[static_cast<std::size_t>(u)];
        if (x < 0) { complete = false; break; }
        image.push_back(x);
      }
      if (!complete) continue;
      std::sort(image.begin(), image.end());
      if (!std::binary_search(d.facets.begin(), d.facets.end(), image)) {
        img[static_cast<std::size_t>(v)] = -1;
        return false;
      }
    }
    img[static_cast<std::size_t>(v)] = -1;
    return true;
  };

  int v = 0;
  std::vector<int> attempt(static_cast<std::size_t>(N), 0);
  while (true) {
    if (v == N) return img;
    bool advanced = false;
    for (int w = attempt[static_cast<std::size_t>(v)]; w < N; ++w) {
      if (used[static_cast<std::size_t>(w)] || !consistent(v, w)) continue;
      img[static_cast<std::size_t>(v)] = w;
      used[static_cast<std::size_t>(w)] = true;
      attempt[static_cast<std::size_t>(v)] = w + 1;
      ++v;
      if (v < N) attempt[static_cast<std::size_t>(v)] = 0;
      advanced = true;
      break;
    }
    if (advanced) continue;
    if (v == 0) return std::nullopt;
    --v;
    used[static_cast<std::size_t>(img[static_cast<std::size_t>(v)])] = false;
    img[static_cast<std::size_t>(v)] = -1;
  }
}

}  // namespace detail

// Color-preserving vertex bijection carrying facets onto facets bijectively.
// (A bijective chromatic map with equal facet counts is automatically an
// isomorphism: distinct facets have distinct images.)
inline std::optional<ChromaticMap> complexes_isomorphic(const ChromaticComplex& c,
                                                        const ChromaticComplex& d) {
  auto img = detail::find_complex_bijection(c, d, [](int, int) { return true; });
  if (!img) return std::nullopt;
  return ChromaticMap{c, d, *img};
}

// ---------------------------------------------------------------------------
// Simplicial models: vertices decorated with their owner's literals
// ---------------------------------------------------------------------------

// Each atom is owned by an agent; a vertex of color a carries exactly the
// owner-a atoms (one polarity each). vval rows are sorted by atom index.
struct SimplicialModel {
  ChromaticComplex complex;
  std::vector<std::string> ap;   // sorted, unique
  std::vector<int> owner;        // parallel to ap; agent index (required here)
  std::vector<std::vector<std::pair<int, bool>>> vval;  // per vertex

  int atom_index(std::string_view name) const { return index_of(ap, name); }

  bool operator==(const SimplicialModel&) const = default;
};

inline SimplicialModel make_simplicial_model(
    ChromaticComplex complex, std::vector<AtomDecl> atoms,
    const std::map<std::string, std::vector<std::string>>& vertex_literals) {
  std::sort(atoms.begin(), atoms.end(),
            [](const AtomDecl& x, const AtomDecl& y) { return x.name < y.name; });
  for (std::size_t i = 1; i < atoms.size(); ++i)
    if (atoms[i - 1].name == atoms[i].name)
      fail(ErrorCode::kInvalidArgument, "duplicate atom: " + atoms[i].name);

  SimplicialModel m;
  m.complex = std::move(complex);
  for (const auto& d : atoms) {
    if (d.owner.empty())
      fail(ErrorCode::kMissingOwnership, "simplicial models need an owner for every atom; " +
                                             d.name + " has none");
    int a = m.complex.agent_index(d.owner);
    if (a < 0) fail(ErrorCode::kInvalidArgument, "atom " + d.name + " owned by unknown agent: " + d.owner);
    m.ap.push_back(d.name);
    m.owner.push_back(a);
  }

  m.vval.assign(static_cast<std::size_t>(m.complex.n_vertices()), {});
  for (const auto& [vid, lits] : vertex_literals) {
    int v = m.complex.vertex_index(vid);
    if (v < 0) fail(ErrorCode::kInvalidArgument, "literals for unknown vertex: " + vid);
    for (const auto& lit_s : lits) {
      Literal lit = parse_literal(lit_s);
      int j = m.atom_index(lit.atom);
      if (j < 0) fail(ErrorCode::kInvalidArgument, "vertex " + vid + " uses unknown atom: " + lit.atom);
      m.vval[static_cast<std::size_t>(v)].emplace_back(j, lit.positive);
    }
  }
  for (int v = 0; v < m.complex.n_vertices(); ++v) {
    auto& row = m.vval[static_cast<std::size_t>(v)];
    std::sort(row.begin(), row.end());
    for (std::size_t k = 1; k < row.size(); ++k)
      if (row[k - 1].first == row[k].first)
        fail(row[k - 1].second == row[k].second ? ErrorCode::kInvalidArgument
                                                : ErrorCode::kInconsistentValuation,
             "vertex " + m.complex.vertex_ids[static_cast<std::size_t>(v)] +
                 " assigns atom " + m.ap[static_cast<std::size_t>(row[k].first)] + " twice");
  }

  // Atoms are agent-local: every vertex must decide exactly the atoms its
  // color owns, no more and no fewer.
  std::vector<std::vector<int>> owned(static_cast<std::size_t>(m.complex.n_agents()));
  for (std::size_t j = 0; j < m.ap.size(); ++j)
    owned[static_cast<std::size_t>(m.owner[j])].push_back(static_cast<int>(j));
  for (int v = 0; v < m.complex.n_vertices(); ++v) {
    int color = m.complex.vertex_color[static_cast<std::size_t>(v)];
    std::vector<int> have;
    for (const auto& [j, _] : m.vval[static_cast<std::size_t>(v)]) have.push_back(j);
    if (have != owned[static_cast<std::size_t>(color)])
      fail(ErrorCode::kInvalidArgument,
           "vertex " + m.complex.vertex_ids[static_cast<std::size_t>(v)] +
               " must carry exactly the atoms owned by " +
               m.complex.agents[static_cast<std::size_t>(color)]);
  }
  return m;
}

// Vertices must carry exactly the atoms their color owns.
inline ValidationReport validate_simplicial_model(const SimplicialModel& m) {
  ValidationReport r = validate_complex(m.complex);
  if (!sorted_unique(m.ap) && !m.ap.empty()) r.error("atoms are not sorted and unique");
  if (m.owner.size() != m.ap.size()) r.error("owner list length differs from atom list");
  if (m.vval.size() != static_cast<std::size_t>(m.complex.n_vertices()))
    r.error("vertex literal row count differs from vertex count");

  std::vector<std::vector<int>> owned(m.complex.agents.size());
  for (std::size_t j = 0; j < m.ap.size(); ++j) {
    if (m.owner[j] < 0 || m.owner[j] >= m.complex.n_agents()) {
      r.error("atom " + m.ap[j] + " has an out-of-range owner");
      continue;
    }
    owned[static_cast<std::size_t>(m.owner[j])].push_back(static_cast<int>(j));
  }
  for (int v = 0; v < m.complex.n_vertices() && r.ok(); ++v) {
    int color = m.complex.vertex_color[static_cast<std::size_t>(v)];
    std::vector<int> have;
    for (const auto& [j, _] : m.vval[static_cast<std::size_t>(v)]) have.push_back(j);
    if (have != owned[static_cast<std::size_t>(color)])
      r.error("vertex " + m.complex.vertex_ids[static_cast<std::size_t>(v)] +
              " must carry exactly the atoms owned by " +
              m.complex.agents[static_cast<std::size_t>(color)]);
  }
  return r;
}

inline std::vector<std::string> vertex_literal_strings(const SimplicialModel& m, int v) {
  std::vector<std::string> out;
  for (const auto& [j, pos] : m.vval[static_cast<std::size_t>(v)])
    out.push_back(literal_string(m.ap[static_cast<std::size_t>(j)], pos));
  return out;
}

}  // namespace episolve
