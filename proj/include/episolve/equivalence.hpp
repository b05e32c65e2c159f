#pragma once

// The equivalence between proper Kripke frames and pure chromatic complexes:
//
//   complex_to_frame (F): facets become states; two facets are
//     a-indistinguishable iff they share their a-colored vertex.
//   frame_to_complex (G): one vertex per agent per equivalence class; one
//     facet per state, collecting the state's classes.
//
// F needs no properness; its image is proper by construction (facets sharing
// every vertex are equal). G requires a proper frame. Model-level versions
// carry literals across: an atom owned by agent a must be constant on each
// a-class ("agent-local"), and lands on the a-colored vertex.

#include <string>
#include <vector>

#include "episolve/common.hpp"
#include "episolve/kripke.hpp"
#include "episolve/simplicial.hpp"

namespace episolve {

namespace detail {

// Vertex id used by frame_to_complex: the agent plus its class's least state.
inline std::string class_vertex_id(const std::string& agent, const std::string& least_state) {
  return agent + ":" + least_state;
}

}  // namespace detail

// F on objects. States are the facet ids.
inline KripkeFrame complex_to_frame(const ChromaticComplex& c) {
  ValidationReport r = validate_complex(c);
  if (!r.ok()) fail(ErrorCode::kInvalidArgument, "complex_to_frame: " + r.errors.front());
  RelationGroups groups;
  for (int v = 0; v < c.n_vertices(); ++v) {
    std::vector<std::string> group;
    for (int fi : facets_containing(c, v)) group.push_back(c.facet_ids[static_cast<std::size_t>(fi)]);
    groups[c.agents[static_cast<std::size_t>(c.vertex_color[static_cast<std::size_t>(v)])]]
        .push_back(std::move(group));
  }
  return make_frame(c.agents, c.facet_ids, groups);
}

// G on objects. Requires a proper frame: otherwise two states would yield the
// same facet and the construction would not be invertible.
inline ChromaticComplex frame_to_complex(const KripkeFrame& f) {
  ValidationReport r = validate_frame(f);
  if (!r.ok()) fail(ErrorCode::kInvalidArgument, "frame_to_complex: " + r.errors.front());
  if (!is_proper(f))
    fail(ErrorCode::kNotProper,
         "frame_to_complex requires a proper frame (two states are related by every agent)");

  std::vector<VertexDecl> vertices;
  for (int a = 0; a < f.n_agents(); ++a)
    for (const auto& cls : f.rel[static_cast<std::size_t>(a)].classes())
      vertices.push_back(VertexDecl{
          detail::class_vertex_id(f.agents[static_cast<std::size_t>(a)],
                                  f.states[static_cast<std::size_t>(cls.front())]),
          f.agents[static_cast<std::size_t>(a)]});

  std::vector<FacetDecl> facets;
  for (int s = 0; s < f.n_states(); ++s) {
    FacetDecl fd;
    fd.id = f.states[static_cast<std::size_t>(s)];
    for (int a = 0; a < f.n_agents(); ++a) {
      const auto& cls = f.rel[static_cast<std::size_t>(a)].class_members_of(s);
      fd.vertices.push_back(detail::class_vertex_id(
          f.agents[static_cast<std::size_t>(a)], f.states[static_cast<std::size_t>(cls.front())]));
    }
    facets.push_back(std::move(fd));
  }
  return make_complex(f.agents, vertices, facets);
}

// F on models: valuations of a facet-state are the union of its vertices'
// literals. Purity plus per-color atom ownership make the union total and
// consistent automatically.
inline KripkeModel simplicial_to_model(const SimplicialModel& sm) {
  ValidationReport r = validate_simplicial_model(sm);
  if (!r.ok()) fail(ErrorCode::kInvalidArgument, "simplicial_to_model: " + r.errors.front());

  KripkeModel m;
  m.frame = complex_to_frame(sm.complex);
  m.ap = sm.ap;
  m.owner = sm.owner;
  m.val.assign(static_cast<std::size_t>(m.frame.n_states()),
               std::vector<bool>(m.ap.size(), false));
  for (int i = 0; i < sm.complex.n_facets(); ++i) {
    int s = m.frame.state_index(sm.complex.facet_ids[static_cast<std::size_t>(i)]);
    for (int v : sm.complex.facets[static_cast<std::size_t>(i)])
      for (const auto& [j, pos] : sm.vval[static_cast<std::size_t>(v)])
        m.val[static_cast<std::size_t>(s)][static_cast<std::size_t>(j)] = pos;
  }
  return m;
}

// G on models: every atom needs an owner, and its value may not vary inside
// any class of its owner (it decorates that class's vertex).
inline SimplicialModel model_to_simplicial(const KripkeModel& m) {
  ValidationReport r = validate_model(m);
  if (!r.ok()) fail(ErrorCode::kInvalidArgument, "model_to_simplicial: " + r.errors.front());
  for (std::size_t j = 0; j < m.ap.size(); ++j)
    if (m.owner[j] < 0)
      fail(ErrorCode::kMissingOwnership,
           "model_to_simplicial needs an owner for every atom; " + m.ap[j] + " has none");
  for (std::size_t j = 0; j < m.ap.size(); ++j) {
    int a = m.owner[j];
    for (const auto& cls : m.frame.rel[static_cast<std::size_t>(a)].classes())
      for (std::size_t k = 1; k < cls.size(); ++k)
        if (m.val[static_cast<std::size_t>(cls[k])][j] != m.val[static_cast<std::size_t>(cls[0])][j])
          fail(ErrorCode::kNotAgentLocal,
               "atom " + m.ap[j] + " varies inside an equivalence class of its owner " +
                   m.frame.agents[static_cast<std::size_t>(a)]);
  }

  ChromaticComplex c = frame_to_complex(m.frame);

  std::vector<AtomDecl> atoms;
  for (std::size_t j = 0; j < m.ap.size(); ++j)
    atoms.push_back(AtomDecl{m.ap[j], m.frame.agents[static_cast<std::size_t>(m.owner[j])]});

  std::map<std::string, std::vector<std::string>> vlits;
  for (int a = 0; a < m.frame.n_agents(); ++a)
    for (const auto& cls : m.frame.rel[static_cast<std::size_t>(a)].classes()) {
      std::string vid = detail::class_vertex_id(m.frame.agents[static_cast<std::size_t>(a)],
                                                m.frame.states[static_cast<std::size_t>(cls.front())]);
      std::vector<std::string> lits;
      for (std::size_t j = 0; j < m.ap.size(); ++j)
        if (m.owner[j] == a)
          lits.push_back(literal_string(m.ap[j], m.val[static_cast<std::size_t>(cls.front())][j]));
      vlits[vid] = std::move(lits);
    }
  return make_simplicial_model(std::move(c), std::move(atoms), vlits);
}

// F on morphisms: a chromatic map sends facets to facets, i.e. states to
// states of the F-images.
inline FrameMorphism morphism_transport(const ChromaticMap& f) {
  if (!is_chromatic_map(f))
    fail(ErrorCode::kInvalidArgument, "morphism_transport: not a chromatic map");
  KripkeFrame src = complex_to_frame(f.source);
  KripkeFrame dst = complex_to_frame(f.target);
  FrameMorphism out;
  out.map.assign(static_cast<std::size_t>(src.n_states()), -1);
  for (int i = 0; i < f.source.n_facets(); ++i) {
    std::vector<int> image;
    for (int v : f.source.facets[static_cast<std::size_t>(i)])
      image.push_back(f.map[static_cast<std::size_t>(v)]);
    std::sort(image.begin(), image.end());
    auto it = std::lower_bound(f.target.facets.begin(), f.target.facets.end(), image);
    int j = static_cast<int>(it - f.target.facets.begin());
    int u = src.state_index(f.source.facet_ids[static_cast<std::size_t>(i)]);
    int w = dst.state_index(f.target.facet_ids[static_cast<std::size_t>(j)]);
    out.map[static_cast<std::size_t>(u)] = w;
  }
  out.source = std::move(src);
  out.target = std::move(dst);
  return out;
}

// G on morphisms: the a-class of u goes to the a-class of h(u); well-defined
// exactly because h preserves every agent's relation.
inline ChromaticMap morphism_transport(const FrameMorphism& h) {
  if (!is_morphism(h))
    fail(ErrorCode::kInvalidArgument, "morphism_transport: not a frame morphism");
  ChromaticComplex src = frame_to_complex(h.source);
  ChromaticComplex dst = frame_to_complex(h.target);
  ChromaticMap out;
  out.map.assign(static_cast<std::size_t>(src.n_vertices()), -1);
  for (int a = 0; a < h.source.n_agents(); ++a) {
    const auto& agent = h.source.agents[static_cast<std::size_t>(a)];
    for (const auto& cls : h.source.rel[static_cast<std::size_t>(a)].classes()) {
      int u = cls.front();
      int w = h.map[static_cast<std::size_t>(u)];
      const auto& wcls = h.target.rel[static_cast<std::size_t>(a)].class_members_of(w);
      int sv = src.vertex_index(detail::class_vertex_id(
          agent, h.source.states[static_cast<std::size_t>(u)]));
      int dv = dst.vertex_index(detail::class_vertex_id(
          agent, h.target.states[static_cast<std::size_t>(wcls.front())]));
      out.map[static_cast<std::size_t>(sv)] = dv;
    }
  }
  out.source = std::move(src);
  out.target = std::move(dst);
  return out;
}

}  // namespace episolve
