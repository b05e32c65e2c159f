#pragma once

// Mod-2 homological invariants for complexes of dimension at most 2, plus the
// induced map on first homology and the obstruction certificate built from it.
//
// Everything is over GF(2): a chain is a bitset, boundary matrices are lists
// of column bitsets, and ranks come from Gaussian elimination. For a task,
// any witness h : P → Δ* with π_I ∘ h = π_I would factor the induced map
// H₁(π_I) : H₁(P) → H₁(I) through H₁(Δ*); if its rank already exceeds
// β₁(Δ*), no witness can exist at any later round reachable from this P —
// the report is then OBSTRUCTED, otherwise INCONCLUSIVE (rank arguments are
// one-sided).

#include <array>
#include <bit>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "episolve/common.hpp"
#include "episolve/kripke.hpp"
#include "episolve/simplicial.hpp"
#include "episolve/tasks.hpp"

namespace episolve {

// ---------------------------------------------------------------------------
// Connected components
// ---------------------------------------------------------------------------

// Facets in one class iff connected through shared vertices whose color lies
// in `group` (empty = all colors).
inline Partition connected_components(const ChromaticComplex& c,
                                      const std::vector<std::string>& group = {}) {
  std::vector<bool> color_in(static_cast<std::size_t>(c.n_agents()), group.empty());
  for (const auto& a : group) {
    int i = c.agent_index(a);
    if (i < 0) fail(ErrorCode::kInvalidArgument, "unknown color in group: " + a);
    color_in[static_cast<std::size_t>(i)] = true;
  }
  std::vector<std::vector<int>> groups;
  for (int v = 0; v < c.n_vertices(); ++v) {
    if (!color_in[static_cast<std::size_t>(c.vertex_color[static_cast<std::size_t>(v)])]) continue;
    groups.push_back(facets_containing(c, v));
  }
  return Partition::from_groups(c.n_facets(), groups);
}

// States in one class iff connected through the given agents' relations
// (empty = all agents). This is the same notion the common-knowledge operator
// evaluates over.
inline Partition connected_components(const KripkeFrame& f,
                                      const std::vector<std::string>& group = {}) {
  std::vector<Partition> ps;
  if (group.empty()) {
    ps = f.rel;
  } else {
    for (const auto& a : group) {
      int i = f.agent_index(a);
      if (i < 0) fail(ErrorCode::kInvalidArgument, "unknown agent in group: " + a);
      ps.push_back(f.rel[static_cast<std::size_t>(i)]);
    }
  }
  return join_all(f.n_states(), ps);
}

// ---------------------------------------------------------------------------
// GF(2) chain complexes
// ---------------------------------------------------------------------------

namespace gf2 {

using Bits = std::vector<std::uint64_t>;

inline Bits zeros(int n) { return Bits(static_cast<std::size_t>((n + 63) / 64), 0); }
inline void flip(Bits& b, int i) { b[static_cast<std::size_t>(i / 64)] ^= 1ull << (i % 64); }
inline bool test(const Bits& b, int i) {
  return (b[static_cast<std::size_t>(i / 64)] >> (i % 64)) & 1ull;
}
inline void xor_into(Bits& a, const Bits& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] ^= b[i];
}
inline bool is_zero(const Bits& b) {
  for (auto w : b)
    if (w) return false;
  return true;
}
inline int lowest_bit(const Bits& b) {
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b[i]) return static_cast<int>(i * 64) + std::countr_zero(b[i]);
  return -1;
}

// Incremental Gaussian elimination: feed vectors, query the rank so far.
class Eliminator {
 public:
  // Returns true when the vector was independent of everything fed before.
  bool add(Bits v) {
    for (const auto& [pivot, row] : rows_)
      if (test(v, pivot)) xor_into(v, row);
    if (is_zero(v)) return false;
    rows_.emplace_back(lowest_bit(v), std::move(v));
    return true;
  }

  // Reduction residue without inserting (zero iff dependent).
  Bits residue(Bits v) const {
    for (const auto& [pivot, row] : rows_)
      if (test(v, pivot)) xor_into(v, row);
    return v;
  }

  int rank() const { return static_cast<int>(rows_.size()); }

 private:
  std::vector<std::pair<int, Bits>> rows_;
};

}  // namespace gf2

// The cells of a complex of dimension <= 2, with canonical edge/triangle
// numbering (lexicographic by vertex indices).
struct ChainComplexGF2 {
  int n_vertices = 0;
  std::vector<std::pair<int, int>> edges;       // sorted pairs, list sorted
  std::vector<std::array<int, 3>> triangles;    // sorted triples, list sorted

  int edge_index(int u, int v) const {
    if (u > v) std::swap(u, v);
    auto it = std::lower_bound(edges.begin(), edges.end(), std::make_pair(u, v));
    if (it == edges.end() || *it != std::make_pair(u, v)) return -1;
    return static_cast<int>(it - edges.begin());
  }
};

inline ChainComplexGF2 build_chain_complex(const ChromaticComplex& c) {
  if (c.n_agents() > 3)
    fail(ErrorCode::kDimension, "homology supported up to dimension 2 (3 colors); complex has " +
                                    std::to_string(c.n_agents()));
  ChainComplexGF2 cc;
  cc.n_vertices = c.n_vertices();
  for (const auto& f : c.facets) {
    for (std::size_t i = 0; i < f.size(); ++i)
      for (std::size_t j = i + 1; j < f.size(); ++j)
        cc.edges.emplace_back(f[i], f[j]);
    if (f.size() == 3) cc.triangles.push_back({f[0], f[1], f[2]});
  }
  std::sort(cc.edges.begin(), cc.edges.end());
  cc.edges.erase(std::unique(cc.edges.begin(), cc.edges.end()), cc.edges.end());
  std::sort(cc.triangles.begin(), cc.triangles.end());
  cc.triangles.erase(std::unique(cc.triangles.begin(), cc.triangles.end()), cc.triangles.end());
  return cc;
}

// Boundary of an edge as a vertex chain.
inline gf2::Bits d1_column(const ChainComplexGF2& cc, int e) {
  gf2::Bits b = gf2::zeros(cc.n_vertices);
  gf2::flip(b, cc.edges[static_cast<std::size_t>(e)].first);
  gf2::flip(b, cc.edges[static_cast<std::size_t>(e)].second);
  return b;
}

// Boundary of a triangle as an edge chain.
inline gf2::Bits d2_column(const ChainComplexGF2& cc, int t) {
  const auto& tri = cc.triangles[static_cast<std::size_t>(t)];
  gf2::Bits b = gf2::zeros(static_cast<int>(cc.edges.size()));
  gf2::flip(b, cc.edge_index(tri[0], tri[1]));
  gf2::flip(b, cc.edge_index(tri[0], tri[2]));
  gf2::flip(b, cc.edge_index(tri[1], tri[2]));
  return b;
}

namespace detail {

// Basis of the cycle space ker ∂₁, as edge-chain bitsets: eliminate the edge
// columns over the vertices while tracking the combination that produced each
// residue; dependent columns yield cycles.
inline std::vector<gf2::Bits> cycle_basis(const ChainComplexGF2& cc) {
  const int E = static_cast<int>(cc.edges.size());
  std::vector<std::pair<gf2::Bits, gf2::Bits>> rows;  // (vertex residue, edge combo)
  std::vector<gf2::Bits> cycles;
  for (int e = 0; e < E; ++e) {
    gf2::Bits v = d1_column(cc, e);
    gf2::Bits combo = gf2::zeros(E);
    gf2::flip(combo, e);
    for (const auto& [residue, cmb] : rows) {
      int pivot = gf2::lowest_bit(residue);
      if (gf2::test(v, pivot)) {
        gf2::xor_into(v, residue);
        gf2::xor_into(combo, cmb);
      }
    }
    if (gf2::is_zero(v))
      cycles.push_back(std::move(combo));
    else
      rows.emplace_back(std::move(v), std::move(combo));
  }
  return cycles;
}

}  // namespace detail

// (β₀, β₁) over GF(2). Dimension 2 at most; higher Betti numbers are out of
// scope (a 2-sphere still reports (1, 0)).
inline std::pair<int, int> betti_numbers(const ChromaticComplex& c) {
  ChainComplexGF2 cc = build_chain_complex(c);
  gf2::Eliminator d1;
  for (int e = 0; e < static_cast<int>(cc.edges.size()); ++e) d1.add(d1_column(cc, e));
  gf2::Eliminator d2;
  for (int t = 0; t < static_cast<int>(cc.triangles.size()); ++t) d2.add(d2_column(cc, t));
  int b0 = cc.n_vertices - d1.rank();
  int b1 = (static_cast<int>(cc.edges.size()) - d1.rank()) - d2.rank();
  return {b0, b1};
}

// Rank of H₁(f) for a chromatic map f: push a cycle basis of the source
// through the edge map (degenerate edges die) and count what is independent
// modulo the target's boundary space.
inline int induced_h1_rank(const ChromaticMap& f) {
  if (!is_chromatic_map(f)) fail(ErrorCode::kInvalidArgument, "induced_h1_rank: not a chromatic map");
  ChainComplexGF2 src = build_chain_complex(f.source);
  ChainComplexGF2 dst = build_chain_complex(f.target);

  gf2::Eliminator modulo;  // target boundaries first, then images
  for (int t = 0; t < static_cast<int>(dst.triangles.size()); ++t) modulo.add(d2_column(dst, t));

  int rank = 0;
  for (const auto& cycle : detail::cycle_basis(src)) {
    gf2::Bits image = gf2::zeros(static_cast<int>(dst.edges.size()));
    for (int e = 0; e < static_cast<int>(src.edges.size()); ++e) {
      if (!gf2::test(cycle, e)) continue;
      int u = f.map[static_cast<std::size_t>(src.edges[static_cast<std::size_t>(e)].first)];
      int v = f.map[static_cast<std::size_t>(src.edges[static_cast<std::size_t>(e)].second)];
      if (u == v) continue;  // collapsed edge
      int de = dst.edge_index(u, v);
      gf2::flip(image, de);
    }
    if (modulo.add(std::move(image))) ++rank;
  }
  return rank;
}

// ---------------------------------------------------------------------------
// Obstruction certificate
// ---------------------------------------------------------------------------

enum class ObstructionStatus { kObstructed, kInconclusive };

inline const char* to_string(ObstructionStatus s) {
  return s == ObstructionStatus::kObstructed ? "OBSTRUCTED" : "INCONCLUSIVE";
}

struct ObstructionReport {
  ObstructionStatus status = ObstructionStatus::kInconclusive;
  int rounds = 0;
  int h1_rank_pi = 0;                 // rank of H₁(π_I) : H₁(P) → H₁(I)
  int betti1_delta = 0;               // β₁(Δ*)
  std::pair<int, int> betti_p{0, 0};
  std::pair<int, int> betti_input{0, 0};
  std::pair<int, int> betti_delta{0, 0};
};

// Sound but incomplete: OBSTRUCTED certifies unsolvability at this round;
// INCONCLUSIVE decides nothing.
inline ObstructionReport obstruction_report(const TaskSpec& task, int rounds) {
  TaskSpec st = task_to_simplicial(task);
  DeltaSubmodel delta = build_delta_submodel(st);
  ProtocolResult protocol = protocol_complex(*st.simplicial_input, rounds);

  ObstructionReport r;
  r.rounds = rounds;
  r.h1_rank_pi = induced_h1_rank(protocol.pi);
  r.betti_p = betti_numbers(protocol.model.complex);
  r.betti_input = betti_numbers(st.simplicial_input->complex);
  r.betti_delta = betti_numbers(delta.model.complex);
  r.betti1_delta = r.betti_delta.second;
  r.status = r.h1_rank_pi > r.betti1_delta ? ObstructionStatus::kObstructed
                                           : ObstructionStatus::kInconclusive;
  return r;
}

}  // namespace episolve
