#include <doctest.h>

#include "support.hpp"

using namespace episolve;
using testsupport::consensus_task;
using testsupport::identity_task;
using testsupport::octahedron_complex;
using testsupport::pseudo_consensus_task;
using testsupport::segment_model;
using testsupport::square_model;
using testsupport::three_states_model;
using testsupport::triangle_model;

TEST_CASE("facet connectivity, optionally through chosen colors only") {
  CHECK(connected_components(square_model().complex).class_count() == 1);
  CHECK(connected_components(build_delta_submodel(consensus_task()).model.complex)
            .class_count() == 2);

  // Through a0-vertices alone the square splits into opposite edge pairs.
  Partition a0_only = connected_components(square_model().complex, {"a0"});
  CHECK(a0_only.class_count() == 2);
  const auto& ids = square_model().complex.facet_ids;
  int e1 = index_of(ids, "e1"), e4 = index_of(ids, "e4");
  CHECK(a0_only.related(e1, e4));

  CHECK_THROWS_AS(connected_components(square_model().complex, {"zz"}), Error);
}

TEST_CASE("state connectivity matches the common-knowledge reach") {
  KripkeModel m = three_states_model();
  CHECK(connected_components(m.frame).class_count() == 1);
  CHECK(connected_components(m.frame, {"a0"}).class_count() == 2);
  CHECK(connected_components(m.frame, {"a0", "a1"}).class_count() == 1);
  CHECK_THROWS_AS(connected_components(m.frame, {"zz"}), Error);
}

TEST_CASE("betti numbers of the stock shapes") {
  CHECK(betti_numbers(segment_model().complex) == std::pair<int, int>{1, 0});
  CHECK(betti_numbers(square_model().complex) == std::pair<int, int>{1, 1});
  CHECK(betti_numbers(triangle_model().complex) == std::pair<int, int>{1, 0});
  CHECK(betti_numbers(octahedron_complex()) == std::pair<int, int>{1, 0});

  ChromaticComplex two_segments =
      make_complex({"a0", "a1"},
                   {{"x0", "a0"}, {"x1", "a1"}, {"y0", "a0"}, {"y1", "a1"}},
                   {{"fx", {"x0", "x1"}}, {"fy", {"y0", "y1"}}});
  CHECK(betti_numbers(two_segments) == std::pair<int, int>{2, 0});

  CHECK(betti_numbers(standard_chromatic_subdivision(square_model().complex)) ==
        std::pair<int, int>{1, 1});
  CHECK(betti_numbers(standard_chromatic_subdivision(triangle_model().complex)) ==
        std::pair<int, int>{1, 0});
}

TEST_CASE("the chain complex is capped at dimension two") {
  ChromaticComplex four = make_complex(
      {"a0", "a1", "a2", "a3"},
      {{"q0", "a0"}, {"q1", "a1"}, {"q2", "a2"}, {"q3", "a3"}},
      {{"f", {"q0", "q1", "q2", "q3"}}});
  CHECK_THROWS_AS(betti_numbers(four), Error);
  try {
    betti_numbers(four);
  } catch (const Error& e) {
    CHECK(e.code == ErrorCode::kDimension);
  }
}

TEST_CASE("edge and triangle bookkeeping on the octahedron") {
  ChainComplexGF2 cc = build_chain_complex(octahedron_complex());
  CHECK(cc.n_vertices == 6);
  CHECK(cc.edges.size() == 12);
  CHECK(cc.triangles.size() == 8);
  CHECK(cc.edge_index(cc.edges[3].first, cc.edges[3].second) == 3);
  CHECK(cc.edge_index(cc.edges[3].second, cc.edges[3].first) == 3);
  // Same-color pairs (the antipodes) never share a facet, hence no edge.
  int u0 = octahedron_complex().vertex_index("u0");
  int w0 = octahedron_complex().vertex_index("w0");
  CHECK(cc.edge_index(u0, w0) == -1);
}

TEST_CASE("induced map on first homology") {
  const ChromaticComplex sq = square_model().complex;

  ChromaticMap ident{sq, sq, {0, 1, 2, 3}};
  CHECK(induced_h1_rank(ident) == 1);

  // The subdivision projection wraps the 12-cycle once around the square.
  ProtocolResult sub = protocol_complex(square_model(), 1);
  CHECK(induced_h1_rank(sub.pi) == 1);

  // Collapsing the square onto a single edge kills the cycle.
  ChromaticMap collapse{sq, segment_model().complex, {0, 0, 1, 1}};
  REQUIRE(is_chromatic_map(collapse));
  CHECK(induced_h1_rank(collapse) == 0);

  // A source with no cycles has nothing to map.
  ChromaticComplex seg = segment_model().complex;
  ChromaticMap seg_ident{seg, seg, {0, 1}};
  CHECK(induced_h1_rank(seg_ident) == 0);

  ChromaticMap broken{sq, seg, {0, 1, 1, 0}};
  CHECK(!is_chromatic_map(broken));
  CHECK_THROWS_AS(induced_h1_rank(broken), Error);
}

TEST_CASE("obstruction certificate for strict agreement") {
  for (int rounds = 1; rounds <= 2; ++rounds) {
    ObstructionReport r = obstruction_report(consensus_task(), rounds);
    CHECK(r.status == ObstructionStatus::kObstructed);
    CHECK(r.rounds == rounds);
    CHECK(r.h1_rank_pi == 1);
    CHECK(r.betti1_delta == 0);
    CHECK(r.betti_p == std::pair<int, int>{1, 1});
    CHECK(r.betti_input == std::pair<int, int>{1, 1});
    CHECK(r.betti_delta == std::pair<int, int>{2, 0});
    CHECK(std::string(to_string(r.status)) == "OBSTRUCTED");
  }
}

TEST_CASE("the certificate stays silent when the target has a cycle") {
  ObstructionReport relaxed = obstruction_report(pseudo_consensus_task(), 1);
  CHECK(relaxed.status == ObstructionStatus::kInconclusive);
  CHECK(relaxed.h1_rank_pi == 1);
  CHECK(relaxed.betti1_delta == 1);
  CHECK(std::string(to_string(relaxed.status)) == "INCONCLUSIVE");

  ObstructionReport echo = obstruction_report(identity_task(), 1);
  CHECK(echo.status == ObstructionStatus::kInconclusive);
}

TEST_CASE("subdividing preserves both betti numbers") {
  for (const SimplicialModel& input : {segment_model(), square_model(), triangle_model()}) {
    std::pair<int, int> base = betti_numbers(input.complex);
    for (int rounds = 1; rounds <= 2; ++rounds)
      CHECK(betti_numbers(protocol_complex(input, rounds).model.complex) == base);
  }
}
