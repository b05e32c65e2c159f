#include <doctest.h>

#include <algorithm>

#include "support.hpp"

using namespace episolve;
using testsupport::consensus_output_model;
using testsupport::consensus_task;
using testsupport::identity_task;
using testsupport::pseudo_consensus_task;
using testsupport::segment_model;
using testsupport::square_model;
using testsupport::triangle_model;

namespace {

int facet_index_of_vertices(const ChromaticComplex& c, std::vector<int> vs) {
  std::sort(vs.begin(), vs.end());
  for (int i = 0; i < c.n_facets(); ++i)
    if (c.facets[static_cast<std::size_t>(i)] == vs) return i;
  return -1;
}

// Every protocol facet must decide inside a pair permitted by the task.
void check_decisions_carried(const TaskRun& run, const TaskSpec& task) {
  REQUIRE(run.verdict.witness.has_value());
  const ChromaticMap& h = *run.verdict.witness;
  const ChromaticComplex& p = run.protocol.model.complex;
  for (const auto& facet : p.facets) {
    std::vector<int> image, in_vs, out_vs;
    for (int v : facet) {
      int w = h.map[static_cast<std::size_t>(v)];
      image.push_back(w);
      in_vs.push_back(run.delta.pi_input.map[static_cast<std::size_t>(w)]);
      out_vs.push_back(run.delta.pi_output.map[static_cast<std::size_t>(w)]);
    }
    REQUIRE(facet_index_of_vertices(run.delta.model.complex, image) >= 0);
    int fi = facet_index_of_vertices(run.input.complex, in_vs);
    int fo = facet_index_of_vertices(run.output.complex, out_vs);
    REQUIRE(fi >= 0);
    REQUIRE(fo >= 0);
    CHECK(contains(task.delta.at(run.input.complex.facet_ids[static_cast<std::size_t>(fi)]),
                   run.output.complex.facet_ids[static_cast<std::size_t>(fo)]));
  }
}

}  // namespace

TEST_CASE("task construction rejects mismatched pieces") {
  SimplicialModel sq = square_model();
  SimplicialModel out = consensus_output_model();
  CHECK_THROWS_AS(make_simplicial_task(sq, triangle_model(), {{"e1", {"f0"}}}), Error);
  CHECK_THROWS_AS(make_simplicial_task(sq, out, {{"nope", {"d0"}}}), Error);
  CHECK_THROWS_AS(make_simplicial_task(sq, out, {{"e1", {"nope"}}}), Error);
}

TEST_CASE("kripke tasks transport to simplicial tasks with the same ids") {
  TaskSpec t = consensus_task();
  TaskSpec tk = make_kripke_task(simplicial_to_model(*t.simplicial_input),
                                 simplicial_to_model(*t.simplicial_output), t.delta);
  TaskSpec back = task_to_simplicial(tk);
  CHECK(back.kind == TaskSpec::Kind::kSimplicial);
  CHECK(back.delta == t.delta);
  CHECK(back.simplicial_input->complex.facet_ids == t.simplicial_input->complex.facet_ids);
  auto iso = complexes_isomorphic(back.simplicial_input->complex, t.simplicial_input->complex);
  CHECK(iso.has_value());
}

TEST_CASE("carrier validation accepts the decision tasks") {
  CHECK(validate_carrier(consensus_task()).ok());
  CHECK(validate_carrier(pseudo_consensus_task()).ok());
  CHECK(validate_carrier(identity_task()).ok());
}

TEST_CASE("carrier validation reports missing and local failures") {
  TaskSpec t = consensus_task();

  TaskSpec missing = t;
  missing.delta.erase("e3");
  ValidationReport r1 = validate_carrier(missing);
  CHECK(!r1.ok());
  CHECK(r1.errors.front().find("no output") != std::string::npos);

  TaskSpec empty = t;
  empty.delta["e3"].clear();
  CHECK(!validate_carrier(empty).ok());

  // Neighbouring edges e1 and e2 share the a1 vertex v10, but d0 and d1 are
  // disjoint, so forcing them to opposite decisions breaks the condition.
  TaskSpec split = make_simplicial_task(
      square_model(), consensus_output_model(),
      {{"e1", {"d0"}}, {"e2", {"d1"}}, {"e3", {"d1"}}, {"e4", {"d0"}}});
  ValidationReport r2 = validate_carrier(split);
  CHECK(!r2.ok());
  bool mentions_a1 = false;
  for (const auto& e : r2.errors)
    if (e.find("a1") != std::string::npos) mentions_a1 = true;
  CHECK(mentions_a1);
}

TEST_CASE("delta submodel of the consensus task is two disjoint squares' worth") {
  DeltaSubmodel d = build_delta_submodel(consensus_task());
  CHECK(d.model.complex.n_facets() == 6);
  CHECK(connected_components(d.model.complex).class_count() == 2);
  CHECK(betti_numbers(d.model.complex) == std::pair<int, int>{2, 0});
  CHECK(is_chromatic_map(d.pi_input));
  CHECK(is_chromatic_map(d.pi_output));
  CHECK(validate_simplicial_model(d.model).ok());
  CHECK(contains(d.model.complex.facet_ids, std::string("(e1,d0)")));
  CHECK(contains(d.model.complex.facet_ids, std::string("(e2,d1)")));

  // Pair vertices merge both sides' literals.
  int pv = d.model.complex.vertex_index("(v00,o00)");
  REQUIRE(pv >= 0);
  CHECK(vertex_literal_strings(d.model, pv) == std::vector<std::string>{"!d0", "!l0"});
}

TEST_CASE("delta submodel of the looser task closes into one cycle") {
  DeltaSubmodel d = build_delta_submodel(pseudo_consensus_task());
  CHECK(d.model.complex.n_facets() == 8);
  CHECK(connected_components(d.model.complex).class_count() == 1);
  CHECK(betti_numbers(d.model.complex) == std::pair<int, int>{1, 1});
}

TEST_CASE("delta submodel rejects clashing literals on a permitted pair") {
  // Same atom l0 owned by a0 on both sides, but with opposite polarity on the
  // one permitted pair of a0-vertices.
  SimplicialModel in = segment_model();
  ChromaticComplex out_c = make_complex(
      {"a0", "a1"}, {{"j0", "a0"}, {"j1", "a1"}}, {{"g0", {"j0", "j1"}}});
  SimplicialModel out = make_simplicial_model(
      out_c, {{"l0", "a0"}, {"l1", "a1"}}, {{"j0", {"l0"}}, {"j1", {"l1"}}});
  TaskSpec t = make_simplicial_task(in, out, {{"e0", {"g0"}}});
  CHECK_THROWS_AS(build_delta_submodel(t), Error);
  try {
    build_delta_submodel(t);
  } catch (const Error& e) {
    CHECK(e.code == ErrorCode::kInconsistentValuation);
  }
}

TEST_CASE("the state-based delta construction matches the facet-based one") {
  TaskSpec t = consensus_task();
  TaskSpec tk = make_kripke_task(simplicial_to_model(*t.simplicial_input),
                                 simplicial_to_model(*t.simplicial_output), t.delta);
  DeltaSubmodelKripke dk = build_delta_submodel_kripke(tk);
  DeltaSubmodel ds = build_delta_submodel(t);

  CHECK(dk.model.frame.n_states() == 6);
  CHECK(is_morphism(dk.pi_input));
  CHECK(is_morphism(dk.pi_output));
  CHECK(simplicial_to_model(ds.model) == dk.model);
  CHECK_THROWS_AS(build_delta_submodel_kripke(t), Error);
}

TEST_CASE("strict agreement stays unsolvable as rounds grow") {
  TaskSpec t = consensus_task();
  for (int rounds = 1; rounds <= 2; ++rounds) {
    TaskRun run = solve_task(t, rounds);
    CHECK(!run.verdict.solvable);
    CHECK(!run.verdict.witness.has_value());
    CHECK(run.verdict.stats.nodes > 0);
    CHECK(run.verdict.stats.seconds >= 0.0);
  }
}

TEST_CASE("the relaxed agreement task is solvable in one round") {
  TaskSpec t = pseudo_consensus_task();
  TaskRun run = solve_task(t, 1);
  REQUIRE(run.verdict.solvable);
  REQUIRE(run.verdict.witness.has_value());
  CHECK(check_witness(run.protocol.model.complex, run.protocol.pi, run.delta,
                      *run.verdict.witness));
  check_decisions_carried(run, t);

  // The decision map names every protocol vertex with its agent's choice.
  CHECK(run.verdict.decision_map.size() ==
        static_cast<std::size_t>(run.protocol.model.complex.n_vertices()));
  for (const auto& [vid, entry] : run.verdict.decision_map) {
    int v = run.protocol.model.complex.vertex_index(vid);
    REQUIRE(v >= 0);
    CHECK(entry.agent ==
          run.protocol.model.complex.agents[static_cast<std::size_t>(
              run.protocol.model.complex.vertex_color[static_cast<std::size_t>(v)])]);
    int w = run.verdict.witness->map[static_cast<std::size_t>(v)];
    int ov = run.delta.pi_output.map[static_cast<std::size_t>(w)];
    CHECK(entry.literals == vertex_literal_strings(run.output, ov));
  }
}

TEST_CASE("echoing the input is solvable with no communication") {
  TaskSpec t = identity_task();
  for (int rounds = 0; rounds <= 1; ++rounds) {
    TaskRun run = solve_task(t, rounds);
    REQUIRE(run.verdict.solvable);
    check_decisions_carried(run, t);
    // Each process decides exactly what it started with.
    for (int v = 0; v < run.protocol.model.complex.n_vertices(); ++v) {
      const auto& entry = run.verdict.decision_map.at(
          run.protocol.model.complex.vertex_ids[static_cast<std::size_t>(v)]);
      CHECK(entry.literals ==
            vertex_literal_strings(square_model(), run.protocol.pi(v)));
    }
  }
}

TEST_CASE("verdicts are seed independent, witnesses always check out") {
  for (std::uint64_t seed : {1ull, 7ull, 99ull, 1234ull, 777777ull}) {
    SolveOptions opt;
    opt.seed = seed;
    TaskRun relaxed = solve_task(pseudo_consensus_task(), 1, opt);
    CHECK(relaxed.verdict.solvable);
    CHECK(check_witness(relaxed.protocol.model.complex, relaxed.protocol.pi, relaxed.delta,
                        *relaxed.verdict.witness));
    TaskRun strict = solve_task(consensus_task(), 1, opt);
    CHECK(!strict.verdict.solvable);
  }
}

TEST_CASE("the unseeded witness is deterministic") {
  TaskRun a = solve_task(pseudo_consensus_task(), 1);
  TaskRun b = solve_task(pseudo_consensus_task(), 1);
  REQUIRE(a.verdict.witness.has_value());
  REQUIRE(b.verdict.witness.has_value());
  CHECK(a.verdict.witness->map == b.verdict.witness->map);
  // Lexicographically least: no smaller value works at the first vertex where
  // any alternative exists (spot check by decreasing one entry).
  for (std::size_t v = 0; v < a.verdict.witness->map.size(); ++v) {
    ChromaticMap tweak = *a.verdict.witness;
    bool lowered = false;
    for (int w = tweak.map[v] - 1; w >= 0 && !lowered; --w) {
      tweak.map[v] = w;
      if (check_witness(a.protocol.model.complex, a.protocol.pi, a.delta, tweak)) lowered = true;
    }
    CHECK(!lowered);
  }
}

TEST_CASE("tampered witnesses are rejected") {
  TaskRun run = solve_task(pseudo_consensus_task(), 1);
  REQUIRE(run.verdict.witness.has_value());
  const ChromaticComplex& d = run.delta.model.complex;

  ChromaticMap wrong_color = *run.verdict.witness;
  int v0_color = run.protocol.model.complex.vertex_color[0];
  for (int w = 0; w < d.n_vertices(); ++w)
    if (d.vertex_color[static_cast<std::size_t>(w)] != v0_color) {
      wrong_color.map[0] = w;
      break;
    }
  CHECK(!check_witness(run.protocol.model.complex, run.protocol.pi, run.delta, wrong_color));

  ChromaticMap wrong_input = *run.verdict.witness;
  for (int w = 0; w < d.n_vertices(); ++w)
    if (d.vertex_color[static_cast<std::size_t>(w)] == v0_color &&
        run.delta.pi_input.map[static_cast<std::size_t>(w)] != run.protocol.pi(0)) {
      wrong_input.map[0] = w;
      break;
    }
  CHECK(!check_witness(run.protocol.model.complex, run.protocol.pi, run.delta, wrong_input));

  ChromaticMap short_map = *run.verdict.witness;
  short_map.map.pop_back();
  CHECK(!check_witness(run.protocol.model.complex, run.protocol.pi, run.delta, short_map));
}

TEST_CASE("solvability search validates its inputs") {
  TaskSpec t = consensus_task();
  DeltaSubmodel d = build_delta_submodel(t);
  ProtocolResult p = protocol_complex(*t.simplicial_input, 1);
  ProtocolResult other = protocol_complex(segment_model(), 1);
  CHECK_THROWS_AS(check_solvability(p.model.complex, other.pi, d), Error);
  CHECK_THROWS_AS(check_solvability(other.model.complex, other.pi, d), Error);
}

TEST_CASE("kripke tasks solve through the transported pipeline") {
  TaskSpec t = pseudo_consensus_task();
  TaskSpec tk = make_kripke_task(simplicial_to_model(*t.simplicial_input),
                                 simplicial_to_model(*t.simplicial_output), t.delta);
  TaskRun run = solve_task(tk, 1);
  CHECK(run.verdict.solvable);
  CHECK(run.input.complex.facet_ids == t.simplicial_input->complex.facet_ids);
}
