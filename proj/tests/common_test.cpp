#include <doctest.h>

#include <random>

#include "support.hpp"

using namespace episolve;

TEST_CASE("partition construction is canonical") {
  // Classes ordered by least member, members sorted.
  Partition p = Partition::from_class_of({2, 0, 2, 1, 0});
  CHECK(p.size() == 5);
  CHECK(p.class_count() == 3);
  CHECK(p.classes() == std::vector<std::vector<int>>{{0, 2}, {1, 4}, {3}});
  CHECK(p.related(0, 2));
  CHECK(p.related(1, 4));
  CHECK(!p.related(0, 1));
  CHECK(p.class_members_of(4) == std::vector<int>{1, 4});
}

TEST_CASE("from_groups closes overlapping groups") {
  std::vector<std::vector<int>> groups = {{0, 1}, {1, 2}};
  Partition p = Partition::from_groups(4, groups);
  CHECK(p.related(0, 2));
  CHECK(!p.related(0, 3));
  CHECK(p.class_count() == 2);
}

TEST_CASE("identity and single_class") {
  CHECK(Partition::identity(4).is_identity());
  CHECK(Partition::identity(4).class_count() == 4);
  CHECK(Partition::single_class(4).class_count() == 1);
  CHECK(!Partition::single_class(2).is_identity());
  CHECK(Partition::single_class(1).is_identity());
}

TEST_CASE("meet and join against definitions") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    int n = testsupport::rand_int(rng, 1, 8);
    Partition p = testsupport::random_partition(rng, n);
    Partition q = testsupport::random_partition(rng, n);
    Partition m = p.meet(q);
    Partition j = p.join(q);
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) {
        CHECK(m.related(u, v) == (p.related(u, v) && q.related(u, v)));
        // Join contains both relations; it is the transitive closure, so only
        // one inclusion is checkable pointwise.
        if (p.related(u, v) || q.related(u, v)) CHECK(j.related(u, v));
      }
    CHECK(p.meet(p) == p);
    CHECK(p.join(p) == p);
    CHECK(p.meet(Partition::single_class(n)) == p);
    CHECK(p.join(Partition::identity(n)) == p);
    CHECK(p.meet(Partition::identity(n)).is_identity());
    CHECK(p.join(Partition::single_class(n)) == Partition::single_class(n));
  }
}

TEST_CASE("join is the transitive closure") {
  // {0,1},{2,3} joined with {1,2} chains into one class.
  Partition p = Partition::from_class_of({0, 0, 1, 1});
  Partition q = Partition::from_class_of({0, 1, 1, 2});
  CHECK(p.join(q).class_count() == 1);
}

TEST_CASE("meet_all and join_all") {
  Partition a = Partition::from_class_of({0, 0, 1, 1});
  Partition b = Partition::from_class_of({0, 1, 1, 0});
  std::vector<Partition> ps = {a, b};
  Partition m = meet_all(4, ps);
  CHECK(m.is_identity());
  CHECK(m.classes() == std::vector<std::vector<int>>{{0}, {1}, {2}, {3}});
  // 0~1 via a, 1~2 via b, so everything chains together.
  CHECK(join_all(4, ps).class_count() == 1);
  CHECK(meet_all(3, std::vector<Partition>{}).class_count() == 1);
}

TEST_CASE("string utilities") {
  std::vector<std::string> v = {"b", "a", "b"};
  CHECK(!sorted_unique(v));
  std::vector<std::string> sorted = {"a", "c", "e"};
  CHECK(sorted_unique(sorted));
  CHECK(!sorted_unique(std::vector<std::string>{"a", "a"}));
  CHECK(index_of(sorted, "c") == 1);
  CHECK(index_of(sorted, "d") == -1);
  CHECK(contains(sorted, std::string("e")));
  CHECK(!contains(sorted, std::string("b")));
  CHECK(join_strings({"x", "y"}, "+") == "x+y");
  CHECK(join_strings({}, "+") == "");
}

TEST_CASE("errors carry codes") {
  try {
    fail(ErrorCode::kNotProper, "demo");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code == ErrorCode::kNotProper);
    CHECK(std::string(e.what()) == "demo");
  }
}

TEST_CASE("validation report merge") {
  ValidationReport a, b;
  a.warn("w1");
  b.error("e1");
  a.merge(b);
  CHECK(!a.ok());
  CHECK(a.errors.size() == 1);
  CHECK(a.warnings.size() == 1);
}
