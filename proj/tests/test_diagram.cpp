#include "doctest.h"

#include <map>
#include <random>

#include "framelink/codecs.hpp"
#include "framelink/diagram.hpp"
#include "framelink/invariants.hpp"
#include "test_support.hpp"

using namespace framelink;
using testsupport::canon;

namespace {

const char* kTrefoilPd = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]";
const char* kHopfPd = "X[1,3,2,4] X[3,1,4,2]";  // two positive crossings

}  // namespace

TEST_CASE("empty diagram validates") {
  CHECK(validate({}, 0).ok);
  LinkDiagram d;
  CHECK(d.empty());
  CHECK(d.component_count() == 0);
}

TEST_CASE("arc used three times is a dangling arc") {
  std::vector<Crossing> xs = {Crossing{{1, 1, 1, 2}}};
  ValidationReport r = validate(xs, 0);
  CHECK_FALSE(r.ok);
  CHECK(r.code == ErrorCode::DanglingArc);
  CHECK(r.crossing == 0);
}

TEST_CASE("non-positive labels are an empty crossing") {
  std::vector<Crossing> xs = {Crossing{{0, 1, 1, 2}}};
  ValidationReport r = validate(xs, 0);
  CHECK_FALSE(r.ok);
  CHECK(r.code == ErrorCode::EmptyCrossing);
}

TEST_CASE("inconsistent strand directions break the cycle") {
  // arc 1 is incoming under at both crossings: it would need two heads
  std::vector<Crossing> xs = {Crossing{{1, 3, 2, 4}}, Crossing{{1, 2, 3, 4}}};
  ValidationReport r = validate(xs, 0);
  CHECK_FALSE(r.ok);
  CHECK(r.code == ErrorCode::BrokenCycle);
}

TEST_CASE("trefoil validates and traces one component of six arcs") {
  LinkDiagram d = parse_pd(kTrefoilPd);
  CHECK(validate(d).ok);
  CHECK(d.component_count() == 1);
  REQUIRE(d.arc_cycles().size() == 1);
  CHECK(d.arc_cycles()[0] == std::vector<ArcId>{1, 2, 3, 4, 5, 6});
}

TEST_CASE("two bare loops are two components") {
  LinkDiagram d = LinkDiagram::make({}, 2);
  CHECK(d.component_count() == 2);
  CHECK(trace_components(d).size() == 2);
  CHECK(d.is_unknotted_loop(0));
}

TEST_CASE("Hopf link traces two components of two arcs each") {
  LinkDiagram d = parse_pd(kHopfPd);
  CHECK(d.component_count() == 2);
  CHECK(d.arc_cycles()[0] == std::vector<ArcId>{1, 2});
  CHECK(d.arc_cycles()[1] == std::vector<ArcId>{3, 4});
}

TEST_CASE("every arc has one predecessor and one successor") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    LinkDiagram d = testsupport::random_diagram(rng);
    std::map<ArcId, int> seen;
    for (const auto& cycle : d.arc_cycles()) {
      for (ArcId a : cycle) seen[a] += 1;
    }
    for (ArcId a : d.arcs()) CHECK(seen[a] == 1);
  }
}

TEST_CASE("connected sum with the unknot is the identity") {
  LinkDiagram trefoil = parse_pd(kTrefoilPd);
  LinkDiagram unknot = LinkDiagram::make({}, 1);
  LinkDiagram sum = connected_sum(trefoil, 0, 1, unknot, 0, 0);
  CHECK(sum.crossing_count() == 3);
  CHECK(sum.component_count() == 1);
  CHECK(canon(sum) == canon(trefoil));

  LinkDiagram uu = connected_sum(unknot, 0, 0, unknot, 0, 0);
  CHECK(uu.crossing_count() == 0);
  CHECK(uu.component_count() == 1);
}

TEST_CASE("trefoil # trefoil has six crossings, one component, additive writhe") {
  LinkDiagram t = parse_pd(kTrefoilPd);
  LinkDiagram sum = connected_sum(t, 0, 1, t, 0, 1);
  CHECK(sum.crossing_count() == 6);
  CHECK(sum.component_count() == 1);
  CHECK(total_writhe(sum) == 2 * total_writhe(t));
}

TEST_CASE("connected sum rejects an arc off the component") {
  LinkDiagram hopf = parse_pd(kHopfPd);
  LinkDiagram t = parse_pd(kTrefoilPd);
  CHECK_THROWS_AS((void)connected_sum(hopf, 0, 3, t, 0, 1), Error);
  try {
    (void)connected_sum(hopf, 0, 3, t, 0, 1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ArcNotOnComponent);
  }
}

TEST_CASE("connected sum crossing count is additive on random diagrams") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    LinkDiagram a = testsupport::random_diagram(rng);
    LinkDiagram b = testsupport::random_diagram(rng);
    // any component of either side, spliced at any of its arcs
    ComponentId ca = std::uniform_int_distribution<int>(0, a.component_count() - 1)(rng);
    ComponentId cb = std::uniform_int_distribution<int>(0, b.component_count() - 1)(rng);
    auto pick_arc = [&](const LinkDiagram& d, ComponentId c) -> ArcId {
      if (d.is_unknotted_loop(c)) return 0;
      const auto& cycle = d.arc_cycles()[c];
      return cycle[std::uniform_int_distribution<size_t>(0, cycle.size() - 1)(rng)];
    };
    LinkDiagram sum = connected_sum(a, ca, pick_arc(a, ca), b, cb, pick_arc(b, cb));
    CHECK(sum.crossing_count() == a.crossing_count() + b.crossing_count());
    CHECK(sum.component_count() == a.component_count() + b.component_count() - 1);
    CHECK(total_writhe(sum) == total_writhe(a) + total_writhe(b));
  }
}

TEST_CASE("reversing a component twice restores the diagram exactly") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    LinkDiagram d = testsupport::random_diagram(rng);
    for (ComponentId c = 0; c < d.component_count(); ++c) {
      LinkDiagram twice = reverse_component(reverse_component(d, c), c);
      CHECK(twice == d);
    }
  }
}

TEST_CASE("reversing one Hopf component negates the linking number") {
  LinkDiagram hopf = parse_pd(kHopfPd);
  CHECK(linking_number(hopf, 0, 1) == 1);
  LinkDiagram r = reverse_component(hopf, 1);
  CHECK(linking_number(r, 0, 1) == -1);
}

TEST_CASE("reversing the trefoil leaves its writhe alone") {
  LinkDiagram t = parse_pd(kTrefoilPd);
  CHECK(total_writhe(reverse_component(t, 0)) == total_writhe(t));
}

TEST_CASE("toggling a crossing flips its sign and keeps the components") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    LinkDiagram d = testsupport::random_diagram(rng, {.min_crossings = 1});
    int k = std::uniform_int_distribution<int>(0, d.crossing_count() - 1)(rng);
    LinkDiagram t = toggle_crossing(d, k);
    CHECK(t.sign(k) == -d.sign(k));
    CHECK(t.component_count() == d.component_count());
    CHECK(canon(toggle_crossing(t, k)) == canon(d));
  }
}

TEST_CASE("component indices are range checked") {
  LinkDiagram t = parse_pd(kTrefoilPd);
  CHECK_THROWS_AS((void)writhe(t, 5), Error);
  CHECK_THROWS_AS((void)reverse_component(t, -1), Error);
}
