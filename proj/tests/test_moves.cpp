#include "doctest.h"

#include <random>

#include "framelink/codecs.hpp"
#include "framelink/invariants.hpp"
#include "framelink/moves.hpp"
#include "test_support.hpp"

using namespace framelink;
using testsupport::canon;

namespace {

LinkingMatrix offdiag(const FramedLink& fl) {
  LinkingMatrix m = linking_matrix(fl);
  for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, i) = 0;
  return m;
}

LinkingMatrix offdiag(const LinkDiagram& d) { return offdiag(blackboard_framing(d)); }

}  // namespace

TEST_CASE("a bare loop offers kink insertions and no removals") {
  LinkDiagram u = LinkDiagram::make({}, 1);
  auto sites = enumerate_moves(u, movekinds::R1Add | movekinds::R1Remove);
  REQUIRE(sites.size() == 2);
  CHECK(sites[0].kind == MoveKind::R1Add);
  CHECK(sites[0].arc == 0);
  CHECK(sites[0].loop_index == 0);
  CHECK(sites[0].kink != sites[1].kink);
}

TEST_CASE("a single kink offers exactly one removal") {
  LinkDiagram kink = parse_pd("X[1,1,2,2]");
  auto removes = enumerate_moves(kink, movekinds::R1Remove);
  REQUIRE(removes.size() == 1);
  CHECK(removes[0].crossing == 0);
  CHECK(removes[0].kink == Kink::Right);
  LinkDiagram back = apply_move(kink, removes[0]);
  CHECK(back.crossing_count() == 0);
  CHECK(back.unknotted_loops() == 1);
}

TEST_CASE("kink insertion and removal are inverse") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 30; ++trial) {
    LinkDiagram d = testsupport::random_diagram(rng, {.max_crossings = 6});
    auto sites = enumerate_moves(d, movekinds::R1Add);
    for (const MoveSite& m : sites) {
      MoveOutcome out = apply_move_ex(d, m);
      CHECK(out.diagram.crossing_count() == d.crossing_count() + 1);
      CHECK(out.diagram.component_count() == d.component_count());
      CHECK(total_writhe(out.diagram) == total_writhe(d) + kink_sign(m.kink));
      LinkDiagram back = apply_move(out.diagram, out.inverse);
      CHECK(canon(back) == canon(d));
    }
  }
}

TEST_CASE("push moves insert cancelling bigons and undo exactly") {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 12; ++trial) {
    LinkDiagram d = testsupport::random_diagram(rng, {.max_crossings = 6, .min_crossings = 1});
    auto sites = enumerate_moves(d, movekinds::R2Add);
    int checked = 0;
    for (const MoveSite& m : sites) {
      if (checked++ > 40) break;  // plenty per diagram
      MoveOutcome out = apply_move_ex(d, m);
      CHECK(out.diagram.crossing_count() == d.crossing_count() + 2);
      CHECK(out.diagram.component_count() == d.component_count());
      CHECK(total_writhe(out.diagram) == total_writhe(d));
      CHECK(offdiag(out.diagram) == offdiag(d));
      LinkDiagram back = apply_move(out.diagram, out.inverse);
      CHECK(canon(back) == canon(d));
    }
  }
}

TEST_CASE("bigon removal restores the diagram it came from") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 12; ++trial) {
    LinkDiagram d = testsupport::random_diagram(rng, {.max_crossings = 6, .min_crossings = 2});
    auto adds = enumerate_moves(d, movekinds::R2Add);
    if (adds.empty()) continue;
    const MoveSite& m = adds[trial % adds.size()];
    MoveOutcome out = apply_move_ex(d, m);
    auto removes = enumerate_moves(out.diagram, movekinds::R2Remove);
    bool found = false;
    for (const MoveSite& r : removes) {
      if (r == out.inverse) found = true;
    }
    CHECK(found);
    CHECK(canon(apply_move(out.diagram, out.inverse)) == canon(d));
  }
}

TEST_CASE("triangle slides preserve everything they should") {
  std::mt19937_64 rng(73);
  int slides = 0;
  for (int trial = 0; trial < 120 && slides < 30; ++trial) {
    LinkDiagram d = testsupport::random_diagram(rng, {.max_crossings = 9, .min_crossings = 3});
    auto sites = enumerate_moves(d, movekinds::R3);
    for (const MoveSite& m : sites) {
      MoveOutcome out = apply_move_ex(d, m);
      CHECK(out.diagram.crossing_count() == d.crossing_count());
      CHECK(out.diagram.component_count() == d.component_count());
      CHECK(total_writhe(out.diagram) == total_writhe(d));
      CHECK(offdiag(out.diagram) == offdiag(d));
      // the inverse site undoes the slide
      LinkDiagram back = apply_move(out.diagram, out.inverse);
      CHECK(canon(back) == canon(d));
      ++slides;
      if (slides >= 30) break;
    }
  }
  CHECK(slides > 0);
}

TEST_CASE("framed kink pairs keep the writhe") {
  LinkDiagram t = testsupport::left_trefoil();
  auto sites = enumerate_moves(t, movekinds::FR1Add);
  REQUIRE_FALSE(sites.empty());
  for (const MoveSite& m : sites) {
    MoveOutcome out = apply_move_ex(t, m);
    CHECK(out.diagram.crossing_count() == t.crossing_count() + 2);
    CHECK(total_writhe(out.diagram) == total_writhe(t));
    CHECK(canon(apply_move(out.diagram, out.inverse)) == canon(t));
  }
}

TEST_CASE("two opposite stacked kinks make one framed removal site") {
  LinkDiagram t = testsupport::left_trefoil();
  MoveSite add;
  add.kind = MoveKind::FR1Add;
  add.arc = 1;
  add.kink = Kink::Right;
  LinkDiagram stacked = apply_move(t, add);
  auto removes = enumerate_moves(stacked, movekinds::FR1Remove);
  REQUIRE(removes.size() == 1);
  CHECK(canon(apply_move(stacked, removes[0])) == canon(t));
}

TEST_CASE("stale sites are rejected") {
  LinkDiagram t = testsupport::left_trefoil();
  LinkDiagram kink = parse_pd("X[1,1,2,2]");
  MoveSite remove = enumerate_moves(kink, movekinds::R1Remove)[0];
  CHECK_THROWS_AS(apply_move(t, remove), Error);
  try {
    apply_move(t, remove);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StaleSite);
  }
}

TEST_CASE("moves never change the linking number of any component pair") {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 15; ++trial) {
    LinkDiagram d = testsupport::random_diagram(rng, {.max_crossings = 7});
    auto sites = enumerate_moves(d, movekinds::All);
    int budget = 60;
    for (const MoveSite& m : sites) {
      if (budget-- <= 0) break;
      LinkDiagram after = apply_move(d, m);
      std::vector<int> map = testsupport::component_map(d, after);
      for (int i = 0; i < d.component_count(); ++i) {
        for (int j = i + 1; j < d.component_count(); ++j) {
          std::int64_t before_lk = linking_number(d, i, j);
          if (map[i] >= 0 && map[j] >= 0) {
            CHECK(linking_number(after, map[i], map[j]) == before_lk);
          } else {
            CHECK(before_lk == 0);  // a component without surviving arcs was split
          }
        }
      }
    }
  }
}

TEST_CASE("realize framing on the unknot") {
  FramedLink zero{LinkDiagram::make({}, 1), {0}};
  LinkDiagram d0 = realize_framing(zero);
  CHECK(d0.crossing_count() == 0);
  CHECK(d0.unknotted_loops() == 1);

  FramedLink two{LinkDiagram::make({}, 1), {2}};
  LinkDiagram d2 = realize_framing(two);
  CHECK(d2.crossing_count() == 2);
  CHECK(d2.component_count() == 1);
  CHECK(total_writhe(d2) == 2);
  for (int k = 0; k < 2; ++k) CHECK(d2.sign(k) == 1);
}

TEST_CASE("realize framing adjusts the trefoil by one kink") {
  LinkDiagram t = testsupport::left_trefoil();
  std::int64_t w = total_writhe(t);
  FramedLink fl{t, {w - 1}};
  LinkDiagram d = realize_framing(fl);
  CHECK(d.crossing_count() == 4);
  CHECK(d.component_count() == 1);
  CHECK(total_writhe(d) == w - 1);
}

TEST_CASE("realize framing hits every requested framing") {
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 20; ++trial) {
    LinkDiagram d = testsupport::random_diagram(rng, {.max_crossings = 6});
    FramedLink fl{d, {}};
    std::uniform_int_distribution<int> f(-4, 4);
    for (int c = 0; c < d.component_count(); ++c) fl.framings.push_back(f(rng));
    LinkDiagram r = realize_framing(fl);
    CHECK(r.component_count() == d.component_count());
    std::vector<std::int64_t> got, want = fl.framings;
    for (int c = 0; c < r.component_count(); ++c) got.push_back(writhe(r, c));
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    CHECK(got == want);
  }
}

TEST_CASE("a diagram is trivially framed-equivalent to itself") {
  LinkDiagram t = testsupport::left_trefoil();
  EquivResult r = framed_equivalent(t, t);
  CHECK(r.equivalent);
  CHECK(r.path.empty());
}

TEST_CASE("one framed kink pair is found within depth two") {
  LinkDiagram t = testsupport::left_trefoil();
  MoveSite add;
  add.kind = MoveKind::FR1Add;
  add.arc = 2;
  add.kink = Kink::Left;
  LinkDiagram t2 = apply_move(t, add);
  SearchBudget budget;
  budget.max_depth = 2;
  EquivResult r = framed_equivalent(t, t2, budget);
  CHECK(r.equivalent);
  CHECK(r.path.size() <= 2);
  CHECK(r.path.size() >= 1);
}

TEST_CASE("different writhes obstruct immediately") {
  LinkDiagram t = testsupport::left_trefoil();
  MoveSite kink;
  kink.kind = MoveKind::R1Add;
  kink.arc = 1;
  kink.kink = Kink::Right;
  LinkDiagram t2 = apply_move(t, kink);
  EquivResult r = framed_equivalent(t, t2);
  CHECK_FALSE(r.equivalent);
  CHECK(r.reason == "writhe obstruction");
  CHECK(r.stats.expanded == 0);
}

TEST_CASE("the search never equates diagrams with different linking matrices") {
  LinkDiagram hopf = parse_pd("X[1,3,2,4] X[3,1,4,2]");
  LinkDiagram unlink = LinkDiagram::make({}, 2);
  SearchBudget small;
  small.max_depth = 4;
  EquivResult r = framed_equivalent(hopf, unlink, small);
  CHECK_FALSE(r.equivalent);
}

TEST_CASE("search results are thread-count independent") {
  LinkDiagram t = testsupport::left_trefoil();
  MoveSite add;
  add.kind = MoveKind::FR1Add;
  add.arc = 1;
  add.kink = Kink::Right;
  LinkDiagram t2 = apply_move(t, add);
  SearchBudget budget;
  budget.max_depth = 2;
  EquivResult a = framed_equivalent(t, t2, budget, 1);
  EquivResult b = framed_equivalent(t, t2, budget, 4);
  CHECK(a.equivalent == b.equivalent);
  REQUIRE(a.path.size() == b.path.size());
  for (size_t i = 0; i < a.path.size(); ++i) {
    CHECK(a.path[i].pd_before == b.path[i].pd_before);
    CHECK(a.path[i].move == b.path[i].move);
  }
}

TEST_CASE("reported paths replay from one end to the other") {
  LinkDiagram t = testsupport::left_trefoil();
  MoveSite add;
  add.kind = MoveKind::FR1Add;
  add.arc = 1;
  add.kink = Kink::Right;
  LinkDiagram t2 = apply_move(t, add);
  SearchBudget budget;
  budget.max_depth = 2;
  EquivResult r = framed_equivalent(t, t2, budget);
  REQUIRE(r.equivalent);
  // replay: each step names, verbatim, the diagram it applies to
  LinkDiagram cur = t;
  for (const PathStep& step : r.path) {
    CHECK(to_pd_text(cur) == step.pd_before);
    cur = apply_move(cur, step.move);
  }
  CHECK(canon(cur) == canon(t2));
}
