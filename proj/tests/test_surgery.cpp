#include "doctest.h"

#include <Eigen/Dense>
#include <random>

#include "framelink/codecs.hpp"
#include "framelink/moves.hpp"
#include "framelink/surgery.hpp"
#include "test_support.hpp"

using namespace framelink;

namespace {

SurgeryDescription unknot_with(SurgeryCoefficient c) {
  SurgeryDescription s;
  s.diagram = LinkDiagram::make({}, 1);
  s.coefficients = {c};
  return s;
}

}  // namespace

TEST_CASE("coefficient normalization") {
  CHECK(normalize_coefficient(-3, -1) == SurgeryCoefficient{3, 1});
  CHECK(normalize_coefficient(4, 2) == SurgeryCoefficient{2, 1});
  CHECK(normalize_coefficient(0, -5) == SurgeryCoefficient{0, 1});
  CHECK(normalize_coefficient(7, 0) == SurgeryCoefficient::infinity());
  CHECK(normalize_coefficient(-7, 0) == SurgeryCoefficient::infinity());
  CHECK_THROWS_AS(normalize_coefficient(0, 0), Error);
  // idempotent
  for (std::int64_t p = -12; p <= 12; ++p) {
    for (std::int64_t q = -12; q <= 12; ++q) {
      if (p == 0 && q == 0) continue;
      SurgeryCoefficient once = normalize_coefficient(p, q);
      CHECK(normalize_coefficient(once.p, once.q) == once);
      CHECK(once.q >= 0);
      if (once.q > 0) CHECK(std::gcd(std::abs(once.p), once.q) == 1);
    }
  }
}

TEST_CASE("coefficient text round trips") {
  CHECK(parse_coefficient("5/2") == SurgeryCoefficient{5, 2});
  CHECK(parse_coefficient("-5/2") == SurgeryCoefficient{-5, 2});
  CHECK(parse_coefficient("5/-2") == SurgeryCoefficient{-5, 2});
  CHECK(parse_coefficient("7") == SurgeryCoefficient{7, 1});
  CHECK(parse_coefficient("inf") == SurgeryCoefficient::infinity());
  CHECK(coefficient_to_text({5, 2}) == "5/2");
  CHECK(coefficient_to_text({7, 1}) == "7");
  CHECK(coefficient_to_text(SurgeryCoefficient::infinity()) == "inf");
  CHECK_THROWS_AS(parse_coefficient("a/b"), Error);
}

TEST_CASE("framed links become integer surgery descriptions") {
  FramedLink u0{LinkDiagram::make({}, 1), {0}};
  SurgeryDescription s = from_framed_link(u0);
  CHECK(s.coefficients == std::vector<SurgeryCoefficient>{{0, 1}});

  FramedLink t{testsupport::left_trefoil(), {-1}};
  CHECK(from_framed_link(t).coefficients == std::vector<SurgeryCoefficient>{{-1, 1}});

  FramedLink hopf{parse_pd("X[1,3,2,4] X[3,1,4,2]"), {2, 3}};
  CHECK(from_framed_link(hopf).coefficients ==
        std::vector<SurgeryCoefficient>{{2, 1}, {3, 1}});
}

TEST_CASE("unknot surgery recognition") {
  CHECK(recognize_unknot_surgery(unknot_with({0, 1})).tag == RecognizedManifold::Tag::S2xS1);
  CHECK(recognize_unknot_surgery(unknot_with({1, 1})).tag == RecognizedManifold::Tag::S3);
  CHECK(recognize_unknot_surgery(unknot_with({-1, 1})).tag == RecognizedManifold::Tag::S3);
  CHECK(recognize_unknot_surgery(unknot_with(SurgeryCoefficient::infinity())).tag ==
        RecognizedManifold::Tag::S3);
  RecognizedManifold lens = recognize_unknot_surgery(unknot_with({5, 2}));
  CHECK(lens.tag == RecognizedManifold::Tag::Lens);
  CHECK(lens.p == 5);
  CHECK(lens.q == 2);
  CHECK(lens.name() == "L(5,2)");
  // 1/q surgery on the unknot stays the sphere
  CHECK(recognize_unknot_surgery(unknot_with({1, 3})).tag == RecognizedManifold::Tag::S3);
}

TEST_CASE("lens output is always normalized") {
  for (std::int64_t p = 2; p <= 9; ++p) {
    for (std::int64_t q = 1; q <= 17; ++q) {
      if (std::gcd(p, q) != 1) continue;
      RecognizedManifold m = recognize_unknot_surgery(unknot_with(normalize_coefficient(p, q)));
      REQUIRE(m.tag == RecognizedManifold::Tag::Lens);
      CHECK(m.p > 1);
      CHECK(m.q > 0);
      CHECK(m.q < m.p);
      CHECK(std::gcd(m.p, m.q) == 1);
    }
  }
}

TEST_CASE("recognition declines what it cannot see") {
  SurgeryDescription knot;
  knot.diagram = testsupport::left_trefoil();
  knot.coefficients = {SurgeryCoefficient::integer(1)};
  CHECK(recognize_unknot_surgery(knot).tag == RecognizedManifold::Tag::Unknown);

  SurgeryDescription link;
  link.diagram = LinkDiagram::make({}, 2);
  link.coefficients = {SurgeryCoefficient::integer(0), SurgeryCoefficient::integer(0)};
  CHECK(recognize_unknot_surgery(link).tag == RecognizedManifold::Tag::Unknown);
}

TEST_CASE("smith normal form of small matrices") {
  LinkingMatrix z = LinkingMatrix::Zero(1, 1);
  CHECK(smith_normal_form(z) == std::vector<std::int64_t>{0});

  LinkingMatrix p(1, 1);
  p << 5;
  CHECK(smith_normal_form(p) == std::vector<std::int64_t>{5});

  LinkingMatrix hopf0(2, 2);
  hopf0 << 0, 1, 1, 0;
  CHECK(smith_normal_form(hopf0) == std::vector<std::int64_t>{1, 1});

  LinkingMatrix m(3, 3);
  m << 2, 4, 4, -6, 6, 12, 10, 4, 16;
  CHECK(smith_normal_form(m) == std::vector<std::int64_t>{2, 2, 156});

  LinkingMatrix diag(2, 2);
  diag << 2, 0, 0, 4;
  CHECK(smith_normal_form(diag) == std::vector<std::int64_t>{2, 4});
}

TEST_CASE("smith normal form keeps the divisibility chain on random matrices") {
  std::mt19937_64 rng(97);
  std::uniform_int_distribution<int> entry(-6, 6);
  std::uniform_int_distribution<int> size(1, 4);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = size(rng);
    LinkingMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m(i, j) = entry(rng);
    }
    std::int64_t det_before = std::llround(m.cast<double>().determinant());
    std::vector<std::int64_t> d = smith_normal_form(m);
    for (size_t i = 0; i + 1 < d.size(); ++i) {
      if (d[i] != 0) {
        CHECK(d[i + 1] % d[i] == 0);
      } else {
        CHECK(d[i + 1] == 0);
      }
    }
    // |det| is preserved by unimodular moves
    std::int64_t det_after = 1;
    for (std::int64_t v : d) det_after *= v;
    CHECK(std::abs(det_before) == std::abs(det_after));
  }
}

TEST_CASE("first homology of framed unknots") {
  HomologyGroup h0 = first_homology(unknot_with({0, 1}));
  CHECK(h0.rank == 1);
  CHECK(h0.torsion.empty());

  HomologyGroup h1 = first_homology(unknot_with({1, 1}));
  CHECK(h1.rank == 0);
  CHECK(h1.torsion.empty());
  CHECK(first_homology(unknot_with({-1, 1})) == h1);

  for (std::int64_t p = 2; p <= 7; ++p) {
    HomologyGroup hp = first_homology(unknot_with({p, 1}));
    CHECK(hp.rank == 0);
    CHECK(hp.torsion == std::vector<std::int64_t>{p});
    CHECK(first_homology(unknot_with({-p, 1})).torsion == std::vector<std::int64_t>{p});
  }
}

TEST_CASE("first homology rejects rational coefficients") {
  CHECK_THROWS_AS(first_homology(unknot_with({5, 2})), Error);
  CHECK_THROWS_AS(first_homology(unknot_with(SurgeryCoefficient::infinity())), Error);
  try {
    first_homology(unknot_with({5, 2}));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonIntegerCoefficients);
  }
}

TEST_CASE("homology is invariant under framed moves with blackboard transport") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 10; ++trial) {
    LinkDiagram d = testsupport::random_diagram(rng, {.max_crossings = 6});
    SurgeryDescription s = from_framed_link(blackboard_framing(d));
    HomologyGroup before = first_homology(s);
    auto sites = enumerate_moves(d, movekinds::Framed);
    int budget = 25;
    for (const MoveSite& m : sites) {
      if (budget-- <= 0) break;
      LinkDiagram after = apply_move(d, m);
      SurgeryDescription s2 = from_framed_link(blackboard_framing(after));
      CHECK(first_homology(s2) == before);
    }
  }
}
