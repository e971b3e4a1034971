#pragma once

// Shared helpers for the test suites: braid closures as a source of honest
// planar diagrams, and seeded random diagram generation built on them.

#include <random>
#include <vector>

#include "framelink/codecs.hpp"
#include "framelink/diagram.hpp"
#include "framelink/invariants.hpp"

namespace testsupport {

using framelink::ArcId;
using framelink::Crossing;
using framelink::LinkDiagram;

// Closure of a braid word on n strands. Letter +i crosses strand i over
// strand i+1, letter -i crosses it under; strands untouched by any letter
// close into unknotted loops.
inline LinkDiagram braid_closure(int strands, const std::vector<int>& word) {
  std::vector<ArcId> initial(strands + 1), current(strands + 1);
  for (int i = 1; i <= strands; ++i) initial[i] = current[i] = i;
  ArcId next = strands;

  std::vector<Crossing> crossings;
  std::vector<std::uint8_t> over_in;
  for (int letter : word) {
    int i = std::abs(letter);
    if (i < 1 || i >= strands) throw std::invalid_argument("bad braid letter");
    ArcId a = current[i], b = current[i + 1];
    ArcId c = ++next, d = ++next;
    Crossing x;
    if (letter > 0) {
      // left strand passes over: under-strand runs b -> d, over a -> c
      x.arc[0] = b;
      x.arc[2] = d;
      x.arc[1] = a;
      x.arc[3] = c;
      over_in.push_back(1);
    } else {
      // left strand passes under: a -> c, over-strand b -> d
      x.arc[0] = a;
      x.arc[2] = c;
      x.arc[1] = d;
      x.arc[3] = b;
      over_in.push_back(3);
    }
    crossings.push_back(x);
    current[i] = d;
    current[i + 1] = c;
  }

  // close up: identify the bottom arc of each strand with its top arc
  int loops = 0;
  std::vector<std::pair<ArcId, ArcId>> subs;
  for (int i = 1; i <= strands; ++i) {
    if (current[i] == initial[i]) {
      ++loops;
    } else {
      subs.push_back({current[i], initial[i]});
    }
  }
  for (auto [from, to] : subs) {
    for (Crossing& x : crossings) {
      for (int s = 0; s < 4; ++s) {
        if (x.arc[s] == from) x.arc[s] = to;
      }
    }
  }
  return LinkDiagram::make_oriented(std::move(crossings), std::move(over_in), loops);
}

inline LinkDiagram left_trefoil() { return braid_closure(2, {1, 1, 1}); }
inline LinkDiagram right_trefoil() { return braid_closure(2, {-1, -1, -1}); }
inline LinkDiagram figure_eight() { return braid_closure(3, {1, -2, 1, -2}); }

struct RandomDiagramOptions {
  int max_crossings = 10;
  int max_components = 3;
  int min_crossings = 0;
  bool allow_loops = true;
};

// Random closed braids with random crossing toggles: every sample is a
// valid oriented diagram.
inline LinkDiagram random_diagram(std::mt19937_64& rng, const RandomDiagramOptions& opts = {}) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::uniform_int_distribution<int> strand_dist(2, 4);
    const int strands = strand_dist(rng);
    std::uniform_int_distribution<int> len_dist(opts.min_crossings, opts.max_crossings);
    const int len = len_dist(rng);
    std::vector<int> word;
    std::uniform_int_distribution<int> letter_dist(1, strands - 1);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int i = 0; i < len; ++i) {
      int l = letter_dist(rng);
      word.push_back(coin(rng) ? l : -l);
    }
    LinkDiagram d = braid_closure(strands, word);
    if (!opts.allow_loops && d.unknotted_loops() > 0) continue;
    if (d.component_count() > opts.max_components || d.component_count() == 0) continue;
    if (d.crossing_count() < opts.min_crossings) continue;
    // random crossing changes keep the shadow but vary the over/under data
    int toggles = std::uniform_int_distribution<int>(0, d.crossing_count())(rng) / 3;
    for (int t = 0; t < toggles; ++t) {
      int k = std::uniform_int_distribution<int>(0, d.crossing_count() - 1)(rng);
      d = toggle_crossing(d, k);
    }
    return d;
  }
  throw std::runtime_error("random diagram generation failed");
}

inline LinkDiagram random_knot(std::mt19937_64& rng, int max_crossings, int min_crossings = 0) {
  for (int attempt = 0; attempt < 2000; ++attempt) {
    RandomDiagramOptions opts;
    opts.max_crossings = max_crossings;
    opts.min_crossings = min_crossings;
    opts.max_components = 1;
    opts.allow_loops = false;
    LinkDiagram d = random_diagram(rng, opts);
    if (d.component_count() == 1 && d.unknotted_loops() == 0) return d;
  }
  throw std::runtime_error("random knot generation failed");
}

inline std::string canon(const LinkDiagram& d) { return framelink::serialize_pd(d); }

// Where each component of `before` ends up in `after`, found through a
// surviving arc. Components whose arcs all vanished (strands that closed
// into crossing-free loops, or loops that never had arcs) map to -1; such
// components carry no crossings on at least one side, so their writhe and
// linking rows are zero there.
inline std::vector<int> component_map(const LinkDiagram& before, const LinkDiagram& after) {
  std::vector<int> map(before.component_count(), -1);
  for (int c = 0; c < before.traced_component_count(); ++c) {
    for (ArcId a : before.arc_cycles()[c]) {
      if (after.has_arc(a)) {
        map[c] = after.component_of_arc(a);
        break;
      }
    }
  }
  return map;
}

}  // namespace testsupport
