#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "framelink/errors.hpp"

namespace framelink {

using ArcId = int;
using ComponentId = int;

// One crossing of an oriented diagram, stored as the four arc labels around
// it, counterclockwise, starting at the incoming under-strand:
//   slot 0: incoming under-strand
//   slot 2: outgoing under-strand
//   slots 1,3: the over-strand; which of them is incoming depends on the
//              orientation of the over-strand and is kept per diagram.
struct Crossing {
  std::array<ArcId, 4> arc{0, 0, 0, 0};

  friend bool operator==(const Crossing&, const Crossing&) = default;
};

struct ValidationReport {
  bool ok = true;
  ErrorCode code = ErrorCode::EmptyCrossing;
  std::string message;
  int crossing = -1;  // index of the first offending crossing, if any
};

// Where an arc starts (tail) and ends (head). Slots are 0..3.
struct ArcEnds {
  int head_crossing = -1;
  int head_slot = -1;
  int tail_crossing = -1;
  int tail_slot = -1;
};

// Oriented link diagram: a list of crossings plus a count of crossing-free
// unknotted components (those cannot be expressed as crossing quadruples).
// Immutable after construction; all structural queries are precomputed.
//
// Components are numbered canonically: components that own crossings come
// first, ordered by their smallest arc label, then the unknotted loops.
class LinkDiagram {
public:
  LinkDiagram() = default;  // the empty link

  // Builds a diagram, deriving strand orientations from the quadruples.
  // A component that never passes under anything has no orientation
  // recorded in its quadruples; such components get a fixed deterministic
  // orientation. Throws Error on invalid input.
  static LinkDiagram make(std::vector<Crossing> crossings, int unknotted_loops = 0);

  // Builds a diagram with the over-strand orientation given explicitly:
  // over_in[k] is 1 or 3, the slot of crossing k holding the incoming
  // over-strand. Used by operations that must preserve orientation exactly.
  static LinkDiagram make_oriented(std::vector<Crossing> crossings,
                                   std::vector<std::uint8_t> over_in,
                                   int unknotted_loops = 0);

  const std::vector<Crossing>& crossings() const { return crossings_; }
  int crossing_count() const { return static_cast<int>(crossings_.size()); }
  int unknotted_loops() const { return loops_; }
  bool empty() const { return crossings_.empty() && loops_ == 0; }

  int component_count() const { return static_cast<int>(cycles_.size()) + loops_; }
  int traced_component_count() const { return static_cast<int>(cycles_.size()); }
  // Arc cycles of the crossed components, canonical order, each rotated so
  // its smallest arc comes first. Unknotted loops carry no arcs.
  const std::vector<std::vector<ArcId>>& arc_cycles() const { return cycles_; }
  bool is_unknotted_loop(ComponentId c) const;

  std::uint8_t over_in_pos(int k) const;
  int sign(int k) const;  // +1 or -1, right-hand rule

  ArcId under_in(int k) const { return crossings_.at(k).arc[0]; }
  ArcId under_out(int k) const { return crossings_.at(k).arc[2]; }
  ArcId over_in(int k) const { return crossings_.at(k).arc[over_in_pos(k)]; }
  ArcId over_out(int k) const { return crossings_.at(k).arc[over_in_pos(k) ^ 2]; }

  ComponentId component_of_arc(ArcId a) const;
  ComponentId under_component(int k) const { return component_of_arc(under_in(k)); }
  ComponentId over_component(int k) const { return component_of_arc(over_in(k)); }

  const ArcEnds& arc_ends(ArcId a) const;
  bool has_arc(ArcId a) const { return ends_.count(a) != 0; }
  std::vector<ArcId> arcs() const;  // all arc labels, ascending
  ArcId max_arc_label() const;

  // Structural equality: same quadruples, orientations and loop count.
  friend bool operator==(const LinkDiagram& a, const LinkDiagram& b) {
    return a.crossings_ == b.crossings_ && a.over_in_ == b.over_in_ && a.loops_ == b.loops_;
  }

private:
  std::vector<Crossing> crossings_;
  std::vector<std::uint8_t> over_in_;
  int loops_ = 0;

  std::vector<std::vector<ArcId>> cycles_;
  std::unordered_map<ArcId, ComponentId> comp_of_arc_;
  std::unordered_map<ArcId, ArcEnds> ends_;

  void analyze();  // fills cycles_/comp_of_arc_/ends_, throws on inconsistency
};

// Checks the structural invariants without building a diagram. Returns the
// first violation instead of throwing.
ValidationReport validate(const std::vector<Crossing>& crossings, int unknotted_loops = 0);
ValidationReport validate(const LinkDiagram& d);

// Oriented arc cycles in canonical component order; unknotted loops appear
// as trailing empty cycles so indices agree with ComponentId.
std::vector<std::vector<ArcId>> trace_components(const LinkDiagram& d);

// Joins component c1 of d and component c2 of d2 by splicing arcs a1 and a2,
// respecting orientation. The two diagrams are placed side by side; no new
// crossings are introduced. Pass a1/a2 = 0 when the component is a
// crossing-free loop (summing with an unknot is the identity).
LinkDiagram connected_sum(const LinkDiagram& d, ComponentId c1, ArcId a1,
                          const LinkDiagram& d2, ComponentId c2, ArcId a2);

// Reverses the orientation of one component. Signs of crossings between c
// and other components flip; self-crossings of c and crossings not
// involving c keep their signs.
LinkDiagram reverse_component(const LinkDiagram& d, ComponentId c);

// Exchanges over- and under-strand at crossing k (a crossing change).
LinkDiagram toggle_crossing(const LinkDiagram& d, int k);

}  // namespace framelink
