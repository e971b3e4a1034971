#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "framelink/diagram.hpp"

namespace framelink {

// Symmetric integer matrix: entry (i,j) = lk(component i, component j) for
// i != j, diagonal = framing integers.
using LinkingMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

// A diagram plus one framing integer per component, canonical order.
struct FramedLink {
  LinkDiagram diagram;
  std::vector<std::int64_t> framings;

  friend bool operator==(const FramedLink&, const FramedLink&) = default;
};

// Sign of crossing k by the right-hand rule: +1 when the under-strand
// direction is the over-strand direction turned a counterclockwise quarter
// in the projection plane.
int crossing_sign(const LinkDiagram& d, int k);

// Sum of signs of the self-crossings of component c.
std::int64_t writhe(const LinkDiagram& d, ComponentId c);
// Sum of signs of all crossings.
std::int64_t total_writhe(const LinkDiagram& d);

// Half the signed count of crossings between two distinct components.
std::int64_t linking_number(const LinkDiagram& d, ComponentId c1, ComponentId c2);

LinkingMatrix linking_matrix(const FramedLink& fl);

// Framing each component by its own writhe.
FramedLink blackboard_framing(const LinkDiagram& d);

struct PushoffResult {
  LinkDiagram diagram;
  ComponentId original = -1;
  ComponentId copy = -1;
};

// Doubles component c in the blackboard direction: the copy runs parallel
// on the left of c. Every self-crossing of c becomes four crossings of the
// same sign, every crossing of c with another component becomes two, and
// lk(c, copy) equals the writhe of c.
PushoffResult pushoff(const LinkDiagram& d, ComponentId c);

}  // namespace framelink
