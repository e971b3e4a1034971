#pragma once

#include <cstdint>

#include "framelink/errors.hpp"

namespace framelink {

// Homology/homotopy class of a closed curve on the torus in the
// (longitude, meridian) basis: the longitude maps to (1,0) and the meridian
// to (0,1).
struct TorusClass {
  std::int64_t a = 0;  // longitude coefficient
  std::int64_t b = 0;  // meridian coefficient
  friend bool operator==(const TorusClass&, const TorusClass&) = default;
};

// Class of a curve on the boundary torus of a knot neighborhood, written in
// the (meridian, preferred longitude) basis: m*[eta] + l*[gamma].
struct PeripheralClass {
  std::int64_t meridian_coeff = 0;
  std::int64_t longitude_coeff = 0;
  friend bool operator==(const PeripheralClass&, const PeripheralClass&) = default;
};

// Whether the class is represented by an embedded simple closed curve:
// true iff gcd(|a|,|b|) = 1 (with gcd(x,0) = |x|) or a = b = 0.
bool is_embeddable(TorusClass t);

// Canonical representative under (a,b) ~ (-a,-b): a > 0, or a = 0, b >= 0.
TorusClass normalize(TorusClass t);

// The longitude curve of an n-framed knot: n*[eta] + [gamma].
PeripheralClass framing_to_longitude(std::int64_t n);

// Inverse of framing_to_longitude; requires longitude_coeff == 1.
std::int64_t longitude_to_framing(PeripheralClass p);

// Bridge between the two bases: a longitude curve m*[eta] + [gamma] winds
// once along the longitude and m times along the meridian, so it is the
// torus class (1, m). Requires longitude_coeff == 1.
TorusClass to_torus_class(PeripheralClass p);
PeripheralClass to_peripheral(TorusClass t);

}  // namespace framelink
