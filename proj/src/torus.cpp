#include "framelink/torus.hpp"

#include <cstdlib>
#include <numeric>

namespace framelink {

bool is_embeddable(TorusClass t) {
  if (t.a == 0 && t.b == 0) return true;
  return std::gcd(std::abs(t.a), std::abs(t.b)) == 1;
}

TorusClass normalize(TorusClass t) {
  if (t.a < 0 || (t.a == 0 && t.b < 0)) return {-t.a, -t.b};
  return t;
}

PeripheralClass framing_to_longitude(std::int64_t n) { return {n, 1}; }

std::int64_t longitude_to_framing(PeripheralClass p) {
  if (p.longitude_coeff != 1) {
    throw Error(ErrorCode::NotALongitude,
                "not a longitude class: longitude coefficient must be 1");
  }
  return p.meridian_coeff;
}

TorusClass to_torus_class(PeripheralClass p) {
  if (p.longitude_coeff != 1) {
    throw Error(ErrorCode::NotALongitude,
                "not a longitude class: longitude coefficient must be 1");
  }
  return {1, p.meridian_coeff};
}

PeripheralClass to_peripheral(TorusClass t) {
  if (t.a != 1) {
    throw Error(ErrorCode::NotALongitude, "only (1,m) classes are longitude curves");
  }
  return {t.b, 1};
}

}  // namespace framelink
