#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "framelink/diagram.hpp"
#include "framelink/invariants.hpp"

namespace framelink {

// Surgery coefficient p/q in lowest terms with q >= 0. The infinity symbol
// (trivial meridian-to-meridian filling) is stored as 1/0.
struct SurgeryCoefficient {
  std::int64_t p = 1;
  std::int64_t q = 0;

  bool is_infinity() const { return q == 0; }
  bool is_integral() const { return q == 1; }
  static SurgeryCoefficient infinity() { return {1, 0}; }
  static SurgeryCoefficient integer(std::int64_t n) { return {n, 1}; }

  friend bool operator==(const SurgeryCoefficient&, const SurgeryCoefficient&) = default;
};

// Reduces (p,q) to lowest terms with q >= 0 and the sign carried by p;
// (p,0) collapses to the infinity symbol. (0,0) is rejected.
SurgeryCoefficient normalize_coefficient(std::int64_t p, std::int64_t q);

// Accepts "p/q", "p" or "inf".
SurgeryCoefficient parse_coefficient(std::string_view text);
std::string coefficient_to_text(const SurgeryCoefficient& c);

struct SurgeryDescription {
  LinkDiagram diagram;
  std::vector<SurgeryCoefficient> coefficients;  // canonical component order
};

// Integer surgery description of a framed link: coefficient of component i
// is framings[i]/1.
SurgeryDescription from_framed_link(const FramedLink& fl);

struct RecognizedManifold {
  enum class Tag { S3, S2xS1, Lens, Unknown };
  Tag tag = Tag::Unknown;
  std::int64_t p = 0, q = 0;  // set for Lens
  std::string evidence;

  std::string name() const;
};

// Recognition on a single crossing-free unknot component: 0 gives S2 x S1,
// |p| = 1 or infinity gives S3, |p| > 1 gives the lens space
// L(|p|, q mod |p|). Anything else is declined as Unknown, never guessed.
RecognizedManifold recognize_unknot_surgery(const SurgeryDescription& s);

struct HomologyGroup {
  std::int64_t rank = 0;
  std::vector<std::int64_t> torsion;  // d1 | d2 | ..., each > 1

  friend bool operator==(const HomologyGroup&, const HomologyGroup&) = default;
};

// Diagonal of the Smith normal form (nonnegative, divisibility chain first,
// zeros last), as a column vector the size of min(rows, cols).
std::vector<std::int64_t> smith_normal_form(LinkingMatrix m);

// First homology of the surgered manifold, presented by the linking matrix
// with the surgery integers on the diagonal. Requires integral coefficients.
HomologyGroup first_homology(const SurgeryDescription& s);

}  // namespace framelink
