#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "framelink/diagram.hpp"

namespace framelink {

using Vec3 = Eigen::Vector3d;

// Closed polygonal curve in 3-space, optionally carrying a unit normal
// vector per vertex (a sampled framing, nowhere tangent to the curve).
struct SpaceCurve {
  std::vector<Vec3> vertices;
  std::optional<std::vector<Vec3>> normals;
};

// Throws on degenerate input: fewer than 3 vertices, repeated consecutive
// vertices, or a normal field tangent to the curve.
void validate_curve(const SpaceCurve& c);

struct ProjectionOptions {
  // Projection direction; when unset, starts from (0,0,1).
  std::optional<Vec3> direction;
  std::uint64_t seed = 0;  // drives the deterministic retry rotations
  int max_attempts = 64;
};

// Projects the curves along the direction to an oriented diagram. Crossings
// are the transverse double points of the projection; the strand with the
// larger coordinate along the direction passes over. Near-tangencies and
// near-triple points trigger deterministic retry rotations.
LinkDiagram project_to_diagram(const std::vector<SpaceCurve>& curves,
                               const ProjectionOptions& opts = {});

// Gauss linking number of two disjoint closed polygonal curves, evaluated
// exactly per segment pair as signed solid angles. The double sum is an
// integer up to roundoff; a residual above 0.1 is an error.
std::int64_t gauss_linking(const SpaceCurve& c1, const SpaceCurve& c2, int threads = 1);

// Two framings sampled on the same closed curve.
struct FramePair {
  std::vector<Vec3> vertices;
  std::vector<Vec3> reference;  // V
  std::vector<Vec3> candidate;  // W
};

// Number of full turns the candidate field makes relative to the reference,
// unwound while proceeding backwards along the knot with angles measured
// about the direction of travel. Requires per-step angle changes below pi.
std::int64_t relative_twist(const FramePair& fp);

// Displaces the curve by offset along its normal field. Fails when the
// pushoff comes within tolerance of the original curve.
SpaceCurve pushoff_curve(const SpaceCurve& c, double offset);

// CSV curve files: one vertex per line "x,y,z[,nx,ny,nz]", blank line
// between curves, '#' comments.
std::vector<SpaceCurve> read_curves_csv(std::istream& in);
void write_curves_csv(std::ostream& out, const std::vector<SpaceCurve>& curves);

}  // namespace framelink
