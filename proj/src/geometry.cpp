#include "framelink/geometry.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

namespace framelink {

namespace {

constexpr double kPi = std::numbers::pi;

Vec3 vertex_at(const SpaceCurve& c, size_t i) { return c.vertices[i % c.vertices.size()]; }

// Shortest distance between two segments.
double segment_distance(const Vec3& p1, const Vec3& p2, const Vec3& q1, const Vec3& q2) {
  const Vec3 d1 = p2 - p1, d2 = q2 - q1, r = p1 - q1;
  const double a = d1.dot(d1), e = d2.dot(d2), f = d2.dot(r);
  double s = 0, t = 0;
  if (a <= 1e-30 && e <= 1e-30) return r.norm();
  if (a <= 1e-30) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e <= 1e-30) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2);
      const double denom = a * e - b * b;
      if (denom > 1e-30) s = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
      t = (b * s + f) / e;
      if (t < 0) {
        t = 0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1) {
        t = 1;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return (p1 + s * d1 - (q1 + t * d2)).norm();
}

double min_curve_distance(const SpaceCurve& c1, const SpaceCurve& c2) {
  double best = std::numeric_limits<double>::infinity();
  const size_t n1 = c1.vertices.size(), n2 = c2.vertices.size();
  for (size_t i = 0; i < n1; ++i) {
    for (size_t j = 0; j < n2; ++j) {
      best = std::min(best, segment_distance(vertex_at(c1, i), vertex_at(c1, i + 1),
                                             vertex_at(c2, j), vertex_at(c2, j + 1)));
    }
  }
  return best;
}

// Signed solid angle of a spherical triangle (van Oosterom-Strackee).
double triangle_omega(const Vec3& v1, const Vec3& v2, const Vec3& v3) {
  const double num = v1.dot(v2.cross(v3));
  const double den = 1.0 + v1.dot(v2) + v2.dot(v3) + v3.dot(v1);
  return 2.0 * std::atan2(num, den);
}

// Signed spherical area swept by the unit vector from segment A to segment
// B; subdivides until each quad is small so the triangle formula cannot
// wrap. Exact up to roundoff because subdividing straight segments splits
// the underlying integral.
double pair_omega(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1, int depth) {
  const Vec3 u1 = (b0 - a0).normalized();
  const Vec3 u2 = (b0 - a1).normalized();
  const Vec3 u3 = (b1 - a1).normalized();
  const Vec3 u4 = (b1 - a0).normalized();
  const double spread = std::max({(u1 - u2).squaredNorm(), (u2 - u3).squaredNorm(),
                                  (u3 - u4).squaredNorm(), (u4 - u1).squaredNorm(),
                                  (u1 - u3).squaredNorm(), (u2 - u4).squaredNorm()});
  if (spread > 1.0 && depth < 48) {  // chord^2 of 1.0 ~= 60 degrees
    const Vec3 am = 0.5 * (a0 + a1), bm = 0.5 * (b0 + b1);
    return pair_omega(a0, am, b0, bm, depth + 1) + pair_omega(a0, am, bm, b1, depth + 1) +
           pair_omega(am, a1, b0, bm, depth + 1) + pair_omega(am, a1, bm, b1, depth + 1);
  }
  return triangle_omega(u1, u2, u3) + triangle_omega(u1, u3, u4);
}

}  // namespace

void validate_curve(const SpaceCurve& c) {
  const size_t n = c.vertices.size();
  if (n < 3) {
    throw Error(ErrorCode::InvalidFormat, "a closed curve needs at least 3 vertices");
  }
  for (size_t i = 0; i < n; ++i) {
    if ((vertex_at(c, i + 1) - vertex_at(c, i)).norm() < 1e-12) {
      throw Error(ErrorCode::InvalidFormat, "consecutive vertices coincide");
    }
  }
  if (c.normals) {
    if (c.normals->size() != n) {
      throw Error(ErrorCode::InvalidFormat, "normal count does not match vertex count");
    }
    for (size_t i = 0; i < n; ++i) {
      const Vec3 tangent = (vertex_at(c, i + 1) - c.vertices[(i + n - 1) % n]).normalized();
      const Vec3& v = (*c.normals)[i];
      if ((v - v.dot(tangent) * tangent).norm() < 1e-9) {
        throw Error(ErrorCode::TangentField, "normal field is tangent to the curve");
      }
    }
  }
}

std::int64_t gauss_linking(const SpaceCurve& c1, const SpaceCurve& c2, int threads) {
  validate_curve(c1);
  validate_curve(c2);
  if (min_curve_distance(c1, c2) < 1e-9) {
    throw Error(ErrorCode::CurvesTooClose, "curves closer than tolerance");
  }
  const size_t n1 = c1.vertices.size(), n2 = c2.vertices.size();

  auto row_sum = [&](size_t i) {
    double s = 0;
    for (size_t j = 0; j < n2; ++j) {
      s += pair_omega(vertex_at(c1, i), vertex_at(c1, i + 1), vertex_at(c2, j),
                      vertex_at(c2, j + 1), 0);
    }
    return s;
  };

  std::vector<double> rows(n1, 0.0);
  if (threads <= 1) {
    for (size_t i = 0; i < n1; ++i) rows[i] = row_sum(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        while (true) {
          size_t i = next.fetch_add(1);
          if (i >= n1) return;
          rows[i] = row_sum(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  double total = 0;  // fixed-order reduction keeps the result bit-stable
  for (double r : rows) total += r;

  const double lk = total / (4.0 * kPi);
  const double rounded = std::round(lk);
  if (std::abs(lk - rounded) > 0.1) {
    throw Error(ErrorCode::NonIntegerResult,
                "linking integral " + std::to_string(lk) + " is not close to an integer");
  }
  return static_cast<std::int64_t>(rounded);
}

// ---- projection ---------------------------------------------------------

namespace {

struct Passage {
  int curve;
  size_t segment;
  double t;      // parameter along the segment
  int crossing;  // crossing id
  bool over;
};

}  // namespace

LinkDiagram project_to_diagram(const std::vector<SpaceCurve>& curves,
                               const ProjectionOptions& opts) {
  for (const SpaceCurve& c : curves) validate_curve(c);
  double scale = 1e-12;
  for (const SpaceCurve& c : curves) {
    for (const Vec3& v : c.vertices) scale = std::max(scale, v.norm());
  }
  const double tol = 1e-9 * scale;

  std::mt19937_64 rng(opts.seed);
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  const Vec3 requested = opts.direction.value_or(Vec3(0, 0, 1)).normalized();
  // frame: rows e1, e2, dir with det +1 so the viewing plane keeps the
  // standard orientation seen from the tip of dir
  Eigen::Matrix3d frame;
  {
    Vec3 helper = std::abs(requested.z()) < 0.9 ? Vec3(0, 0, 1) : Vec3(1, 0, 0);
    Vec3 e1 = helper.cross(requested).normalized();
    Vec3 e2 = requested.cross(e1);
    frame.row(0) = e1;
    frame.row(1) = e2;
    frame.row(2) = requested;
  }

  for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
    if (attempt > 0) {
      // deterministic small rotation, growing with the attempt
      std::uniform_real_distribution<double> unit(-1.0, 1.0);
      Vec3 axis(unit(rng), unit(rng), unit(rng));
      if (axis.norm() < 1e-3) axis = Vec3(1, 0, 0);
      const double angle = 1e-3 * attempt;
      rotation = Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix() * rotation;
    }

    // project
    std::vector<std::vector<Eigen::Vector2d>> flat(curves.size());
    std::vector<std::vector<double>> depth(curves.size());
    for (size_t c = 0; c < curves.size(); ++c) {
      for (const Vec3& v : curves[c].vertices) {
        Vec3 w = frame * (rotation * v);
        flat[c].push_back({w.x(), w.y()});
        depth[c].push_back(w.z());
      }
    }

    bool degenerate = false;
    std::vector<std::vector<Passage>> passages(curves.size());
    int crossing_id = 0;
    std::vector<int> crossing_signs;

    struct RawHit {
      int c1, c2;
      size_t s1, s2;
      double t1, t2;
    };
    std::vector<RawHit> hits;

    auto seg = [&](int c, size_t s, int end) -> const Eigen::Vector2d& {
      return flat[c][(s + end) % flat[c].size()];
    };

    for (size_t c1 = 0; c1 < curves.size() && !degenerate; ++c1) {
      const size_t m1 = flat[c1].size();
      for (size_t c2 = c1; c2 < curves.size() && !degenerate; ++c2) {
        const size_t m2 = flat[c2].size();
        for (size_t i = 0; i < m1 && !degenerate; ++i) {
          for (size_t j = (c1 == c2 ? i + 1 : 0); j < m2 && !degenerate; ++j) {
            if (c1 == c2) {
              // skip adjacent segments of the same curve
              if (j == i + 1 || (i == 0 && j == m1 - 1)) continue;
            }
            const Eigen::Vector2d p = seg(c1, i, 0), pd = seg(c1, i, 1) - p;
            const Eigen::Vector2d q = seg(c2, j, 0), qd = seg(c2, j, 1) - q;
            const double det = pd.x() * qd.y() - pd.y() * qd.x();
            const Eigen::Vector2d r = q - p;
            if (std::abs(det) < 1e-14 * scale * scale) {
              // parallel: degenerate only if they nearly touch
              double dist = segment_distance({p.x(), p.y(), 0}, {p.x() + pd.x(), p.y() + pd.y(), 0},
                                             {q.x(), q.y(), 0}, {q.x() + qd.x(), q.y() + qd.y(), 0});
              if (dist < tol) degenerate = true;
              continue;
            }
            const double t1 = (r.x() * qd.y() - r.y() * qd.x()) / det;
            const double t2 = (r.x() * pd.y() - r.y() * pd.x()) / det;
            if (t1 < -1e-12 || t1 > 1 + 1e-12 || t2 < -1e-12 || t2 > 1 + 1e-12) continue;
            const double margin = 1e-9;
            if (t1 < margin || t1 > 1 - margin || t2 < margin || t2 > 1 - margin) {
              degenerate = true;  // too close to a vertex
              continue;
            }
            hits.push_back({static_cast<int>(c1), static_cast<int>(c2), i, j, t1, t2});
          }
        }
      }
    }
    if (degenerate) continue;

    // near-triple points: two hits too close on the same segment
    for (size_t a = 0; a < hits.size() && !degenerate; ++a) {
      for (size_t b = a + 1; b < hits.size() && !degenerate; ++b) {
        auto close = [&](int ca, size_t sa, double ta, int cb, size_t sb, double tb) {
          return ca == cb && sa == sb && std::abs(ta - tb) < 1e-9;
        };
        if (close(hits[a].c1, hits[a].s1, hits[a].t1, hits[b].c1, hits[b].s1, hits[b].t1) ||
            close(hits[a].c1, hits[a].s1, hits[a].t1, hits[b].c2, hits[b].s2, hits[b].t2) ||
            close(hits[a].c2, hits[a].s2, hits[a].t2, hits[b].c1, hits[b].s1, hits[b].t1) ||
            close(hits[a].c2, hits[a].s2, hits[a].t2, hits[b].c2, hits[b].s2, hits[b].t2)) {
          degenerate = true;
        }
      }
    }
    if (degenerate) continue;

    for (const RawHit& h : hits) {
      auto lerp = [](double a, double b, double t) { return a + (b - a) * t; };
      const size_t m1 = depth[h.c1].size(), m2 = depth[h.c2].size();
      const double z1 = lerp(depth[h.c1][h.s1], depth[h.c1][(h.s1 + 1) % m1], h.t1);
      const double z2 = lerp(depth[h.c2][h.s2], depth[h.c2][(h.s2 + 1) % m2], h.t2);
      if (std::abs(z1 - z2) < tol) {
        degenerate = true;
        break;
      }
      const bool first_over = z1 > z2;
      const Eigen::Vector2d d1 = seg(h.c1, h.s1, 1) - seg(h.c1, h.s1, 0);
      const Eigen::Vector2d d2 = seg(h.c2, h.s2, 1) - seg(h.c2, h.s2, 0);
      const Eigen::Vector2d over_dir = first_over ? d1 : d2;
      const Eigen::Vector2d under_dir = first_over ? d2 : d1;
      const double cross = over_dir.x() * under_dir.y() - over_dir.y() * under_dir.x();
      if (std::abs(cross) < 1e-14 * scale * scale) {
        degenerate = true;
        break;
      }
      const int id = crossing_id++;
      crossing_signs.push_back(cross > 0 ? +1 : -1);
      passages[h.c1].push_back({h.c1, h.s1, h.t1, id, first_over});
      passages[h.c2].push_back({h.c2, h.s2, h.t2, id, !first_over});
    }
    if (degenerate) continue;

    // assemble the diagram: walk each curve, number arcs curve-major; the
    // arc leaving passage i of a curve is first_arc + i
    const size_t n_cross = crossing_signs.size();
    std::vector<Crossing> quads(n_cross);
    std::vector<std::uint8_t> over_in(n_cross, 0);
    std::vector<std::array<ArcId, 2>> under_arcs(n_cross);  // in, out
    std::vector<std::array<ArcId, 2>> over_arcs(n_cross);
    int loops = 0;
    ArcId next_arc = 1;
    for (size_t c = 0; c < curves.size(); ++c) {
      auto& ps = passages[c];
      if (ps.empty()) {
        ++loops;
        continue;
      }
      std::sort(ps.begin(), ps.end(), [](const Passage& a, const Passage& b) {
        return std::tie(a.segment, a.t) < std::tie(b.segment, b.t);
      });
      const ArcId first_arc = next_arc;
      const ArcId m = static_cast<ArcId>(ps.size());
      for (ArcId i = 0; i < m; ++i) {
        auto& slot = ps[i].over ? over_arcs[ps[i].crossing] : under_arcs[ps[i].crossing];
        slot[0] = first_arc + (i + m - 1) % m;  // arc arriving at passage i
        slot[1] = first_arc + i;                // arc leaving it
      }
      next_arc += m;
    }
    for (size_t k = 0; k < n_cross; ++k) {
      const int eps = crossing_signs[k];
      quads[k].arc[0] = under_arcs[k][0];
      quads[k].arc[2] = under_arcs[k][1];
      quads[k].arc[eps > 0 ? 3 : 1] = over_arcs[k][0];
      quads[k].arc[eps > 0 ? 1 : 3] = over_arcs[k][1];
      over_in[k] = eps > 0 ? 3 : 1;
    }
    return LinkDiagram::make_oriented(std::move(quads), std::move(over_in), loops);
  }
  throw Error(ErrorCode::DegenerateAfterRetries,
              "no generic projection found within the retry budget");
}

// ---- twist counting -----------------------------------------------------

std::int64_t relative_twist(const FramePair& fp) {
  const size_t n = fp.vertices.size();
  if (n < 3 || fp.reference.size() != n || fp.candidate.size() != n) {
    throw Error(ErrorCode::InvalidFormat, "frame pair needs matching vertex and field counts");
  }
  // angle of the candidate against the reference, measured about the
  // direction of travel; the walk proceeds backwards along the knot
  std::vector<double> theta(n);
  for (size_t i = 0; i < n; ++i) {
    const Vec3 tangent_fwd =
        (fp.vertices[(i + 1) % n] - fp.vertices[(i + n - 1) % n]);
    if (tangent_fwd.norm() < 1e-12) {
      throw Error(ErrorCode::TangentField, "degenerate tangent at vertex " + std::to_string(i));
    }
    const Vec3 travel = -tangent_fwd.normalized();  // backward traversal
    auto project = [&](const Vec3& v) -> Vec3 { return v - v.dot(travel) * travel; };
    const Vec3 ref = project(fp.reference[i]);
    const Vec3 cand = project(fp.candidate[i]);
    if (ref.norm() < 1e-9 || cand.norm() < 1e-9) {
      throw Error(ErrorCode::TangentField, "field tangent to the curve at vertex " +
                                               std::to_string(i));
    }
    const Vec3 vhat = ref.normalized();
    const Vec3 nhat = travel.cross(vhat);
    theta[i] = std::atan2(cand.dot(nhat), cand.dot(vhat));
  }

  double total = 0;
  for (size_t step = 0; step < n; ++step) {
    const size_t cur = (n - step) % n;
    const size_t nxt = (n - step - 1) % n;
    double delta = std::remainder(theta[nxt] - theta[cur], 2.0 * kPi);
    if (std::abs(delta) > kPi * (1.0 - 1e-9)) {
      throw Error(ErrorCode::UndersampledField,
                  "angle step of " + std::to_string(delta) + " rad; sample the field more densely");
    }
    total += delta;
  }
  const double turns = total / (2.0 * kPi);
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 0.01) {
    throw Error(ErrorCode::NonIntegerResult,
                "winding " + std::to_string(turns) + " is not close to an integer");
  }
  return static_cast<std::int64_t>(rounded);
}

SpaceCurve pushoff_curve(const SpaceCurve& c, double offset) {
  validate_curve(c);
  if (!c.normals) {
    throw Error(ErrorCode::InvalidFormat, "pushoff needs a normal field");
  }
  if (offset <= 0) {
    throw Error(ErrorCode::InvalidFormat, "pushoff offset must be positive");
  }
  SpaceCurve out;
  for (size_t i = 0; i < c.vertices.size(); ++i) {
    out.vertices.push_back(c.vertices[i] + offset * (*c.normals)[i]);
  }
  double scale = 1e-12;
  for (const Vec3& v : c.vertices) scale = std::max(scale, v.norm());
  if (min_curve_distance(c, out) < 1e-9 * scale) {
    throw Error(ErrorCode::OffsetTooLarge, "pushoff touches the original curve");
  }
  return out;
}

// ---- CSV I/O -------------------------------------------------------------

std::vector<SpaceCurve> read_curves_csv(std::istream& in) {
  std::vector<SpaceCurve> curves;
  SpaceCurve current;
  std::vector<Vec3> normals;
  bool any_normals = false;

  auto flush = [&] {
    if (current.vertices.empty()) return;
    if (any_normals) {
      if (normals.size() != current.vertices.size()) {
        throw Error(ErrorCode::InvalidFormat, "every vertex of a curve needs a normal, or none");
      }
      current.normals = normals;
    }
    validate_curve(current);
    curves.push_back(std::move(current));
    current = {};
    normals.clear();
    any_normals = false;
  };

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    bool blank = line.find_first_not_of(" \t\r") == std::string::npos;
    if (blank) {
      flush();
      continue;
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    std::vector<double> vals;
    double v;
    while (ls >> v) vals.push_back(v);
    if (vals.size() != 3 && vals.size() != 6) {
      throw ParseError(ErrorCode::SyntaxError,
                       "expected x,y,z or x,y,z,nx,ny,nz on line " + std::to_string(lineno),
                       lineno, 1);
    }
    current.vertices.push_back({vals[0], vals[1], vals[2]});
    if (vals.size() == 6) {
      normals.push_back(Vec3(vals[3], vals[4], vals[5]).normalized());
      any_normals = true;
    } else if (any_normals) {
      throw Error(ErrorCode::InvalidFormat, "every vertex of a curve needs a normal, or none");
    }
  }
  flush();
  return curves;
}

void write_curves_csv(std::ostream& out, const std::vector<SpaceCurve>& curves) {
  for (size_t c = 0; c < curves.size(); ++c) {
    if (c > 0) out << "\n";
    for (size_t i = 0; i < curves[c].vertices.size(); ++i) {
      const Vec3& v = curves[c].vertices[i];
      out << v.x() << ',' << v.y() << ',' << v.z();
      if (curves[c].normals) {
        const Vec3& n = (*curves[c].normals)[i];
        out << ',' << n.x() << ',' << n.y() << ',' << n.z();
      }
      out << "\n";
    }
  }
}

}  // namespace framelink
