#include "framelink/surgery.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace framelink {

SurgeryCoefficient normalize_coefficient(std::int64_t p, std::int64_t q) {
  if (p == 0 && q == 0) {
    throw Error(ErrorCode::ZeroClass, "surgery coefficient 0/0 names no curve");
  }
  if (q == 0) return SurgeryCoefficient::infinity();
  std::int64_t g = std::gcd(std::abs(p), std::abs(q));
  p /= g;
  q /= g;
  if (q < 0) {
    p = -p;
    q = -q;
  }
  return {p, q};
}

SurgeryCoefficient parse_coefficient(std::string_view text) {
  std::string s(text);
  // trim
  auto is_space = [](char c) { return c == ' ' || c == '\t'; };
  while (!s.empty() && is_space(s.front())) s.erase(s.begin());
  while (!s.empty() && is_space(s.back())) s.pop_back();
  if (s == "inf" || s == "Inf" || s == "INF") return SurgeryCoefficient::infinity();
  try {
    size_t slash = s.find('/');
    if (slash == std::string::npos) {
      size_t used = 0;
      std::int64_t p = std::stoll(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return SurgeryCoefficient::integer(p);
    }
    size_t used = 0;
    std::int64_t p = std::stoll(s.substr(0, slash), &used);
    if (used != slash) throw std::invalid_argument(s);
    std::int64_t q = std::stoll(s.substr(slash + 1), &used);
    if (used != s.size() - slash - 1) throw std::invalid_argument(s);
    return normalize_coefficient(p, q);
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::InvalidFormat,
                "bad surgery coefficient '" + s + "' (expected p/q, p or inf)");
  }
}

std::string coefficient_to_text(const SurgeryCoefficient& c) {
  if (c.is_infinity()) return "inf";
  if (c.q == 1) return std::to_string(c.p);
  return std::to_string(c.p) + "/" + std::to_string(c.q);
}

SurgeryDescription from_framed_link(const FramedLink& fl) {
  if (static_cast<int>(fl.framings.size()) != fl.diagram.component_count()) {
    throw Error(ErrorCode::InvalidFormat, "framing count does not match component count");
  }
  SurgeryDescription s;
  s.diagram = fl.diagram;
  for (std::int64_t n : fl.framings) s.coefficients.push_back(SurgeryCoefficient::integer(n));
  return s;
}

std::string RecognizedManifold::name() const {
  switch (tag) {
    case Tag::S3: return "S3";
    case Tag::S2xS1: return "S2xS1";
    case Tag::Lens: return "L(" + std::to_string(p) + "," + std::to_string(q) + ")";
    case Tag::Unknown: return "Unknown";
  }
  return "Unknown";
}

RecognizedManifold recognize_unknot_surgery(const SurgeryDescription& s) {
  RecognizedManifold out;
  if (s.diagram.component_count() != 1 ||
      static_cast<int>(s.coefficients.size()) != 1) {
    out.evidence = "recognition is restricted to one-component descriptions";
    return out;
  }
  if (s.diagram.crossing_count() != 0) {
    out.evidence = "crossings present; the component is not known to be an unknot";
    return out;
  }
  const SurgeryCoefficient c = s.coefficients[0];
  if (c.is_infinity()) {
    out.tag = RecognizedManifold::Tag::S3;
    out.evidence = "trivial filling: the meridian returns to a meridian";
    return out;
  }
  if (c.p == 0) {
    out.tag = RecognizedManifold::Tag::S2xS1;
    out.evidence = "zero surgery on the unknot";
    return out;
  }
  if (std::abs(c.p) == 1) {
    out.tag = RecognizedManifold::Tag::S3;
    out.evidence = "surgery index 1/" + std::to_string(c.q) + " on the unknot";
    return out;
  }
  const std::int64_t P = std::abs(c.p);
  out.tag = RecognizedManifold::Tag::Lens;
  out.p = P;
  out.q = ((c.q % P) + P) % P;
  out.evidence = "rational surgery " + coefficient_to_text(c) + " on the unknot";
  return out;
}

std::vector<std::int64_t> smith_normal_form(LinkingMatrix m) {
  const Eigen::Index rows = m.rows(), cols = m.cols();
  const Eigen::Index n = std::min(rows, cols);
  std::vector<std::int64_t> diag;

  for (Eigen::Index t = 0; t < n; ++t) {
    // find the smallest nonzero entry in the remaining block
    Eigen::Index pr = -1, pc = -1;
    std::int64_t best = 0;
    for (Eigen::Index i = t; i < rows; ++i) {
      for (Eigen::Index j = t; j < cols; ++j) {
        std::int64_t v = std::abs(m(i, j));
        if (v != 0 && (best == 0 || v < best)) {
          best = v;
          pr = i;
          pc = j;
        }
      }
    }
    if (best == 0) break;  // the rest is zero
    m.row(t).swap(m.row(pr));
    m.col(t).swap(m.col(pc));

    bool reduced = false;
    while (!reduced) {
      reduced = true;
      for (Eigen::Index i = t + 1; i < rows; ++i) {
        if (m(i, t) == 0) continue;
        std::int64_t f = m(i, t) / m(t, t);
        m.row(i) -= f * m.row(t);
        if (m(i, t) != 0) {  // remainder smaller than the pivot: swap up
          m.row(t).swap(m.row(i));
          reduced = false;
        }
      }
      for (Eigen::Index j = t + 1; j < cols; ++j) {
        if (m(t, j) == 0) continue;
        std::int64_t f = m(t, j) / m(t, t);
        m.col(j) -= f * m.col(t);
        if (m(t, j) != 0) {
          m.col(t).swap(m.col(j));
          reduced = false;
        }
      }
      if (!reduced) continue;
      // pivot must divide the rest of the block
      for (Eigen::Index i = t + 1; i < rows && reduced; ++i) {
        for (Eigen::Index j = t + 1; j < cols && reduced; ++j) {
          if (m(i, j) % m(t, t) != 0) {
            m.row(t) += m.row(i);
            reduced = false;
          }
        }
      }
    }
  }

  for (Eigen::Index t = 0; t < n; ++t) diag.push_back(std::abs(m(t, t)));
  return diag;
}

HomologyGroup first_homology(const SurgeryDescription& s) {
  const int n = s.diagram.component_count();
  if (static_cast<int>(s.coefficients.size()) != n) {
    throw Error(ErrorCode::InvalidFormat, "coefficient count does not match component count");
  }
  for (const SurgeryCoefficient& c : s.coefficients) {
    if (!c.is_integral()) {
      throw Error(ErrorCode::NonIntegerCoefficients,
                  "first homology needs integral surgery coefficients");
    }
  }
  LinkingMatrix m = LinkingMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = s.coefficients[i].p;
    for (int j = i + 1; j < n; ++j) {
      m(i, j) = m(j, i) = linking_number(s.diagram, i, j);
    }
  }
  std::vector<std::int64_t> diag = smith_normal_form(m);
  HomologyGroup h;
  for (std::int64_t dval : diag) {
    if (dval == 0) {
      h.rank += 1;
    } else if (dval > 1) {
      h.torsion.push_back(dval);
    }
  }
  std::sort(h.torsion.begin(), h.torsion.end());
  return h;
}

}  // namespace framelink
