#include "framelink/invariants.hpp"

#include <algorithm>
#include <unordered_map>

namespace framelink {

int crossing_sign(const LinkDiagram& d, int k) { return d.sign(k); }

std::int64_t writhe(const LinkDiagram& d, ComponentId c) {
  if (c < 0 || c >= d.component_count()) {
    throw Error(ErrorCode::IndexOutOfRange, "component index out of range", c);
  }
  std::int64_t w = 0;
  for (int k = 0; k < d.crossing_count(); ++k) {
    if (d.under_component(k) == c && d.over_component(k) == c) w += d.sign(k);
  }
  return w;
}

std::int64_t total_writhe(const LinkDiagram& d) {
  std::int64_t w = 0;
  for (int k = 0; k < d.crossing_count(); ++k) w += d.sign(k);
  return w;
}

std::int64_t linking_number(const LinkDiagram& d, ComponentId c1, ComponentId c2) {
  if (c1 < 0 || c1 >= d.component_count() || c2 < 0 || c2 >= d.component_count()) {
    throw Error(ErrorCode::IndexOutOfRange, "component index out of range");
  }
  if (c1 == c2) {
    throw Error(ErrorCode::SameComponent, "linking number needs two distinct components");
  }
  std::int64_t s = 0;
  for (int k = 0; k < d.crossing_count(); ++k) {
    ComponentId u = d.under_component(k);
    ComponentId o = d.over_component(k);
    if ((u == c1 && o == c2) || (u == c2 && o == c1)) s += d.sign(k);
  }
  return s / 2;
}

LinkingMatrix linking_matrix(const FramedLink& fl) {
  const int n = fl.diagram.component_count();
  if (static_cast<int>(fl.framings.size()) != n) {
    throw Error(ErrorCode::InvalidFormat, "framing count does not match component count");
  }
  LinkingMatrix m = LinkingMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = fl.framings[i];
    for (int j = i + 1; j < n; ++j) {
      m(i, j) = m(j, i) = linking_number(fl.diagram, i, j);
    }
  }
  return m;
}

FramedLink blackboard_framing(const LinkDiagram& d) {
  FramedLink fl{d, {}};
  for (int c = 0; c < d.component_count(); ++c) fl.framings.push_back(writhe(d, c));
  return fl;
}

namespace {

// Emits a crossing with the given strand roles: eps = +1 places the incoming
// over-strand at slot 3 (positive crossing), eps = -1 at slot 1.
void emit_crossing(std::vector<Crossing>* crossings, std::vector<std::uint8_t>* over_in,
                   ArcId u_in, ArcId u_out, ArcId o_in, ArcId o_out, int eps) {
  Crossing x;
  x.arc[0] = u_in;
  x.arc[2] = u_out;
  if (eps > 0) {
    x.arc[3] = o_in;
    x.arc[1] = o_out;
    over_in->push_back(3);
  } else {
    x.arc[1] = o_in;
    x.arc[3] = o_out;
    over_in->push_back(1);
  }
  crossings->push_back(x);
}

}  // namespace

PushoffResult pushoff(const LinkDiagram& d, ComponentId c) {
  if (c < 0 || c >= d.component_count()) {
    throw Error(ErrorCode::IndexOutOfRange, "component index out of range", c);
  }

  if (d.is_unknotted_loop(c)) {
    std::vector<std::uint8_t> o;
    for (int k = 0; k < d.crossing_count(); ++k) o.push_back(d.over_in_pos(k));
    LinkDiagram out =
        LinkDiagram::make_oriented(d.crossings(), std::move(o), d.unknotted_loops() + 1);
    const ComponentId copy = out.component_count() - 1;
    return {std::move(out), c, copy};
  }

  // The copy runs parallel on the left of the travel direction. Per original
  // crossing: with the under-strand pointing up and the over-strand running
  // along eps*x, the under copy sits left (x = -delta) and the over copy at
  // y = eps*delta. Passage orders along each strand follow from that.
  ArcId next_label = d.max_arc_label();
  auto fresh = [&next_label]() { return ++next_label; };
  std::unordered_map<ArcId, ArcId> prime;
  for (ArcId a : d.arc_cycles()[c]) prime[a] = fresh();

  std::vector<Crossing> out;
  std::vector<std::uint8_t> over_in;
  for (int k = 0; k < d.crossing_count(); ++k) {
    const bool uc = d.under_component(k) == c;
    const bool oc = d.over_component(k) == c;
    const int eps = d.sign(k);
    const ArcId sa = d.under_in(k), sb = d.under_out(k);
    const ArcId ta = d.over_in(k), tb = d.over_out(k);

    if (!uc && !oc) {
      Crossing x = d.crossings()[k];
      out.push_back(x);
      over_in.push_back(d.over_in_pos(k));
    } else if (uc && !oc) {
      // Over strand now crosses the copy and the original in turn.
      const ArcId m = fresh();
      const bool copy_first = eps > 0;
      emit_crossing(&out, &over_in, prime[sa], prime[sb],
                    copy_first ? ta : m, copy_first ? m : tb, eps);
      emit_crossing(&out, &over_in, sa, sb,
                    copy_first ? m : ta, copy_first ? tb : m, eps);
    } else if (oc && !uc) {
      // Under strand passes the original over-strand and its copy in turn.
      const ArcId m = fresh();
      const bool orig_first = eps > 0;
      emit_crossing(&out, &over_in, orig_first ? sa : m, orig_first ? m : sb, ta, tb, eps);
      emit_crossing(&out, &over_in, orig_first ? m : sa, orig_first ? sb : m,
                    prime[ta], prime[tb], eps);
    } else {
      // Self-crossing: both strands double, four crossings of the same sign.
      const ArcId u = fresh(), up = fresh(), v = fresh(), vp = fresh();
      if (eps > 0) {
        emit_crossing(&out, &over_in, sa, u, v, tb, eps);              // (S, T)
        emit_crossing(&out, &over_in, u, sb, vp, prime[tb], eps);      // (S, T')
        emit_crossing(&out, &over_in, prime[sa], up, ta, v, eps);      // (S', T)
        emit_crossing(&out, &over_in, up, prime[sb], prime[ta], vp, eps);  // (S', T')
      } else {
        emit_crossing(&out, &over_in, u, sb, ta, v, eps);              // (S, T)
        emit_crossing(&out, &over_in, sa, u, prime[ta], vp, eps);      // (S, T')
        emit_crossing(&out, &over_in, up, prime[sb], v, tb, eps);      // (S', T)
        emit_crossing(&out, &over_in, prime[sa], up, vp, prime[tb], eps);  // (S', T')
      }
    }
  }

  const ArcId marker_orig = d.arc_cycles()[c].front();
  const ArcId marker_copy = prime.at(marker_orig);
  LinkDiagram doubled =
      LinkDiagram::make_oriented(std::move(out), std::move(over_in), d.unknotted_loops());
  return {doubled, doubled.component_of_arc(marker_orig), doubled.component_of_arc(marker_copy)};
}

}  // namespace framelink
