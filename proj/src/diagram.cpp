#include "framelink/diagram.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

namespace framelink {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DanglingArc: return "DanglingArc";
    case ErrorCode::BrokenCycle: return "BrokenCycle";
    case ErrorCode::EmptyCrossing: return "EmptyCrossing";
    case ErrorCode::ArcNotOnComponent: return "ArcNotOnComponent";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::SameComponent: return "SameComponent";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::ArcCountError: return "ArcCountError";
    case ErrorCode::UnpairedCrossing: return "UnpairedCrossing";
    case ErrorCode::SignMismatch: return "SignMismatch";
    case ErrorCode::InvalidPairing: return "InvalidPairing";
    case ErrorCode::UnsupportedCode: return "UnsupportedCode";
    case ErrorCode::InvalidFormat: return "InvalidFormat";
    case ErrorCode::StaleSite: return "StaleSite";
    case ErrorCode::NotALongitude: return "NotALongitude";
    case ErrorCode::ZeroClass: return "ZeroClass";
    case ErrorCode::NonIntegerCoefficients: return "NonIntegerCoefficients";
    case ErrorCode::DegenerateAfterRetries: return "DegenerateAfterRetries";
    case ErrorCode::CurvesTooClose: return "CurvesTooClose";
    case ErrorCode::NonIntegerResult: return "NonIntegerResult";
    case ErrorCode::UndersampledField: return "UndersampledField";
    case ErrorCode::TangentField: return "TangentField";
    case ErrorCode::OffsetTooLarge: return "OffsetTooLarge";
  }
  return "UnknownError";
}

namespace {

struct Appearance {
  int crossing;
  int slot;
};

// Collects (crossing, slot) appearances per arc label; checks label
// positivity and the exactly-twice rule.
ValidationReport collect_appearances(const std::vector<Crossing>& crossings,
                                     int unknotted_loops,
                                     std::map<ArcId, std::vector<Appearance>>* out) {
  if (unknotted_loops < 0) {
    return {false, ErrorCode::InvalidFormat, "negative unknotted-loop count", -1};
  }
  for (int k = 0; k < static_cast<int>(crossings.size()); ++k) {
    for (int s = 0; s < 4; ++s) {
      ArcId a = crossings[k].arc[s];
      if (a <= 0) {
        return {false, ErrorCode::EmptyCrossing,
                "crossing " + std::to_string(k) + " has a non-positive arc label", k};
      }
      (*out)[a].push_back({k, s});
    }
  }
  for (const auto& [arc, apps] : *out) {
    if (apps.size() != 2) {
      return {false, ErrorCode::DanglingArc,
              "arc " + std::to_string(arc) + " used " + std::to_string(apps.size()) +
                  " times (expected 2)",
              apps.front().crossing};
    }
  }
  return {};
}

// Head/tail states per (crossing, slot): +1 head (arc ends here), -1 tail.
// Slot 0 is always a head, slot 2 always a tail; over slots are solved by
// propagation, with a deterministic choice where the code leaves the
// over-strand direction free.
ValidationReport solve_orientation(const std::vector<Crossing>& crossings,
                                   const std::map<ArcId, std::vector<Appearance>>& apps,
                                   std::vector<std::uint8_t>* over_in) {
  const int n = static_cast<int>(crossings.size());
  std::vector<std::array<int, 4>> state(n, {0, 0, 0, 0});
  // other appearance of the arc in a given slot
  auto other_of = [&](int k, int s) -> Appearance {
    const auto& v = apps.at(crossings[k].arc[s]);
    if (v[0].crossing == k && v[0].slot == s) return v[1];
    return v[0];
  };

  std::deque<std::pair<Appearance, int>> queue;
  ValidationReport report;
  auto set_state = [&](int k, int s, int val) {
    if (state[k][s] == val) return;
    if (state[k][s] != 0) {
      if (report.ok) {
        report = {false, ErrorCode::BrokenCycle,
                  "inconsistent strand orientation at crossing " + std::to_string(k), k};
      }
      return;
    }
    state[k][s] = val;
    queue.push_back({{k, s}, val});
  };

  for (int k = 0; k < n; ++k) {
    set_state(k, 0, +1);
    set_state(k, 2, -1);
  }
  auto drain = [&] {
    while (!queue.empty() && report.ok) {
      auto [app, val] = queue.front();
      queue.pop_front();
      Appearance partner = other_of(app.crossing, app.slot);
      set_state(partner.crossing, partner.slot, -val);
      if (app.slot == 1 || app.slot == 3) {
        set_state(app.crossing, app.slot ^ 2, -val);
      }
    }
  };
  drain();
  for (int k = 0; k < n && report.ok; ++k) {
    if (state[k][1] == 0) {
      set_state(k, 1, +1);  // free over-strand direction: fixed deterministically
      drain();
    }
  }
  if (!report.ok) return report;

  over_in->resize(n);
  for (int k = 0; k < n; ++k) {
    (*over_in)[k] = state[k][1] == +1 ? 1 : 3;
  }
  return {};
}

ValidationReport check_oriented(const std::vector<Crossing>& crossings,
                                const std::vector<std::uint8_t>& over_in,
                                const std::map<ArcId, std::vector<Appearance>>& apps) {
  if (over_in.size() != crossings.size()) {
    return {false, ErrorCode::InvalidFormat, "over_in size mismatch", -1};
  }
  for (int k = 0; k < static_cast<int>(crossings.size()); ++k) {
    if (over_in[k] != 1 && over_in[k] != 3) {
      return {false, ErrorCode::InvalidFormat, "over_in must be 1 or 3", k};
    }
  }
  auto is_head = [&](const Appearance& a) {
    if (a.slot == 0) return true;
    if (a.slot == 2) return false;
    return a.slot == over_in[a.crossing];
  };
  for (const auto& [arc, v] : apps) {
    if (is_head(v[0]) == is_head(v[1])) {
      return {false, ErrorCode::BrokenCycle,
              "arc " + std::to_string(arc) + " has no consistent direction", v[0].crossing};
    }
  }
  return {};
}

}  // namespace

void LinkDiagram::analyze() {
  std::map<ArcId, std::vector<Appearance>> apps;
  ValidationReport r = collect_appearances(crossings_, loops_, &apps);
  if (!r.ok) throw Error(r.code, r.message, r.crossing);
  if (over_in_.empty()) {
    r = solve_orientation(crossings_, apps, &over_in_);
    if (!r.ok) throw Error(r.code, r.message, r.crossing);
  }
  r = check_oriented(crossings_, over_in_, apps);
  if (!r.ok) throw Error(r.code, r.message, r.crossing);

  ends_.clear();
  for (const auto& [arc, v] : apps) {
    ArcEnds e;
    for (const Appearance& a : v) {
      bool head = a.slot == 0 || (a.slot != 2 && a.slot == over_in_[a.crossing]);
      if (head) {
        e.head_crossing = a.crossing;
        e.head_slot = a.slot;
      } else {
        e.tail_crossing = a.crossing;
        e.tail_slot = a.slot;
      }
    }
    ends_[arc] = e;
  }

  // Trace oriented cycles: the arc entering a crossing at slot s leaves at
  // the partner slot (0 -> 2, over-in -> over-out).
  cycles_.clear();
  comp_of_arc_.clear();
  std::map<ArcId, bool> visited;
  for (const auto& [arc, v] : apps) visited[arc] = false;
  for (const auto& [start, v0] : apps) {
    if (visited.at(start)) continue;
    std::vector<ArcId> cycle;
    ArcId a = start;
    do {
      visited[a] = true;
      cycle.push_back(a);
      const ArcEnds& e = ends_.at(a);
      int out_slot = e.head_slot == 0 ? 2 : (e.head_slot ^ 2);
      a = crossings_[e.head_crossing].arc[out_slot];
    } while (a != start);
    auto min_it = std::min_element(cycle.begin(), cycle.end());
    std::rotate(cycle.begin(), min_it, cycle.end());
    cycles_.push_back(std::move(cycle));
  }
  std::sort(cycles_.begin(), cycles_.end(),
            [](const auto& x, const auto& y) { return x.front() < y.front(); });
  for (int c = 0; c < static_cast<int>(cycles_.size()); ++c) {
    for (ArcId a : cycles_[c]) comp_of_arc_[a] = c;
  }
}

LinkDiagram LinkDiagram::make(std::vector<Crossing> crossings, int unknotted_loops) {
  LinkDiagram d;
  d.crossings_ = std::move(crossings);
  d.loops_ = unknotted_loops;
  d.analyze();
  return d;
}

LinkDiagram LinkDiagram::make_oriented(std::vector<Crossing> crossings,
                                       std::vector<std::uint8_t> over_in,
                                       int unknotted_loops) {
  LinkDiagram d;
  d.crossings_ = std::move(crossings);
  d.over_in_ = std::move(over_in);
  d.loops_ = unknotted_loops;
  d.analyze();
  return d;
}

bool LinkDiagram::is_unknotted_loop(ComponentId c) const {
  if (c < 0 || c >= component_count()) {
    throw Error(ErrorCode::IndexOutOfRange, "component index out of range", c);
  }
  return c >= traced_component_count();
}

std::uint8_t LinkDiagram::over_in_pos(int k) const {
  if (k < 0 || k >= crossing_count()) {
    throw Error(ErrorCode::IndexOutOfRange, "crossing index out of range", k);
  }
  return over_in_[k];
}

int LinkDiagram::sign(int k) const { return over_in_pos(k) == 3 ? +1 : -1; }

ComponentId LinkDiagram::component_of_arc(ArcId a) const {
  auto it = comp_of_arc_.find(a);
  if (it == comp_of_arc_.end()) {
    throw Error(ErrorCode::IndexOutOfRange, "arc " + std::to_string(a) + " not in diagram");
  }
  return it->second;
}

const ArcEnds& LinkDiagram::arc_ends(ArcId a) const {
  auto it = ends_.find(a);
  if (it == ends_.end()) {
    throw Error(ErrorCode::IndexOutOfRange, "arc " + std::to_string(a) + " not in diagram");
  }
  return it->second;
}

std::vector<ArcId> LinkDiagram::arcs() const {
  std::vector<ArcId> out;
  out.reserve(ends_.size());
  for (const auto& [a, e] : ends_) out.push_back(a);
  std::sort(out.begin(), out.end());
  return out;
}

ArcId LinkDiagram::max_arc_label() const {
  ArcId m = 0;
  for (const auto& [a, e] : ends_) m = std::max(m, a);
  return m;
}

ValidationReport validate(const std::vector<Crossing>& crossings, int unknotted_loops) {
  std::map<ArcId, std::vector<Appearance>> apps;
  ValidationReport r = collect_appearances(crossings, unknotted_loops, &apps);
  if (!r.ok) return r;
  std::vector<std::uint8_t> over_in;
  r = solve_orientation(crossings, apps, &over_in);
  if (!r.ok) return r;
  return check_oriented(crossings, over_in, apps);
}

ValidationReport validate(const LinkDiagram& d) {
  return validate(d.crossings(), d.unknotted_loops());
}

std::vector<std::vector<ArcId>> trace_components(const LinkDiagram& d) {
  std::vector<std::vector<ArcId>> out = d.arc_cycles();
  out.resize(out.size() + d.unknotted_loops());
  return out;
}

namespace {

void require_component(const LinkDiagram& d, ComponentId c) {
  if (c < 0 || c >= d.component_count()) {
    throw Error(ErrorCode::IndexOutOfRange, "component index out of range", c);
  }
}

}  // namespace

LinkDiagram connected_sum(const LinkDiagram& d, ComponentId c1, ArcId a1,
                          const LinkDiagram& d2, ComponentId c2, ArcId a2) {
  require_component(d, c1);
  require_component(d2, c2);

  const bool loop1 = d.is_unknotted_loop(c1);
  const bool loop2 = d2.is_unknotted_loop(c2);
  if (!loop1 && (!d.has_arc(a1) || d.component_of_arc(a1) != c1)) {
    throw Error(ErrorCode::ArcNotOnComponent,
                "arc " + std::to_string(a1) + " is not on component " + std::to_string(c1));
  }
  if (!loop2 && (!d2.has_arc(a2) || d2.component_of_arc(a2) != c2)) {
    throw Error(ErrorCode::ArcNotOnComponent,
                "arc " + std::to_string(a2) + " is not on component " + std::to_string(c2));
  }

  // Shift d2's labels past d's.
  const ArcId shift = d.max_arc_label();
  std::vector<Crossing> crossings = d.crossings();
  std::vector<std::uint8_t> over_in;
  for (int k = 0; k < d.crossing_count(); ++k) over_in.push_back(d.over_in_pos(k));
  for (int k = 0; k < d2.crossing_count(); ++k) {
    Crossing x = d2.crossings()[k];
    for (int s = 0; s < 4; ++s) x.arc[s] += shift;
    crossings.push_back(x);
    over_in.push_back(d2.over_in_pos(k));
  }

  // Summing with a crossing-free unknot just absorbs the loop.
  int loops = d.unknotted_loops() + d2.unknotted_loops();
  if (loop1 || loop2) {
    loops -= 1;
    return LinkDiagram::make_oriented(std::move(crossings), std::move(over_in), loops);
  }

  // Cross-join the two arcs: the strand leaving a1's tail now runs to a2's
  // head and vice versa. Heads live in crossing slots; swap the labels there.
  const ArcEnds e1 = d.arc_ends(a1);
  const ArcEnds e2 = d2.arc_ends(a2);
  const ArcId b2 = a2 + shift;
  crossings[e2.head_crossing + d.crossing_count()].arc[e2.head_slot] = a1;
  crossings[e1.head_crossing].arc[e1.head_slot] = b2;
  return LinkDiagram::make_oriented(std::move(crossings), std::move(over_in), loops);
}

LinkDiagram reverse_component(const LinkDiagram& d, ComponentId c) {
  require_component(d, c);
  if (d.is_unknotted_loop(c)) return d;

  std::vector<Crossing> crossings = d.crossings();
  std::vector<std::uint8_t> over_in;
  for (int k = 0; k < d.crossing_count(); ++k) {
    const bool under_in_c = d.under_component(k) == c;
    const bool over_in_c = d.over_component(k) == c;
    std::uint8_t o = d.over_in_pos(k);
    if (under_in_c) {
      // Reversed under-strand: the old outgoing end becomes incoming.
      Crossing rotated;
      for (int s = 0; s < 4; ++s) rotated.arc[s] = crossings[k].arc[(s + 2) % 4];
      crossings[k] = rotated;
    }
    // Rotating by two moves each over slot to the opposite one; reversing
    // the over-strand swaps incoming and outgoing. Both together cancel.
    if (under_in_c != over_in_c) o ^= 2;
    over_in.push_back(o);
  }
  return LinkDiagram::make_oriented(std::move(crossings), std::move(over_in),
                                    d.unknotted_loops());
}

LinkDiagram toggle_crossing(const LinkDiagram& d, int k) {
  if (k < 0 || k >= d.crossing_count()) {
    throw Error(ErrorCode::IndexOutOfRange, "crossing index out of range", k);
  }
  std::vector<Crossing> crossings = d.crossings();
  std::vector<std::uint8_t> over_in;
  for (int j = 0; j < d.crossing_count(); ++j) over_in.push_back(d.over_in_pos(j));

  // Rotate the quadruple so the old incoming over-strand sits at slot 0.
  const int r = over_in[k];
  Crossing rotated;
  for (int s = 0; s < 4; ++s) rotated.arc[s] = crossings[k].arc[(s + r) % 4];
  crossings[k] = rotated;
  // The old incoming under-strand (slot 0) lands at slot (0 - r) mod 4 and
  // becomes the incoming over-strand.
  over_in[k] = static_cast<std::uint8_t>((4 - r) % 4);
  return LinkDiagram::make_oriented(std::move(crossings), std::move(over_in),
                                    d.unknotted_loops());
}

}  // namespace framelink
