#include "framelink/moves.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <thread>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "framelink/codecs.hpp"

namespace framelink {

const char* to_string(MoveKind kind) {
  switch (kind) {
    case MoveKind::R1Add: return "R1_add";
    case MoveKind::R1Remove: return "R1_remove";
    case MoveKind::R2Add: return "R2_add";
    case MoveKind::R2Remove: return "R2_remove";
    case MoveKind::R3: return "R3";
    case MoveKind::FR1Add: return "FR1_add";
    case MoveKind::FR1Remove: return "FR1_remove";
  }
  return "?";
}

namespace movekinds {
unsigned mask_of(MoveKind kind) { return 1u << static_cast<unsigned>(kind); }
}  // namespace movekinds

namespace {

struct DiagramData {
  std::vector<Crossing> crossings;
  std::vector<std::uint8_t> over_in;
  int loops = 0;
};

DiagramData data_of(const LinkDiagram& d) {
  DiagramData out;
  out.crossings = d.crossings();
  for (int k = 0; k < d.crossing_count(); ++k) out.over_in.push_back(d.over_in_pos(k));
  out.loops = d.unknotted_loops();
  return out;
}

LinkDiagram build(DiagramData data) {
  return LinkDiagram::make_oriented(std::move(data.crossings), std::move(data.over_in),
                                    data.loops);
}

ArcId max_label(const LinkDiagram& d) { return d.max_arc_label(); }

// Appends a crossing with the given strand roles: eps = +1 puts the incoming
// over-strand at slot 3 (positive crossing), eps = -1 at slot 1.
void emit(DiagramData* d, ArcId u_in, ArcId u_out, ArcId o_in, ArcId o_out, int eps) {
  Crossing x;
  x.arc[0] = u_in;
  x.arc[2] = u_out;
  x.arc[eps > 0 ? 3 : 1] = o_in;
  x.arc[eps > 0 ? 1 : 3] = o_out;
  d->crossings.push_back(x);
  d->over_in.push_back(eps > 0 ? 3 : 1);
}

// Replaces the arc label at the slot where `arc` ends.
void repoint_head(DiagramData* d, const LinkDiagram& src, ArcId arc, ArcId replacement) {
  const ArcEnds& e = src.arc_ends(arc);
  d->crossings[e.head_crossing].arc[e.head_slot] = replacement;
}

// A kink crossing: some arc occupies two adjacent slots.
struct KinkPattern {
  ArcId loop;
  ArcId in;   // piece entering the kink
  ArcId out;  // piece leaving it (equal to `in` on a closed kinked unknot)
};

std::optional<KinkPattern> kink_at(const LinkDiagram& d, int k) {
  if (k < 0 || k >= d.crossing_count()) return std::nullopt;
  const Crossing& x = d.crossings()[k];
  for (int s = 0; s < 4; ++s) {
    if (x.arc[s] != x.arc[(s + 1) % 4]) continue;
    ArcId loop = x.arc[s];
    int t1 = (s + 2) % 4, t2 = (s + 3) % 4;
    auto is_in = [&](int slot) { return slot == 0 || slot == d.over_in_pos(k); };
    ArcId in = is_in(t1) ? x.arc[t1] : x.arc[t2];
    ArcId out = is_in(t1) ? x.arc[t2] : x.arc[t1];
    return KinkPattern{loop, in, out};
  }
  return std::nullopt;
}

// Removes crossings and merges the given label pairs (smaller label
// survives). Merged classes that lose every slot close into unknotted loops.
DiagramData splice_out(const LinkDiagram& d, const std::vector<int>& remove,
                       const std::vector<std::pair<ArcId, ArcId>>& merges) {
  std::map<ArcId, ArcId> root;
  std::function<ArcId(ArcId)> find = [&](ArcId a) -> ArcId {
    auto it = root.find(a);
    if (it == root.end() || it->second == a) return a;
    return it->second = find(it->second);
  };
  for (auto [a, b] : merges) {
    ArcId ra = find(a), rb = find(b);
    if (ra != rb) root[std::max(ra, rb)] = std::min(ra, rb);
  }

  std::unordered_set<int> gone(remove.begin(), remove.end());
  DiagramData out;
  out.loops = d.unknotted_loops();
  for (int k = 0; k < d.crossing_count(); ++k) {
    if (gone.count(k)) continue;
    Crossing x = d.crossings()[k];
    for (int s = 0; s < 4; ++s) x.arc[s] = find(x.arc[s]);
    out.crossings.push_back(x);
    out.over_in.push_back(d.over_in_pos(k));
  }

  std::unordered_set<ArcId> surviving;
  for (const Crossing& x : out.crossings) {
    for (ArcId a : x.arc) surviving.insert(a);
  }
  std::unordered_set<ArcId> roots_seen;
  for (auto [a, b] : merges) {
    ArcId r = find(a);
    if (roots_seen.insert(r).second && !surviving.count(r)) out.loops += 1;
  }
  return out;
}

MoveSite r1_add_site(ArcId arc, int loop_index, Kink kink) {
  MoveSite m;
  m.kind = MoveKind::R1Add;
  m.arc = arc;
  m.loop_index = loop_index;
  m.kink = kink;
  return m;
}

// Inserts a kink on an arc or on a crossing-free loop. The in-piece keeps
// its label; the loop piece and the continuation are fresh.
int do_r1_add(DiagramData* data, const LinkDiagram& src, const MoveSite& m) {
  ArcId next = max_label(src);
  const int eps = kink_sign(m.kink);
  if (m.arc == 0) {
    if (m.loop_index < src.traced_component_count() ||
        m.loop_index >= src.component_count()) {
      throw Error(ErrorCode::StaleSite, "kink site names no arc and no unknotted loop");
    }
    data->loops -= 1;
    ArcId p = next + 1, q = next + 2;
    emit(data, p, q, q, p, eps);  // closed kinked unknot
    return static_cast<int>(data->crossings.size()) - 1;
  }
  if (!src.has_arc(m.arc)) {
    throw Error(ErrorCode::StaleSite, "kink site names a missing arc");
  }
  ArcId x = m.arc, y = next + 1, z = next + 2;
  repoint_head(data, src, x, z);
  emit(data, x, y, y, z, eps);  // strand passes under its own loop first
  return static_cast<int>(data->crossings.size()) - 1;
}

DiagramData do_r1_remove(const LinkDiagram& d, int k) {
  auto kink = kink_at(d, k);
  if (!kink) throw Error(ErrorCode::StaleSite, "crossing is not a kink");
  return splice_out(d, {k}, {{kink->in, kink->out}});
}

struct BigonPattern {
  ArcId over, under;  // the two inner arcs
  ArcId o_in, o_out, u_in, u_out;
  bool anti;
  int eps_first;  // sign where the over strand enters the bigon
};

std::optional<BigonPattern> bigon_at(const LinkDiagram& d, int k1, int k2, ArcId p, ArcId q) {
  if (k1 == k2 || p == q) return std::nullopt;
  if (k1 < 0 || k2 < 0 || k1 >= d.crossing_count() || k2 >= d.crossing_count()) {
    return std::nullopt;
  }
  if (!d.has_arc(p) || !d.has_arc(q)) return std::nullopt;
  if (d.sign(k1) == d.sign(k2)) return std::nullopt;
  const ArcEnds& pe = d.arc_ends(p);
  const ArcEnds& qe = d.arc_ends(q);
  // p runs over both crossings, q under both
  bool p_over = pe.head_slot == d.over_in_pos(pe.head_crossing) &&
                pe.tail_slot == (d.over_in_pos(pe.tail_crossing) ^ 2);
  bool q_under = qe.head_slot == 0 && qe.tail_slot == 2;
  if (!p_over || !q_under) return std::nullopt;
  if (std::minmax(pe.head_crossing, pe.tail_crossing) != std::minmax(k1, k2)) {
    return std::nullopt;
  }
  if (std::minmax(qe.head_crossing, qe.tail_crossing) != std::minmax(k1, k2)) {
    return std::nullopt;
  }

  BigonPattern b;
  b.over = p;
  b.under = q;
  const int ka = pe.tail_crossing;  // over strand enters here
  const int kb = pe.head_crossing;
  b.o_in = d.over_in(ka);
  b.o_out = d.over_out(kb);
  b.u_in = d.under_in(qe.tail_crossing);
  b.u_out = d.under_out(qe.head_crossing);
  b.anti = qe.tail_crossing != ka;
  b.eps_first = d.sign(ka);
  return b;
}

}  // namespace

// ---- enumeration -------------------------------------------------------

std::vector<MoveSite> enumerate_moves(const LinkDiagram& d, unsigned kinds) {
  std::vector<MoveSite> sites;
  const std::vector<ArcId> arcs = d.arcs();

  auto add_kink_sites = [&](MoveKind kind) {
    for (ArcId a : arcs) {
      for (Kink k : {Kink::Left, Kink::Right}) {
        MoveSite m = r1_add_site(a, -1, k);
        m.kind = kind;
        sites.push_back(m);
      }
    }
    for (int i = 0; i < d.unknotted_loops(); ++i) {
      for (Kink k : {Kink::Left, Kink::Right}) {
        MoveSite m = r1_add_site(0, d.traced_component_count() + i, k);
        m.kind = kind;
        sites.push_back(m);
      }
    }
  };

  if (kinds & movekinds::R1Add) add_kink_sites(MoveKind::R1Add);
  if (kinds & movekinds::R1Remove) {
    for (int k = 0; k < d.crossing_count(); ++k) {
      if (kink_at(d, k)) {
        MoveSite m;
        m.kind = MoveKind::R1Remove;
        m.crossing = k;
        m.kink = d.sign(k) > 0 ? Kink::Right : Kink::Left;
        sites.push_back(m);
      }
    }
  }
  if (kinds & movekinds::R2Add) {
    for (ArcId x : arcs) {
      for (ArcId y : arcs) {
        if (x == y) continue;
        for (int side : {+1, -1}) {
          for (bool anti : {false, true}) {
            MoveSite m;
            m.kind = MoveKind::R2Add;
            m.arc = x;
            m.arc2 = y;
            m.side = side;
            m.anti = anti;
            sites.push_back(m);
          }
        }
      }
    }
  }
  if (kinds & movekinds::R2Remove) {
    for (int k1 = 0; k1 < d.crossing_count(); ++k1) {
      for (int k2 = k1 + 1; k2 < d.crossing_count(); ++k2) {
        for (ArcId p : {d.over_in(k1), d.over_out(k1)}) {
          for (ArcId q : {d.under_in(k1), d.under_out(k1)}) {
            if (auto b = bigon_at(d, k1, k2, p, q)) {
              MoveSite m;
              m.kind = MoveKind::R2Remove;
              m.crossing = k1;
              m.crossing2 = k2;
              m.arc = p;
              m.arc2 = q;
              sites.push_back(m);
            }
          }
        }
      }
    }
  }
  if (kinds & movekinds::R3) {
    // triangle: arc x over-over between P and Q, arc z under-under between
    // Q and R, arc y under at P and over at R.
    for (ArcId x : arcs) {
      const ArcEnds& xe = d.arc_ends(x);
      bool x_over = xe.head_slot != 0 && xe.head_slot != 2 && xe.tail_slot != 0 &&
                    xe.tail_slot != 2;
      if (!x_over || xe.head_crossing == xe.tail_crossing) continue;
      for (ArcId z : arcs) {
        const ArcEnds& ze = d.arc_ends(z);
        if (!(ze.head_slot == 0 && ze.tail_slot == 2)) continue;
        if (ze.head_crossing == ze.tail_crossing) continue;
        for (int q_cand : {ze.head_crossing, ze.tail_crossing}) {
          if (q_cand != xe.head_crossing && q_cand != xe.tail_crossing) continue;
          int P = q_cand == xe.head_crossing ? xe.tail_crossing : xe.head_crossing;
          int R = q_cand == ze.head_crossing ? ze.tail_crossing : ze.head_crossing;
          if (P == R) continue;
          for (ArcId y : {d.under_in(P), d.under_out(P)}) {
            const ArcEnds& ye = d.arc_ends(y);
            bool fits = false;
            if (ye.head_crossing == P && ye.head_slot == 0) {
              fits = ye.tail_crossing == R && ye.tail_slot != 0 && ye.tail_slot != 2;
            } else if (ye.tail_crossing == P && ye.tail_slot == 2) {
              fits = ye.head_crossing == R && ye.head_slot != 0 && ye.head_slot != 2;
            }
            if (!fits) continue;
            MoveSite m;
            m.kind = MoveKind::R3;
            m.crossing = P;
            m.crossing2 = q_cand;
            m.crossing3 = R;
            m.mid_over = x;
            m.mid_mixed = y;
            m.mid_under = z;
            sites.push_back(m);
          }
        }
      }
    }
  }
  if (kinds & movekinds::FR1Add) add_kink_sites(MoveKind::FR1Add);
  if (kinds & movekinds::FR1Remove) {
    for (int k1 = 0; k1 < d.crossing_count(); ++k1) {
      auto kink1 = kink_at(d, k1);
      if (!kink1) continue;
      const ArcEnds& e = d.arc_ends(kink1->out);
      int k2 = e.head_crossing;
      if (k2 == k1) continue;
      auto kink2 = kink_at(d, k2);
      if (!kink2 || kink2->in != kink1->out) continue;
      if (d.sign(k1) == d.sign(k2)) continue;
      MoveSite m;
      m.kind = MoveKind::FR1Remove;
      m.crossing = k1;
      m.crossing2 = k2;
      sites.push_back(m);
    }
  }

  auto key = [](const MoveSite& m) {
    return std::make_tuple(static_cast<int>(m.kind), m.arc, m.arc2, m.loop_index, m.side,
                           static_cast<int>(m.anti), static_cast<int>(m.kink), m.crossing,
                           m.crossing2, m.crossing3, m.mid_over, m.mid_mixed, m.mid_under);
  };
  std::sort(sites.begin(), sites.end(),
            [&](const MoveSite& a, const MoveSite& b) { return key(a) < key(b); });
  return sites;
}

// ---- application -------------------------------------------------------

MoveOutcome apply_move_ex(const LinkDiagram& d, const MoveSite& m) {
  switch (m.kind) {
    case MoveKind::R1Add: {
      DiagramData data = data_of(d);
      int crossing = do_r1_add(&data, d, m);
      MoveSite inv;
      inv.kind = MoveKind::R1Remove;
      inv.crossing = crossing;
      inv.kink = m.kink;
      return {build(std::move(data)), inv};
    }
    case MoveKind::R1Remove: {
      auto kink = kink_at(d, m.crossing);
      if (!kink) throw Error(ErrorCode::StaleSite, "crossing is not a kink");
      LinkDiagram out = build(do_r1_remove(d, m.crossing));
      MoveSite inv;
      inv.kind = MoveKind::R1Add;
      inv.kink = d.sign(m.crossing) > 0 ? Kink::Right : Kink::Left;
      if (kink->in == kink->out) {
        inv.arc = 0;
        inv.loop_index = out.component_count() - 1;
      } else {
        inv.arc = std::min(kink->in, kink->out);
      }
      return {std::move(out), inv};
    }
    case MoveKind::R2Add: {
      if (m.arc == m.arc2 || !d.has_arc(m.arc) || !d.has_arc(m.arc2)) {
        throw Error(ErrorCode::StaleSite, "bad arc pair for a push move");
      }
      DiagramData data = data_of(d);
      const ArcId x = m.arc, y = m.arc2;
      const ArcId base = max_label(d);
      const ArcId xm = base + 1, x2 = base + 2, ym = base + 3, y2 = base + 4;
      const int eps = m.side >= 0 ? +1 : -1;
      repoint_head(&data, d, x, x2);
      repoint_head(&data, d, y, y2);
      const int first = static_cast<int>(data.crossings.size());
      if (!m.anti) {
        emit(&data, y, ym, x, xm, eps);  // both strands enter here
        emit(&data, ym, y2, xm, x2, -eps);
      } else {
        emit(&data, ym, y2, x, xm, eps);  // under strand runs the other way
        emit(&data, y, ym, xm, x2, -eps);
      }
      MoveSite inv;
      inv.kind = MoveKind::R2Remove;
      inv.crossing = first;
      inv.crossing2 = first + 1;
      inv.arc = xm;
      inv.arc2 = ym;
      return {build(std::move(data)), inv};
    }
    case MoveKind::R2Remove: {
      auto b = bigon_at(d, m.crossing, m.crossing2, m.arc, m.arc2);
      if (!b) throw Error(ErrorCode::StaleSite, "no removable bigon at the named crossings");
      DiagramData data =
          splice_out(d, {m.crossing, m.crossing2}, {{b->o_in, b->o_out}, {b->u_in, b->u_out}});
      MoveSite inv;
      inv.kind = MoveKind::R2Add;
      inv.arc = std::min(b->o_in, b->o_out);
      inv.arc2 = std::min(b->u_in, b->u_out);
      inv.side = b->eps_first;
      inv.anti = b->anti;
      return {build(std::move(data)), inv};
    }
    case MoveKind::R3: {
      auto sites = enumerate_moves(d, movekinds::R3);
      if (std::find(sites.begin(), sites.end(), m) == sites.end()) {
        throw Error(ErrorCode::StaleSite, "no such triangle slide");
      }
      DiagramData data = data_of(d);
      // Along the mixed strand the order of P and R swaps; along the under
      // strand the order of Q and R swaps. Only labels move, slots stay, so
      // every crossing keeps its sign.
      auto swap_strand = [&](ArcId mid, int k_a, int a_in_slot, int a_out_slot, int k_b,
                             int b_in_slot, int b_out_slot) {
        const ArcEnds& e = d.arc_ends(mid);
        if (e.tail_crossing == k_a) {
          // mid currently runs k_a -> k_b; afterwards k_b -> k_a
          ArcId ext_in = d.crossings()[k_a].arc[a_in_slot];
          ArcId ext_out = d.crossings()[k_b].arc[b_out_slot];
          data.crossings[k_a].arc[a_in_slot] = mid;
          data.crossings[k_a].arc[a_out_slot] = ext_out;
          data.crossings[k_b].arc[b_in_slot] = ext_in;
          data.crossings[k_b].arc[b_out_slot] = mid;
        } else {
          ArcId ext_in = d.crossings()[k_b].arc[b_in_slot];
          ArcId ext_out = d.crossings()[k_a].arc[a_out_slot];
          data.crossings[k_b].arc[b_in_slot] = mid;
          data.crossings[k_b].arc[b_out_slot] = ext_out;
          data.crossings[k_a].arc[a_in_slot] = ext_in;
          data.crossings[k_a].arc[a_out_slot] = mid;
        }
      };
      const int P = m.crossing, R = m.crossing3;
      swap_strand(m.mid_mixed, P, 0, 2, R, d.over_in_pos(R), d.over_in_pos(R) ^ 2);
      swap_strand(m.mid_under, m.crossing2, 0, 2, R, 0, 2);
      return {build(std::move(data)), m};
    }
    case MoveKind::FR1Add: {
      MoveSite first = r1_add_site(m.arc, m.loop_index, m.kink);
      MoveOutcome step1 = apply_move_ex(d, first);
      auto kp = kink_at(step1.diagram, step1.diagram.crossing_count() - 1);
      MoveSite second = r1_add_site(kp->out, -1, m.kink == Kink::Right ? Kink::Left : Kink::Right);
      MoveOutcome step2 = apply_move_ex(step1.diagram, second);
      MoveSite inv;
      inv.kind = MoveKind::FR1Remove;
      inv.crossing = step1.diagram.crossing_count() - 1;
      inv.crossing2 = step2.diagram.crossing_count() - 1;
      return {std::move(step2.diagram), inv};
    }
    case MoveKind::FR1Remove: {
      auto kink1 = kink_at(d, m.crossing);
      auto kink2 = kink_at(d, m.crossing2);
      if (!kink1 || !kink2 || kink1->out != kink2->in ||
          d.sign(m.crossing) == d.sign(m.crossing2)) {
        throw Error(ErrorCode::StaleSite, "no adjacent opposite kinks at the named crossings");
      }
      LinkDiagram mid = build(do_r1_remove(d, m.crossing2));
      int k1 = m.crossing > m.crossing2 ? m.crossing - 1 : m.crossing;
      LinkDiagram out = build(do_r1_remove(mid, k1));
      MoveSite inv;
      inv.kind = MoveKind::FR1Add;
      inv.kink = d.sign(m.crossing) > 0 ? Kink::Right : Kink::Left;
      if (kink1->in == kink2->out) {
        inv.arc = 0;
        inv.loop_index = out.component_count() - 1;
      } else {
        inv.arc = std::min({kink1->in, kink1->out, kink2->out});
      }
      return {std::move(out), inv};
    }
  }
  throw Error(ErrorCode::StaleSite, "unknown move kind");
}

LinkDiagram apply_move(const LinkDiagram& d, const MoveSite& m) {
  return apply_move_ex(d, m).diagram;
}

// ---- framing realization -----------------------------------------------

LinkDiagram realize_framing(const FramedLink& fl) {
  const LinkDiagram& d0 = fl.diagram;
  if (static_cast<int>(fl.framings.size()) != d0.component_count()) {
    throw Error(ErrorCode::InvalidFormat, "framing count does not match component count");
  }
  LinkDiagram d = d0;
  std::vector<ArcId> markers;
  for (const auto& cycle : d0.arc_cycles()) markers.push_back(cycle.front());

  for (int c = 0; c < d0.component_count(); ++c) {
    const std::int64_t target = fl.framings[c];
    std::int64_t current = 0;
    ArcId marker = 0;
    if (c < d0.traced_component_count()) {
      marker = markers[c];
      current = writhe(d, d.component_of_arc(marker));
    }
    while (current != target) {
      Kink k = target > current ? Kink::Right : Kink::Left;
      // unknotted loops are interchangeable: kink any remaining one
      int loop_index = d.component_count() - 1;
      d = apply_move(d, r1_add_site(marker, marker == 0 ? loop_index : -1, k));
      if (marker == 0) {
        marker = kink_at(d, d.crossing_count() - 1)->in;  // keep kinking this strand
      }
      current += kink_sign(k);
    }
  }
  return d;
}

// ---- bounded bidirectional search ---------------------------------------

namespace {

struct Node {
  LinkDiagram diagram;
  int parent = -1;
  MoveSite move_from_parent;   // applied to the parent yields this node
  MoveSite inverse_to_parent;  // applied to this node yields the parent
  int depth = 0;
};

struct Side {
  std::vector<Node> arena;
  std::unordered_map<std::string, int> visited;  // canonical pd -> node index
  std::deque<int> frontier;
};

std::vector<std::int64_t> writhe_multiset(const LinkDiagram& d) {
  std::vector<std::int64_t> w;
  for (int c = 0; c < d.component_count(); ++c) w.push_back(writhe(d, c));
  std::sort(w.begin(), w.end());
  return w;
}

std::vector<std::int64_t> linking_multiset(const LinkDiagram& d) {
  std::vector<std::int64_t> l;
  for (int i = 0; i < d.component_count(); ++i) {
    for (int j = i + 1; j < d.component_count(); ++j) {
      l.push_back(linking_number(d, i, j));
    }
  }
  std::sort(l.begin(), l.end());
  return l;
}

// Linking matrix under the canonical component order, so relabel-equivalent
// diagrams compare equal.
LinkingMatrix canonical_matrix(const LinkDiagram& d) {
  std::vector<int> order = canonical_component_order(d);
  const int n = d.component_count();
  LinkingMatrix m = LinkingMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = writhe(d, order[i]);
    for (int j = i + 1; j < n; ++j) {
      m(i, j) = m(j, i) = linking_number(d, order[i], order[j]);
    }
  }
  return m;
}

std::vector<PathStep> path_from_root(const Side& side, int node) {
  std::vector<PathStep> steps;
  int cur = node;
  while (side.arena[cur].parent >= 0) {
    int parent = side.arena[cur].parent;
    steps.push_back({to_pd_text(side.arena[parent].diagram), side.arena[cur].move_from_parent});
    cur = parent;
  }
  std::reverse(steps.begin(), steps.end());
  return steps;
}

std::vector<PathStep> path_to_root(const Side& side, int node) {
  std::vector<PathStep> steps;
  int cur = node;
  while (side.arena[cur].parent >= 0) {
    steps.push_back({to_pd_text(side.arena[cur].diagram), side.arena[cur].inverse_to_parent});
    cur = side.arena[cur].parent;
  }
  return steps;
}

}  // namespace

EquivResult framed_equivalent(const LinkDiagram& d1, const LinkDiagram& d2, SearchBudget budget,
                              int threads) {
  EquivResult result;
  if (budget.max_crossings < 0) {
    budget.max_crossings = std::max(d1.crossing_count(), d2.crossing_count()) + 4;
  }
  if (threads < 1) threads = 1;

  if (d1.component_count() != d2.component_count()) {
    result.reason = "component count obstruction";
    return result;
  }
  if (writhe_multiset(d1) != writhe_multiset(d2)) {
    result.reason = "writhe obstruction";
    return result;
  }
  if (linking_multiset(d1) != linking_multiset(d2)) {
    result.reason = "linking obstruction";
    return result;
  }

  const std::string c1 = serialize_pd(d1), c2 = serialize_pd(d2);
  if (c1 == c2 && canonical_matrix(d1) == canonical_matrix(d2)) {
    result.equivalent = true;
    return result;
  }

  Side fwd, bwd;
  fwd.arena.push_back({d1, -1, {}, {}, 0});
  fwd.visited[c1] = 0;
  fwd.frontier.push_back(0);
  bwd.arena.push_back({d2, -1, {}, {}, 0});
  bwd.visited[c2] = 0;
  bwd.frontier.push_back(0);

  auto join = [&](int fwd_node, int bwd_node) {
    result.equivalent = true;
    result.path = path_from_root(fwd, fwd_node);
    std::vector<PathStep> back = path_to_root(bwd, bwd_node);
    result.path.insert(result.path.end(), back.begin(), back.end());
  };

  int combined_depth = 0;
  bool states_exhausted = false;
  while ((!fwd.frontier.empty() || !bwd.frontier.empty()) && combined_depth < budget.max_depth &&
         !states_exhausted) {
    Side* expand = &fwd;
    Side* other = &bwd;
    if (fwd.frontier.empty() ||
        (!bwd.frontier.empty() && bwd.frontier.size() < fwd.frontier.size())) {
      expand = &bwd;
      other = &fwd;
    }
    ++combined_depth;

    std::vector<int> layer(expand->frontier.begin(), expand->frontier.end());
    expand->frontier.clear();
    // lower-crossing diagrams first, then discovery order
    std::stable_sort(layer.begin(), layer.end(), [&](int a, int b) {
      return expand->arena[a].diagram.crossing_count() <
             expand->arena[b].diagram.crossing_count();
    });

    struct Successor {
      MoveSite move;
      LinkDiagram diagram;
      MoveSite inverse;
      std::string canon;
    };
    std::vector<std::vector<Successor>> successors(layer.size());
    auto expand_node = [&](size_t li) {
      const LinkDiagram& cur = expand->arena[layer[li]].diagram;
      // drop insertion kinds that would overrun the crossing budget
      unsigned kinds = movekinds::Framed;
      if (cur.crossing_count() + 2 > budget.max_crossings) {
        kinds &= ~(movekinds::R2Add | movekinds::FR1Add);
      }
      for (const MoveSite& mv : enumerate_moves(cur, kinds)) {
        MoveOutcome out = apply_move_ex(cur, mv);
        if (out.diagram.crossing_count() > budget.max_crossings) continue;
        std::string canon = serialize_pd(out.diagram);
        successors[li].push_back({mv, std::move(out.diagram), out.inverse, std::move(canon)});
      }
    };
    if (threads == 1 || layer.size() <= 1) {
      for (size_t i = 0; i < layer.size(); ++i) expand_node(i);
    } else {
      std::vector<std::thread> pool;
      std::atomic<size_t> next_index{0};
      for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
          while (true) {
            size_t i = next_index.fetch_add(1);
            if (i >= layer.size()) return;
            expand_node(i);
          }
        });
      }
      for (auto& th : pool) th.join();
    }

    // deterministic sequential merge; the visited maps are only touched here
    for (size_t li = 0; li < layer.size() && !states_exhausted; ++li) {
      result.stats.expanded += 1;
      for (Successor& s : successors[li]) {
        result.stats.generated += 1;
        if (static_cast<std::int64_t>(fwd.visited.size() + bwd.visited.size()) >=
            budget.max_states) {
          states_exhausted = true;
          break;
        }
        if (expand->visited.count(s.canon)) continue;
        int idx = static_cast<int>(expand->arena.size());
        expand->arena.push_back({std::move(s.diagram), layer[li], s.move, s.inverse,
                                 expand->arena[layer[li]].depth + 1});
        expand->visited[s.canon] = idx;
        expand->frontier.push_back(idx);
        auto hit = other->visited.find(s.canon);
        if (hit != other->visited.end()) {
          // PD text drops the orientation of components that never pass
          // under; rule out a false meet through the linking data
          if (canonical_matrix(expand->arena[idx].diagram) ==
              canonical_matrix(other->arena[hit->second].diagram)) {
            if (expand == &fwd) {
              join(idx, hit->second);
            } else {
              join(hit->second, idx);
            }
            result.stats.visited =
                static_cast<std::int64_t>(fwd.visited.size() + bwd.visited.size());
            return result;
          }
        }
      }
    }
  }

  result.stats.visited = static_cast<std::int64_t>(fwd.visited.size() + bwd.visited.size());
  result.reason = states_exhausted ? "state budget exhausted" : "budget exhausted";
  return result;
}

}  // namespace framelink
