#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "framelink/diagram.hpp"
#include "framelink/invariants.hpp"

namespace framelink {

enum class MoveKind {
  R1Add,
  R1Remove,
  R2Add,
  R2Remove,
  R3,
  FR1Add,
  FR1Remove,
};

const char* to_string(MoveKind kind);

// Kink handedness; a right kink changes the writhe by +1, a left kink by -1.
enum class Kink { Left, Right };

inline int kink_sign(Kink k) { return k == Kink::Right ? +1 : -1; }

namespace movekinds {
constexpr unsigned R1Add = 1u << 0;
constexpr unsigned R1Remove = 1u << 1;
constexpr unsigned R2Add = 1u << 2;
constexpr unsigned R2Remove = 1u << 3;
constexpr unsigned R3 = 1u << 4;
constexpr unsigned FR1Add = 1u << 5;
constexpr unsigned FR1Remove = 1u << 6;
constexpr unsigned All = (1u << 7) - 1;
// The framed move set: writhe-preserving moves only.
constexpr unsigned Framed = R2Add | R2Remove | R3 | FR1Add | FR1Remove;
unsigned mask_of(MoveKind kind);
}  // namespace movekinds

// A concrete applicable move. Which fields matter depends on kind:
//   R1Add / FR1Add : arc (or loop_index with arc == 0), kink
//   R1Remove       : crossing (the kink crossing)
//   R2Add          : arc (over strand), arc2 (under strand), side, anti
//   R2Remove       : crossing, crossing2, arc (over arc), arc2 (under arc)
//   R3             : crossing, crossing2, crossing3 (P,Q,R) and the three
//                    triangle arcs mid_over / mid_mixed / mid_under
//   FR1Remove      : crossing, crossing2 (the two adjacent opposite kinks)
struct MoveSite {
  MoveKind kind{};
  Kink kink = Kink::Right;
  ArcId arc = 0;
  ArcId arc2 = 0;
  int loop_index = -1;
  int side = +1;      // sign of the first inserted crossing (R2Add)
  bool anti = false;  // under strand runs against the over strand (R2Add)
  int crossing = -1;
  int crossing2 = -1;
  int crossing3 = -1;
  ArcId mid_over = 0;
  ArcId mid_mixed = 0;
  ArcId mid_under = 0;

  friend bool operator==(const MoveSite&, const MoveSite&) = default;
};

// All applicable sites of the requested kinds, ordered deterministically
// (lexicographically by the anchor fields).
std::vector<MoveSite> enumerate_moves(const LinkDiagram& d, unsigned kinds = movekinds::All);

LinkDiagram apply_move(const LinkDiagram& d, const MoveSite& m);

struct MoveOutcome {
  LinkDiagram diagram;
  MoveSite inverse;  // a site on `diagram` undoing the move (up to relabeling)
};

MoveOutcome apply_move_ex(const LinkDiagram& d, const MoveSite& m);

// Returns a diagram whose per-component writhe realizes the requested
// framings as the blackboard framing, using only kink insertions.
LinkDiagram realize_framing(const FramedLink& fl);

struct SearchBudget {
  int max_crossings = -1;          // -1: max of the inputs + 4
  int max_depth = 12;              // maximum path length
  std::int64_t max_states = 50000;  // visited-state cap across both frontiers
};

struct PathStep {
  std::string pd_before;  // verbatim PD text of the diagram the move applies to
  MoveSite move;
};

struct SearchStats {
  std::int64_t expanded = 0;
  std::int64_t generated = 0;
  std::int64_t visited = 0;
};

struct EquivResult {
  bool equivalent = false;
  std::vector<PathStep> path;  // empty when the diagrams already coincide
  std::string reason;          // why the search gave up (not a disproof)
  SearchStats stats;
};

// Bounded bidirectional search over the move graph generated by the framed
// moves, deduplicating relabel-equivalent diagrams by canonical PD form.
// not_found is inconclusive, never a disproof.
EquivResult framed_equivalent(const LinkDiagram& d1, const LinkDiagram& d2,
                              SearchBudget budget = {}, int threads = 1);

}  // namespace framelink
