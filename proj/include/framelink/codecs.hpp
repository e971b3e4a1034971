#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "framelink/diagram.hpp"
#include "framelink/invariants.hpp"

namespace framelink {

// PD text: whitespace/comma separated X[a,b,c,d] terms (X(...) accepted on
// input) plus bare U markers for crossing-free unknots. '#' starts a comment
// running to end of line. The empty string is the empty link.
LinkDiagram parse_pd(std::string_view text);

// Canonical serialization: arcs are relabeled component-major in trace
// order starting from 1, minimizing the sorted crossing list over all
// component orders and starting arcs. Relabel-equivalent diagrams serialize
// identically, so the output doubles as a canonical-form hash key.
std::string serialize_pd(const LinkDiagram& d);

// Component order used by the canonical serialization: entry i is the
// diagram's component id that lands in canonical position i. Needed by
// anything that stores per-component data next to serialized PD text.
std::vector<int> canonical_component_order(const LinkDiagram& d);

// Verbatim PD text: the stored quadruples in order, no relabeling. Parsing
// it back reproduces the same arc labels, so recorded move sites stay valid.
std::string to_pd_text(const LinkDiagram& d);

// One visit of a component through a crossing.
struct GaussVisit {
  bool over = false;
  int crossing = 0;  // 1-based crossing index
  int sign = +1;     // crossing sign
  friend bool operator==(const GaussVisit&, const GaussVisit&) = default;
};

// Signed Gauss code: per component, the cyclic word of crossing visits.
// Crossing-free components carry an empty word.
struct GaussCode {
  std::vector<std::vector<GaussVisit>> components;
  friend bool operator==(const GaussCode&, const GaussCode&) = default;
};

// Text form: visits like O1+ / U2-, whitespace separated, components
// separated by '/'. A crossing-free component is written as 'U'.
GaussCode parse_gauss(std::string_view text);
std::string gauss_to_text(const GaussCode& g);

LinkDiagram gauss_to_diagram(const GaussCode& g);
GaussCode diagram_to_gauss(const LinkDiagram& d);

// Dowker-Thistlethwaite code of a knot (single component): the signed even
// labels paired with odd passage labels 1,3,5,...  An entry is negative when
// the even-numbered passage goes over.
struct DtCode {
  std::vector<int> entries;
  friend bool operator==(const DtCode&, const DtCode&) = default;
};

DtCode parse_dt(std::string_view text);
std::string dt_to_text(const DtCode& t);

struct DtDiagram {
  LinkDiagram diagram;
  // A DT code never pins the crossing signs of the embedding; the
  // reconstruction makes every crossing positive and flags the choice.
  bool chirality_ambiguous = false;
};

DtDiagram dt_to_diagram(const DtCode& t);
DtCode diagram_to_dt(const LinkDiagram& d);

// Framed-link JSON: {"pd": "<PD text>", "framings": [int, ...]} with
// framings in canonical component order; a missing "framings" key means the
// blackboard framing.
FramedLink read_framed_link_json(std::string_view text);
std::string write_framed_link_json(const FramedLink& fl);

}  // namespace framelink
