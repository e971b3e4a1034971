#include "framelink/codecs.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace framelink {

namespace {

struct Cursor {
  std::string_view text;
  size_t pos = 0;
  int line = 1;
  int col = 1;

  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  void advance() {
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }
  void skip_noise() {
    while (!done()) {
      char c = peek();
      if (c == '#') {
        while (!done() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
        advance();
      } else {
        break;
      }
    }
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(ErrorCode::SyntaxError, what + " at " + std::to_string(line) + ":" +
                                                 std::to_string(col),
                     line, col);
  }
  int read_int(bool allow_sign) {
    skip_noise();
    if (done()) fail("expected integer, got end of input");
    size_t start = pos;
    if (allow_sign && (peek() == '-' || peek() == '+')) advance();
    size_t digits = 0;
    while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) {
      advance();
      ++digits;
    }
    if (digits == 0) fail("expected integer");
    return std::stoi(std::string(text.substr(start, pos - start)));
  }
  void expect(char c) {
    skip_noise();
    if (done() || peek() != c) fail(std::string("expected '") + c + "'");
    advance();
  }
};

}  // namespace

LinkDiagram parse_pd(std::string_view text) {
  Cursor cur{text};
  std::vector<Crossing> crossings;
  int loops = 0;
  while (true) {
    cur.skip_noise();
    if (cur.done()) break;
    char c = cur.peek();
    if (c == 'U' || c == 'u') {
      cur.advance();
      ++loops;
      continue;
    }
    if (c != 'X' && c != 'x') cur.fail("expected 'X' or 'U'");
    cur.advance();
    cur.skip_noise();
    if (cur.done()) cur.fail("expected '[' or '('");
    char open = cur.peek();
    if (open != '[' && open != '(') cur.fail("expected '[' or '('");
    cur.advance();
    Crossing x;
    for (int s = 0; s < 4; ++s) {
      int v = cur.read_int(false);
      if (v <= 0) cur.fail("arc labels must be positive");
      x.arc[s] = v;
    }
    cur.expect(open == '[' ? ']' : ')');
    crossings.push_back(x);
  }
  ValidationReport r = validate(crossings, loops);
  if (!r.ok) {
    ErrorCode code = r.code == ErrorCode::DanglingArc ? ErrorCode::ArcCountError : r.code;
    throw Error(code, r.message, r.crossing);
  }
  return LinkDiagram::make(std::move(crossings), loops);
}

namespace {

using Quad = std::array<ArcId, 4>;

// Relabels per one choice of component order, per-component starting arcs
// and walk directions; returns the sorted crossing list.
std::vector<Quad> relabel_candidate(const LinkDiagram& d, const std::vector<int>& comp_order,
                                    const std::vector<size_t>& rotations,
                                    const std::vector<bool>& backwards) {
  std::unordered_map<ArcId, ArcId> relabel;
  ArcId next = 1;
  for (size_t i = 0; i < comp_order.size(); ++i) {
    const auto& cycle = d.arc_cycles()[comp_order[i]];
    const size_t n = cycle.size();
    size_t rot = rotations[i];
    for (size_t j = 0; j < n; ++j) {
      size_t pos = backwards[i] ? (rot + n - j) % n : (rot + j) % n;
      relabel[cycle[pos]] = next++;
    }
  }
  std::vector<Quad> quads;
  quads.reserve(d.crossings().size());
  for (const Crossing& x : d.crossings()) {
    Quad q;
    for (int s = 0; s < 4; ++s) q[s] = relabel.at(x.arc[s]);
    quads.push_back(q);
  }
  std::sort(quads.begin(), quads.end());
  return quads;
}

struct CanonicalForm {
  std::vector<Quad> quads;
  std::vector<int> comp_order;  // old component id per canonical position
};

CanonicalForm canonical_form(const LinkDiagram& d) {
  const auto& cycles = d.arc_cycles();
  const int m = static_cast<int>(cycles.size());
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);

  // A component that never passes under anything carries no orientation in
  // its quadruples; walk those in both directions so the form cannot depend
  // on the stored tie-break.
  std::vector<bool> free_direction(m, true);
  for (int k = 0; k < d.crossing_count(); ++k) {
    free_direction[d.under_component(k)] = false;
  }

  // candidate count guard: orders x rotations x free directions
  double count = 1;
  for (int i = 2; i <= m; ++i) count *= i;
  for (int c = 0; c < m; ++c) {
    count *= static_cast<double>(cycles[c].size()) * (free_direction[c] ? 2 : 1);
  }
  if (count > 2e6) {
    throw Error(ErrorCode::InvalidFormat, "diagram too large to canonicalize");
  }

  CanonicalForm best;
  bool have_best = false;
  std::sort(order.begin(), order.end());
  do {
    std::vector<size_t> rotations(m, 0);
    std::vector<bool> backwards(m, false);
    while (true) {
      std::vector<Quad> cand = relabel_candidate(d, order, rotations, backwards);
      if (!have_best || cand < best.quads) {
        best.quads = std::move(cand);
        best.comp_order = order;
        have_best = true;
      }
      // odometer over rotations, then directions of the free components
      int i = m - 1;
      for (; i >= 0; --i) {
        if (++rotations[i] < cycles[order[i]].size()) break;
        rotations[i] = 0;
      }
      if (i >= 0) continue;
      for (i = m - 1; i >= 0; --i) {
        if (free_direction[order[i]] && !backwards[i]) {
          backwards[i] = true;
          break;
        }
        backwards[i] = false;
      }
      if (i < 0) break;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  if (!have_best) best.comp_order.clear();
  return best;
}

}  // namespace

std::string serialize_pd(const LinkDiagram& d) {
  std::ostringstream out;
  bool first = true;
  if (!d.crossings().empty()) {
    for (const Quad& q : canonical_form(d).quads) {
      if (!first) out << ' ';
      first = false;
      out << "X[" << q[0] << ',' << q[1] << ',' << q[2] << ',' << q[3] << ']';
    }
  }
  for (int i = 0; i < d.unknotted_loops(); ++i) {
    if (!first) out << ' ';
    first = false;
    out << 'U';
  }
  return out.str();
}

std::string to_pd_text(const LinkDiagram& d) {
  std::ostringstream out;
  bool first = true;
  for (const Crossing& x : d.crossings()) {
    if (!first) out << ' ';
    first = false;
    out << "X[" << x.arc[0] << ',' << x.arc[1] << ',' << x.arc[2] << ',' << x.arc[3] << ']';
  }
  for (int i = 0; i < d.unknotted_loops(); ++i) {
    if (!first) out << ' ';
    first = false;
    out << 'U';
  }
  return out.str();
}

// The permutation taking this diagram's component ids to the component
// order of its canonical serialization (unknotted loops stay in place).
std::vector<int> canonical_component_order(const LinkDiagram& d) {
  std::vector<int> order = canonical_form(d).comp_order;
  for (int i = 0; i < d.unknotted_loops(); ++i) {
    order.push_back(d.traced_component_count() + i);
  }
  return order;
}

GaussCode parse_gauss(std::string_view text) {
  GaussCode g;
  std::vector<GaussVisit> current;
  bool saw_any = false;
  Cursor cur{text};
  while (true) {
    cur.skip_noise();
    if (cur.done()) break;
    saw_any = true;
    char c = cur.peek();
    if (c == '/' || c == ';') {
      cur.advance();
      g.components.push_back(std::move(current));
      current.clear();
      continue;
    }
    if (c == 'U' || c == 'u') {
      // lone 'U' token: crossing-free component; 'U<digit>' is a visit
      size_t save = cur.pos;
      cur.advance();
      if (cur.done() || !std::isdigit(static_cast<unsigned char>(cur.peek()))) {
        continue;  // empty word stays empty
      }
      cur.pos = save;  // rewind: it is a visit after all
      cur.col -= 1;
      c = 'U';
    }
    bool over;
    if (c == 'O' || c == 'o') {
      over = true;
    } else if (c == 'U' || c == 'u') {
      over = false;
    } else {
      cur.fail("expected 'O', 'U' or '/'");
    }
    cur.advance();
    int idx = cur.read_int(false);
    cur.skip_noise();
    if (cur.done() || (cur.peek() != '+' && cur.peek() != '-')) cur.fail("expected '+' or '-'");
    int sign = cur.peek() == '+' ? +1 : -1;
    cur.advance();
    current.push_back({over, idx, sign});
  }
  if (saw_any || !current.empty()) g.components.push_back(std::move(current));
  return g;
}

std::string gauss_to_text(const GaussCode& g) {
  std::ostringstream out;
  for (size_t c = 0; c < g.components.size(); ++c) {
    if (c > 0) out << " / ";
    if (g.components[c].empty()) {
      out << 'U';
      continue;
    }
    for (size_t i = 0; i < g.components[c].size(); ++i) {
      const GaussVisit& v = g.components[c][i];
      if (i > 0) out << ' ';
      out << (v.over ? 'O' : 'U') << v.crossing << (v.sign > 0 ? '+' : '-');
    }
  }
  return out.str();
}

LinkDiagram gauss_to_diagram(const GaussCode& g) {
  struct VisitRef {
    int component;
    int index;  // position in the component word
    bool over;
    int sign;
  };
  std::map<int, std::vector<VisitRef>> by_crossing;
  int loops = 0;
  std::vector<const std::vector<GaussVisit>*> words;
  for (const auto& word : g.components) {
    if (word.empty()) {
      ++loops;
      continue;
    }
    words.push_back(&word);
  }
  for (size_t c = 0; c < words.size(); ++c) {
    for (size_t i = 0; i < words[c]->size(); ++i) {
      const GaussVisit& v = (*words[c])[i];
      by_crossing[v.crossing].push_back(
          {static_cast<int>(c), static_cast<int>(i), v.over, v.sign});
    }
  }

  // arc after visit i of component c is offset(c) + i + 1; the arc entering
  // visit i is the previous one, cyclically.
  std::vector<int> offset(words.size() + 1, 0);
  for (size_t c = 0; c < words.size(); ++c) {
    offset[c + 1] = offset[c] + static_cast<int>(words[c]->size());
  }
  auto arc_out = [&](const VisitRef& v) { return offset[v.component] + v.index + 1; };
  auto arc_in = [&](const VisitRef& v) {
    int n = static_cast<int>(words[v.component]->size());
    return offset[v.component] + (v.index + n - 1) % n + 1;
  };

  std::vector<Crossing> crossings;
  std::vector<std::uint8_t> over_in;
  for (const auto& [idx, visits] : by_crossing) {
    if (visits.size() != 2 || visits[0].over == visits[1].over) {
      throw Error(ErrorCode::UnpairedCrossing,
                  "crossing " + std::to_string(idx) + " needs exactly one O and one U visit");
    }
    if (visits[0].sign != visits[1].sign) {
      throw Error(ErrorCode::SignMismatch,
                  "crossing " + std::to_string(idx) + " visited with conflicting signs");
    }
    const VisitRef& o = visits[0].over ? visits[0] : visits[1];
    const VisitRef& u = visits[0].over ? visits[1] : visits[0];
    Crossing x;
    x.arc[0] = arc_in(u);
    x.arc[2] = arc_out(u);
    if (visits[0].sign > 0) {
      x.arc[3] = arc_in(o);
      x.arc[1] = arc_out(o);
      over_in.push_back(3);
    } else {
      x.arc[1] = arc_in(o);
      x.arc[3] = arc_out(o);
      over_in.push_back(1);
    }
    crossings.push_back(x);
  }
  return LinkDiagram::make_oriented(std::move(crossings), std::move(over_in), loops);
}

GaussCode diagram_to_gauss(const LinkDiagram& d) {
  GaussCode g;
  int next_number = 1;
  std::map<int, int> numbers;  // crossing index -> 1-based first-visit order
  for (const auto& cycle : d.arc_cycles()) {
    std::vector<GaussVisit> word;
    for (ArcId a : cycle) {
      // the passage at the end of arc a
      const ArcEnds& e = d.arc_ends(a);
      int k = e.head_crossing;
      if (!numbers.count(k)) numbers[k] = next_number++;
      bool over = e.head_slot != 0;
      word.push_back({over, numbers[k], d.sign(k)});
    }
    g.components.push_back(std::move(word));
  }
  for (int i = 0; i < d.unknotted_loops(); ++i) g.components.push_back({});
  return g;
}

DtCode parse_dt(std::string_view text) {
  DtCode t;
  Cursor cur{text};
  while (true) {
    cur.skip_noise();
    if (cur.done()) break;
    if (cur.peek() == '/' || cur.peek() == ';') {
      throw Error(ErrorCode::UnsupportedCode, "multi-component DT codes are not supported");
    }
    t.entries.push_back(cur.read_int(true));
  }
  return t;
}

std::string dt_to_text(const DtCode& t) {
  std::ostringstream out;
  for (size_t i = 0; i < t.entries.size(); ++i) {
    if (i > 0) out << ' ';
    out << t.entries[i];
  }
  return out.str();
}

DtDiagram dt_to_diagram(const DtCode& t) {
  const int n = static_cast<int>(t.entries.size());
  if (n == 0) return {LinkDiagram(), false};

  // entries pair odd passage 2i-1 with the (signed) even passage.
  std::vector<int> partner(2 * n + 1, 0);
  std::vector<bool> even_over(2 * n + 1, false);
  std::vector<bool> seen(2 * n + 1, false);
  for (int i = 0; i < n; ++i) {
    int e = t.entries[i];
    int ae = std::abs(e);
    if (ae < 2 || ae > 2 * n || ae % 2 != 0 || seen[ae]) {
      throw Error(ErrorCode::InvalidPairing,
                  "DT entries must be a signed permutation of 2,4,...,2n");
    }
    seen[ae] = true;
    int odd = 2 * i + 1;
    partner[odd] = ae;
    partner[ae] = odd;
    even_over[ae] = e < 0;
  }

  // One visit per passage label; crossing i holds passages (2i+1, |entry|).
  GaussCode g;
  std::vector<GaussVisit> word;
  for (int p = 1; p <= 2 * n; ++p) {
    int crossing = (p % 2 == 1) ? (p + 1) / 2 : (partner[p] + 1) / 2;
    bool over = (p % 2 == 0) ? even_over[p] : !even_over[partner[p]];
    word.push_back({over, crossing, +1});  // chirality fixed: all positive
  }
  g.components.push_back(std::move(word));
  return {gauss_to_diagram(g), true};
}

DtCode diagram_to_dt(const LinkDiagram& d) {
  if (d.unknotted_loops() != 0 || d.traced_component_count() != 1) {
    throw Error(ErrorCode::UnsupportedCode, "DT extraction needs a single crossed component");
  }
  const auto& cycle = d.arc_cycles()[0];
  const int n = d.crossing_count();
  // passage p (1-based) is the one at the start of the p-th arc from the
  // minimal arc, i.e. the head passage of the previous arc.
  std::map<int, std::vector<int>> passages_of_crossing;
  std::vector<bool> over_at(2 * n + 1, false);
  for (int p = 1; p <= 2 * n; ++p) {
    ArcId prev = cycle[(p - 2 + 2 * n) % (2 * n)];
    const ArcEnds& e = d.arc_ends(prev);
    passages_of_crossing[e.head_crossing].push_back(p);
    over_at[p] = e.head_slot != 0;
  }
  std::vector<int> entries(n, 0);
  for (const auto& [k, ps] : passages_of_crossing) {
    if (ps.size() != 2 || (ps[0] % 2) == (ps[1] % 2)) {
      throw Error(ErrorCode::InvalidPairing,
                  "diagram has no odd/even passage pairing at crossing " + std::to_string(k));
    }
    int odd = ps[0] % 2 == 1 ? ps[0] : ps[1];
    int even = ps[0] % 2 == 0 ? ps[0] : ps[1];
    entries[(odd - 1) / 2] = over_at[even] ? -even : even;
  }
  return {entries};
}

FramedLink read_framed_link_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidFormat, std::string("bad framed-link JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("pd") || !j["pd"].is_string()) {
    throw Error(ErrorCode::InvalidFormat, "framed-link JSON needs a \"pd\" string");
  }
  LinkDiagram d = parse_pd(j["pd"].get<std::string>());
  if (!j.contains("framings")) return blackboard_framing(d);
  if (!j["framings"].is_array()) {
    throw Error(ErrorCode::InvalidFormat, "\"framings\" must be an array of integers");
  }
  std::vector<std::int64_t> framings;
  for (const auto& v : j["framings"]) {
    if (!v.is_number_integer()) {
      throw Error(ErrorCode::InvalidFormat, "\"framings\" must be an array of integers");
    }
    framings.push_back(v.get<std::int64_t>());
  }
  if (static_cast<int>(framings.size()) != d.component_count()) {
    throw Error(ErrorCode::InvalidFormat, "framing count does not match component count");
  }
  return {std::move(d), std::move(framings)};
}

std::string write_framed_link_json(const FramedLink& fl) {
  if (static_cast<int>(fl.framings.size()) != fl.diagram.component_count()) {
    throw Error(ErrorCode::InvalidFormat, "framing count does not match component count");
  }
  // Canonicalization may reorder components; framings follow.
  std::vector<int> order = canonical_component_order(fl.diagram);
  std::vector<std::int64_t> framings;
  for (int old_id : order) framings.push_back(fl.framings[old_id]);
  nlohmann::ordered_json j;
  j["pd"] = serialize_pd(fl.diagram);
  j["framings"] = framings;
  return j.dump();
}

}  // namespace framelink
