// framelink: framed links in the 3-sphere from the command line.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#ifdef _WIN32
#include <io.h>
#define FRAMELINK_ISATTY _isatty(_fileno(stdout))
#else
#include <unistd.h>
#define FRAMELINK_ISATTY isatty(fileno(stdout))
#endif

#include "CLI11.hpp"
#include "json.hpp"

#include "framelink/codecs.hpp"
#include "framelink/diagram.hpp"
#include "framelink/geometry.hpp"
#include "framelink/invariants.hpp"
#include "framelink/moves.hpp"
#include "framelink/surgery.hpp"
#include "framelink/torus.hpp"

namespace fl = framelink;
using nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw fl::Error(fl::ErrorCode::InvalidFormat, "cannot open " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool use_json(const std::string& format) {
  if (format == "json") return true;
  if (format == "table") return false;
  return !FRAMELINK_ISATTY;
}

// PD files hold one link per line; blank lines and comments do not count.
std::string pd_line(const std::string& text, int index) {
  std::istringstream in(text);
  std::string line;
  int seen = 0;
  while (std::getline(in, line)) {
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (seen++ == index) return line;
  }
  if (index == 0 && seen == 0) return "";  // empty file: the empty link
  throw fl::Error(fl::ErrorCode::InvalidFormat,
                  "file has " + std::to_string(seen) + " links, wanted index " +
                      std::to_string(index));
}

// Loads either PD text or framed-link JSON, deciding by the first byte.
fl::FramedLink load_link(const std::string& path, int index = 0) {
  std::string text = read_file(path);
  size_t i = text.find_first_not_of(" \t\r\n");
  if (i != std::string::npos && text[i] == '{') {
    return fl::read_framed_link_json(text);
  }
  return fl::blackboard_framing(fl::parse_pd(pd_line(text, index)));
}

ordered_json site_to_json(const fl::MoveSite& m) {
  ordered_json j;
  j["kind"] = fl::to_string(m.kind);
  switch (m.kind) {
    case fl::MoveKind::R1Add:
    case fl::MoveKind::FR1Add:
      j["handedness"] = m.kink == fl::Kink::Right ? "right" : "left";
      if (m.arc != 0) {
        j["arc"] = m.arc;
      } else {
        j["loop"] = m.loop_index;
      }
      break;
    case fl::MoveKind::R1Remove:
      j["crossing"] = m.crossing;
      j["handedness"] = m.kink == fl::Kink::Right ? "right" : "left";
      break;
    case fl::MoveKind::R2Add:
      j["over_arc"] = m.arc;
      j["under_arc"] = m.arc2;
      j["side"] = m.side;
      j["anti"] = m.anti;
      break;
    case fl::MoveKind::R2Remove:
      j["crossing"] = m.crossing;
      j["crossing2"] = m.crossing2;
      j["over_arc"] = m.arc;
      j["under_arc"] = m.arc2;
      break;
    case fl::MoveKind::R3:
      j["crossing"] = m.crossing;
      j["crossing2"] = m.crossing2;
      j["crossing3"] = m.crossing3;
      j["over_arc"] = m.mid_over;
      j["mixed_arc"] = m.mid_mixed;
      j["under_arc"] = m.mid_under;
      break;
    case fl::MoveKind::FR1Remove:
      j["crossing"] = m.crossing;
      j["crossing2"] = m.crossing2;
      break;
  }
  return j;
}

ordered_json matrix_to_json(const fl::LinkingMatrix& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

void print_kv_table(const ordered_json& j, std::ostream& out, int indent = 0) {
  const std::string pad(indent, ' ');
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.value().is_object()) {
      out << pad << it.key() << ":\n";
      print_kv_table(it.value(), out, indent + 2);
    } else {
      out << pad << it.key() << ": " << it.value().dump() << "\n";
    }
  }
}

void emit(const ordered_json& j, const std::string& format) {
  if (use_json(format)) {
    std::cout << j.dump() << "\n";
  } else {
    print_kv_table(j, std::cout);
  }
}

std::uint64_t env_seed() {
  const char* s = std::getenv("FRAMELINK_SEED");
  if (!s) return 0;
  return std::strtoull(s, nullptr, 10);
}

fl::Vec3 parse_direction(const std::string& text) {
  double x, y, z;
  char c1, c2;
  std::istringstream ss(text);
  if (!(ss >> x >> c1 >> y >> c2 >> z) || c1 != ',' || c2 != ',') {
    throw fl::Error(fl::ErrorCode::InvalidFormat, "direction must look like x,y,z");
  }
  return {x, y, z};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"framed links in S^3: diagrams, invariants, moves, surgery"};
  app.require_subcommand(1);
  std::string format = "auto";
  app.add_option("--format", format, "output format: json or table")
      ->check(CLI::IsMember({"auto", "json", "table"}));

  // parse
  auto* cmd_parse = app.add_subcommand("parse", "parse a diagram and print its canonical form");
  std::string parse_file, parse_as = "pd";
  int link_index = 0;
  cmd_parse->add_option("file", parse_file, "input file or -")->required();
  cmd_parse->add_option("--index", link_index, "which link of the file (PD text, one per line)");
  cmd_parse->add_option("--as", parse_as, "input notation")
      ->check(CLI::IsMember({"pd", "gauss", "dt", "json"}));

  // convert
  auto* cmd_convert = app.add_subcommand("convert", "convert between diagram notations");
  std::string conv_file, conv_from = "pd", conv_to = "gauss";
  cmd_convert->add_option("file", conv_file)->required();
  cmd_convert->add_option("--index", link_index);
  cmd_convert->add_option("--from", conv_from)->check(CLI::IsMember({"pd", "gauss", "dt", "json"}));
  cmd_convert->add_option("--to", conv_to)->check(CLI::IsMember({"pd", "gauss", "dt", "json"}));

  // inv
  auto* cmd_inv = app.add_subcommand("inv", "writhe, framings and the linking matrix");
  std::string inv_file;
  cmd_inv->add_option("file", inv_file, "PD text or framed-link JSON")->required();
  cmd_inv->add_option("--index", link_index);

  // moves
  auto* cmd_moves = app.add_subcommand("moves", "list applicable move sites");
  std::string moves_file;
  cmd_moves->add_option("file", moves_file)->required();
  cmd_moves->add_option("--index", link_index);

  // equiv
  auto* cmd_equiv = app.add_subcommand("equiv", "search for a framed move path");
  std::string equiv_f1, equiv_f2;
  int equiv_depth = 12, equiv_maxx = -1, threads = 1;
  std::int64_t equiv_states = 50000;
  cmd_equiv->add_option("file1", equiv_f1)->required();
  cmd_equiv->add_option("file2", equiv_f2)->required();
  cmd_equiv->add_option("--depth", equiv_depth, "maximum path length");
  cmd_equiv->add_option("--maxx", equiv_maxx, "crossing budget (default: input + 4)");
  cmd_equiv->add_option("--states", equiv_states, "visited-state budget");
  cmd_equiv->add_option("--threads", threads, "worker threads for the search");

  // torus
  auto* cmd_torus = app.add_subcommand("torus", "curve classes on the torus");
  auto* cmd_torus_emb = cmd_torus->add_subcommand("embeddable", "embedded representative test");
  std::int64_t ta = 0, tb = 0;
  cmd_torus_emb->add_option("a", ta, "longitude coefficient")->required();
  cmd_torus_emb->add_option("b", tb, "meridian coefficient")->required();
  auto* cmd_torus_long = cmd_torus->add_subcommand("longitude", "longitude class of a framing");
  std::int64_t torus_n = 0;
  cmd_torus_long->add_option("n", torus_n, "framing integer")->required();

  // surgery
  auto* cmd_surgery = app.add_subcommand("surgery", "surgery description of a framed link");
  std::string surgery_file;
  cmd_surgery->add_option("file", surgery_file, "framed-link JSON")->required();

  // geom
  auto* cmd_geom = app.add_subcommand("geom", "geometric layer on polygonal curves");
  auto* cmd_geom_lk = cmd_geom->add_subcommand("lk", "pairwise Gauss linking numbers");
  std::string geom_lk_file, geom_direction;
  int geom_threads = 1;
  cmd_geom_lk->add_option("file", geom_lk_file, "curves CSV")->required();
  cmd_geom_lk->add_option("--direction", geom_direction, "projection direction x,y,z");
  cmd_geom_lk->add_option("--threads", geom_threads);
  auto* cmd_geom_twist = cmd_geom->add_subcommand("twist", "relative twist of two framings");
  std::string geom_twist_file;
  cmd_geom_twist->add_option("file", geom_twist_file,
                             "CSV with two curve blocks: reference then candidate")
      ->required();
  auto* cmd_geom_push = cmd_geom->add_subcommand("pushoff", "push a framed curve off itself");
  std::string geom_push_file;
  double push_offset = 0.05;
  cmd_geom_push->add_option("file", geom_push_file, "curves CSV with normals")->required();
  cmd_geom_push->add_option("--offset", push_offset, "pushoff distance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*cmd_parse || *cmd_convert) {
      const std::string& file = *cmd_parse ? parse_file : conv_file;
      const std::string& as = *cmd_parse ? parse_as : conv_from;
      std::string text = read_file(file);
      fl::LinkDiagram d;
      bool ambiguous = false;
      if (as == "pd") {
        d = fl::parse_pd(pd_line(text, link_index));
      } else if (as == "gauss") {
        d = fl::gauss_to_diagram(fl::parse_gauss(text));
      } else if (as == "dt") {
        fl::DtDiagram r = fl::dt_to_diagram(fl::parse_dt(text));
        d = r.diagram;
        ambiguous = r.chirality_ambiguous;
      } else {
        d = fl::read_framed_link_json(text).diagram;
      }
      if (*cmd_parse) {
        ordered_json j;
        j["pd"] = fl::serialize_pd(d);
        j["crossings"] = d.crossing_count();
        j["components"] = d.component_count();
        j["unknotted_loops"] = d.unknotted_loops();
        if (ambiguous) j["chirality_ambiguous"] = true;
        emit(j, format);
      } else {
        if (conv_to == "pd") {
          std::cout << fl::serialize_pd(d) << "\n";
        } else if (conv_to == "gauss") {
          std::cout << fl::gauss_to_text(fl::diagram_to_gauss(d)) << "\n";
        } else if (conv_to == "dt") {
          std::cout << fl::dt_to_text(fl::diagram_to_dt(d)) << "\n";
        } else {
          std::cout << fl::write_framed_link_json(fl::blackboard_framing(d)) << "\n";
        }
      }
      return 0;
    }

    if (*cmd_inv) {
      fl::FramedLink link = load_link(inv_file, link_index);
      ordered_json j;
      j["crossings"] = link.diagram.crossing_count();
      j["components"] = link.diagram.component_count();
      j["writhe"] = fl::total_writhe(link.diagram);
      ordered_json per = ordered_json::array();
      for (int c = 0; c < link.diagram.component_count(); ++c) {
        per.push_back(fl::writhe(link.diagram, c));
      }
      j["component_writhe"] = per;
      j["framings"] = link.framings;
      j["linking_matrix"] = matrix_to_json(fl::linking_matrix(link));
      emit(j, format);
      return 0;
    }

    if (*cmd_moves) {
      fl::FramedLink link = load_link(moves_file, link_index);
      ordered_json sites = ordered_json::array();
      for (const fl::MoveSite& m : fl::enumerate_moves(link.diagram)) {
        sites.push_back(site_to_json(m));
      }
      ordered_json j;
      j["sites"] = sites;
      emit(j, format);
      return 0;
    }

    if (*cmd_equiv) {
      fl::FramedLink l1 = load_link(equiv_f1);
      fl::FramedLink l2 = load_link(equiv_f2);
      fl::SearchBudget budget;
      budget.max_depth = equiv_depth;
      budget.max_crossings = equiv_maxx;
      budget.max_states = equiv_states;
      fl::EquivResult r = fl::framed_equivalent(l1.diagram, l2.diagram, budget, threads);
      ordered_json j;
      j["equivalent"] = r.equivalent;
      if (!r.equivalent) j["reason"] = r.reason;
      ordered_json path = ordered_json::array();
      for (const fl::PathStep& step : r.path) {
        ordered_json s;
        s["pd"] = step.pd_before;
        s["move"] = site_to_json(step.move);
        path.push_back(s);
      }
      j["path"] = path;
      j["stats"] =
          ordered_json{{"expanded", r.stats.expanded}, {"generated", r.stats.generated},
                       {"visited", r.stats.visited}};
      emit(j, format);
      return 0;
    }

    if (*cmd_torus_emb) {
      ordered_json j;
      j["a"] = ta;
      j["b"] = tb;
      j["embeddable"] = fl::is_embeddable({ta, tb});
      emit(j, format);
      return 0;
    }
    if (*cmd_torus_long) {
      fl::PeripheralClass p = fl::framing_to_longitude(torus_n);
      ordered_json j;
      j["framing"] = torus_n;
      j["meridian_coeff"] = p.meridian_coeff;
      j["longitude_coeff"] = p.longitude_coeff;
      emit(j, format);
      return 0;
    }

    if (*cmd_surgery) {
      std::string text = read_file(surgery_file);
      fl::FramedLink link = fl::read_framed_link_json(text);
      fl::SurgeryDescription s = fl::from_framed_link(link);
      // an optional "coefficients" array overrides the integer framings
      nlohmann::json raw = nlohmann::json::parse(text);
      if (raw.contains("coefficients")) {
        s.coefficients.clear();
        for (const auto& c : raw["coefficients"]) {
          s.coefficients.push_back(fl::parse_coefficient(c.get<std::string>()));
        }
        if (static_cast<int>(s.coefficients.size()) != s.diagram.component_count()) {
          throw fl::Error(fl::ErrorCode::InvalidFormat,
                          "coefficient count does not match component count");
        }
      }
      ordered_json j;
      ordered_json coeffs = ordered_json::array();
      for (const auto& c : s.coefficients) coeffs.push_back(fl::coefficient_to_text(c));
      j["coefficients"] = coeffs;
      fl::RecognizedManifold rec = fl::recognize_unknot_surgery(s);
      j["recognized"] = rec.name();
      j["evidence"] = rec.evidence;
      bool integral = true;
      for (const auto& c : s.coefficients) integral = integral && c.is_integral();
      if (integral) {
        fl::HomologyGroup h = fl::first_homology(s);
        j["h1"] = ordered_json{{"rank", h.rank}, {"torsion", h.torsion}};
      } else {
        j["h1"] = nullptr;
      }
      emit(j, format);
      return 0;
    }

    if (*cmd_geom_lk) {
      std::ifstream in(geom_lk_file);
      if (!in) throw fl::Error(fl::ErrorCode::InvalidFormat, "cannot open " + geom_lk_file);
      std::vector<fl::SpaceCurve> curves = fl::read_curves_csv(in);
      ordered_json pairs = ordered_json::array();
      for (size_t i = 0; i < curves.size(); ++i) {
        for (size_t j2 = i + 1; j2 < curves.size(); ++j2) {
          std::int64_t lk = fl::gauss_linking(curves[i], curves[j2], geom_threads);
          pairs.push_back(ordered_json{{"i", i}, {"j", j2}, {"lk", lk}});
        }
      }
      ordered_json j;
      j["curves"] = curves.size();
      j["pairs"] = pairs;
      if (!geom_direction.empty()) {
        fl::ProjectionOptions opts;
        opts.direction = parse_direction(geom_direction);
        opts.seed = env_seed();
        fl::LinkDiagram d = fl::project_to_diagram(curves, opts);
        j["projected_pd"] = fl::serialize_pd(d);
      }
      emit(j, format);
      return 0;
    }
    if (*cmd_geom_twist) {
      std::ifstream in(geom_twist_file);
      if (!in) throw fl::Error(fl::ErrorCode::InvalidFormat, "cannot open " + geom_twist_file);
      std::vector<fl::SpaceCurve> curves = fl::read_curves_csv(in);
      bool same_vertices = curves.size() == 2 &&
                           curves[0].vertices.size() == curves[1].vertices.size();
      if (same_vertices) {
        for (size_t i = 0; i < curves[0].vertices.size(); ++i) {
          same_vertices =
              same_vertices && (curves[0].vertices[i] - curves[1].vertices[i]).norm() == 0.0;
        }
      }
      if (!same_vertices || !curves[0].normals || !curves[1].normals) {
        throw fl::Error(fl::ErrorCode::InvalidFormat,
                        "twist needs two framed copies of the same curve");
      }
      fl::FramePair fp{curves[0].vertices, *curves[0].normals, *curves[1].normals};
      ordered_json j;
      j["twist"] = fl::relative_twist(fp);
      emit(j, format);
      return 0;
    }
    if (*cmd_geom_push) {
      std::ifstream in(geom_push_file);
      if (!in) throw fl::Error(fl::ErrorCode::InvalidFormat, "cannot open " + geom_push_file);
      std::vector<fl::SpaceCurve> curves = fl::read_curves_csv(in);
      std::vector<fl::SpaceCurve> out;
      for (const auto& c : curves) {
        out.push_back(c);
        out.push_back(fl::pushoff_curve(c, push_offset));
      }
      fl::write_curves_csv(std::cout, out);
      return 0;
    }
  } catch (const fl::Error& e) {
    ordered_json j;
    j["error"] = fl::to_string(e.code());
    j["message"] = e.what();
    std::cerr << j.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    ordered_json j;
    j["error"] = "Internal";
    j["message"] = e.what();
    std::cerr << j.dump() << "\n";
    return 1;
  }
  return 2;
}
