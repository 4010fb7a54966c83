// conekit command line: lattice inspection, wall enumeration, orbit
// decomposition, chamber operations, hyperbolic measurements and period
// computations over integral quadratic lattices of signature (1, n).
//
// Exit codes: 0 success, 1 domain error (wrong signature, point on a wall,
// isotropic input...), 2 configuration error (bad flags, unknown preset).

#include "conekit/io.hpp"
#include "conekit/parallel.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

namespace {

using namespace conekit;

void emit(const Json& report, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << report.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file '" + path + "'");
  out << report.dump(2) << "\n";
}

void emit_text(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file '" + path + "'");
  out << text;
}

struct CommonArgs {
  std::string lattice;
  std::string anchor;
  std::string out = "-";

  QuadLattice load() const { return load_lattice(lattice); }
  IntVec anchor_vec(const QuadLattice& L) const {
    if (anchor.empty()) return default_anchor(L);
    IntVec a = parse_vec(anchor);
    L.check_dim(a);
    return a;
  }
};

GroupSpec resolve_group(const QuadLattice& L, const std::string& spec,
                        const std::vector<Int>& squares, const EnumWindow& window,
                        ClosurePolicy policy) {
  if (spec == "reflections") return reflection_group(L, squares, window, policy);
  return load_group_file(L, spec, policy);
}

Json group_config(const std::string& spec, const ClosurePolicy& policy) {
  Json j;
  j["source"] = spec;
  j["word_cap"] = policy.word_cap;
  j["height_cap"] = json_int(policy.height_cap);
  j["max_nodes"] = policy.max_nodes;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace conekit;

  CLI::App app{"exact wall-and-chamber toolkit for hyperbolic lattices"};
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads, "worker count (never changes output bytes)");

  // ---- lattice ------------------------------------------------------------
  auto* lattice_cmd = app.add_subcommand("lattice", "lattice inspection");
  auto* lattice_info = lattice_cmd->add_subcommand("info", "rank, signature, determinant");
  CommonArgs li;
  std::string li_preset;
  bool li_json = false;
  lattice_info->add_option("--lattice", li.lattice, "lattice spec (diag:..., preset, file)");
  lattice_info->add_option("--preset", li_preset, "preset name (shorthand for --lattice)");
  lattice_info->add_flag("--json", li_json, "JSON output");
  lattice_info->add_option("--out", li.out, "output path ('-' = stdout)");

  // ---- enum ---------------------------------------------------------------
  auto* enum_cmd = app.add_subcommand("enum", "enumerate primitive vectors in a window");
  CommonArgs en;
  std::int64_t en_square = 0;
  std::string en_height;
  enum_cmd->add_option("--lattice", en.lattice)->required();
  enum_cmd->add_option("--square", en_square,
                       "target square (negative for walls, 0 for isotropic)")
      ->required();
  enum_cmd->add_option("--anchor", en.anchor, "window anchor, e.g. \"1,0,0\"");
  enum_cmd->add_option("--height", en_height, "pairing bound H")->required();
  enum_cmd->add_option("--out", en.out);

  // ---- orbits ---------------------------------------------------------------
  auto* orbits_cmd = app.add_subcommand("orbits", "orbit decomposition of wall vectors");
  CommonArgs ob;
  std::string ob_squares, ob_height, ob_group = "reflections", ob_bfs_height;
  int ob_word_cap = 4;
  orbits_cmd->add_option("--lattice", ob.lattice)->required();
  orbits_cmd->add_option("--squares", ob_squares, "comma list of d with q = -d")->required();
  orbits_cmd->add_option("--anchor", ob.anchor);
  orbits_cmd->add_option("--height", ob_height)->required();
  orbits_cmd->add_option("--group", ob_group, "\"reflections\" or a generator file");
  orbits_cmd->add_option("--bfs-height", ob_bfs_height, "BFS exploration cap (default 2H)");
  orbits_cmd->add_option("--word-cap", ob_word_cap);
  orbits_cmd->add_option("--out", ob.out);

  // ---- chambers -------------------------------------------------------------
  auto* chambers_cmd = app.add_subcommand("chambers", "chamber location, faces, crossings");
  CommonArgs ch;
  std::string ch_action, ch_squares, ch_height, ch_point, ch_wall, ch_group = "reflections",
                         ch_point2;
  int ch_word_cap = 3;
  chambers_cmd->add_option("action", ch_action, "locate | faces | cross | aut-orbits | equivalent")
      ->required();
  chambers_cmd->add_option("--lattice", ch.lattice)->required();
  chambers_cmd->add_option("--squares", ch_squares)->required();
  chambers_cmd->add_option("--anchor", ch.anchor);
  chambers_cmd->add_option("--height", ch_height)->required();
  chambers_cmd->add_option("--point", ch_point, "rational chamber point, e.g. \"2,1\"");
  chambers_cmd->add_option("--point2", ch_point2, "second point (equivalent)");
  chambers_cmd->add_option("--wall", ch_wall, "wall vector (cross)");
  chambers_cmd->add_option("--group", ch_group);
  chambers_cmd->add_option("--word-cap", ch_word_cap);
  chambers_cmd->add_option("--out", ch.out);

  // ---- hyp ------------------------------------------------------------------
  auto* hyp_cmd = app.add_subcommand("hyp", "hyperbolic measurements");
  auto* hyp_density = hyp_cmd->add_subcommand("density", "wall density probe");
  CommonArgs hd;
  std::int64_t hd_dmax = 10;
  std::string hd_hbase = "2", hd_hslope = "2";
  double hd_radius = 1.5;
  int hd_samples = 2000;
  std::uint64_t hd_seed = 7;
  std::string hd_csv = "-", hd_json;
  hyp_density->add_option("--lattice", hd.lattice)->required();
  hyp_density->add_option("--anchor", hd.anchor);
  hyp_density->add_option("--d-max", hd_dmax, "probe squares d = 1..d-max");
  hyp_density->add_option("--height-base", hd_hbase, "window H(D) = base + slope*D");
  hyp_density->add_option("--height-slope", hd_hslope);
  hyp_density->add_option("--radius", hd_radius);
  hyp_density->add_option("--samples", hd_samples);
  hyp_density->add_option("--seed", hd_seed);
  hyp_density->add_option("--csv", hd_csv, "CSV output path ('-' = stdout)");
  hyp_density->add_option("--json", hd_json, "JSON metadata path (default: after the CSV)");

  auto* hyp_geodesic = hyp_cmd->add_subcommand("geodesic", "closed geodesic length for a wall");
  CommonArgs hg;
  std::string hg_wall;
  hyp_geodesic->add_option("--lattice", hg.lattice)->required();
  hyp_geodesic->add_option("--wall", hg_wall, "negative vector, e.g. \"0,0,1\"")->required();
  hyp_geodesic->add_option("--out", hg.out);

  auto* hyp_cusps = hyp_cmd->add_subcommand("cusps", "cusp clearance / compact core");
  CommonArgs hc;
  std::string hc_walls, hc_height = "3", hc_squares;
  int hc_samples = 256;
  hyp_cusps->add_option("--lattice", hc.lattice)->required();
  hyp_cusps->add_option("--anchor", hc.anchor);
  hyp_cusps->add_option("--height", hc_height, "cusp window height");
  hyp_cusps->add_option("--walls", hc_walls, "semicolon list of wall vectors");
  hyp_cusps->add_option("--squares", hc_squares,
                        "enumerate walls with these squares and keep anisotropic complements");
  hyp_cusps->add_option("--samples-per-period", hc_samples);
  hyp_cusps->add_option("--out", hc.out);

  // ---- period ----------------------------------------------------------------
  auto* period_cmd = app.add_subcommand("period", "Picard sublattice operations");
  CommonArgs pe;
  std::string pe_action, pe_classes;
  period_cmd->add_option("action", pe_action, "picard | projective | deform")->required();
  period_cmd->add_option("--lattice", pe.lattice)->required();
  period_cmd->add_option("--classes", pe_classes, "semicolon list of classes")->required();
  period_cmd->add_option("--out", pe.out);

  CLI11_PARSE(app, argc, argv);
  set_worker_count(threads);

  try {
    if (*lattice_info) {
      if (li.lattice.empty()) li.lattice = li_preset;
      if (li.lattice.empty()) throw ConfigError("lattice info: need --lattice or --preset");
      QuadLattice L = li.load();
      Signature s = L.signature();
      if (li_json) {
        Json cfg;
        cfg["lattice"] = li.lattice;
        Json j = report_head("lattice-info", cfg);
        j["label"] = L.label();
        j["rank"] = L.rank();
        j["signature"] = signature_to_json(s);
        j["determinant"] = json_int(det(L.gram()));
        j["gram"] = json_mat(L.gram());
        emit(j, li.out);
      } else {
        std::ostringstream os;
        os << "label: " << (L.label().empty() ? "(none)" : L.label()) << "\n"
           << "rank: " << L.rank() << "\n"
           << "signature: (" << s.n_pos << "," << s.n_neg << "," << s.n_zero << ")\n"
           << "determinant: " << det(L.gram()).str() << "\n";
        emit_text(os.str(), li.out);
      }
    } else if (*enum_cmd) {
      QuadLattice L = en.load();
      IntVec anchor = en.anchor_vec(L);
      Int height(en_height);
      if (en_square > 0) throw ConfigError("enum: --square must be negative (walls) or 0 (isotropic)");
      EnumWindow w{anchor, height, Int(-en_square)};
      auto vecs = w.square == 0 ? enum_isotropic_primitive(L, w) : enum_negative_primitive(L, w);
      std::ostringstream lines;
      for (const auto& z : vecs) lines << vec_to_string(z) << "\n";
      Json cfg;
      cfg["lattice"] = en.lattice;
      cfg["square"] = json_int(w.square);
      cfg["anchor"] = json_vec(anchor);
      cfg["height"] = json_int(height);
      cfg["threads"] = threads;
      Json j = report_head("enum", cfg);
      j["count"] = vecs.size();
      Json arr = Json::array();
      std::set<std::string> squares;
      for (const auto& z : vecs) {
        arr.push_back(json_vec(z));
        squares.insert(L.square(z).str());
      }
      j["vectors"] = arr;
      j["wall_squares"] = squares;
      emit_text(lines.str(), "-");
      emit(j, en.out);
    } else if (*orbits_cmd) {
      QuadLattice L = ob.load();
      IntVec anchor = ob.anchor_vec(L);
      Int height(ob_height);
      std::vector<Int> squares = parse_int_list(ob_squares);
      ClosurePolicy policy;
      policy.word_cap = ob_word_cap;
      policy.height_cap = ob_bfs_height.empty() ? height * 2 : Int(ob_bfs_height);
      EnumWindow w{anchor, height, 0};
      GroupSpec G = resolve_group(L, ob_group, squares, w, policy);
      std::vector<IntVec> vectors;
      for (const Int& d : squares) {
        EnumWindow wd = w;
        wd.square = d;
        for (auto& z : enum_negative_primitive(L, wd)) vectors.push_back(std::move(z));
      }
      OrbitReport rep = orbit_decompose(L, vectors, G, anchor);
      Json cfg;
      cfg["lattice"] = ob.lattice;
      cfg["squares"] = ob_squares;
      cfg["anchor"] = json_vec(anchor);
      cfg["height"] = json_int(height);
      cfg["group"] = group_config(ob_group, policy);
      cfg["threads"] = threads;
      Json j = report_head("orbits", cfg);
      j["input_count"] = vectors.size();
      j["generator_count"] = G.generators().size();
      j["report"] = orbit_report_to_json(rep);
      emit(j, ob.out);
    } else if (*chambers_cmd) {
      QuadLattice L = ch.load();
      IntVec anchor = ch.anchor_vec(L);
      Int height(ch_height);
      std::vector<Int> squares = parse_int_list(ch_squares);
      EnumWindow w{anchor, height, 0};
      Arrangement A = build_arrangement(L, squares, w);
      RatVec point = ch_point.empty() ? A.anchor : to_rat(parse_vec(ch_point));
      Json cfg;
      cfg["lattice"] = ch.lattice;
      cfg["squares"] = ch_squares;
      cfg["anchor"] = json_vec(anchor);
      cfg["height"] = json_int(height);
      cfg["point"] = json_vec(rat_to_primitive(point));
      cfg["threads"] = threads;

      if (ch_action == "locate") {
        Chamber C = locate_chamber(A, point);
        Json j = report_head("chambers-locate", cfg);
        j["wall_count"] = A.walls.size();
        j["anchor_perturbed"] = A.anchor_perturbed;
        j["chamber"] = chamber_to_json(A, C);
        emit(j, ch.out);
      } else if (ch_action == "faces") {
        Chamber C = locate_chamber(A, point);
        Json j = report_head("chambers-faces", cfg);
        j["wall_count"] = A.walls.size();
        Json faces = Json::array();
        for (std::size_t wi = 0; wi < A.walls.size(); ++wi) {
          FaceCheck fc = is_face(A, C, wi);
          if (!fc.is_face) continue;
          Json f;
          f["wall"] = json_vec(A.walls[wi].vector);
          f["witness"] = json_vec(fc.witness);
          faces.push_back(f);
        }
        j["faces"] = faces;
        j["face_count"] = faces.size();
        emit(j, ch.out);
      } else if (ch_action == "cross") {
        if (ch_wall.empty()) throw ConfigError("chambers cross: need --wall");
        Chamber C = locate_chamber(A, point);
        IntVec wall = wall_canonical(L, anchor, parse_vec(ch_wall));
        auto wi = A.wall_index(wall);
        if (!wi) throw ConfigError("chambers cross: wall not in the arrangement");
        Chamber D = cross_wall(A, C, *wi);
        cfg["wall"] = json_vec(wall);
        Json j = report_head("chambers-cross", cfg);
        j["from"] = chamber_to_json(A, C);
        j["to"] = chamber_to_json(A, D);
        emit(j, ch.out);
      } else if (ch_action == "aut-orbits") {
        Chamber C = locate_chamber(A, point);
        ClosurePolicy policy;
        policy.word_cap = ch_word_cap;
        policy.height_cap = height * 2;
        GroupSpec G = resolve_group(L, ch_group, squares, w, policy);
        FaceOrbitReport rep = face_orbit_count(A, C, G);
        cfg["group"] = group_config(ch_group, policy);
        Json j = report_head("chambers-aut-orbits", cfg);
        j["wall_count"] = A.walls.size();
        j["face_count"] = rep.faces.size();
        j["orbit_count"] = rep.orbits.size();
        j["stabilizer_size"] = rep.stabilizer_size;
        j["image_left_window"] = rep.image_left_window;
        Json orbits = Json::array();
        for (const auto& orb : rep.orbits) {
          Json o = Json::array();
          for (std::size_t wi : orb) o.push_back(json_vec(A.walls[wi].vector));
          orbits.push_back(o);
        }
        j["orbits"] = orbits;
        Json faces = Json::array();
        for (std::size_t i = 0; i < rep.faces.size(); ++i) {
          Json f;
          f["wall"] = json_vec(A.walls[rep.faces[i]].vector);
          f["witness"] = json_vec(rep.witnesses[i]);
          faces.push_back(f);
        }
        j["faces"] = faces;
        emit(j, ch.out);
      } else if (ch_action == "equivalent") {
        if (ch_point2.empty()) throw ConfigError("chambers equivalent: need --point2");
        Chamber C1 = locate_chamber(A, point);
        Chamber C2 = locate_chamber(A, to_rat(parse_vec(ch_point2)));
        ClosurePolicy policy;
        policy.word_cap = ch_word_cap;
        policy.height_cap = height * 2;
        GroupSpec G = resolve_group(L, ch_group, squares, w, policy);
        auto g = chamber_equivalent(A, C1, C2, G);
        cfg["point2"] = ch_point2;
        cfg["group"] = group_config(ch_group, policy);
        Json j = report_head("chambers-equivalent", cfg);
        j["found"] = g.has_value();
        if (g)
          j["isometry"] = json_mat(g->matrix());
        else
          j["note"] = "no word within the cap maps the first chamber to the second";
        emit(j, ch.out);
      } else {
        throw ConfigError("chambers: unknown action '" + ch_action + "'");
      }
    } else if (*hyp_density) {
      QuadLattice L = hd.load();
      IntVec anchor = hd.anchor_vec(L);
      DensitySchedule sched;
      for (std::int64_t d = 1; d <= hd_dmax; ++d) sched.d_values.push_back(Int(d));
      sched.height_base = Int(hd_hbase);
      sched.height_slope = Int(hd_hslope);
      DensityReport rep = density_probe(L, sched, anchor, hd_radius, hd_samples, hd_seed);
      Json cfg;
      cfg["lattice"] = hd.lattice;
      cfg["anchor"] = json_vec(anchor);
      cfg["d_max"] = hd_dmax;
      cfg["height_base"] = json_int(sched.height_base);
      cfg["height_slope"] = json_int(sched.height_slope);
      cfg["radius"] = hd_radius;
      cfg["samples"] = hd_samples;
      cfg["seed"] = hd_seed;
      cfg["threads"] = threads;
      Json j = report_head("hyp-density", cfg);
      j["report"] = density_report_to_json(rep);
      emit_text(density_csv(rep), hd_csv);
      emit(j, hd_json.empty() ? "-" : hd_json);
    } else if (*hyp_geodesic) {
      QuadLattice L = hg.load();
      GeodesicReport rep = closed_geodesic_length(L, parse_vec(hg_wall));
      Json cfg;
      cfg["lattice"] = hg.lattice;
      cfg["wall"] = hg_wall;
      Json j = report_head("hyp-geodesic", cfg);
      j["report"] = geodesic_report_to_json(rep);
      emit(j, hg.out);
    } else if (*hyp_cusps) {
      QuadLattice L = hc.load();
      IntVec anchor = hc.anchor_vec(L);
      std::vector<IntVec> walls;
      if (!hc_walls.empty()) {
        walls = parse_vec_list(hc_walls);
      } else if (!hc_squares.empty()) {
        EnumWindow w{anchor, Int(hc_height), 0};
        for (const Int& d : parse_int_list(hc_squares)) {
          w.square = d;
          for (auto& z : enum_negative_primitive(L, w)) walls.push_back(std::move(z));
        }
      } else {
        throw ConfigError("hyp cusps: need --walls or --squares");
      }
      std::vector<GeodesicReport> geos;
      Json skipped = Json::array();
      for (const IntVec& z : walls) {
        try {
          geos.push_back(closed_geodesic_length(L, z));
        } catch (const DomainError& e) {
          Json s;
          s["wall"] = json_vec(z);
          s["reason"] = e.what();
          skipped.push_back(s);
        }
      }
      EnumWindow cw{anchor, Int(hc_height), 0};
      CuspClearanceReport rep = cusp_clearance(L, geos, cw, hc_samples);
      Json cfg;
      cfg["lattice"] = hc.lattice;
      cfg["anchor"] = json_vec(anchor);
      cfg["height"] = hc_height;
      cfg["samples_per_period"] = hc_samples;
      cfg["threads"] = threads;
      Json j = report_head("hyp-cusps", cfg);
      j["geodesic_count"] = geos.size();
      j["skipped_walls"] = skipped;
      Json geoj = Json::array();
      for (const auto& g : geos) geoj.push_back(geodesic_report_to_json(g));
      j["geodesics"] = geoj;
      j["report"] = cusp_report_to_json(rep);
      emit(j, hc.out);
    } else if (*period_cmd) {
      QuadLattice L = pe.load();
      std::vector<IntVec> classes = parse_vec_list(pe_classes);
      Json cfg;
      cfg["lattice"] = pe.lattice;
      cfg["classes"] = pe_classes;
      if (pe_action == "picard") {
        PicardSpec n = picard_closure(L, classes);
        Json j = report_head("period-picard", cfg);
        j["result"] = picard_to_json(n);
        emit(j, pe.out);
      } else if (pe_action == "projective") {
        PicardSpec n = picard_closure(L, classes);
        Json j = report_head("period-projective", cfg);
        j["picard"] = picard_to_json(n);
        j["projective"] = is_projective_type(n);
        emit(j, pe.out);
      } else if (pe_action == "deform") {
        PicardSpec n = picard_closure(L, classes);
        PicardSpec target = deformation_target(L, n);
        Json j = report_head("period-deform", cfg);
        j["picard"] = picard_to_json(n);
        j["result"] = picard_to_json(target);
        emit(j, pe.out);
      } else {
        throw ConfigError("period: unknown action '" + pe_action + "'");
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
