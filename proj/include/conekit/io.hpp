#pragma once

// Lattice files, presets, vector parsing and report serialization. Reports
// are ordered JSON with a schema tag; every run embeds its fully resolved
// configuration so results are reproducible from the artifact alone. Curves
// go to CSV; structure goes to JSON.

#include "conekit/chambers.hpp"
#include "conekit/hyperbolic.hpp"
#include "conekit/lattice.hpp"
#include "conekit/orbits.hpp"
#include "conekit/period.hpp"

#include <json.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace conekit {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

/// Configuration problem (unknown preset, malformed flag...). CLI exit 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// scalars and vectors

inline Json json_int(const Int& v) {
  static const Int lo = Int(std::numeric_limits<std::int64_t>::min());
  static const Int hi = Int(std::numeric_limits<std::int64_t>::max());
  if (v < lo || v > hi) return v.str();
  return v.convert_to<std::int64_t>();
}

inline Json json_rat(const Rat& v) {
  if (den(v) == 1) return json_int(num(v));
  return num(v).str() + "/" + den(v).str();
}

inline Json json_vec(const IntVec& v) {
  Json a = Json::array();
  for (const Int& x : v) a.push_back(json_int(x));
  return a;
}

inline Json json_vec(const RatVec& v) {
  Json a = Json::array();
  for (const Rat& x : v) a.push_back(json_rat(x));
  return a;
}

inline Json json_mat(const IntMat& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json r = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(json_int(m(i, j)));
    rows.push_back(r);
  }
  return rows;
}

inline Int int_from_json(const Json& j) {
  if (j.is_string()) return Int(j.get<std::string>());
  if (j.is_number_integer()) return Int(j.get<std::int64_t>());
  throw ConfigError("expected an integer, got: " + j.dump());
}

inline IntVec vec_from_json(const Json& j) {
  IntVec v;
  for (const auto& x : j) v.push_back(int_from_json(x));
  return v;
}

inline IntMat mat_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("expected a matrix");
  std::size_t rows = j.size(), cols = j[0].size();
  IntMat m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (j[i].size() != cols) throw ConfigError("ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = int_from_json(j[i][c]);
  }
  return m;
}

/// "1,0,-2" -> vector
inline IntVec parse_vec(const std::string& s) {
  IntVec v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      v.push_back(Int(tok));
    } catch (const std::exception&) {
      throw ConfigError("cannot parse integer '" + tok + "' in vector '" + s + "'");
    }
  }
  if (v.empty()) throw ConfigError("empty vector '" + s + "'");
  return v;
}

/// "0,1,0;0,0,1" -> list of vectors
inline std::vector<IntVec> parse_vec_list(const std::string& s) {
  std::vector<IntVec> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ';'))
    if (!tok.empty()) out.push_back(parse_vec(tok));
  if (out.empty()) throw ConfigError("empty vector list '" + s + "'");
  return out;
}

inline std::vector<Int> parse_int_list(const std::string& s) {
  std::vector<Int> out;
  for (const auto& v : parse_vec(s)) out.push_back(v);
  return out;
}

// ---------------------------------------------------------------------------
// lattice files and presets

inline Json lattice_to_json(const QuadLattice& L) {
  Json j;
  j["label"] = L.label();
  j["rank"] = L.rank();
  j["gram"] = json_mat(L.gram());
  return j;
}

inline QuadLattice lattice_from_json(const Json& j) {
  if (!j.contains("gram")) throw ConfigError("lattice file: missing 'gram'");
  IntMat gram = mat_from_json(j["gram"]);
  std::string label = j.value("label", std::string{});
  if (j.contains("rank") && j["rank"].get<std::size_t>() != gram.rows())
    throw ConfigError("lattice file: rank does not match gram size");
  return QuadLattice(std::move(gram), std::move(label));
}

inline std::string data_dir() {
  if (const char* env = std::getenv("CONEKIT_DATA_DIR")) return env;
#ifdef CONEKIT_DATA_DIR_DEFAULT
  return CONEKIT_DATA_DIR_DEFAULT;
#else
  return "data";
#endif
}

inline QuadLattice load_lattice_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open lattice file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("cannot parse lattice file '" + path + "': " + e.what());
  }
  return lattice_from_json(j);
}

inline QuadLattice load_preset(const std::string& name) {
  std::string path = data_dir() + "/" + name + ".json";
  std::ifstream probe(path);
  if (!probe) throw ConfigError("unknown preset '" + name + "' (no file " + path + ")");
  return load_lattice_file(path);
}

/// Lattice source: `diag:a,b,...` inline form, a path to a JSON file, or a
/// preset name resolved in the data directory.
inline QuadLattice load_lattice(const std::string& spec) {
  if (spec.rfind("diag:", 0) == 0) {
    IntVec d = parse_vec(spec.substr(5));
    IntMat g(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) g(i, i) = d[i];
    return QuadLattice(std::move(g), spec);
  }
  if (spec.find('/') != std::string::npos ||
      (spec.size() > 5 && spec.substr(spec.size() - 5) == ".json"))
    return load_lattice_file(spec);
  return load_preset(spec);
}

/// Deterministic small positive vector, used when no anchor is given.
inline IntVec default_anchor(const QuadLattice& L) {
  L.require_hyperbolic();
  std::size_t n = L.rank();
  for (std::size_t i = 0; i < n; ++i)
    if (L.gram()(i, i) > 0) {
      IntVec e(n);
      e[i] = 1;
      return e;
    }
  for (Int bound = 1; bound <= 4; ++bound) {
    IntVec v(n);
    std::function<std::optional<IntVec>(std::size_t)> rec = [&](std::size_t i) -> std::optional<IntVec> {
      if (i == n) return L.square(v) > 0 ? std::optional<IntVec>(v) : std::nullopt;
      for (Int c = -bound; c <= bound; ++c) {
        v[i] = c;
        if (auto r = rec(i + 1)) return r;
      }
      return std::nullopt;
    };
    if (auto r = rec(0)) return *r;
  }
  throw DomainError("default_anchor: no small positive vector found");
}

// ---------------------------------------------------------------------------
// group files

inline GroupSpec load_group_file(const QuadLattice& L, const std::string& path,
                                 ClosurePolicy policy) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open group file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("cannot parse group file '" + path + "': " + e.what());
  }
  if (!j.contains("generators")) throw ConfigError("group file: missing 'generators'");
  std::vector<IntMat> gens;
  for (const auto& g : j["generators"]) gens.push_back(mat_from_json(g));
  return GroupSpec(L, gens, j.value("name", path), policy);
}

// ---------------------------------------------------------------------------
// reports

inline Json report_head(const std::string& kind, Json config) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = kind;
  j["config"] = std::move(config);
  return j;
}

inline Json signature_to_json(const Signature& s) {
  Json j;
  j["n_pos"] = s.n_pos;
  j["n_neg"] = s.n_neg;
  j["n_zero"] = s.n_zero;
  return j;
}

inline Json orbit_report_to_json(const OrbitReport& r) {
  Json j;
  j["status"] = r.status == OrbitStatus::complete_within_window ? "complete_within_window" : "capped";
  j["separated_by_invariants"] = r.separated_by_invariants;
  j["caps"] = Json{{"word_cap", r.caps.word_cap},
                   {"height_cap", json_int(r.caps.height_cap)},
                   {"max_nodes", r.caps.max_nodes}};
  Json cls = Json::array();
  for (const auto& c : r.classes) {
    Json e;
    e["representative"] = json_vec(c.representative);
    e["square"] = json_int(c.square);
    e["divisibility"] = json_int(c.divisibility);
    e["members_found"] = c.members_found;
    e["input_members"] = c.input_members;
    cls.push_back(e);
  }
  j["classes"] = cls;
  j["class_count"] = r.classes.size();
  return j;
}

inline Json wall_to_json(const Wall& w) {
  Json j;
  j["vector"] = json_vec(w.vector);
  j["square"] = json_int(w.square);
  j["divisibility"] = json_int(w.divisibility);
  return j;
}

inline Json chamber_to_json(const Arrangement& A, const Chamber& C) {
  Json j;
  j["point"] = json_vec(C.point);
  Json signs = Json::array();
  for (std::size_t i = 0; i < A.walls.size(); ++i) {
    Json e;
    e["wall"] = json_vec(A.walls[i].vector);
    e["sign"] = C.signs[i] > 0 ? "+" : "-";
    signs.push_back(e);
  }
  j["signs"] = signs;
  return j;
}

inline Json density_report_to_json(const DensityReport& r) {
  Json j;
  j["radius"] = r.radius;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["theorem_regime"] = r.theorem_regime;
  Json sched;
  Json dv = Json::array();
  for (const auto& d : r.schedule.d_values) dv.push_back(json_int(d));
  sched["d_values"] = dv;
  sched["height_base"] = json_int(r.schedule.height_base);
  sched["height_slope"] = json_int(r.schedule.height_slope);
  j["schedule"] = sched;
  j["distance_tolerance"] = 1e-12;
  Json curve = Json::array();
  for (const auto& row : r.curve) {
    Json e;
    e["d_max"] = json_int(row.d_max);
    e["wall_count"] = row.wall_count;
    if (row.no_walls)
      e["f"] = "inf";
    else
      e["f"] = row.f;
    curve.push_back(e);
  }
  j["curve"] = curve;
  return j;
}

inline std::string density_csv(const DensityReport& r) {
  std::ostringstream os;
  os << "D,f_D,wall_count\n";
  for (const auto& row : r.curve) {
    os << row.d_max.str() << ",";
    if (row.no_walls)
      os << "inf";
    else {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.12g", row.f);
      os << buf;
    }
    os << "," << row.wall_count << "\n";
  }
  return os.str();
}

inline Json geodesic_report_to_json(const GeodesicReport& r) {
  Json j;
  j["wall"] = json_vec(r.wall);
  j["complement_basis"] = json_mat(r.basis);
  j["complement_gram"] = json_mat(r.gram);
  j["automorph"] = json_mat(r.automorph);
  j["length"] = r.length;
  j["check_residual"] = r.check_residual;
  j["check_tolerance"] = 1e-9;
  return j;
}

inline Json cusp_report_to_json(const CuspClearanceReport& r) {
  Json j;
  j["compact"] = r.compact;
  Json cusps = Json::array();
  for (const auto& c : r.cusps) cusps.push_back(json_vec(c));
  j["cusps"] = cusps;
  if (!r.compact) {
    j["t_star"] = r.t_star;
    j["samples_per_period"] = r.samples_per_period;
    Json per = Json::array();
    for (const auto& st : r.per_geodesic) {
      Json e;
      e["depth"] = st.depth;
      e["best_point"] = st.best_point;
      e["margin"] = st.margin;
      per.push_back(e);
    }
    j["per_geodesic"] = per;
    j["all_meet_core"] = r.all_meet_core;
  } else {
    j["note"] = "no rational cusps: quotient compact, core is everything";
  }
  return j;
}

inline Json picard_to_json(const PicardSpec& n) {
  Json j;
  j["rank"] = n.rank();
  j["basis"] = json_mat(n.basis);
  j["gram"] = json_mat(n.gram);
  j["signature"] = signature_to_json(n.sig);
  return j;
}

// ---------------------------------------------------------------------------
// report revalidation: re-parse and re-check what a report claims

inline std::vector<std::string> validate_report(const Json& report) {
  std::vector<std::string> problems;
  auto fail = [&](const std::string& m) { problems.push_back(m); };
  if (report.value("schema", std::string{}) != kSchemaVersion) fail("schema mismatch");
  const std::string kind = report.value("kind", std::string{});
  const Json& cfg = report.at("config");

  auto lattice_of = [&]() { return load_lattice(cfg.at("lattice").get<std::string>()); };

  if (kind == "lattice-info") {
    QuadLattice L = lattice_of();
    Signature s = L.signature();
    if (report.at("signature") != signature_to_json(s)) fail("signature mismatch on recompute");
    if (report.at("rank").get<std::size_t>() != L.rank()) fail("rank mismatch");
  } else if (kind == "enum") {
    QuadLattice L = lattice_of();
    EnumWindow w{vec_from_json(cfg.at("anchor")), int_from_json(cfg.at("height")),
                 int_from_json(cfg.at("square"))};
    auto fresh = w.square == 0 ? enum_isotropic_primitive(L, w) : enum_negative_primitive(L, w);
    std::vector<IntVec> reported;
    for (const auto& v : report.at("vectors")) reported.push_back(vec_from_json(v));
    if (reported != fresh) fail("vector list differs from recomputation");
    for (const auto& z : reported) {
      if (!is_primitive(z)) fail("imprimitive vector in report");
      if (L.square(z) != -w.square) fail("square mismatch in report");
    }
  } else if (kind == "orbits") {
    QuadLattice L = lattice_of();
    for (const auto& c : report.at("report").at("classes")) {
      IntVec rep = vec_from_json(c.at("representative"));
      if (L.square(rep) != int_from_json(c.at("square"))) fail("class square mismatch");
      if (divisibility(L, rep) != int_from_json(c.at("divisibility")))
        fail("class divisibility mismatch");
    }
  } else if (kind == "chambers-faces") {
    QuadLattice L = lattice_of();
    EnumWindow w{vec_from_json(cfg.at("anchor")), int_from_json(cfg.at("height")), 0};
    Arrangement A = build_arrangement(L, parse_int_list(cfg.at("squares").get<std::string>()), w);
    RatVec pt = to_rat(vec_from_json(cfg.at("point")));
    Chamber C = locate_chamber(A, pt);
    for (const auto& f : report.at("faces")) {
      IntVec wall = vec_from_json(f.at("wall"));
      IntVec witness = vec_from_json(f.at("witness"));
      auto wi = A.wall_index(wall);
      if (!wi) {
        fail("face wall not in arrangement");
        continue;
      }
      if (!revalidate_face_witness(A, C, *wi, witness)) fail("face witness failed revalidation");
    }
  } else if (kind == "hyp-density") {
    const Json& curve = report.at("report").at("curve");
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& row : curve) {
      if (row.at("f").is_string()) continue;  // inf marker
      double f = row.at("f").get<double>();
      if (f > prev + 1e-15) fail("density curve not nonincreasing");
      prev = f;
    }
  } else if (kind == "hyp-geodesic") {
    IntMat n = mat_from_json(report.at("report").at("complement_gram"));
    IntMat g = mat_from_json(report.at("report").at("automorph"));
    if (!(mul(transpose(g), mul(n, g)) == n)) fail("automorph does not preserve the complement Gram");
  } else if (kind == "period-picard" || kind == "period-deform") {
    QuadLattice L = lattice_of();
    IntMat basis = mat_from_json(report.at("result").at("basis"));
    IntMat sat = saturate_columns(basis);
    if (sat.cols() != basis.cols()) fail("basis not of full rank");
    IntMat g = induced_gram(L.gram(), basis);
    if (!(signature_of(g) ==
          Signature{report.at("result").at("signature").at("n_pos").get<int>(),
                    report.at("result").at("signature").at("n_neg").get<int>(),
                    report.at("result").at("signature").at("n_zero").get<int>()}))
      fail("induced signature mismatch");
  }
  return problems;
}

}  // namespace conekit
