#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mkcx/catcheck.hpp"
#include "mkcx/complex.hpp"
#include "mkcx/crescent2d.hpp"
#include "mkcx/generators.hpp"
#include "mkcx/geodesy.hpp"
#include "mkcx/io.hpp"
#include "mkcx/surface.hpp"
#include "mkcx/vertexclass.hpp"

namespace mkcx::cli {

using json = nlohmann::ordered_json;

namespace {

const std::vector<std::string> kCheckNames = {"link",     "cat",      "convexity",
                                              "slim",     "classify", "two-convex"};

inline constexpr double kCatTolerance = 1e-7;
inline constexpr double kConvexityTolerance = 1e-7;
inline constexpr double kGaussBonnetTolerance = 1e-9;
inline constexpr int kRandomTriangles = 4;
inline constexpr int kConvexityPairs = 4;
inline constexpr int kConvexitySamples = 16;
inline constexpr int kSlimTriples = 8;

struct Options {
  std::string format = "human";
  bool timing = false;
  std::string file;
  std::string output;
  std::vector<std::string> checks;
  int samples = 1000;
  std::uint64_t seed = 1;
  std::string from, to, loop;
  double epsilon = kDefaultEpsilon;
  // gen
  std::string kind;
  int triangles = 7;
  double side = 1.0;
  int kappa = -1;
  int segments = 6;
  double circumference = 6.0;
  double height = 2.0;
  double depth = 0.2;
  int levels = 1;
};

// Exit-code mapping for library errors.
int exit_for(ErrorKind k) {
  switch (k) {
  case ErrorKind::Parse:
  case ErrorKind::Io:
  case ErrorKind::Input:
  case ErrorKind::Unsupported:
  case ErrorKind::UnsupportedCurvature:
    return kExitUsage;
  default:
    return kExitFail;
  }
}

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t i) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (i + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

ComplexPoint random_point(const MkComplex& cx, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, cx.simplex_count() - 1);
  std::exponential_distribution<double> e(1.0);
  ComplexPoint p;
  p.simplex = pick(rng);
  if (cx.simplex(p.simplex).dim == 1) {
    const double t = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    p.bary = {1.0 - t, t, 0.0};
    return p;
  }
  double sum = 0.0;
  for (auto& x : p.bary) sum += (x = e(rng));
  for (auto& x : p.bary) x /= sum;
  return p;
}

json point_json(const MkComplex& cx, const ComplexPoint& p) {
  return json{{"simplex", cx.simplex(p.simplex).id}, {"bary", p.bary}};
}

json path_json(const ComplexPath& path) {
  json wps = json::array();
  for (const auto& w : path.waypoints()) {
    json j = point_json(path.complex(), w.point);
    if (w.virtual_vertex) j["vertex"] = true;
    wps.push_back(std::move(j));
  }
  return json{{"length", path.length()}, {"waypoints", std::move(wps)}};
}

json violation_json(const ViolationReport& r) {
  return json{{"kind", to_string(r.kind)}, {"magnitude", r.magnitude}, {"witness", r.witness}};
}

// "sid:b0,b1[,b2]" or "sid:label".
ComplexPoint parse_point(const MkComplex& cx, const std::string& token) {
  const auto colon = token.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == token.size())
    throw Error(ErrorKind::Input, "point '" + token + "' must be <simplex>:<b0>,<b1>,<b2> or <simplex>:<label>");
  const int s = cx.index_of(token.substr(0, colon));
  if (s < 0) throw Error(ErrorKind::Input, "unknown simplex in point '" + token + "'");
  const std::string rest = token.substr(colon + 1);
  const auto& simplex = cx.simplex(s);
  if (rest.find(',') == std::string::npos) {
    const int local = simplex.local_index(rest);
    if (local < 0) throw Error(ErrorKind::Input, "unknown vertex label in point '" + token + "'");
    return vertex_point(s, local);
  }
  std::vector<double> b;
  std::stringstream ss(rest);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0')
      throw Error(ErrorKind::Input, "bad barycentric coordinate '" + item + "' in '" + token + "'");
    b.push_back(v);
  }
  if (static_cast<int>(b.size()) != simplex.dim + 1 || simplex.dim > 2)
    throw Error(ErrorKind::Input, "point '" + token + "' needs " + std::to_string(simplex.dim + 1) +
                                      " barycentric coordinates");
  double sum = 0.0;
  for (double v : b) {
    if (v < 0.0) throw Error(ErrorKind::Input, "negative barycentric coordinate in '" + token + "'");
    sum += v;
  }
  if (!(sum > 0.0)) throw Error(ErrorKind::Input, "barycentric coordinates of '" + token + "' sum to 0");
  ComplexPoint p;
  p.simplex = s;
  p.bary = {b[0] / sum, b[1] / sum, b.size() > 2 ? b[2] / sum : 0.0};
  return p;
}

ComplexFile file_of(const MkComplex& cx) {
  ComplexFile f;
  f.curvature = cx.curvature();
  f.simplices = cx.simplices();
  f.gluings = cx.gluings();
  for (auto& s : f.simplices) s.line = 0;
  for (auto& g : f.gluings) g.line = 0;
  return f;
}

struct Loaded {
  std::string text;
  ComplexFile file;
};

Loaded load(const std::string& path) {
  Loaded l;
  l.text = read_text_file(path);
  l.file = parse_complex_file(l.text);
  return l;
}

MkComplex require_complex(const ComplexFile& f) {
  if (f.simplices.empty()) throw Error(ErrorKind::Input, "input has no simplex records");
  return build_complex(f);
}

json header(const std::string& command, const std::string* text) {
  json j;
  j["tool"] = "mkcx";
  j["version"] = kToolVersion;
  j["command"] = command;
  if (text) j["input_digest"] = fnv1a64(*text);
  return j;
}

// ---------------------------------------------------------------- commands

int cmd_validate(const Options& o, json& rep) {
  Loaded in = load(o.file);
  rep = header("validate", &in.text);
  json diags = json::array();
  auto add = [&](int line, const std::string& msg) {
    diags.push_back(json{{"line", line}, {"message", msg}});
  };
  if (!in.file.simplices.empty()) {
    try {
      auto cx = build_complex(in.file);
      rep["simplices"] = cx.simplex_count();
      rep["vertices"] = cx.vertex_count();
      rep["euler_characteristic"] = euler_characteristic(cx);
    } catch (const ValidationError& e) {
      for (const auto& v : e.violations()) add(v.line, v.message);
    }
  }
  if (in.file.polygon) {
    try {
      rep["polygon_vertices"] = file_polygon(in.file).size();
    } catch (const Error& e) {
      add(in.file.polygon_line, e.what());
    }
  }
  if (!in.file.marked.empty()) rep["marked"] = in.file.marked.size();
  if (!in.file.links.empty()) {
    try {
      rep["links"] = file_links(in.file).size();
    } catch (const Error& e) {
      add(0, e.what());
    }
  }
  if (in.file.simplices.empty() && !in.file.polygon && in.file.links.empty())
    add(0, "input has no simplex, polygon or link records");
  const bool ok = diags.empty();
  rep["status"] = ok ? "valid" : "invalid";
  if (!ok) rep["diagnostics"] = std::move(diags);
  return ok ? kExitPass : kExitFail;
}

json check_link(const MkComplex& cx) {
  auto v = link_condition(cx);
  if (!v) return json{{"status", "pass"}, {"magnitude", 0.0}};
  json j{{"status", "fail"}, {"magnitude", v->magnitude}};
  j["vertex"] = cx.vertex_name(v->vertex);
  j["violation"] = violation_json(*v);
  return j;
}

json check_cat(const MkComplex& cx, const Options& o) {
  double worst = 0.0;
  std::optional<ViolationReport> wit;
  int triangles = 0, probes = 0;
  auto absorb = [&](const SampledCheck& r) {
    ++triangles;
    if (r.value > worst || (!wit && r.worst)) {
      worst = std::max(worst, r.value);
      if (r.worst) wit = r.worst;
    }
  };
  for (int v = 0; v < cx.vertex_count(); ++v) {
    std::optional<GeodesicTriangle> tri;
    try {
      tri = vertex_probe_triangle(cx, v);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Input) throw;
      continue; // boundary vertex
    }
    ++probes;
    absorb(cat_inequality_sample(*tri, o.samples, mix_seed(o.seed, v)));
  }
  std::mt19937_64 rng(mix_seed(o.seed, 0xCA7));
  for (int i = 0; i < kRandomTriangles; ++i) {
    const auto p = random_point(cx, rng), q = random_point(cx, rng), r = random_point(cx, rng);
    absorb(cat_inequality_sample(GeodesicTriangle::from_points(cx, p, q, r), o.samples,
                                 mix_seed(o.seed, 0x10000 + i)));
  }
  json j{{"status", worst <= kCatTolerance ? "pass" : "fail"},
         {"magnitude", worst},
         {"tolerance", kCatTolerance},
         {"vertex_probes", probes},
         {"triangles", triangles},
         {"samples_per_triangle", o.samples}};
  if (worst > kCatTolerance && wit) j["violation"] = violation_json(*wit);
  return j;
}

json check_convexity(const MkComplex& cx, const Options& o) {
  std::mt19937_64 rng(mix_seed(o.seed, 0xC0E));
  double worst = 0.0;
  std::optional<ViolationReport> wit;
  for (int i = 0; i < kConvexityPairs; ++i) {
    const auto a = random_point(cx, rng), b = random_point(cx, rng);
    const auto c = random_point(cx, rng), d = random_point(cx, rng);
    auto r = convexity_check(shortest_geodesic(cx, a, b), shortest_geodesic(cx, c, d),
                             kConvexitySamples);
    if (r.value > worst) {
      worst = r.value;
      wit = r.worst;
    }
  }
  json j{{"status", worst <= kConvexityTolerance ? "pass" : "fail"},
         {"magnitude", worst},
         {"tolerance", kConvexityTolerance},
         {"pairs", kConvexityPairs},
         {"samples_per_pair", kConvexitySamples + 1}};
  if (worst > kConvexityTolerance && wit) j["violation"] = violation_json(*wit);
  return j;
}

json check_slim(const MkComplex& cx, const Options& o) {
  auto r = slimness_estimate(cx, kSlimTriples, o.seed);
  json j{{"status", "estimate"}, {"delta_lower_bound", r.value}, {"triples", kSlimTriples}};
  if (r.worst) j["witness"] = r.worst->witness;
  return j;
}

json link_class_json(const LinkRecord& rec, const VertexClass& c) {
  json j{{"link", rec.name}, {"kind", to_string(c.kind)}, {"h_vertex", c.h_vertex},
         {"optimum", c.optimum}};
  if (c.center) j["center"] = *c.center;
  return j;
}

json check_classify(const ComplexFile& f) {
  if (f.links.empty()) return json{{"status", "skipped"}, {"reason", "input has no link records"}};
  const auto links = file_links(f);
  json classes = json::array();
  for (std::size_t i = 0; i < links.size(); ++i) {
    auto c = classify_vertex(links[i].poly, links[i].outward);
    json j = link_class_json(f.links[i], c);
    if (c.certificate) {
      const bool valid =
          crossing_certificate_check(links[i].poly, *c.certificate) == CertificateStatus::Valid;
      j["certificate"] = valid ? "valid" : "invalid";
      if (!valid) j["status"] = "fail";
    }
    classes.push_back(std::move(j));
  }
  bool ok = true;
  for (const auto& c : classes) ok = ok && !c.contains("status");
  return json{{"status", ok ? "pass" : "fail"}, {"links", std::move(classes)}};
}

json check_two_convex(const ComplexFile& f) {
  if (f.links.empty()) return json{{"status", "skipped"}, {"reason", "input has no link records"}};
  const auto d = two_convexity_decision(file_links(f));
  json j{{"status", d.pass ? "pass" : "fail"}};
  if (!d.pass) {
    j["first_failing"] = f.links[d.first_failing].name;
    j["kind"] = to_string(d.classes[d.first_failing].kind);
  }
  return j;
}

int cmd_check(const Options& o, json& rep) {
  std::vector<std::string> checks = o.checks.empty() ? kCheckNames : o.checks;
  for (const auto& c : checks)
    if (std::find(kCheckNames.begin(), kCheckNames.end(), c) == kCheckNames.end())
      throw Error(ErrorKind::Input, "unknown check '" + c + "' (expected link, cat, convexity, "
                                                        "slim, classify or two-convex)");
  Loaded in = load(o.file);
  rep = header("check", &in.text);
  rep["seed"] = o.seed;
  rep["samples"] = o.samples;
  const bool need_complex = std::any_of(checks.begin(), checks.end(), [](const std::string& c) {
    return c != "classify" && c != "two-convex";
  });
  std::optional<MkComplex> cx;
  if (need_complex) cx = require_complex(in.file);
  json results = json::object();
  bool pass = true;
  for (const auto& c : checks) {
    if (results.contains(c)) continue;
    json r;
    try {
      if (c == "link") r = check_link(*cx);
      else if (c == "cat") r = check_cat(*cx, o);
      else if (c == "convexity") r = check_convexity(*cx, o);
      else if (c == "slim") r = check_slim(*cx, o);
      else if (c == "classify") r = check_classify(in.file);
      else r = check_two_convex(in.file);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Unsupported && e.kind() != ErrorKind::UnsupportedCurvature)
        throw;
      r = json{{"status", "unsupported"}, {"reason", e.what()}};
    }
    pass = pass && r["status"] != "fail";
    results[c] = std::move(r);
  }
  rep["checks"] = std::move(results);
  rep["status"] = pass ? "pass" : "fail";
  return pass ? kExitPass : kExitFail;
}

std::vector<Waypoint> parse_loop(const MkComplex& cx, const std::string& token) {
  std::vector<Waypoint> wps;
  std::stringstream ss(token);
  std::string item;
  while (std::getline(ss, item, ';'))
    if (!item.empty()) wps.push_back({parse_point(cx, item), false});
  if (wps.size() < 2) throw Error(ErrorKind::Input, "--loop needs at least two waypoints");
  return wps;
}

int cmd_geodesic(const Options& o, json& rep) {
  const bool segment = !o.from.empty() || !o.to.empty();
  if (segment == !o.loop.empty())
    throw Error(ErrorKind::Input, "give either --from and --to, or --loop");
  if (segment && (o.from.empty() || o.to.empty()))
    throw Error(ErrorKind::Input, "--from and --to must be given together");
  Loaded in = load(o.file);
  rep = header("geodesic", &in.text);
  auto cx = require_complex(in.file);
  if (segment) {
    const auto p = parse_point(cx, o.from), q = parse_point(cx, o.to);
    rep["mode"] = "segment";
    rep["path"] = path_json(shortest_geodesic(cx, p, q));
  } else {
    auto closed = tighten_closed(ComplexPath(cx, parse_loop(cx, o.loop)));
    rep["mode"] = "loop";
    rep["contracted"] = closed.contracted;
    rep["length"] = closed.length;
    rep["iterations"] = closed.iterations;
    if (closed.loop) rep["path"] = path_json(*closed.loop);
  }
  rep["status"] = "pass";
  return kExitPass;
}

int cmd_gb_audit(const Options& o, json& rep) {
  Loaded in = load(o.file);
  rep = header("gb-audit", &in.text);
  auto s = SingularSurface::from_complex(require_complex(in.file));
  const double residual = gauss_bonnet_audit(s);
  rep["euler_characteristic"] = s.euler_characteristic();
  rep["area"] = s.area();
  rep["residual"] = residual;
  rep["tolerance"] = kGaussBonnetTolerance;
  const bool ok = residual <= kGaussBonnetTolerance;
  rep["status"] = ok ? "pass" : "fail";
  return ok ? kExitPass : kExitFail;
}

int cmd_crescent_hull(const Options& o, json& rep) {
  if (!(o.epsilon > 0.0)) throw Error(ErrorKind::Input, "--epsilon must be positive");
  Loaded in = load(o.file);
  rep = header("crescent-hull", &in.text);
  rep["epsilon"] = o.epsilon;
  const auto poly = file_polygon(in.file);
  rep["input_vertices"] = poly.size();
  rep["input_crescents"] = find_crescents(poly).size();
  const auto res = two_convex_hull(poly, in.file.marked, o.epsilon);
  json trace = json::array();
  for (std::size_t i = 0; i < res.trace.size(); ++i) {
    const auto& it = res.trace[i];
    trace.push_back(json{{"iteration", i + 1},
                         {"max_folding", it.max_folding},
                         {"moves", it.moves},
                         {"vertices_before", it.vertices_before},
                         {"vertices_after", it.vertices_after},
                         {"max_marked_distance", it.max_marked_distance}});
  }
  rep["trace"] = std::move(trace);
  rep["output_vertices"] = res.polygon.size();
  rep["output_convex"] = res.polygon.is_convex();
  rep["max_marked_distance"] = res.max_marked_distance;
  json pts = json::array();
  for (const auto& p : res.polygon.chart()) pts.push_back(json::array({p.x, p.y}));
  rep["polygon"] = std::move(pts);
  if (!o.output.empty()) {
    ComplexFile out;
    out.polygon = res.polygon.chart();
    out.marked = in.file.marked;
    write_text_file(o.output, emit_complex_file(out));
  }
  rep["status"] = "pass";
  return kExitPass;
}

ComplexFile polygon_file(const HPolygon& poly) {
  ComplexFile f;
  f.polygon = poly.chart();
  return f;
}

int cmd_gen(const Options& o, json& rep, std::string& text) {
  ComplexFile f;
  if (o.kind == "cone") {
    f = file_of(gen::equilateral_cone(Curvature(o.kappa), o.triangles, o.side));
  } else if (o.kind == "cylinder") {
    f = file_of(gen::flat_cylinder(o.segments, o.circumference, o.height));
  } else if (o.kind == "torus") {
    f = file_of(gen::flat_torus7());
  } else if (o.kind == "notched-polygon") {
    if (!(o.depth > 0.0 && o.depth < 1.0))
      throw Error(ErrorKind::Input, "--depth must lie in (0, 1)");
    f = polygon_file(gen::notched_square(o.depth));
  } else if (o.kind == "spiral-polygon") {
    if (o.levels < 1) throw Error(ErrorKind::Input, "--levels must be at least 1");
    f = polygon_file(gen::hooked_polygon(o.levels));
  } else {
    throw Error(ErrorKind::Input, "unknown fixture kind '" + o.kind +
                                      "' (expected cone, cylinder, torus, notched-polygon or "
                                      "spiral-polygon)");
  }
  text = "# generated by mkcx gen " + o.kind + "\n" + emit_complex_file(f);
  rep = header("gen", nullptr);
  rep["output_digest"] = fnv1a64(text);
  rep["kind"] = o.kind;
  if (!o.output.empty()) {
    write_text_file(o.output, text);
    rep["output"] = o.output;
  }
  rep["status"] = "pass";
  return kExitPass;
}

// ---------------------------------------------------------------- output

void render_human(const json& j, const std::string& indent, std::ostream& os) {
  auto scalar = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  auto flat = [](const json& v) {
    if (!v.is_array() || v.size() > 4) return false;
    return std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_primitive(); });
  };
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (v.is_primitive()) os << indent << k << ": " << scalar(v) << '\n';
      else if (flat(v)) os << indent << k << ": " << v.dump() << '\n';
      else {
        os << indent << k << ":\n";
        render_human(v, indent + "  ", os);
      }
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (v.is_primitive()) os << indent << "- " << scalar(v) << '\n';
      else if (flat(v)) os << indent << "- " << v.dump() << '\n';
      else {
        os << indent << "-\n";
        render_human(v, indent + "  ", os);
      }
    }
  } else {
    os << indent << scalar(j) << '\n';
  }
}

void emit(const Options& o, json rep, double seconds, std::ostream& out) {
  if (o.timing) {
    rep["report_digest"] = fnv1a64(rep.dump());
    rep["wall_time_s"] = seconds;
  }
  if (o.format == "machine") out << rep.dump() << '\n';
  else render_human(rep, "", out);
}

} // namespace

std::string fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return hex64(h);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"mkcx: metric complex curvature checks", "mkcx"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("mkcx ") + kToolVersion);
  app.add_option("--format", o.format, "Report format")
      ->check(CLI::IsMember({"human", "machine"}))
      ->capture_default_str();
  app.add_flag("--timing", o.timing, "Append wall time and a digest of the report body");

  auto* validate = app.add_subcommand("validate", "Parse and validate an input file");
  validate->add_option("file", o.file)->required();

  auto* check = app.add_subcommand("check", "Run curvature and convexity checks");
  check->add_option("file", o.file)->required();
  check->add_option("--checks", o.checks, "Subset of link,cat,convexity,slim,classify,two-convex")
      ->delimiter(',');
  check->add_option("--samples", o.samples, "Samples per CAT triangle")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  check->add_option("--seed", o.seed, "Seed for randomized checks")->capture_default_str();

  auto* geodesic = app.add_subcommand("geodesic", "Shortest geodesic or tightened closed loop");
  geodesic->add_option("file", o.file)->required();
  geodesic->add_option("--from", o.from, "Start point <simplex>:<b0>,<b1>,<b2> or <simplex>:<label>");
  geodesic->add_option("--to", o.to, "End point");
  geodesic->add_option("--loop", o.loop, "Closed loop: ';'-separated waypoints, first == last");

  auto* gb = app.add_subcommand("gb-audit", "Gauss-Bonnet residual of a surface complex");
  gb->add_option("file", o.file)->required();

  auto* hull = app.add_subcommand("crescent-hull", "2-convex hull by crescent moves");
  hull->add_option("file", o.file)->required();
  hull->add_option("--epsilon", o.epsilon, "Marked geodesic tolerance")->capture_default_str();
  hull->add_option("--output", o.output, "Write the hull polygon to this file");

  auto* gen = app.add_subcommand("gen", "Generate a fixture file");
  gen->add_option("kind", o.kind, "cone|cylinder|torus|notched-polygon|spiral-polygon")->required();
  gen->add_option("--output", o.output, "Output path (default: stdout)");
  gen->add_option("--triangles", o.triangles, "cone: number of triangles")->capture_default_str();
  gen->add_option("--side", o.side, "cone: side length")->capture_default_str();
  gen->add_option("--curvature", o.kappa, "cone: -1, 0 or 1")->capture_default_str();
  gen->add_option("--segments", o.segments, "cylinder: triangles around")->capture_default_str();
  gen->add_option("--circumference", o.circumference, "cylinder")->capture_default_str();
  gen->add_option("--height", o.height, "cylinder")->capture_default_str();
  gen->add_option("--depth", o.depth, "notched-polygon: notch depth")->capture_default_str();
  gen->add_option("--levels", o.levels, "spiral-polygon: nesting levels")->capture_default_str();

  std::vector<std::string> rev(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(rev.begin(), rev.end());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  const auto t0 = std::chrono::steady_clock::now();
  json rep;
  int code = kExitPass;
  std::string gen_text;
  try {
    if (validate->parsed()) code = cmd_validate(o, rep);
    else if (check->parsed()) code = cmd_check(o, rep);
    else if (geodesic->parsed()) code = cmd_geodesic(o, rep);
    else if (gb->parsed()) code = cmd_gb_audit(o, rep);
    else if (hull->parsed()) code = cmd_crescent_hull(o, rep);
    else code = cmd_gen(o, rep, gen_text);
  } catch (const Error& e) {
    code = exit_for(e.kind());
    if (o.format == "machine") {
      json r = header(app.get_subcommands().front()->get_name(), nullptr);
      r["status"] = "error";
      r["error"] = json{{"kind", to_string(e.kind())}, {"message", e.what()}};
      out << r.dump() << '\n';
    }
    err << "error: " << e.what() << '\n';
    return code;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (gen->parsed() && o.output.empty()) {
    out << gen_text;
    return code;
  }
  emit(o, std::move(rep), seconds, out);
  return code;
}

} // namespace mkcx::cli
