#include "cli.hpp"

#include <fmt/format.h>

#include <cmath>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "eqrobust/common.hpp"
#include "eqrobust/equilib2d.hpp"
#include "eqrobust/equilib3d.hpp"
#include "eqrobust/geom2d.hpp"
#include "eqrobust/geom3d.hpp"
#include "eqrobust/io.hpp"
#include "eqrobust/robust2d.hpp"

namespace eqrobust::cli {

namespace {

using json = nlohmann::ordered_json;

// A problem with the command line itself rather than the geometry.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// nlohmann prints the shortest round-trip form; reports use a fixed 17
// significant digits instead, so golden files stay stable across library
// versions.
void emit(const json& j, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + json(it.key()).dump() + ": ";
        emit(it.value(), out, indent, depth + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case json::value_t::array: {
      bool scalars = true;
      for (const auto& v : j) scalars &= v.is_primitive();
      if (scalars) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          emit(j[i], out, indent, depth + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        emit(j[i], out, indent, depth + 1);
      }
      out += "\n" + close + "]";
      return;
    }
    case json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? fmt::format("{:.17g}", x) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

std::string to_text(const json& j) {
  std::string out;
  emit(j, out, 2, 0);
  return out + "\n";
}

std::string to_csv(const json& j) {
  std::string out = "key,value\n";
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.value().is_object() || it.value().is_array()) continue;
    std::string v;
    emit(it.value(), v, 0, 0);
    if (it.value().is_string()) v = it.value().get<std::string>();
    out += it.key() + "," + v + "\n";
  }
  return out;
}

json point(geom2d::Point2 p) { return json::array({p.x, p.y}); }
json point(geom3d::Point3 p) { return json::array({p.x, p.y, p.z}); }

std::vector<double> parse_numbers(const std::string& text, char sep) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, sep);) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError("not a number: '" + item + "'");
    }
    if (used != item.size() || !std::isfinite(v)) throw UsageError("not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

struct Shape {
  std::string name;
  std::optional<geom2d::ConvexPolygon2> poly2;
  std::optional<geom3d::ConvexPolyhedron3> poly3;
  std::optional<std::array<double, 3>> ellipsoid;

  int dimension() const { return poly2 ? 2 : 3; }
};

Shape builtin_shape(const std::string& desc) {
  Shape s;
  s.name = desc;
  const auto colon = desc.find(':');
  const std::string head = desc.substr(0, colon);
  const std::vector<double> args =
      colon == std::string::npos ? std::vector<double>{} : parse_numbers(desc.substr(colon + 1), ':');
  auto want = [&](std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi) throw UsageError("wrong number of parameters in '" + desc + "'");
  };

  if (head == "ngon") {
    want(1, 1);
    const int sides = static_cast<int>(args[0]);
    if (sides != args[0] || sides < 3) throw UsageError("ngon needs an integer side count >= 3");
    s.poly2 = geom2d::regular_ngon(sides, geom2d::NgonScale::unit_perimeter);
  } else if (head == "square" || head == "rect") {
    double a = 1.0, b = 1.0;
    if (head == "rect") {
      want(2, 2);
      a = args[0];
      b = args[1];
    } else {
      want(0, 0);
    }
    const std::vector<geom2d::Point2> pts{{0, 0}, {a, 0}, {a, b}, {0, b}};
    s.poly2 = geom2d::ConvexPolygon2::from_points(pts);
  } else if (const auto solid = geom3d::parse_platonic(head)) {
    want(0, 0);
    s.poly3 = geom3d::platonic(*solid);
  } else if (head == "cylcut") {
    want(2, 3);
    const int facets = args.size() == 3 ? static_cast<int>(args[2]) : 32;
    s.poly3 = geom3d::truncated_cylinder(args[0], args[1], facets);
  } else if (head == "ellipsoid") {
    want(3, 3);
    s.ellipsoid = std::array<double, 3>{args[0], args[1], args[2]};
  } else {
    throw UsageError("unknown builtin shape '" + desc + "'");
  }
  return s;
}

std::string read_file(const std::string& path) {
  try {
    return io::read_text(path);
  } catch (const std::runtime_error& e) {
    throw IoFailure(e.what());
  }
}

void write_file(const std::string& path, const std::string& text) {
  try {
    io::write_text(path, text);
  } catch (const std::runtime_error& e) {
    throw IoFailure(e.what());
  }
}

struct Options {
  std::string builtin, poly, off;
  std::string ref = "centroid";
  std::string kind;
  std::string method = "exact";
  std::string out;
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  std::optional<long long> samples;
  int bins = 20;
  std::optional<int> grid_theta, grid_offset;
  std::optional<double> tol;
  int order = 1;
};

Shape load_shape(const Options& o) {
  const int given = !o.builtin.empty() + !o.poly.empty() + !o.off.empty();
  if (given != 1) throw UsageError("give exactly one of --builtin, --poly, --off");
  if (!o.builtin.empty()) return builtin_shape(o.builtin);
  Shape s;
  if (!o.poly.empty()) {
    s.name = o.poly;
    s.poly2 = io::parse_polygon_json(read_file(o.poly));
  } else {
    s.name = o.off;
    s.poly3 = io::parse_off(read_file(o.off));
  }
  return s;
}

void require_solid(const Shape& s) {
  if (s.ellipsoid) throw UsageError("ellipsoids are classified analytically; only 'analyze' accepts them");
}

geom2d::Point2 reference2(const Options& o, const geom2d::ConvexPolygon2& poly) {
  if (o.ref == "centroid") return geom2d::centroid(poly);
  const auto v = parse_numbers(o.ref, ',');
  if (v.size() != 2) throw UsageError("--ref needs x,y for a polygon");
  return {v[0], v[1]};
}

geom3d::Point3 reference3(const Options& o, const geom3d::ConvexPolyhedron3& poly) {
  if (o.ref == "centroid") return geom3d::centroid3(poly);
  const auto v = parse_numbers(o.ref, ',');
  if (v.size() != 3) throw UsageError("--ref needs x,y,z for a polyhedron");
  return {v[0], v[1], v[2]};
}

std::uint64_t need_seed(const Options& o) {
  if (!o.seed) throw UsageError("this command is stochastic; --seed is required");
  return *o.seed;
}

json base_report(const std::string& command, const Shape& shape) {
  return json{{"status", "ok"}, {"exit_code", 0}, {"command", command}, {"shape", shape.name},
              {"dimension", shape.ellipsoid ? 3 : shape.dimension()}};
}

json cmd_analyze(const Options& o) {
  const Shape shape = load_shape(o);
  json r = base_report("analyze", shape);
  if (shape.ellipsoid) {
    const auto& e = *shape.ellipsoid;
    const auto cls = equilib3d::ellipsoid_class(e[0], e[1], e[2]);
    r["method"] = "analytic";
    r["semi_axes"] = json::array({e[0], e[1], e[2]});
    r["S"] = cls.S;
    r["H"] = cls.H();
    r["U"] = cls.U;
    return r;
  }
  if (shape.poly2) {
    const auto& poly = *shape.poly2;
    const auto p = reference2(o, poly);
    const auto set = equilib2d::equilibria(poly, p);
    r["reference"] = point(p);
    r["S"] = set.S;
    r["U"] = set.U;
    r["degenerate"] = set.any_degenerate();
    json items = json::array();
    for (const auto& e : set.points) {
      items.push_back({{"kind", e.kind == equilib2d::Kind::stable ? "stable" : "unstable"},
                       {e.kind == equilib2d::Kind::stable ? "edge" : "vertex", e.carrier},
                       {"location", point(e.location)},
                       {"degenerate", e.degenerate}});
    }
    r["equilibria"] = items;
    if (set.any_degenerate()) {
      r["status"] = "degenerate";
      r["exit_code"] = Exit::degenerate;
    }
    return r;
  }
  const auto& poly = *shape.poly3;
  const auto p = reference3(o, poly);
  const auto set = equilib3d::classify3(poly, p);
  r["reference"] = point(p);
  r["V"] = poly.num_vertices();
  r["E"] = poly.num_edges();
  r["F"] = poly.num_faces();
  r["S"] = set.S;
  r["H"] = set.H;
  r["U"] = set.U;
  r["degenerate"] = set.any_degenerate();
  auto list = [](const std::vector<equilib3d::EquilibriumPoint3>& v, const char* carrier) {
    json items = json::array();
    for (const auto& e : v) {
      items.push_back({{carrier, e.carrier}, {"location", point(e.location)}, {"degenerate", e.degenerate}});
    }
    return items;
  };
  r["stable"] = list(set.stable, "face");
  r["saddle"] = list(set.saddle, "edge");
  r["unstable"] = list(set.unstable, "vertex");
  if (set.any_degenerate()) {
    r["status"] = "degenerate";
    r["exit_code"] = Exit::degenerate;
  } else {
    r["poincare_hopf"] = equilib3d::poincare_hopf_check(set);
  }
  return r;
}

json witness_json(const Witness& w) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, CausticWitness>) {
          return {{"type", "caustic_line"}, {"vertex", x.vertex}, {"edge", x.edge}, {"ray_only", x.ray_only}};
        } else if constexpr (std::is_same_v<T, SectorWitness>) {
          return {{"type", "sector"}, {"sector", x.sector}, {"radius", x.radius}, {"wide", x.wide}};
        } else if constexpr (std::is_same_v<T, CutLineWitness>) {
          return {{"type", "cut_line"}, {"theta", x.theta}, {"offset", x.offset}, {"side", x.side},
                  {"piece_S", x.piece_S}};
        } else if constexpr (std::is_same_v<T, WallWitness>) {
          return {{"type", "wall"}, {"face", x.face}, {"edge", x.edge}, {"ray_only", x.ray_only}};
        } else if constexpr (std::is_same_v<T, PlaneWitness>) {
          return {{"type", "cut_plane"}, {"normal", json::array({x.normal[0], x.normal[1], x.normal[2]})},
                  {"offset", x.offset}, {"side", x.side}, {"piece_S", x.piece_S}, {"piece_U", x.piece_U}};
        } else {
          return {{"type", "direction"},
                  {"direction", json::array({x.direction[0], x.direction[1], x.direction[2]})}};
        }
      },
      w);
}

void add_report(json& r, const RobustnessReport& rep) {
  r["kind"] = to_string(rep.kind);
  r["method"] = to_string(rep.method);
  r["value"] = rep.value;
  r["upper_bound"] = rep.upper_bound;
  r["reduction_found"] = rep.reduction_found;
  r["witness"] = witness_json(rep.witness);
  if (rep.provenance) {
    r["provenance"] = {{"grid_primary", rep.provenance->grid_primary},
                       {"grid_secondary", rep.provenance->grid_secondary},
                       {"refine_tol", rep.provenance->refine_tol},
                       {"evaluated", rep.provenance->evaluated}};
  }
  if (!rep.reduction_found) r["status"] = "no_reduction_found";
}

json cmd_robust(const Options& o) {
  const Shape shape = load_shape(o);
  require_solid(shape);
  json r = base_report("robust", shape);
  const std::string& kind = o.kind;
  if (o.method != "exact" && o.method != "sampled") throw UsageError("--method must be exact or sampled");
  const bool sampled = o.method == "sampled";

  if (shape.poly2) {
    const auto& poly = *shape.poly2;
    if (kind == "in") {
      const auto p = reference2(o, poly);
      r["reference"] = point(p);
      add_report(r, sampled ? robust2d::rho_in_sampled(poly, p, static_cast<int>(o.samples.value_or(720)),
                                                       o.tol.value_or(1e-6))
                            : robust2d::rho_in_exact(poly, p));
    } else if (kind == "ex") {
      const auto p = reference2(o, poly);
      r["reference"] = point(p);
      add_report(r, robust2d::rho_ex_exact(poly, p));
    } else if (kind == "full-line") {
      robust2d::LineSearchOptions opt;
      if (o.grid_theta) opt.grid_theta = *o.grid_theta;
      if (o.grid_offset) opt.grid_offset = *o.grid_offset;
      if (o.tol) opt.refine_tol = *o.tol;
      add_report(r, robust2d::full_robustness_line_bound(poly, opt));
    } else if (kind == "avg") {
      const auto avg = robust2d::average_robustness(poly, o.order, static_cast<std::size_t>(o.samples.value_or(10000)),
                                                    need_seed(o));
      r["kind"] = "average";
      r["method"] = "monte_carlo";
      r["order"] = o.order;
      r["seed"] = *o.seed;
      r["value"] = avg.value;
      r["standard_error"] = avg.standard_error;
      r["neutral"] = avg.neutral;
      r["trials"] = avg.trials;
      r["degenerate"] = avg.degenerate;
    } else {
      throw UsageError("kind '" + kind + "' is not available for polygons (in, ex, full-line, avg)");
    }
    return r;
  }

  const auto& poly = *shape.poly3;
  if (kind == "in") {
    const auto p = reference3(o, poly);
    r["reference"] = point(p);
    add_report(r, sampled ? equilib3d::rho_in_sampled_3d(poly, p, static_cast<int>(o.samples.value_or(1024)),
                                                         o.tol.value_or(1e-6))
                          : equilib3d::rho_in_exact_3d(poly, p));
  } else if (kind == "partial-s" || kind == "partial-u" || kind == "partial") {
    equilib3d::PlaneSearchOptions opt;
    opt.seed = need_seed(o);
    if (o.grid_theta) opt.normals = *o.grid_theta;
    if (o.grid_offset) opt.offsets = *o.grid_offset;
    if (o.tol) opt.refine_tol = *o.tol;
    const auto target = kind == "partial-s"   ? equilib3d::TruncationTarget::reduce_S
                        : kind == "partial-u" ? equilib3d::TruncationTarget::reduce_U
                                              : equilib3d::TruncationTarget::reduce_any;
    r["seed"] = opt.seed;
    add_report(r, equilib3d::plane_truncation_search(poly, target, opt));
  } else {
    throw UsageError("kind '" + kind + "' is not available for polyhedra (in, partial-s, partial-u, partial)");
  }
  return r;
}

json cmd_sweep(const Options& o, std::string& alternate) {
  const Shape shape = load_shape(o);
  if (!shape.poly2) throw UsageError("sweep needs a polygon");
  const std::uint64_t seed = need_seed(o);
  const long long samples = o.samples.value_or(100000);
  if (samples < 1) throw UsageError("--samples must be positive");
  const auto sweep = robust2d::truncation_sweep(*shape.poly2, static_cast<std::size_t>(samples), seed, o.bins);

  json r = base_report("sweep", shape);
  r["seed"] = seed;
  r["samples"] = samples;
  r["records"] = sweep.samples.size();
  r["bins"] = o.bins;
  r["base_S"] = sweep.base_S;
  r["min_delta_S"] = sweep.min_delta;
  r["max_delta_S"] = sweep.max_delta;
  std::size_t degenerate = 0;
  for (const auto& s : sweep.samples) degenerate += s.degenerate;
  r["degenerate"] = degenerate;

  const std::string samples_csv = io::sweep_samples_csv(sweep);
  const std::string summary_csv = io::sweep_summary_csv(sweep);
  const std::string svg = io::sweep_svg(sweep);
  if (!o.out.empty()) {
    write_file(o.out + "_samples.csv", samples_csv);
    write_file(o.out + "_summary.csv", summary_csv);
    write_file(o.out + ".svg", svg);
    r["files"] = json::array({o.out + "_samples.csv", o.out + "_summary.csv", o.out + ".svg"});
  }
  if (o.format == "csv") alternate = summary_csv;
  if (o.format == "svg") alternate = svg;
  return r;
}

json cmd_fixtures() {
  json r{{"status", "ok"}, {"exit_code", 0}, {"command", "fixtures"}};
  bool all = true;

  const auto fx = equilib3d::example_truncated_tetra_fixture();
  json tetra{{"passed", fx.passed()},
             {"surface_truncated", fx.truncated_surface},
             {"rho_in_original", fx.original_report.value},
             {"rho_in_truncated", fx.truncated_report.value},
             {"counts_original", json::array({fx.original_set.S, fx.original_set.H, fx.original_set.U})},
             {"counts_truncated", json::array({fx.truncated_set.S, fx.truncated_set.H, fx.truncated_set.U})},
             {"failures", fx.failures}};
  all &= fx.passed();
  r["truncated_tetrahedron"] = tetra;

  std::size_t checks = 0;
  json failed = json::array();
  for (int n = 4; n <= 63; ++n) {
    for (int k = 1; n - k >= 3 && n + k <= 64; ++k) {
      ++checks;
      if (!robust2d::dowker_convexity_check(n, k)) failed.push_back(json::array({n, k}));
    }
  }
  r["dowker"] = {{"checks", checks}, {"failed", failed}, {"passed", failed.empty()}};
  all &= failed.empty();
  if (!all) {
    r["status"] = "fixture_failure";
    r["exit_code"] = Exit::fixture_failure;
  }
  return r;
}

int exit_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateConfiguration:
    case ErrorCode::DegeneratePresent:
      return Exit::degenerate;
    default:
      return Exit::validation;
  }
}

std::string status_for(int code) {
  switch (code) {
    case Exit::io_error: return "io_error";
    case Exit::degenerate: return "degenerate";
    case Exit::fixture_failure: return "fixture_failure";
    default: return "validation_error";
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Equilibrium counts and robustness of convex polygons and polyhedra"};
  app.require_subcommand(1);
  Options o;

  auto add_shape = [&](CLI::App* sub) {
    sub->add_option("--builtin", o.builtin,
                    "ngon:S, square, rect:a:b, tetra, cube, octa, dodeca, icosa, cylcut:r:d[:facets], "
                    "ellipsoid:a:b:c");
    sub->add_option("--poly", o.poly, "polygon JSON file {\"vertices\": [[x, y], ...]}");
    sub->add_option("--off", o.off, "OFF polyhedron file");
    sub->add_option("--out", o.out, "output path (prefix for sweep)");
    sub->add_option("--format", o.format, "json or csv (sweep also: svg)")
        ->check(CLI::IsMember({"json", "csv", "svg"}));
  };

  auto* analyze = app.add_subcommand("analyze", "classify equilibria");
  add_shape(analyze);
  analyze->add_option("--ref", o.ref, "centroid or x,y[,z]");

  auto* robust = app.add_subcommand("robust", "robustness measures");
  add_shape(robust);
  robust->add_option("--ref", o.ref, "centroid or x,y[,z]");
  robust->add_option("--kind", o.kind, "in, ex, full-line, avg (2D); in, partial-s, partial-u, partial (3D)")
      ->required();
  robust->add_option("--method", o.method, "exact or sampled (kind in)");
  robust->add_option("--samples", o.samples, "directions (sampled in) or Monte Carlo trials (avg)");
  robust->add_option("--seed", o.seed, "random seed");
  robust->add_option("--grid-theta", o.grid_theta, "cut directions: angles (2D) or plane normals (3D)");
  robust->add_option("--grid-offset", o.grid_offset, "offsets per direction");
  robust->add_option("--tol", o.tol, "refinement / bisection tolerance")->check(CLI::PositiveNumber);
  robust->add_option("--order", o.order, "number of successive cuts (avg)")->check(CLI::PositiveNumber);

  auto* sweep = app.add_subcommand("sweep", "random single-line truncations of a polygon");
  add_shape(sweep);
  sweep->add_option("--samples", o.samples, "number of random lines (default 100000)");
  sweep->add_option("--seed", o.seed, "random seed")->required();
  sweep->add_option("--bins", o.bins, "relative-area bins")->check(CLI::PositiveNumber);

  auto* fixtures = app.add_subcommand("fixtures", "built-in consistency fixtures");
  fixtures->add_option("--out", o.out, "output path");

  std::string alternate;
  json report;
  int code = Exit::ok;
  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      out << app.help();
      return Exit::ok;
    } catch (const CLI::ParseError& e) {
      throw UsageError(e.what());
    }
    if (const char* env = std::getenv("EQ_EPS"); env && *env) {
      const auto v = parse_numbers(env, ',');
      if (v.size() != 1) throw UsageError("EQ_EPS must be a single number");
      set_geometric_epsilon(v[0]);
    }
    if (*analyze) report = cmd_analyze(o);
    if (*robust) report = cmd_robust(o);
    if (*sweep) report = cmd_sweep(o, alternate);
    if (*fixtures) report = cmd_fixtures();
    code = report["exit_code"].get<int>();
  } catch (const GeometryError& e) {
    code = exit_for(e.code());
    report = {{"status", status_for(code)}, {"exit_code", code}, {"error", to_string(e.code())}, {"message", e.what()}};
  } catch (const IoFailure& e) {
    code = Exit::io_error;
    report = {{"status", status_for(code)}, {"exit_code", code}, {"message", e.what()}};
  } catch (const UsageError& e) {
    code = Exit::validation;
    report = {{"status", status_for(code)}, {"exit_code", code}, {"message", e.what()}};
  }
  if (code != Exit::ok && report.contains("message")) err << "eqrobust: " << report["message"].get<std::string>() << "\n";

  std::string text = !alternate.empty() ? alternate : (o.format == "csv" ? to_csv(report) : to_text(report));
  const bool to_file = !o.out.empty() && !*sweep && code != Exit::io_error;
  if (to_file) {
    try {
      io::write_text(o.out, text);
      return code;
    } catch (const std::runtime_error& e) {
      err << "eqrobust: " << e.what() << "\n";
      code = Exit::io_error;
      text = to_text({{"status", status_for(code)}, {"exit_code", code}, {"message", e.what()}});
    }
  }
  out << text;
  return code;
}

}  // namespace eqrobust::cli
