#include "eqrobust/io.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "eqrobust/common.hpp"

namespace eqrobust::io {

namespace {

std::string num(double x) { return fmt::format("{:.17g}", x); }

// ΔS columns shown in sweep summaries: at least -2..+1, widened to whatever
// the sweep observed.
std::pair<int, int> delta_range(const robust2d::SweepResult& sweep) {
  return {std::min(-2, sweep.min_delta), std::max(1, sweep.max_delta)};
}

std::string delta_label(int d) { return d > 0 ? fmt::format("+{}", d) : fmt::format("{}", d); }

}  // namespace

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

geom2d::ConvexPolygon2 parse_polygon_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw GeometryError(ErrorCode::ParseError, e.what());
  }
  if (!doc.is_object() || !doc.contains("vertices") || !doc["vertices"].is_array()) {
    throw GeometryError(ErrorCode::ParseError, "expected an object with a \"vertices\" array");
  }
  std::vector<geom2d::Point2> pts;
  for (const auto& v : doc["vertices"]) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      throw GeometryError(ErrorCode::ParseError, "each vertex must be [x, y]");
    }
    pts.push_back({v[0].get<double>(), v[1].get<double>()});
  }
  return geom2d::ConvexPolygon2::from_points(pts);
}

geom2d::ConvexPolygon2 read_polygon_json(const std::filesystem::path& path) {
  return parse_polygon_json(read_text(path));
}

std::string polygon_to_json(const geom2d::ConvexPolygon2& poly) {
  std::string out = "{\"vertices\": [";
  bool first = true;
  for (const auto& v : poly.vertices()) {
    out += fmt::format("{}[{}, {}]", first ? "" : ", ", num(v.x), num(v.y));
    first = false;
  }
  return out + "]}\n";
}

geom3d::ConvexPolyhedron3 parse_off(std::string_view text) {
  // Strip comments, then read whitespace separated tokens.
  std::string clean;
  std::istringstream lines{std::string(text)};
  for (std::string line; std::getline(lines, line);) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    clean += line;
    clean += '\n';
  }
  std::istringstream in(clean);
  std::string head;
  if (!(in >> head)) throw GeometryError(ErrorCode::ParseError, "empty OFF file");
  long long nv = 0, nf = 0, ne = 0;
  if (head == "OFF") {
    if (!(in >> nv >> nf >> ne)) throw GeometryError(ErrorCode::ParseError, "bad OFF counts");
  } else {
    try {
      nv = std::stoll(head);
    } catch (const std::exception&) {
      throw GeometryError(ErrorCode::ParseError, "missing OFF header");
    }
    if (!(in >> nf >> ne)) throw GeometryError(ErrorCode::ParseError, "bad OFF counts");
  }
  if (nv < 4 || nf < 4) throw GeometryError(ErrorCode::ParseError, "OFF needs at least 4 vertices and faces");

  std::vector<geom3d::Point3> verts(static_cast<std::size_t>(nv));
  for (auto& v : verts) {
    if (!(in >> v.x >> v.y >> v.z)) throw GeometryError(ErrorCode::ParseError, "truncated vertex list");
  }
  std::vector<std::vector<std::size_t>> faces(static_cast<std::size_t>(nf));
  for (auto& f : faces) {
    long long k = 0;
    if (!(in >> k) || k < 3) throw GeometryError(ErrorCode::ParseError, "bad face size");
    for (long long j = 0; j < k; ++j) {
      long long idx = 0;
      if (!(in >> idx) || idx < 0 || idx >= nv) throw GeometryError(ErrorCode::ParseError, "bad face index");
      f.push_back(static_cast<std::size_t>(idx));
    }
    // Optional colour values run to the end of the line; ignore them.
    std::string rest;
    std::getline(in, rest);
  }

  // Volume enclosed by the listed faces, orientation-free.
  double listed = 0.0;
  for (const auto& f : faces) {
    for (std::size_t j = 1; j + 1 < f.size(); ++j) {
      listed += geom3d::dot(verts[f[0]], geom3d::cross(verts[f[j]], verts[f[j + 1]]));
    }
  }
  listed = std::abs(listed) / 6.0;

  auto hull = geom3d::hull3(verts);
  if (hull.num_vertices() != verts.size()) {
    throw GeometryError(ErrorCode::NonConvexInput, "some OFF vertices are not hull vertices");
  }
  const double vol = geom3d::volume(hull);
  if (std::abs(vol - listed) > 1e3 * geometric_epsilon() * vol) {
    throw GeometryError(ErrorCode::NonConvexInput, "OFF faces do not bound the convex hull of the vertices");
  }
  // The hull keeps the file's vertex order and merges triangulated faces.
  return hull;
}

geom3d::ConvexPolyhedron3 read_off(const std::filesystem::path& path) { return parse_off(read_text(path)); }

std::string to_off(const geom3d::ConvexPolyhedron3& poly) {
  std::string out = fmt::format("OFF\n{} {} {}\n", poly.num_vertices(), poly.num_faces(), poly.num_edges());
  for (const auto& v : poly.vertices()) out += fmt::format("{} {} {}\n", num(v.x), num(v.y), num(v.z));
  for (const auto& f : poly.faces()) {
    out += fmt::format("{}", f.size());
    for (auto i : f) out += fmt::format(" {}", i);
    out += '\n';
  }
  return out;
}

std::string sweep_samples_csv(const robust2d::SweepResult& sweep) {
  std::string out = "theta,offset,side,relative_area,piece_S,delta_S,degenerate\n";
  for (const auto& s : sweep.samples) {
    out += fmt::format("{},{},{},{},{},{},{}\n", num(s.theta), num(s.offset), s.side,
                       num(s.relative_area), s.piece_S, s.delta_S, s.degenerate ? 1 : 0);
  }
  return out;
}

std::string sweep_summary_csv(const robust2d::SweepResult& sweep) {
  const auto [lo, hi] = delta_range(sweep);
  std::string out = "bin_lo,bin_hi";
  for (int d = lo; d <= hi; ++d) out += ",frac_dS_" + delta_label(d);
  out += ",frac_degenerate\n";
  for (const auto& b : sweep.bins) {
    out += num(b.lo) + "," + num(b.hi);
    for (int d = lo; d <= hi; ++d) out += "," + num(b.fraction(d));
    out += "," + num(b.degenerate_fraction()) + "\n";
  }
  return out;
}

std::string sweep_svg(const robust2d::SweepResult& sweep) {
  constexpr double W = 800, H = 600, L = 70, R = 150, T = 30, B = 60;
  const double pw = W - L - R, ph = H - T - B;
  auto X = [&](double x) { return L + pw * x; };
  auto Y = [&](double y) { return T + ph * (1.0 - y); };
  const auto [lo, hi] = delta_range(sweep);

  // Layers bottom to top: ΔS ascending, then degenerate.
  std::vector<std::string> names;
  std::vector<std::vector<double>> layers;
  for (int d = lo; d <= hi; ++d) {
    names.push_back("ΔS = " + delta_label(d));
    std::vector<double> v;
    for (const auto& b : sweep.bins) v.push_back(b.fraction(d));
    layers.push_back(std::move(v));
  }
  names.push_back("degenerate");
  {
    std::vector<double> v;
    for (const auto& b : sweep.bins) v.push_back(b.degenerate_fraction());
    layers.push_back(std::move(v));
  }
  static const char* palette[] = {"#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860", "#da8bc3"};

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      W, H, W, H);
  const std::size_t nb = sweep.bins.size();
  std::vector<double> base(nb, 0.0);
  for (std::size_t k = 0; k < layers.size(); ++k) {
    std::string pts;
    for (std::size_t i = 0; i < nb; ++i) {
      const double xm = 0.5 * (sweep.bins[i].lo + sweep.bins[i].hi);
      pts += fmt::format("{:.3f},{:.3f} ", X(xm), Y(base[i] + layers[k][i]));
    }
    for (std::size_t i = nb; i-- > 0;) {
      const double xm = 0.5 * (sweep.bins[i].lo + sweep.bins[i].hi);
      pts += fmt::format("{:.3f},{:.3f} ", X(xm), Y(base[i]));
    }
    const char* color = k + 1 == layers.size() ? "#999999" : palette[k % std::size(palette)];
    out += fmt::format("<polygon points=\"{}\" fill=\"{}\" stroke=\"none\"/>\n", pts, color);
    for (std::size_t i = 0; i < nb; ++i) base[i] += layers[k][i];
    out += fmt::format(
        "<rect x=\"{}\" y=\"{}\" width=\"14\" height=\"14\" fill=\"{}\"/>"
        "<text x=\"{}\" y=\"{}\" font-size=\"14\" font-family=\"sans-serif\">{}</text>\n",
        W - R + 20, T + 24 * static_cast<double>(k), color, W - R + 40, T + 12 + 24 * static_cast<double>(k),
        names[k]);
  }
  // Axes and ticks.
  out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", L, T,
                     pw, ph);
  for (int t = 0; t <= 5; ++t) {
    const double v = t / 5.0;
    out += fmt::format(
        "<text x=\"{:.3f}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\">{:.1f}</text>\n",
        X(v), H - B + 18, v);
    out += fmt::format(
        "<text x=\"{}\" y=\"{:.3f}\" font-size=\"12\" text-anchor=\"end\" font-family=\"sans-serif\">{:.1f}</text>\n",
        L - 6, Y(v) + 4, v);
  }
  out += fmt::format(
      "<text x=\"{}\" y=\"{}\" font-size=\"14\" text-anchor=\"middle\" font-family=\"sans-serif\">relative area of "
      "retained piece</text>\n",
      L + pw / 2, H - 15);
  out += fmt::format(
      "<text x=\"20\" y=\"{}\" font-size=\"14\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      "transform=\"rotate(-90 20 {})\">cumulative fraction</text>\n",
      T + ph / 2, T + ph / 2);
  return out + "</svg>\n";
}

}  // namespace eqrobust::io
