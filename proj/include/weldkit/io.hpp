#pragma once
//
// JSON input/output, CSV sample tables and SVG plots. Complex numbers are
// always [re, im] pairs.

#include <weldkit/boundary.hpp>
#include <weldkit/circle.hpp>
#include <weldkit/error.hpp>
#include <weldkit/inverse.hpp>
#include <weldkit/kernel_function.hpp>
#include <weldkit/welding.hpp>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace weldkit {

using Json = nlohmann::ordered_json;

/// Input does not match the expected JSON schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------- primitives

inline Json to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

inline Json to_json(const std::vector<cplx>& v) {
  Json a = Json::array();
  for (const cplx& z : v) a.push_back(to_json(z));
  return a;
}

/// NaN has no JSON representation and is written as null.
inline Json number(double x) { return std::isnan(x) ? Json(nullptr) : Json(x); }

inline double parse_real(const Json& j, const std::string& what) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!j.is_number()) throw SchemaError(what + ": expected a number");
  return j.get<double>();
}

inline cplx parse_complex(const Json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw SchemaError(what + ": expected a complex number [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline std::vector<cplx> parse_complex_list(const Json& j, const std::string& what) {
  if (!j.is_array()) throw SchemaError(what + ": expected an array of [re, im] pairs");
  std::vector<cplx> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_complex(j[i], what + "[" + std::to_string(i) + "]"));
  return out;
}

inline std::vector<double> parse_real_list(const Json& j, const std::string& what) {
  if (!j.is_array()) throw SchemaError(what + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_real(j[i], what + "[" + std::to_string(i) + "]"));
  return out;
}

/// A grid size from JSON; the caller's override wins.
inline CircleGrid parse_grid(const Json& spec, std::optional<int> override_n, int fallback = 256) {
  int n = fallback;
  if (override_n) {
    n = *override_n;
  } else if (spec.contains("grid")) {
    if (!spec["grid"].is_number_integer()) throw SchemaError("grid: expected an integer");
    n = spec["grid"].get<int>();
  }
  if (n < 16 || n % 2 != 0) throw SchemaError("grid: node count must be even and >= 16, got " + std::to_string(n));
  return CircleGrid(n);
}

// ---------------------------------------------------------------- map specs

/// {"map": "identity" | "moebius" (+ "c") | "ellipse" (+ "r")}, {"taylor": [...]} or {"samples": [...]}.
inline BoundaryMap parse_map(const Json& spec) {
  if (!spec.is_object()) throw SchemaError("input: expected a JSON object");
  const int forms = spec.contains("map") + spec.contains("taylor") + spec.contains("samples");
  if (forms != 1) throw SchemaError("input: exactly one of \"map\", \"taylor\", \"samples\" is required");
  if (spec.contains("taylor")) return from_taylor(parse_complex_list(spec["taylor"], "taylor"));
  if (spec.contains("samples")) {
    const auto values = parse_complex_list(spec["samples"], "samples");
    const int n = static_cast<int>(values.size());
    if (n < 16 || n % 2 != 0) throw SchemaError("samples: count must be even and >= 16");
    return from_samples(PeriodicSamples(CircleGrid(n), values));
  }
  if (!spec["map"].is_string()) throw SchemaError("map: expected a name");
  const std::string name = spec["map"].get<std::string>();
  if (name == "identity") return identity_map();
  if (name == "moebius") {
    if (!spec.contains("c")) throw SchemaError("moebius: parameter \"c\" is required");
    const Json& c = spec["c"];
    return moebius_map(c.is_number() ? cplx(c.get<double>(), 0.0) : parse_complex(c, "c"));
  }
  if (name == "ellipse") {
    if (!spec.contains("r")) throw SchemaError("ellipse: parameter \"r\" is required");
    return ellipse_map(parse_real(spec["r"], "r"));
  }
  throw SchemaError("map: unknown catalog name \"" + name + "\"");
}

/// {"v0_roots": [...]} or {"v0_coeffs": [...]} with coefficients a_0 .. a_n.
inline std::vector<cplx> parse_v0_coeffs(const Json& spec, const CircleGrid& grid) {
  if (!spec.is_object()) throw SchemaError("input: expected a JSON object");
  const bool roots = spec.contains("v0_roots"), coeffs = spec.contains("v0_coeffs");
  if (roots == coeffs) throw SchemaError("input: exactly one of \"v0_roots\", \"v0_coeffs\" is required");
  if (roots) return TrigPolyV0::from_roots(parse_complex_list(spec["v0_roots"], "v0_roots"), grid).a;
  return parse_complex_list(spec["v0_coeffs"], "v0_coeffs");
}

// ---------------------------------------------------------------- weld results

inline Json to_json(const WeldingResult& r, const std::string& map_id) {
  Json j;
  j["command"] = "weld";
  j["map"] = map_id;
  j["grid"] = r.v0.size();
  j["status"] = to_string(r.status);
  j["consistency"] = r.consistency;
  j["two_route_defect"] = r.two_route_defect;
  j["composition_defect"] = r.composition_defect;
  j["kernel_residual"] = r.kernel_residual;
  j["sigma_ratio"] = number(r.v0.sigma_ratio);
  j["sigma_min_ratio"] = number(r.v0.sigma_min_ratio);
  j["v0"] = r.v0.samples();
  j["v0_normalized"] = r.v0.normalized();
  j["gamma_periodic"] = r.gamma.periodic_part();
  j["gamma_inv_periodic"] = r.gamma_inv.periodic_part();
  j["laurent"] = to_json(r.laurent.data());
  j["exterior_beta"] = to_json(r.exterior.beta());
  return j;
}

inline WeldingResult weld_from_json(const Json& j) {
  try {
    const auto v0 = parse_real_list(j.at("v0"), "v0");
    if (v0.size() < 16 || v0.size() % 2 != 0) throw SchemaError("v0: sample count must be even and >= 16");
    const CircleGrid grid(static_cast<int>(v0.size()));
    KernelFunction k(grid, v0, j.at("v0_normalized").get<bool>());
    k.sigma_ratio = parse_real(j.at("sigma_ratio"), "sigma_ratio");
    k.sigma_min_ratio = parse_real(j.at("sigma_min_ratio"), "sigma_min_ratio");
    const std::string status = j.at("status").get<std::string>();
    if (status != "ok" && status != "warning") throw SchemaError("status: expected \"ok\" or \"warning\"");
    return {CircleDiffeo(grid, parse_real_list(j.at("gamma_periodic"), "gamma_periodic")),
            CircleDiffeo(grid, parse_real_list(j.at("gamma_inv_periodic"), "gamma_inv_periodic")),
            std::move(k),
            ExteriorMap(parse_complex_list(j.at("exterior_beta"), "exterior_beta")),
            LaurentCoeffs(parse_complex_list(j.at("laurent"), "laurent")),
            parse_real(j.at("consistency"), "consistency"),
            status == "ok" ? WeldStatus::ok : WeldStatus::warning,
            parse_real(j.at("two_route_defect"), "two_route_defect"),
            parse_real(j.at("composition_defect"), "composition_defect"),
            parse_real(j.at("kernel_residual"), "kernel_residual")};
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("weld result: ") + e.what());
  }
}

// ---------------------------------------------------------------- reconstruct results

inline Json to_json(const TrigPolyV0& v, const InverseSolution& s) {
  Json j;
  j["command"] = "reconstruct";
  j["grid"] = v.grid.size();
  j["n"] = v.n;
  j["v0_coeffs"] = to_json(v.a);
  j["roots"] = to_json(v.roots);
  j["kappa"] = v.kappa;
  j["rescale"] = v.rescale;
  j["residues"] = to_json(residues(v));
  j["w"] = to_json(s.w);
  j["p_coeffs"] = to_json(s.p_poly.coeffs());
  j["univalent"] = s.univalent;
  j["residual"] = s.residual;
  j["label_defect"] = s.label_defect;
  j["boundary"] = to_json(s.f_map.boundary(v.grid).values);
  Json cands = Json::array();
  for (const auto& c : s.candidates) {
    Json e;
    e["w"] = to_json(c.w);
    e["integrated"] = c.integrated;
    e["univalent"] = c.univalent;
    e["residual"] = std::isfinite(c.residual) ? Json(c.residual) : Json(nullptr);
    e["label_defect"] = std::isfinite(c.label_defect) ? Json(c.label_defect) : Json(nullptr);
    if (!c.note.empty()) e["note"] = c.note;
    cands.push_back(std::move(e));
  }
  j["candidates"] = std::move(cands);
  return j;
}

// ---------------------------------------------------------------- CSV

inline std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Columns t, Re f, Im f, v0, tau with tau the lift of gamma^{-1}.
inline void write_csv(std::ostream& out, const PeriodicSamples& f_boundary, const KernelFunction& v0,
                      const CircleDiffeo& gamma_inv) {
  out << "t,re_f,im_f,v0,tau\n";
  const CircleGrid& g = f_boundary.grid;
  for (int j = 0; j < g.size(); ++j) {
    out << format_number(g.node(j)) << ',' << format_number(f_boundary[j].real()) << ','
        << format_number(f_boundary[j].imag()) << ',' << format_number(v0[j]) << ','
        << format_number(gamma_inv.at_node(j)) << '\n';
  }
}

// ---------------------------------------------------------------- SVG

struct SvgPlot {
  std::string title;
  /// Image boundary curve and its base point f(1).
  std::vector<cplx> curve;
  cplx base_point;
  /// Extra marked points (foci of an ellipse, for instance).
  std::vector<cplx> markers;
  /// tau(t_j) - t_j
  std::vector<double> lift_periodic;
  std::vector<double> v0;
};

namespace detail {

inline std::string fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  std::string s(buf);
  return s == "-0.00" ? "0.00" : s;
}

inline void polyline(std::ostream& out, const std::vector<std::pair<double, double>>& pts, const char* stroke,
                     bool closed) {
  out << "<" << (closed ? "polygon" : "polyline") << " fill=\"none\" stroke=\"" << stroke
      << "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) out << (i ? " " : "") << fixed(pts[i].first) << ',' << fixed(pts[i].second);
  out << "\"/>\n";
}

}  // namespace detail

/// Three 300x300 panels: the image boundary with its base point, the graph of
/// tau(x) - x and the samples of v0. Coordinates have two decimals, so equal
/// inputs give byte-identical files.
inline void write_svg(std::ostream& out, const SvgPlot& p) {
  constexpr double lo = 40.0, hi = 280.0, span = hi - lo;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"900\" height=\"300\" viewBox=\"0 0 900 300\">\n";
  out << "<rect width=\"900\" height=\"300\" fill=\"white\"/>\n";
  out << "<text x=\"450\" y=\"16\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" << p.title
      << "</text>\n";

  // panel 1: boundary, equal aspect
  {
    double x0 = p.base_point.real(), x1 = x0, y0 = p.base_point.imag(), y1 = y0;
    auto grow = [&](cplx z) {
      x0 = std::min(x0, z.real());
      x1 = std::max(x1, z.real());
      y0 = std::min(y0, z.imag());
      y1 = std::max(y1, z.imag());
    };
    for (const cplx& z : p.curve) grow(z);
    for (const cplx& z : p.markers) grow(z);
    const double scale = span / std::max({x1 - x0, y1 - y0, 1e-12});
    const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
    auto map = [&](cplx z) {
      return std::pair{160.0 + scale * (z.real() - cx), 160.0 - scale * (z.imag() - cy)};
    };
    std::vector<std::pair<double, double>> pts;
    for (const cplx& z : p.curve) pts.push_back(map(z));
    out << "<g id=\"boundary\">\n";
    out << "<text x=\"150\" y=\"34\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">image "
           "boundary</text>\n";
    detail::polyline(out, pts, "black", true);
    for (const cplx& m : p.markers) {
      const auto [mx, my] = map(m);
      out << "<circle cx=\"" << detail::fixed(mx) << "\" cy=\"" << detail::fixed(my)
          << "\" r=\"3\" fill=\"steelblue\"/>\n";
    }
    const auto [bx, by] = map(p.base_point);
    out << "<circle cx=\"" << detail::fixed(bx) << "\" cy=\"" << detail::fixed(by) << "\" r=\"4\" fill=\"crimson\"/>\n";
    out << "</g>\n";
  }

  auto graph = [&](const std::vector<double>& y, double x_offset, double ymin, double ymax, const char* label,
                   const char* id) {
    const std::size_t n = y.size();
    auto px = [&](double t) { return x_offset + lo + span * t / kTwoPi; };
    auto py = [&](double v) { return hi - span * (v - ymin) / (ymax - ymin); };
    out << "<g id=\"" << id << "\">\n";
    out << "<text x=\"" << detail::fixed(x_offset + 150) << "\" y=\"34\" font-family=\"sans-serif\" font-size=\"11\" "
        << "text-anchor=\"middle\">" << label << "</text>\n";
    out << "<line x1=\"" << detail::fixed(px(0)) << "\" y1=\"" << detail::fixed(py(0.0)) << "\" x2=\""
        << detail::fixed(px(kTwoPi)) << "\" y2=\"" << detail::fixed(py(0.0)) << "\" stroke=\"gray\"/>\n";
    std::vector<std::pair<double, double>> pts;
    for (std::size_t j = 0; j <= n; ++j) pts.push_back({px(kTwoPi * j / n), py(y[j % n])});
    detail::polyline(out, pts, "black", false);
    out << "</g>\n";
  };

  double amp = 0.0;
  for (double v : p.lift_periodic) amp = std::max(amp, std::abs(v));
  amp = amp < 1e-6 ? 1.0 : 1.1 * amp;
  graph(p.lift_periodic, 300.0, -amp, amp, "tau(x) - x", "lift");

  double vmax = 0.0;
  for (double v : p.v0) vmax = std::max(vmax, v);
  graph(p.v0, 600.0, 0.0, 1.1 * vmax, "v0", "kernel");
  out << "</svg>\n";
}

inline SvgPlot weld_plot(const BoundaryMap& f, const WeldingResult& r) {
  const CircleGrid& g = r.v0.grid();
  SvgPlot p;
  p.title = "welding of " + f.id() + " (N = " + std::to_string(g.size()) + ")";
  p.curve = f.boundary(g).values;
  p.base_point = f(1.0);
  if (f.id() == "ellipse") p.markers = {1.0, -1.0};
  p.lift_periodic = r.gamma_inv.periodic_part();
  p.v0 = r.v0.samples();
  return p;
}

}  // namespace weldkit
