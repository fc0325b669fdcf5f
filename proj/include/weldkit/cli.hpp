#pragma once
//
// Batch jobs behind the weldkit command-line tool. A JobSpec names one
// command, its JSON input and the output paths; run() executes it and maps
// failures to exit codes (1 schema, 2 validation, 3 numerical).

#include <weldkit/boundary.hpp>
#include <weldkit/error.hpp>
#include <weldkit/inverse.hpp>
#include <weldkit/io.hpp>
#include <weldkit/kernel.hpp>
#include <weldkit/operator.hpp>
#include <weldkit/welding.hpp>

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace weldkit {

enum ExitCode : int { exit_ok = 0, exit_schema = 1, exit_validation = 2, exit_numerical = 3 };

struct JobSpec {
  std::string command;
  /// Path to the JSON input; "-" reads standard input.
  std::string input;
  /// Catalog case for validate.
  std::string validate_case;
  std::optional<int> grid_n;
  std::optional<double> tol_rank;
  std::optional<double> tol_consistency;
  std::optional<int> attempts;
  std::uint64_t seed = 42;
  /// Output paths; an empty JSON path prints the result to standard output.
  std::string out;
  std::string csv;
  std::string svg;
};

namespace detail {

inline Json read_input(const std::string& path) {
  if (path.empty()) throw SchemaError("--input is required");
  std::ifstream file;
  std::istream* in = &std::cin;
  if (path != "-") {
    file.open(path);
    if (!file) throw SchemaError("cannot open input " + path);
    in = &file;
  }
  try {
    return Json::parse(*in);
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("input is not valid JSON: ") + e.what());
  }
}

inline void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw SchemaError("cannot write " + path);
  body(file);
}

inline void emit(const JobSpec& spec, const Json& result, std::ostream& out) {
  const std::string text = result.dump(2) + "\n";
  if (spec.out.empty()) {
    out << text;
  } else {
    write_file(spec.out, [&](std::ostream& o) { o << text; });
  }
}

inline WeldOptions weld_options(const JobSpec& spec) {
  WeldOptions o;
  if (spec.tol_rank) o.kernel.rank_tol = *spec.tol_rank;
  if (spec.tol_consistency) {
    o.accept_consistency = *spec.tol_consistency;
    o.reject_consistency = std::max(o.reject_consistency, o.accept_consistency);
  }
  return o;
}

inline InverseOptions inverse_options(const JobSpec& spec) {
  InverseOptions o;
  if (spec.tol_rank) o.kernel.rank_tol = *spec.tol_rank;
  if (spec.attempts) o.wk.attempts = *spec.attempts;
  o.wk.seed = spec.seed;
  return o;
}

inline CircleGrid grid_for_map(const Json& input, const JobSpec& spec) {
  const int fallback = input.contains("samples") && input["samples"].is_array()
                           ? static_cast<int>(input["samples"].size())
                           : 256;
  return parse_grid(input, spec.grid_n, fallback);
}

inline int run_weld(const JobSpec& spec, std::ostream& out, std::ostream& err) {
  const Json input = read_input(spec.input);
  const BoundaryMap f = parse_map(input);
  const CircleGrid grid = grid_for_map(input, spec);
  const WeldingResult r = weld(f, grid, weld_options(spec));
  if (r.status == WeldStatus::warning) {
    err << "warning: exterior Laurent coefficients of index >= 2 reach " << r.consistency
        << "; the grid may under-resolve f\n";
  }
  emit(spec, to_json(r, f.id()), out);
  if (!spec.csv.empty()) {
    write_file(spec.csv, [&](std::ostream& o) { write_csv(o, f.boundary(grid), r.v0, r.gamma_inv); });
  }
  if (!spec.svg.empty()) write_file(spec.svg, [&](std::ostream& o) { write_svg(o, weld_plot(f, r)); });
  return exit_ok;
}

inline int run_reconstruct(const JobSpec& spec, std::ostream& out, std::ostream&) {
  const Json input = read_input(spec.input);
  const CircleGrid grid = parse_grid(input, spec.grid_n);
  std::vector<cplx> a = parse_v0_coeffs(input, grid);
  while (a.size() > 1 && a.back() == 0.0) a.pop_back();

  const InverseOptions opts = inverse_options(spec);
  Json result;
  PeriodicSamples boundary = identity_map().boundary(grid);
  std::optional<KernelFunction> v0;
  if (a.size() == 1) {
    const InverseSolution s = reconstruct_coeffs(a, grid, opts);
    result["command"] = "reconstruct";
    result["grid"] = grid.size();
    result["n"] = 0;
    result["map"] = s.f_map.id();
    result["boundary"] = to_json(boundary.values);
    v0.emplace(grid, std::vector<double>(grid.size(), 1.0), true);
  } else {
    const TrigPolyV0 v = TrigPolyV0::from_coeffs(a, grid);
    const InverseSolution s = reconstruct(v, opts);
    result = to_json(v, s);
    boundary = s.f_map.boundary(grid);
    v0.emplace(v.kernel());
  }
  emit(spec, result, out);

  const CircleDiffeo tau = gamma_inverse_from_v0(*v0);
  if (!spec.csv.empty()) write_file(spec.csv, [&](std::ostream& o) { write_csv(o, boundary, *v0, tau); });
  if (!spec.svg.empty()) {
    SvgPlot p;
    p.title = "reconstruction (N = " + std::to_string(grid.size()) + ")";
    p.curve = boundary.values;
    p.base_point = boundary[0];
    p.lift_periodic = tau.periodic_part();
    p.v0 = v0->samples();
    write_file(spec.svg, [&](std::ostream& o) { write_svg(o, p); });
  }
  return exit_ok;
}

/// {"map"...,"v": samples | "v0", "points": [...], "eps": number}
inline int run_apply(const JobSpec& spec, std::ostream& out, std::ostream&) {
  const Json input = read_input(spec.input);
  const BoundaryMap f = parse_map(input);
  if (!input.contains("v")) throw SchemaError("apply-operator: \"v\" is required (samples or \"v0\")");
  const Json& vj = input["v"];
  std::optional<PeriodicSamples> v;
  if (vj.is_string()) {
    if (vj.get<std::string>() != "v0") throw SchemaError("v: the only named vector is \"v0\"");
    v.emplace(solve_v0(f, grid_for_map(input, spec), weld_options(spec).kernel).as_samples());
  } else {
    if (!vj.is_array() || vj.empty()) throw SchemaError("v: expected a non-empty array");
    std::vector<cplx> values;
    if (vj[0].is_number()) {
      for (double x : parse_real_list(vj, "v")) values.emplace_back(x, 0.0);
    } else {
      values = parse_complex_list(vj, "v");
    }
    const int n = static_cast<int>(values.size());
    if (n < 16 || n % 2 != 0) throw SchemaError("v: sample count must be even and >= 16");
    if (spec.grid_n && *spec.grid_n != n) throw SchemaError("v: sample count does not match --grid");
    v.emplace(CircleGrid(n), std::move(values));
  }

  Json result;
  result["command"] = "apply-operator";
  result["map"] = f.id();
  result["grid"] = v->size();
  result["residual"] = residual(f, *v);
  if (input.contains("points")) {
    const auto points = parse_complex_list(input["points"], "points");
    std::vector<cplx> values;
    for (const cplx& z : points) values.push_back(apply(f, *v, z));
    result["points"] = to_json(points);
    result["values"] = to_json(values);
    if (input.contains("eps")) {
      const double eps = parse_real(input["eps"], "eps");
      std::vector<cplx> delta;
      for (const cplx& z : points) delta.push_back(variation(f, *v, eps, z));
      result["variation"] = to_json(delta);
    }
  }
  emit(spec, result, out);
  return exit_ok;
}

struct Defect {
  std::string name;
  double value;
  double tol;
};

inline double sup_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

/// Forward cases compare weld() with closed forms; inverse cases compare reconstruct().
inline std::vector<Defect> validate_case(const std::string& name, const CircleGrid& g, const JobSpec& spec) {
  std::vector<Defect> d;
  auto forward = [&](const BoundaryMap& f, const std::function<double(int)>& v0, const ExteriorMap& phi) {
    const WeldingResult r = weld(f, g, weld_options(spec));
    double ev = 0.0;
    for (int j = 0; j < g.size(); ++j) ev = std::max(ev, std::abs(r.v0[j] - v0(j)));
    double eb = 0.0;
    for (int k = std::min(r.exterior.lowest_index(), phi.lowest_index()); k <= 1; ++k)
      eb = std::max(eb, std::abs(r.exterior.coefficient(k) - phi.coefficient(k)));
    d.push_back({"v0", ev, 1e-6});
    d.push_back({"exterior", eb, 1e-6});
    d.push_back({"consistency", r.consistency, 1e-5});
    d.push_back({"two_route", r.two_route_defect, 1e-8});
    d.push_back({"composition", r.composition_defect, 1e-9});
    d.push_back({"kernel_residual", r.kernel_residual, 1e-6});
    return r;
  };
  if (name == "identity") {
    const WeldingResult r = forward(identity_map(), [](int) { return 1.0; }, ExteriorMap({1.0}));
    d.push_back({"gamma", distance_to_rotation(r.gamma), 1e-10});
  } else if (name == "moebius") {
    const BoundaryMap f = moebius_map(0.3);
    const Circle c = circumcircle(f(1.0), f(cplx(0, 1)), f(-1.0));
    forward(f,
            [&](int j) {
              const cplx z = g.point(j);
              return ((f(z) - c.center) / (z * f.derivative(z))).real();
            },
            ExteriorMap({c.radius, c.center}));
  } else if (name == "ellipse") {
    const double r = 0.6;
    const BoundaryMap f = ellipse_map(r);
    const KernelFunction v0 = ellipse_kernel(r, g);
    forward(f, [&](int j) { return v0[j]; }, joukowski_exterior(1.0 / f(1.0).real()));
  } else if (name == "inverse-pair" || name == "inverse-moebius") {
    const bool pair = name == "inverse-pair";
    const cplx z1 = pair ? cplx(0.6) : std::polar(0.5, 1.0);
    const TrigPolyV0 v = TrigPolyV0::from_roots(pair ? std::vector<cplx>{z1, -z1} : std::vector<cplx>{z1}, g);
    const InverseSolution s = reconstruct(v, inverse_options(spec));
    std::vector<cplx> exact(g.size());
    for (int j = 0; j < g.size(); ++j) {
      const cplx z = g.point(j);
      exact[j] = pair ? z / std::sqrt(1.0 - z1 * z1 * z * z) : z / (1.0 - std::conj(z1) * z);
    }
    cplx sum = 0.0;
    for (const cplx& a : residues(v)) sum += a;
    d.push_back({"map", sup_abs_diff(s.f_map.boundary(g).values, exact), 1e-7});
    d.push_back({"welding_residual", s.residual, 1e-5});
    d.push_back({"residue_sum", std::abs(sum - 1.0), 1e-10});
    d.push_back({"product_constraint",
                 std::abs(s.p_poly(0.0) - v.q_poly(0.0)), 1e-8});
  } else {
    throw SchemaError("validate: unknown case \"" + name +
                      "\" (identity, moebius, ellipse, inverse-pair, inverse-moebius)");
  }
  return d;
}

inline int run_validate(const JobSpec& spec, std::ostream& out, std::ostream&) {
  Json result;
  result["command"] = "validate";
  if (!spec.validate_case.empty()) {
    const CircleGrid g = parse_grid(Json::object(), spec.grid_n);
    const auto defects = validate_case(spec.validate_case, g, spec);
    bool pass = true;
    Json list = Json::array();
    for (const auto& x : defects) {
      const bool ok = x.value <= x.tol;
      pass = pass && ok;
      list.push_back({{"name", x.name}, {"value", x.value}, {"tol", x.tol}, {"pass", ok}});
    }
    result["case"] = spec.validate_case;
    result["grid"] = g.size();
    result["defects"] = std::move(list);
    result["pass"] = pass;
    emit(spec, result, out);
    return pass ? exit_ok : exit_numerical;
  }
  const Json input = read_input(spec.input);
  const BoundaryMap f = parse_map(input);
  const CircleGrid g = grid_for_map(input, spec);
  const MapDiagnostics d = diagnose(f, g);
  result["map"] = f.id();
  result["grid"] = g.size();
  result["origin_value"] = d.origin_value;
  result["derivative_defect"] = d.derivative_defect;
  result["min_boundary_derivative"] = d.min_boundary_derivative;
  result["probes_wound_once"] = d.probes_wound_once;
  result["boundary_simple"] = d.boundary_simple;
  validate(f, g);
  result["pass"] = true;
  emit(spec, result, out);
  return exit_ok;
}

}  // namespace detail

/// Runs one job; diagnostics go to `err`, the JSON result to `out` unless spec.out is set.
inline int run(const JobSpec& spec, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    if (spec.command == "weld") return detail::run_weld(spec, out, err);
    if (spec.command == "reconstruct") return detail::run_reconstruct(spec, out, err);
    if (spec.command == "apply-operator") return detail::run_apply(spec, out, err);
    if (spec.command == "validate") return detail::run_validate(spec, out, err);
    throw SchemaError("unknown command \"" + spec.command + "\"");
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << "\n";
    return exit_schema;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_schema;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return exit_validation;
  } catch (const DomainError& e) {
    err << "validation error: " << e.what() << "\n";
    return exit_validation;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return exit_numerical;
  }
}

}  // namespace weldkit
