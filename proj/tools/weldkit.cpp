// weldkit: conformal welding and its inverse from the command line.

#include <weldkit/cli.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

namespace {

void add_common(CLI::App* sub, weldkit::JobSpec& spec, bool inverse) {
  sub->add_option("--input", spec.input, "JSON input file (- for stdin)");
  sub->add_option("--grid", spec.grid_n, "grid size (even, >= 16)");
  sub->add_option("--out", spec.out, "JSON result path (default: stdout)");
  sub->add_option("--csv", spec.csv, "CSV samples path (t, Re f, Im f, v0, tau)");
  sub->add_option("--svg", spec.svg, "SVG plot path");
  sub->add_option("--tol-rank", spec.tol_rank, "kernel rank tolerance (sigma_min / sigma_max)");
  sub->add_option("--tol-consistency", spec.tol_consistency, "accepted exterior Laurent defect");
  if (inverse) sub->add_option("--attempts", spec.attempts, "multi-start budget for the w_k system");
}

}  // namespace

int main(int argc, char** argv) {
  weldkit::JobSpec spec;
  if (const char* seed = std::getenv("WELDKIT_SEED")) {
    try {
      spec.seed = std::stoull(seed);
    } catch (const std::exception&) {
      std::cerr << "error: WELDKIT_SEED must be a non-negative integer\n";
      return weldkit::exit_schema;
    }
  }

  CLI::App app{"Conformal welding via the kernel of I_f, and reconstruction from trigonometric-polynomial kernels"};
  app.require_subcommand(1);
  auto* weld = app.add_subcommand("weld", "interior map -> kernel function, welding map, exterior map");
  auto* recon = app.add_subcommand("reconstruct", "trigonometric-polynomial v0 -> interior map");
  auto* apply = app.add_subcommand("apply-operator", "evaluate I_f[v] at interior points");
  auto* check = app.add_subcommand("validate", "check a map, or run a catalog case against closed forms");
  add_common(weld, spec, false);
  add_common(recon, spec, true);
  add_common(apply, spec, false);
  add_common(check, spec, true);
  check->add_option("--case", spec.validate_case, "identity | moebius | ellipse | inverse-pair | inverse-moebius");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return weldkit::exit_schema;
  }
  spec.command = app.get_subcommands().front()->get_name();
  return weldkit::run(spec);
}
