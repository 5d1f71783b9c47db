// cmono: complete-monotonicity checks for Laplace-transform kernels and
// moment experiments on discrete signed measures.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

int emit(const cmono::cli::RunReport& report) {
  std::cout << report.to_json().dump(2) << '\n';
  for (const auto& d : report.diagnostics) std::cerr << "cmono: " << d << '\n';
  return cmono::cli::exit_code(report.status);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace cmono::cli;

  CLI::App app{"Complete monotonicity and moment-uniqueness toolkit"};
  app.require_subcommand(1);

  KernelArgs kernel_args;
  auto* kernel = app.add_subcommand("kernel", "Scan a kernel and its sign function; write CSV t,phi,sign_fn");
  kernel->add_option("--kind", kernel_args.kind, "phi3 | phi4 | unit")->required();
  kernel->add_option("--m", kernel_args.m, "kernel parameter m > 0");
  kernel->add_option("--t-min", kernel_args.t_min, "scan start");
  kernel->add_option("--t-max", kernel_args.t_max, "scan end");
  kernel->add_option("--points", kernel_args.points, "log-spaced scan points");
  kernel->add_option("--output,-o", kernel_args.output, "CSV output path");

  CmArgs cm_args;
  auto* cm = app.add_subcommand("cm", "Kernel-sign refutation followed by derivative-sign verification");
  cm->add_option("--kind", cm_args.kind, "phi3 | phi4 | unit")->required();
  cm->add_option("--m", cm_args.m, "kernel parameter m > 0");
  cm->add_option("--max-order", cm_args.max_order, "highest derivative order (<= 60)");
  cm->add_option("--x", cm_args.x_grid, "x grid (repeatable)");
  cm->add_option("--tol", cm_args.tol, "quadrature tolerance");

  MomentsArgs mom_args;
  int mom_n = -1;
  auto* moments = app.add_subcommand("moments", "Moment experiments on measure files");
  moments->add_option("action", mom_args.action, "moments | diff | tm | cdf | indicator")
      ->required()
      ->check(CLI::IsMember({"moments", "diff", "tm", "cdf", "indicator"}));
  moments->add_option("files", mom_args.files, "measure file(s): one 'location weight' per line")->required();
  moments->add_option("--n", mom_n, "moment order");
  moments->add_option("--domain", mom_args.domain, "t (atoms on [0,inf)) or s (atoms on (0,1])");
  moments->add_option("--csv", mom_args.csv, "write moments as CSV n,c_n");
  moments->add_option("--x", mom_args.x, "cdf evaluation point in [0,1]");
  moments->add_option("--a", mom_args.a, "indicator plateau start");
  moments->add_option("--b", mom_args.b, "indicator plateau end");
  moments->add_option("--delta", mom_args.delta, "indicator ramp width");

  std::vector<double> m_list;
  auto* reproduce = app.add_subcommand("reproduce", "Run every kernel check for each m");
  reproduce->add_option("--m", m_list, "kernel parameter (repeatable)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string command = "cmono";
    for (const auto* sub : app.get_subcommands()) command = sub->get_name();
    return emit(error_report(command, Json::object(), e.what()));
  }

  if (*kernel) return emit(cmd_kernel(kernel_args));
  if (*cm) return emit(cmd_cm(cm_args));
  if (*moments) {
    if (mom_n >= 0) mom_args.n = mom_n;
    return emit(cmd_moments(mom_args));
  }
  return emit(cmd_reproduce(m_list));
}
