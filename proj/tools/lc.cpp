// lc: level-crossing transition probabilities from the command line.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "lcross/ddp.hpp"
#include "lcross/integrator.hpp"
#include "lcross/sweep.hpp"

using namespace lcross;

namespace {

constexpr int kBadArguments = 2;

struct SolveOptions {
  std::string model = "lz";
  double a = 1.0;
  double eps = 0.0;
  int n_power = 3;
  double omega = 0, beta = 0, gamma = 0;
  int order = 3;
  int cross = 2;
  double ratio = 1e-4;
};

struct SweepOptions {
  std::string model = "lz";
  double a = 1.0;
  double eps = 0.0;
  int n_power = 3;
  std::string var = "a";
  double min = 0, max = 1;
  int count = 2;
  std::string methods = "numeric,ddp,lz";
  std::string format = "csv";
  std::string out;
  int threads = 0;
};

void print_points(const DdpResult& r) {
  for (const auto& p : r.points_used) {
    std::printf("  tau_c = %+.12f %+.12fi   D = %+.12f %+.12fi   Gamma = %+.3f %+.3fi\n", p.tau_c.real(),
                p.tau_c.imag(), p.action.real(), p.action.imag(), p.gamma.real(), p.gamma.imag());
  }
}

int run_solve(const SolveOptions& o, bool physical) {
  const ModelSpec m = physical ? ModelSpec::from_physical(o.omega, o.beta, o.gamma) : [&] {
    switch (parse_model_kind(o.model)) {
      case ModelKind::LZ: return ModelSpec::lz(o.a);
      case ModelKind::Superlinear: return ModelSpec::superlinear(o.a, o.eps);
      case ModelKind::Sublinear: return ModelSpec::sublinear(o.a, o.eps);
      case ModelKind::Essential: return ModelSpec::essential(o.a, o.n_power);
      case ModelKind::AEHTangent: break;
    }
    throw std::invalid_argument("use 'lc aeh' for the tangent model");
  }();

  IntegratorConfig cfg;
  cfg.sa_order = o.order;
  cfg.convergence_ratio = o.ratio;
  if (o.cross >= 0) cfg.cross_check_order = o.cross;
  else cfg.cross_check_order.reset();
  cfg.validate();

  std::printf("model        %s", m.id().c_str());
  if (m.kind == ModelKind::Superlinear || m.kind == ModelKind::Sublinear) std::printf("  eps = %.6g", m.eps);
  if (m.kind == ModelKind::Essential) std::printf("  N = %d", m.n_power);
  std::printf("  a = %.6g\n", m.a);

  const PropagationResult r = solve(m, cfg);
  std::printf("P numeric    %.12e  (SA order %d, tau_stop %.4g, %ld steps%s)\n", r.probability, r.sa_order,
              r.stop_time, r.steps, r.converged ? "" : ", NOT converged");
  if (r.cross_order_gap)
    std::printf("cross order  P = %.12e  gap %.3e\n", *r.cross_probability, *r.cross_order_gap);

  const DdpResult d = ddp_estimate(m);
  std::printf("P ddp        %.12e  [%s]\n", d.probability, std::string(to_string(d.branch)).c_str());
  print_points(d);
  for (const auto& alt : d.alternatives)
    std::printf("  %-22s %.12e\n", std::string(to_string(alt.branch)).c_str(), alt.probability);
  if (auto p = asymptotic_estimate(m)) std::printf("P asymptotic %.12e\n", *p);
  std::printf("P LZ         %.12e\n", p_lz(m.a));
  if (r.probability > 0) std::printf("rel diff     %.3e\n", std::abs(r.probability - d.probability) / r.probability);
  for (const auto& w : d.warnings) std::printf("warning: %s\n", w.c_str());
  return r.converged ? 0 : 3;
}

int run_aeh(double A, double B, double T) {
  const ModelSpec m = ModelSpec::aeh_tangent(A, B, T);
  IntegratorConfig cfg;
  cfg.convergence_ratio = 1e-8;
  const PropagationResult r = solve(m, cfg);
  const double exact = aeh_exact(A, B, T);
  const DdpResult pert = ddp_estimate(m);
  std::printf("A = %.6g  B = %.6g  T = %.6g  (a = %.6g)\n", A, B, T, m.a);
  std::printf("P exact      %.12e\n", exact);
  std::printf("P numeric    %.12e  (diff %.3e, tau_stop %.4g%s)\n", r.probability, r.probability - exact,
              r.stop_time, r.converged ? "" : ", NOT converged");
  std::printf("P perturb.   %.12e  (log ratio %.4e)\n", pert.probability, std::log(pert.probability / exact));
  for (const auto& w : pert.warnings) std::printf("warning: %s\n", w.c_str());
  return r.converged ? 0 : 3;
}

std::unique_ptr<std::ostream> open_out(const std::string& path) {
  if (path.empty() || path == "-") return nullptr;
  auto f = std::make_unique<std::ofstream>(path);
  if (!*f) throw std::invalid_argument("cannot open output file " + path);
  return f;
}

int run_sweep_cmd(const SweepOptions& o) {
  SweepConfig cfg;
  cfg.kind = parse_model_kind(o.model);
  cfg.a = o.a;
  cfg.eps = o.eps;
  cfg.n_power = o.n_power;
  cfg.var = parse_sweep_var(o.var);
  cfg.grid = Grid{o.min, o.max, o.count, {}};
  cfg.methods = parse_methods(o.methods);
  cfg.format = parse_output_format(o.format);
  cfg.out_path = o.out;
  cfg.threads = o.threads;
  cfg.validate();

  const auto rows = run_sweep(cfg);
  auto file = open_out(o.out);
  write_rows(file ? *file : std::cout, rows, cfg.format);
  std::cerr << format_report(compare_report(rows));
  return sweep_exit_code(rows);
}

int run_preset(const std::string& name, const std::string& out, const std::string& format, int threads) {
  const OutputFormat fmt = parse_output_format(format);
  auto configs = preset(name);
  auto file = open_out(out);
  std::ostream& os = file ? *file : std::cout;
  std::vector<SweepRow> all;
  bool header = true;
  for (auto& cfg : configs) {
    cfg.threads = threads;
    const auto rows = run_sweep(cfg);
    write_rows(os, rows, fmt, header);
    header = false;
    all.insert(all.end(), rows.begin(), rows.end());
  }
  std::cerr << format_report(compare_report(all));
  return sweep_exit_code(all);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonadiabatic transition probabilities for two-state level crossings"};
  app.require_subcommand(1);

  SolveOptions so;
  auto* solve_cmd = app.add_subcommand("solve", "Single point: numeric, DDP and LZ probabilities");
  solve_cmd->add_option("--model", so.model, "lz | superlinear | sublinear | essential");
  solve_cmd->add_option("--a", so.a, "Dimensionless coupling a = Omega/beta");
  solve_cmd->add_option("--eps", so.eps, "Dimensionless nonlinearity");
  solve_cmd->add_option("--n", so.n_power, "Power N of the essential model");
  auto* omega_opt = solve_cmd->add_option("--omega", so.omega, "Physical coupling Omega");
  auto* beta_opt = solve_cmd->add_option("--beta", so.beta, "Physical slope beta");
  auto* gamma_opt = solve_cmd->add_option("--gamma", so.gamma, "Physical cubic coefficient Gamma");
  omega_opt->needs(beta_opt);
  beta_opt->needs(omega_opt);
  gamma_opt->needs(omega_opt);
  solve_cmd->add_option("--order", so.order, "Superadiabatic basis order")->check(CLI::Range(0, 5));
  solve_cmd->add_option("--cross", so.cross, "Cross-check order (-1 disables)")->check(CLI::Range(-1, 5));
  solve_cmd->add_option("--ratio", so.ratio, "Convergence ratio of the oscillation envelope");

  SweepOptions sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Parameter sweep to CSV or JSON lines");
  sweep_cmd->add_option("--model", sw.model, "lz | superlinear | sublinear | essential")->required();
  sweep_cmd->add_option("--a", sw.a, "Fixed coupling for eps sweeps");
  sweep_cmd->add_option("--eps", sw.eps, "Fixed nonlinearity for a sweeps");
  sweep_cmd->add_option("--n", sw.n_power, "Power N of the essential model");
  sweep_cmd->add_option("--var", sw.var, "a | eps")->required();
  sweep_cmd->add_option("--min", sw.min)->required();
  sweep_cmd->add_option("--max", sw.max)->required();
  sweep_cmd->add_option("--count", sw.count)->required();
  sweep_cmd->add_option("--methods", sw.methods, "Comma list of numeric, ddp, lz, asymptotic");
  sweep_cmd->add_option("--format", sw.format, "csv | jsonl");
  sweep_cmd->add_option("--out", sw.out, "Output path (stdout when omitted)");
  sweep_cmd->add_option("--threads", sw.threads, "Worker threads (0: hardware concurrency)");

  std::string preset_name, preset_out, preset_format = "csv";
  int preset_threads = 0;
  auto* preset_cmd = app.add_subcommand("preset", "Figure reproduction datasets");
  preset_cmd->add_option("name", preset_name, "fig2 | fig3 | fig4 | fig5")->required();
  preset_cmd->add_option("--out", preset_out, "Output path (stdout when omitted)");
  preset_cmd->add_option("--format", preset_format, "csv | jsonl");
  preset_cmd->add_option("--threads", preset_threads, "Worker threads (0: hardware concurrency)");

  double A = 0, B = 0, T = 0;
  auto* aeh_cmd = app.add_subcommand("aeh", "Tangent model: exact vs numeric vs perturbative");
  aeh_cmd->add_option("--A", A, "Coupling amplitude")->required();
  aeh_cmd->add_option("--B", B, "Detuning amplitude")->required();
  aeh_cmd->add_option("--T", T, "Width")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kBadArguments;
  }

  try {
    if (*solve_cmd) return run_solve(so, omega_opt->count() > 0);
    if (*sweep_cmd) return run_sweep_cmd(sw);
    if (*preset_cmd) return run_preset(preset_name, preset_out, preset_format, preset_threads);
    if (*aeh_cmd) return run_aeh(A, B, T);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadArguments;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
