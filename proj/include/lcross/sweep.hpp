#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lcross/ddp.hpp"
#include "lcross/integrator.hpp"
#include "lcross/models.hpp"

namespace lcross {

enum class SweepVar { Coupling, Nonlinearity };
enum class OutputFormat { Csv, JsonLines };

SweepVar parse_sweep_var(std::string_view name);
OutputFormat parse_output_format(std::string_view name);

struct MethodSet {
  bool numeric = true;
  bool ddp = true;
  bool lz = true;
  bool asymptotic = false;

  bool any() const { return numeric || ddp || lz || asymptotic; }
};

/// Parses a comma-separated list such as "numeric,ddp,lz".
MethodSet parse_methods(std::string_view list);

struct Grid {
  double min = 0;
  double max = 1;
  int count = 2;
  /// Overrides min/max/count when nonempty.
  std::vector<double> values;

  std::vector<double> points() const;
};

struct SweepConfig {
  ModelKind kind = ModelKind::LZ;
  /// Fixed parameters; the swept one is overwritten per grid point.
  double a = 1.0;
  double eps = 0.0;
  int n_power = 3;
  SweepVar var = SweepVar::Coupling;
  Grid grid;
  MethodSet methods;
  std::string out_path;
  OutputFormat format = OutputFormat::Csv;
  IntegratorConfig integrator;
  /// Worker threads; 0 selects the hardware concurrency.
  int threads = 0;
  /// Predicted probabilities below this are not integrated.
  double floor = 1e-10;

  void validate() const;
  ModelSpec model_at(double x) const;
};

struct SweepRow {
  std::string model;
  double a = 0;
  double eps_or_n = 0;
  std::optional<double> p_numeric;
  std::optional<double> p_ddp;
  std::string ddp_branch;
  std::optional<double> p_lz;
  std::optional<double> p_asymptotic;
  std::optional<double> rel_diff;
  std::optional<double> tau_stop;
  std::optional<double> cross_order_gap;
  std::vector<std::string> warnings;
  /// A computation threw or the propagation did not converge.
  bool failed = false;
};

/// Largest probability the transition-point set can produce, (sum |exp(i D_k)|)^2;
/// unlike the DDP value itself it does not vanish at interference nodes.
double ddp_envelope(const DdpResult& r);

/// All requested methods for one model; errors become row warnings.
SweepRow evaluate_point(const ModelSpec& m, const MethodSet& methods, const IntegratorConfig& icfg,
                        double floor = 1e-10);

/// One row per grid point in grid order; points run concurrently.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

struct BranchSummary {
  std::string branch;
  int rows = 0;
  double max_rel = 0;
  double median_rel = 0;
};

struct CompareSummary {
  std::vector<BranchSummary> branches;
  int comparable_rows = 0;
  int warned_rows = 0;
  int failed_rows = 0;

  bool comparable() const { return comparable_rows > 0; }
};

/// Numeric-vs-DDP deviation statistics over rows with p_numeric >= 1e-10,
/// split by DDP branch.
CompareSummary compare_report(const std::vector<SweepRow>& rows);
std::string format_report(const CompareSummary& s);

inline constexpr std::string_view kCsvHeader =
    "model,a,eps_or_n,p_numeric,p_ddp,ddp_branch,p_lz,p_asymptotic,rel_diff,tau_stop,cross_order_gap,warnings";

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows, bool header = true);
void write_jsonl(std::ostream& os, const std::vector<SweepRow>& rows);
void write_rows(std::ostream& os, const std::vector<SweepRow>& rows, OutputFormat format, bool header = true);

/// 0 when every row succeeded, 3 when some row failed.
int sweep_exit_code(const std::vector<SweepRow>& rows);

/// Figure presets: fig2 (superlinear), fig3 (sublinear), fig4 (both models
/// against eps at a = 1), fig5 (essential N = 3, 5, 7).
std::vector<SweepConfig> preset(std::string_view name);

}  // namespace lcross
