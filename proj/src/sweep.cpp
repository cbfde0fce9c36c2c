#include "lcross/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace lcross {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string joined(const std::vector<std::string>& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ';';
    out += w[i];
  }
  return out;
}

void append(std::vector<std::string>& dst, const std::vector<std::string>& src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

SweepVar parse_sweep_var(std::string_view name) {
  if (name == "a") return SweepVar::Coupling;
  if (name == "eps") return SweepVar::Nonlinearity;
  throw std::invalid_argument("unknown sweep variable '" + std::string(name) + "' (expected a or eps)");
}

OutputFormat parse_output_format(std::string_view name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "jsonl") return OutputFormat::JsonLines;
  throw std::invalid_argument("unknown format '" + std::string(name) + "' (expected csv or jsonl)");
}

MethodSet parse_methods(std::string_view list) {
  MethodSet m{false, false, false, false};
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const std::size_t end = std::min(list.find(',', pos), list.size());
    const std::string_view item = list.substr(pos, end - pos);
    if (item == "numeric") m.numeric = true;
    else if (item == "ddp") m.ddp = true;
    else if (item == "lz") m.lz = true;
    else if (item == "asymptotic") m.asymptotic = true;
    else throw std::invalid_argument("unknown method '" + std::string(item) + "'");
    pos = end + 1;
  }
  return m;
}

std::vector<double> Grid::points() const {
  if (!values.empty()) return values;
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = min + (max - min) * i / (count - 1);
  out.back() = max;
  return out;
}

void SweepConfig::validate() const {
  if (grid.values.empty()) {
    if (!(grid.min < grid.max)) throw std::invalid_argument("grid needs min < max");
    if (grid.count < 2) throw std::invalid_argument("grid needs count >= 2");
  }
  if (!methods.any()) throw std::invalid_argument("no method selected");
  if (kind == ModelKind::AEHTangent) throw std::invalid_argument("sweeps do not cover the tangent model");
  if (var == SweepVar::Nonlinearity && (kind == ModelKind::LZ || kind == ModelKind::Essential))
    throw std::invalid_argument("eps sweeps need the superlinear or sublinear model");
  integrator.validate();
  for (double x : grid.points()) model_at(x);
}

ModelSpec SweepConfig::model_at(double x) const {
  const double av = var == SweepVar::Coupling ? x : a;
  const double ev = var == SweepVar::Nonlinearity ? x : eps;
  switch (kind) {
    case ModelKind::LZ: return ModelSpec::lz(av);
    case ModelKind::Superlinear: return ModelSpec::superlinear(av, ev);
    case ModelKind::Sublinear: return ModelSpec::sublinear(av, ev);
    case ModelKind::Essential: return ModelSpec::essential(av, n_power);
    case ModelKind::AEHTangent: break;
  }
  throw std::invalid_argument("sweeps do not cover the tangent model");
}

double ddp_envelope(const DdpResult& r) {
  if (r.points_used.empty()) return r.probability;
  double s = 0;
  for (const auto& p : r.points_used) s += std::abs(p.gamma) * std::exp(-p.action.imag());
  return s * s;
}

SweepRow evaluate_point(const ModelSpec& m, const MethodSet& methods, const IntegratorConfig& icfg,
                        double floor) {
  SweepRow row;
  row.model = m.id();
  row.a = m.a;
  row.eps_or_n = m.kind == ModelKind::Essential ? m.n_power : m.eps;
  if (methods.lz) row.p_lz = p_lz(m.a);

  std::optional<DdpResult> ddp;
  if (methods.ddp || methods.numeric) {
    try {
      ddp = ddp_estimate(m);
    } catch (const std::exception& e) {
      row.warnings.push_back(std::string("ddp failed: ") + e.what());
      row.failed = true;
    }
  }
  if (methods.ddp && ddp) {
    row.p_ddp = ddp->probability;
    row.ddp_branch = std::string(to_string(ddp->branch));
    append(row.warnings, ddp->warnings);
  }
  if (methods.asymptotic) {
    try {
      row.p_asymptotic = asymptotic_estimate(m);
    } catch (const std::exception& e) {
      row.warnings.push_back(std::string("asymptotic failed: ") + e.what());
      row.failed = true;
    }
  }
  if (methods.numeric) {
    if (ddp && ddp_envelope(*ddp) < floor) {
      row.warnings.push_back("below-floor");
    } else {
      try {
        const PropagationResult r = solve(m, icfg);
        row.p_numeric = r.probability;
        row.tau_stop = r.stop_time;
        row.cross_order_gap = r.cross_order_gap;
        if (!r.converged) {
          row.warnings.push_back("numeric not converged before max_time");
          row.failed = true;
        }
      } catch (const std::exception& e) {
        row.warnings.push_back(std::string("numeric failed: ") + e.what());
        row.failed = true;
      }
    }
  }
  if (row.p_numeric && row.p_ddp && *row.p_numeric > 0)
    row.rel_diff = std::abs(*row.p_numeric - *row.p_ddp) / *row.p_numeric;
  return row;
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const std::vector<double> xs = cfg.grid.points();
  std::vector<SweepRow> rows(xs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < xs.size(); i = next++)
      rows[i] = evaluate_point(cfg.model_at(xs[i]), cfg.methods, cfg.integrator, cfg.floor);
  };
  unsigned n = cfg.threads > 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  n = std::min<unsigned>(n, xs.size());
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  return rows;
}

CompareSummary compare_report(const std::vector<SweepRow>& rows) {
  CompareSummary s;
  std::vector<std::string> order;
  std::vector<std::vector<double>> devs;
  for (const auto& r : rows) {
    if (!r.warnings.empty()) ++s.warned_rows;
    if (r.failed) ++s.failed_rows;
    if (!r.rel_diff || !r.p_numeric || *r.p_numeric < 1e-10) continue;
    ++s.comparable_rows;
    auto it = std::find(order.begin(), order.end(), r.ddp_branch);
    if (it == order.end()) {
      order.push_back(r.ddp_branch);
      devs.emplace_back();
      it = order.end() - 1;
    }
    devs[it - order.begin()].push_back(*r.rel_diff);
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    BranchSummary b;
    b.branch = order[i];
    b.rows = static_cast<int>(devs[i].size());
    b.max_rel = *std::max_element(devs[i].begin(), devs[i].end());
    b.median_rel = median(devs[i]);
    s.branches.push_back(b);
  }
  return s;
}

std::string format_report(const CompareSummary& s) {
  std::ostringstream os;
  if (!s.comparable()) {
    os << "no comparable rows\n";
  } else {
    for (const auto& b : s.branches) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%-22s rows %4d  max rel %.3e  median rel %.3e\n", b.branch.c_str(), b.rows,
                    b.max_rel, b.median_rel);
      os << buf;
    }
  }
  os << "warned rows: " << s.warned_rows << ", failed rows: " << s.failed_rows << '\n';
  return os.str();
}

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows, bool header) {
  if (header) os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.model << ',' << num(r.a) << ',' << num(r.eps_or_n) << ',' << opt_num(r.p_numeric) << ','
       << opt_num(r.p_ddp) << ',' << r.ddp_branch << ',' << opt_num(r.p_lz) << ',' << opt_num(r.p_asymptotic) << ','
       << opt_num(r.rel_diff) << ',' << opt_num(r.tau_stop) << ',' << opt_num(r.cross_order_gap) << ','
       << csv_field(joined(r.warnings)) << '\n';
  }
}

void write_jsonl(std::ostream& os, const std::vector<SweepRow>& rows) {
  auto str = [](const std::string& s) { return nlohmann::json(s).dump(); };
  auto opt = [](const std::optional<double>& v) { return v ? num(*v) : std::string("null"); };
  for (const auto& r : rows) {
    os << "{\"model\":" << str(r.model) << ",\"a\":" << num(r.a) << ",\"eps_or_n\":" << num(r.eps_or_n)
       << ",\"p_numeric\":" << opt(r.p_numeric) << ",\"p_ddp\":" << opt(r.p_ddp)
       << ",\"ddp_branch\":" << (r.ddp_branch.empty() ? "null" : str(r.ddp_branch)) << ",\"p_lz\":" << opt(r.p_lz)
       << ",\"p_asymptotic\":" << opt(r.p_asymptotic) << ",\"rel_diff\":" << opt(r.rel_diff)
       << ",\"tau_stop\":" << opt(r.tau_stop) << ",\"cross_order_gap\":" << opt(r.cross_order_gap)
       << ",\"warnings\":" << nlohmann::json(r.warnings).dump() << "}\n";
  }
}

void write_rows(std::ostream& os, const std::vector<SweepRow>& rows, OutputFormat format, bool header) {
  if (format == OutputFormat::Csv) write_csv(os, rows, header);
  else write_jsonl(os, rows);
}

int sweep_exit_code(const std::vector<SweepRow>& rows) {
  return std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.failed; }) ? 3 : 0;
}

std::vector<SweepConfig> preset(std::string_view name) {
  SweepConfig base;
  base.methods = MethodSet{true, true, true, true};
  if (name == "fig2" || name == "fig3") {
    base.kind = name == "fig2" ? ModelKind::Superlinear : ModelKind::Sublinear;
    base.eps = 0.25;
    base.var = SweepVar::Coupling;
    base.grid = Grid{0.05, 3.0, 60, {}};
    return {base};
  }
  if (name == "fig4") {
    base.a = 1.0;
    base.var = SweepVar::Nonlinearity;
    base.grid = Grid{0.0, 0.5, 51, {}};
    SweepConfig sup = base, sub = base;
    sup.kind = ModelKind::Superlinear;
    sub.kind = ModelKind::Sublinear;
    return {sup, sub};
  }
  if (name == "fig5") {
    std::vector<SweepConfig> out;
    base.kind = ModelKind::Essential;
    base.var = SweepVar::Coupling;
    base.grid = Grid{0.05, 3.0, 60, {}};
    base.methods.asymptotic = false;
    for (int n : {3, 5, 7}) {
      base.n_power = n;
      out.push_back(base);
    }
    return out;
  }
  throw std::invalid_argument("unknown preset '" + std::string(name) + "' (expected fig2, fig3, fig4 or fig5)");
}

}  // namespace lcross
