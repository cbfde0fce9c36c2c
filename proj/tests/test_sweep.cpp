#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "lcross/sweep.hpp"

using namespace lcross;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SweepConfig lz_sweep(double lo, double hi, int count, MethodSet methods) {
  SweepConfig c;
  c.kind = ModelKind::LZ;
  c.var = SweepVar::Coupling;
  c.grid = Grid{lo, hi, count, {}};
  c.methods = methods;
  return c;
}

std::string csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  write_csv(os, rows);
  return os.str();
}

}  // namespace

TEST_CASE("grid points") {
  const auto p = Grid{0.0, 1.0, 5, {}}.points();
  REQUIRE(p.size() == 5);
  CHECK(p[0] == 0.0);
  CHECK(p[2] == 0.5);
  CHECK(p[4] == 1.0);
  CHECK(Grid{0.0, 1.0, 5, {0.3, 0.7}}.points() == std::vector<double>{0.3, 0.7});
}

TEST_CASE("option parsing") {
  CHECK(parse_sweep_var("a") == SweepVar::Coupling);
  CHECK(parse_sweep_var("eps") == SweepVar::Nonlinearity);
  CHECK_THROWS_AS(parse_sweep_var("n"), std::invalid_argument);
  CHECK(parse_output_format("jsonl") == OutputFormat::JsonLines);
  CHECK_THROWS_AS(parse_output_format("xml"), std::invalid_argument);
  const MethodSet m = parse_methods("ddp,lz");
  CHECK_FALSE(m.numeric);
  CHECK(m.ddp);
  CHECK(m.lz);
  CHECK_FALSE(m.asymptotic);
  CHECK_THROWS_AS(parse_methods("ddp,exact"), std::invalid_argument);
  CHECK_THROWS_AS(parse_methods(""), std::invalid_argument);
}

TEST_CASE("sweep configuration validation") {
  SweepConfig c = lz_sweep(0.1, 1.0, 3, {});
  CHECK_NOTHROW(c.validate());
  c.var = SweepVar::Nonlinearity;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.kind = ModelKind::Essential;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.kind = ModelKind::AEHTangent;
  c.var = SweepVar::Coupling;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  SweepConfig g = lz_sweep(1.0, 0.5, 3, {});
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g = lz_sweep(0.1, 1.0, 1, {});
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g = lz_sweep(-1.0, 1.0, 3, {});
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g = lz_sweep(0.1, 1.0, 3, MethodSet{false, false, false, false});
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}

TEST_CASE("two-point LZ-only sweep") {
  const auto rows = run_sweep(lz_sweep(0.5, 1.0, 2, MethodSet{false, false, true, false}));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].a == 0.5);
  CHECK(rows[1].a == 1.0);
  CHECK_THAT(*rows[1].p_lz, WithinRel(std::exp(-std::numbers::pi), 1e-15));
  CHECK_FALSE(rows[0].p_numeric);
  CHECK_FALSE(rows[0].p_ddp);
  CHECK_FALSE(rows[0].rel_diff);
  CHECK(sweep_exit_code(rows) == 0);
  CHECK_FALSE(compare_report(rows).comparable());
  CHECK(format_report(compare_report(rows)).find("no comparable rows") != std::string::npos);
}

TEST_CASE("sweeps are deterministic across thread counts") {
  SweepConfig c;
  c.kind = ModelKind::Superlinear;
  c.eps = 0.25;
  c.grid = Grid{0.3, 1.5, 5, {}};
  c.methods = MethodSet{true, true, true, true};
  c.threads = 1;
  const std::string one = csv(run_sweep(c));
  c.threads = 3;
  CHECK(csv(run_sweep(c)) == one);
  CHECK(csv(run_sweep(c)) == one);
}

TEST_CASE("LZ sweep agrees with the exact result") {
  const auto rows = run_sweep(lz_sweep(0.3, 1.5, 5, MethodSet{true, true, true, false}));
  for (const auto& r : rows) {
    REQUIRE(r.p_numeric);
    REQUIRE(r.rel_diff);
    CHECK_THAT(*r.rel_diff, WithinAbs(std::abs(*r.p_numeric - *r.p_ddp) / *r.p_numeric, 1e-16));
    CHECK(r.ddp_branch == "lz_exact");
    CHECK(r.tau_stop);
    CHECK(r.cross_order_gap);
  }
  const CompareSummary s = compare_report(rows);
  REQUIRE(s.branches.size() == 1);
  CHECK(s.comparable_rows == 5);
  CHECK(s.branches[0].max_rel <= 1e-3);
  CHECK(s.branches[0].median_rel <= s.branches[0].max_rel);
}

TEST_CASE("sublinear sweep median deviation") {
  SweepConfig c;
  c.kind = ModelKind::Sublinear;
  c.eps = 0.25;
  c.grid = Grid{0.2, 2.0, 7, {}};
  c.methods = MethodSet{true, true, false, false};
  const CompareSummary s = compare_report(run_sweep(c));
  REQUIRE(s.comparable());
  CHECK(s.branches[0].median_rel <= 0.10);
}

TEST_CASE("predictions below the floor are not integrated") {
  const auto rows = run_sweep(lz_sweep(1.0, 3.0, 2, MethodSet{true, true, true, false}));
  CHECK(rows[0].p_numeric);
  CHECK_FALSE(rows[1].p_numeric);
  REQUIRE(rows[1].warnings.size() == 1);
  CHECK(rows[1].warnings[0] == "below-floor");
  CHECK_FALSE(rows[1].failed);
  CHECK(sweep_exit_code(rows) == 0);
  CHECK(compare_report(rows).warned_rows == 1);
}

TEST_CASE("DDP envelope") {
  DdpResult r;
  r.probability = 0.25;
  CHECK(ddp_envelope(r) == 0.25);
  TransitionPoint p{cplx(0, 1), cplx(1.0, 2.0), cplx(-1.0)};
  TransitionPoint q{cplx(0, 1), cplx(-1.0, 2.0), cplx(1.0)};
  r.points_used = {p, q};
  CHECK_THAT(ddp_envelope(r), WithinRel(4 * std::exp(-4.0), 1e-15));
}

TEST_CASE("failed rows set the exit code") {
  SweepRow ok, bad;
  bad.failed = true;
  CHECK(sweep_exit_code({ok}) == 0);
  CHECK(sweep_exit_code({ok, bad}) == 3);
  CHECK(compare_report({ok, bad}).failed_rows == 1);
}

TEST_CASE("output formats") {
  SweepRow r;
  r.model = "lz";
  r.a = 0.5;
  r.p_lz = 0.25;
  r.warnings = {"one, two", "three"};
  std::ostringstream c;
  write_csv(c, {r});
  std::string header, line;
  std::istringstream in(c.str());
  std::getline(in, header);
  std::getline(in, line);
  CHECK(header == kCsvHeader);
  CHECK(line.rfind("lz,5.0000000000000000e-01,", 0) == 0);
  CHECK(line.find(",,") != std::string::npos);
  CHECK(line.ends_with(",\"one, two;three\""));

  std::ostringstream noheader;
  write_rows(noheader, {r}, OutputFormat::Csv, false);
  CHECK(noheader.str().rfind("lz,", 0) == 0);

  std::ostringstream j;
  write_jsonl(j, {r, r});
  std::istringstream jin(j.str());
  int count = 0;
  while (std::getline(jin, line)) {
    const auto obj = nlohmann::json::parse(line);
    CHECK(obj["model"] == "lz");
    CHECK(obj["a"].get<double>() == 0.5);
    CHECK(obj["p_numeric"].is_null());
    CHECK(obj["ddp_branch"].is_null());
    CHECK(obj["warnings"].size() == 2);
    ++count;
  }
  CHECK(count == 2);
}

TEST_CASE("figure presets") {
  CHECK(preset("fig2").size() == 1);
  CHECK(preset("fig2")[0].kind == ModelKind::Superlinear);
  CHECK(preset("fig3")[0].kind == ModelKind::Sublinear);
  const auto fig4 = preset("fig4");
  REQUIRE(fig4.size() == 2);
  for (const auto& c : fig4) {
    CHECK(c.var == SweepVar::Nonlinearity);
    CHECK(c.grid.points().front() == 0.0);
    const SweepRow row = evaluate_point(c.model_at(0.0), c.methods, c.integrator);
    REQUIRE(row.p_numeric);
    CHECK_THAT(*row.p_numeric, WithinRel(std::exp(-std::numbers::pi), 1e-4));
  }
  const auto fig5 = preset("fig5");
  REQUIRE(fig5.size() == 3);
  CHECK(fig5[2].n_power == 7);
  CHECK_FALSE(fig5[0].methods.asymptotic);
  for (const auto& name : {"fig2", "fig3", "fig4", "fig5"})
    for (const auto& c : preset(name)) CHECK_NOTHROW(c.validate());
  CHECK_THROWS_AS(preset("fig9"), std::invalid_argument);
}
