#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "leofim/config.hpp"

using namespace leofim;

namespace {

std::string base_json(const std::string& extra = "") {
  return R"({
    "seed": 7,
    "jobs": 1,
    "geometry": {"array_spacing_m": 60.0},
    "signal": {"fc_hz": 1e9, "alpha1_hz": 1e6, "alpha2": 0.0,
               "snr_db": 0.0, "t2_eff_s2": 25.0},
    "scenario": {"n_sats": 3, "n_slots": 3, "n_antennas": 4,
                 "delta_t_s": 0.5, "offsets": "both"})" +
         extra + "\n}";
}

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("minimal config parses") {
    const RunConfig cfg = parse_config(base_json());
    CHECK(cfg.seed == 7);
    CHECK(cfg.n_sats == 3);
    CHECK(cfg.signal.snr == doctest::Approx(1.0));
    CHECK_FALSE(cfg.has_sweep);
    CHECK_FALSE(cfg.has_grid);
  }
  SUBCASE("unknown keys are rejected") {
    CHECK_THROWS_AS(parse_config(base_json(R"(, "nonsense": 1)")),
                    ConfigError);
  }
  SUBCASE("missing sections are rejected") {
    CHECK_THROWS_AS(parse_config(R"({"seed": 1})"), ConfigError);
  }
  SUBCASE("bad offsets are rejected") {
    std::string bad = base_json();
    const auto pos = bad.find("\"both\"");
    bad.replace(pos, 6, "\"sometimes\"");
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
  }
  SUBCASE("malformed json is rejected") {
    CHECK_THROWS_AS(parse_config("{"), ConfigError);
  }
  SUBCASE("sweep section") {
    const RunConfig cfg = parse_config(base_json(
        R"(, "sweep": {"axis": "n_antennas", "values": [4, 9, 16],
                       "mode": "9d_position"})"));
    CHECK(cfg.has_sweep);
    CHECK(cfg.sweep.axis == SweepAxis::Antennas);
    CHECK(cfg.sweep.values.size() == 3);
  }
  SUBCASE("decreasing sweep values are rejected at run time") {
    const RunConfig cfg = parse_config(base_json(
        R"(, "sweep": {"axis": "n_antennas", "values": [9, 4],
                       "mode": "9d_position"})"));
    CHECK_THROWS_AS(run_sweep(cfg), std::invalid_argument);
  }
}

TEST_CASE("sweep bounds decrease with antennas and snr") {
  RunConfig cfg = parse_config(base_json(
      R"(, "sweep": {"axis": "n_antennas", "values": [4, 9, 16, 25],
                     "mode": "9d_position"})"));
  const SweepTable table = run_sweep(cfg);
  REQUIRE(table.rows.size() == 4);
  for (size_t i = 0; i + 1 < table.rows.size(); ++i) {
    REQUIRE(table.rows[i].feasible);
    CHECK(table.rows[i + 1].bound <= table.rows[i].bound * (1.0 + 1e-12));
  }

  RunConfig snr_cfg = parse_config(base_json(
      R"(, "sweep": {"axis": "snr_db", "values": [-10, 0, 10],
                     "mode": "9d_position"})"));
  const SweepTable snr_table = run_sweep(snr_cfg);
  for (size_t i = 0; i + 1 < snr_table.rows.size(); ++i) {
    CHECK(snr_table.rows[i + 1].bound < snr_table.rows[i].bound);
  }
  // Ten decibels of snr buy 10^(1/2) in the bound.
  CHECK(snr_table.rows[0].bound / snr_table.rows[1].bound ==
        doctest::Approx(std::sqrt(10.0)).epsilon(1e-6));
}

TEST_CASE("sweep csv round-trips and is byte-stable across worker counts") {
  RunConfig cfg = parse_config(base_json(
      R"(, "sweep": {"axis": "n_antennas", "values": [4, 9, 16],
                     "mode": "9d_position"})"));
  const SweepTable t1 = run_sweep(cfg);
  cfg.jobs = 4;
  const SweepTable t4 = run_sweep(cfg);

  std::ostringstream s1, s4;
  t1.write_csv(s1);
  t4.write_csv(s4);
  CHECK(s1.str() == s4.str());

  std::istringstream in(s1.str());
  const std::vector<SweepRow> rows = parse_sweep_csv(in);
  REQUIRE(rows.size() == t1.rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].axis_value == t1.rows[i].axis_value);
    CHECK(rows[i].bound == t1.rows[i].bound);
    CHECK(rows[i].feasible == t1.rows[i].feasible);
  }
}

TEST_CASE("longer slot spacing tightens the delay-route velocity bound") {
  // Delay-dominant setting: the radial-rate terms are removed entirely, so
  // all velocity information rides on the slot lever arms.
  RunConfig cfg = parse_config(R"({
    "seed": 5,
    "geometry": {"array_spacing_m": 60.0},
    "signal": {"fc_hz": 1e9, "alpha1_hz": 1e6, "alpha2": 0.0, "snr_db": 0.0,
               "t2_eff_s2": 1e-12},
    "scenario": {"n_sats": 3, "n_slots": 3, "n_antennas": 4,
                 "delta_t_s": 0.5, "offsets": "none"},
    "sweep": {"axis": "delta_t", "values": [0.5, 1.0, 2.0, 4.0],
              "mode": "3d_velocity"}
  })");
  const SweepTable table = run_sweep(cfg);
  for (size_t i = 0; i + 1 < table.rows.size(); ++i) {
    REQUIRE(table.rows[i].feasible);
    CHECK(table.rows[i + 1].bound < table.rows[i].bound);
  }
}

TEST_CASE("infeasible sweep points are flagged rows, not failures") {
  // One satellite, one slot, single antenna: position is never estimable.
  RunConfig cfg = parse_config(R"({
    "seed": 3,
    "signal": {"fc_hz": 1e9, "alpha1_hz": 1e6, "alpha2": 0.0, "snr_db": 0.0},
    "scenario": {"n_sats": 1, "n_slots": 1, "n_antennas": 1,
                 "delta_t_s": 0.5, "offsets": "none"},
    "sweep": {"axis": "snr_db", "values": [0, 10], "mode": "3d_position"}
  })");
  const SweepTable table = run_sweep(cfg);
  for (const auto& r : table.rows) {
    CHECK_FALSE(r.feasible);
    CHECK(std::isnan(r.bound));
  }
}

TEST_CASE("an empty grid yields an empty report") {
  const RunConfig cfg = parse_config(base_json(
      R"(, "grid": {"n_sats": [], "n_slots": [1], "n_antennas": [1],
                    "offsets": ["none"], "modes": ["3d_position"],
                    "draws": 4})"));
  REQUIRE(cfg.has_grid);
  const FeasibilityReport report = run_tables(cfg);
  CHECK(report.cells.empty());
}

TEST_CASE("psd input feeds the spectral moments") {
  // Flat density over 2 MHz around zero.
  std::string psd = "# f,density\n";
  for (int i = 0; i <= 400; ++i) {
    const double f = -1e6 + 2e6 * i / 400.0;
    psd += std::to_string(f) + ",1.0\n";
  }
  const std::string path = "/tmp/leofim_test_psd.csv";
  {
    std::ofstream out(path);
    out << psd;
  }
  const RunConfig cfg = parse_config(R"({
    "seed": 1,
    "signal": {"fc_hz": 1e9, "snr_db": 0.0, "psd_csv": ")" + path + R"("},
    "scenario": {"n_sats": 1, "n_slots": 1, "n_antennas": 1,
                 "delta_t_s": 0.5, "offsets": "none"}
  })");
  CHECK(cfg.signal.alpha1 ==
        doctest::Approx(2e6 / std::sqrt(12.0)).epsilon(1e-4));
  CHECK(std::abs(cfg.signal.alpha2) < 1e-9);
}
