#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "leofim/feasibility.hpp"

namespace leofim {

enum class SweepAxis { Antennas, DeltaT, CarrierFrequency, SnrDb };
const char* axis_name(SweepAxis a);
std::optional<SweepAxis> parse_axis(const std::string& name);

struct SweepSpec {
  SweepAxis axis = SweepAxis::Antennas;
  std::vector<double> values;  // strictly increasing
  Mode mode = Mode::NineP;     // parameter-of-interest mode
};

/// Fully validated run description, normally parsed from a JSON config.
struct RunConfig {
  uint64_t seed = 1;
  int jobs = 1;
  GeometryConfig geom;
  SignalSpec signal;
  int n_sats = 3;
  int n_slots = 3;
  int n_antennas = 4;
  double delta_t = 0.025;
  OffsetConfig offsets;
  std::string output_dir = ".";
  SweepSpec sweep;     // used by `sweep`
  ScenarioGrid grid;   // used by `tables`
  bool has_sweep = false;
  bool has_grid = false;
};

struct SweepRow {
  double axis_value = 0.0;
  double bound = 0.0;  // NaN when infeasible
  bool feasible = false;
};

struct SweepTable {
  SweepSpec spec;
  RunConfig cfg;
  std::vector<SweepRow> rows;

  void write_csv(std::ostream& os) const;
};

/// The metric label for a mode's bound (units of the estimated parameter).
std::string metric_name(Mode mode);

/// Builds the base scenario deterministically from the config seed. The
/// satellite draw ignores the axis, so every sweep point shares geometry.
/// Antenna sweeps use nested arrays so added antennas never remove
/// information.
Scenario base_scenario(const RunConfig& cfg);

/// One bound evaluation: the mode's EFIM at the given scenario, scalarized as
/// sqrt(trace(inverse)). Infeasible cells yield feasible=false with NaN.
SweepRow evaluate_point(const RunConfig& cfg, const SweepSpec& spec,
                        double axis_value);

SweepTable run_sweep(const RunConfig& cfg);

/// Drives the feasibility scan and returns the report.
FeasibilityReport run_tables(const RunConfig& cfg);

/// Round-trip helpers: rows parse back bit-exactly from the emitted CSV.
std::vector<SweepRow> parse_sweep_csv(std::istream& is);

}  // namespace leofim
