#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "leofim/scenario_gen.hpp"

namespace leofim {

/// Estimation mode evaluated per grid cell.
enum class Mode {
  P3d,        // position, orientation and velocity known
  Phi3d,      // orientation, position and velocity known
  V3d,        // velocity, position and orientation known
  PairPPhi,   // joint position + orientation, velocity known
  PairPhiV,   // joint orientation + velocity, position known
  PairPV,     // joint position + velocity, orientation known
  NineP,      // position with all nine unknown
  NinePhi,    // orientation with all nine unknown
  NineV,      // velocity with all nine unknown
  NineAll,    // all three nine-unknown reductions
};

const char* mode_name(Mode m);
std::optional<Mode> parse_mode(const std::string& name);

const char* offsets_name(const OffsetConfig& o);
std::optional<OffsetConfig> parse_offsets(const std::string& name);

struct ScenarioGrid {
  std::vector<int> n_sats;
  std::vector<int> n_slots;
  std::vector<int> n_antennas;
  std::vector<OffsetConfig> offsets;
  std::vector<Mode> modes;
  uint64_t seed = 1;
  int draws = 16;
  GeometryConfig geom;
  SignalSpec signal;
  double delta_t = 1.0;
};

enum class Verdict { Feasible, Infeasible, Mixed };
const char* verdict_name(Verdict v);

struct CellResult {
  Mode mode;
  int n_sats = 0;
  int n_slots = 0;
  int n_antennas = 0;
  OffsetConfig offsets;
  Verdict verdict = Verdict::Infeasible;
  int pd_draws = 0;
  int draws = 0;
  // Relative smallest eigenvalue of the final (equilibrated) EFIM per draw.
  double min_eig_min = 0.0;
  double min_eig_median = 0.0;
  double min_eig_max = 0.0;
  FeasibilityTrace trace;  // from the first draw (failing draw if any)
};

struct FeasibilityReport {
  ScenarioGrid grid;
  std::vector<CellResult> cells;

  const CellResult* find(Mode mode, int nb, int nk, int nu,
                         const OffsetConfig& off) const;
  void write_csv(std::ostream& os) const;
  void write_text(std::ostream& os) const;
};

/// Evaluates every cell over `draws` seeded geometries. A cell is feasible
/// when positive definite on every draw, infeasible when on none, mixed
/// otherwise. Infeasibilities are data, not errors.
FeasibilityReport scan(const ScenarioGrid& grid, int jobs = 1);

/// One-cell evaluation used by both scan() and the explain command.
CellResult evaluate_cell(const ScenarioGrid& grid, Mode mode, int nb, int nk,
                         int nu, const OffsetConfig& off);

/// Human-readable condition trace for a scanned cell.
std::string explain(const CellResult& cell);

}  // namespace leofim
