#include "leofim/feasibility.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "leofim/parallel.hpp"

namespace leofim {

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::P3d: return "3d_position";
    case Mode::Phi3d: return "3d_orientation";
    case Mode::V3d: return "3d_velocity";
    case Mode::PairPPhi: return "6d_position_orientation";
    case Mode::PairPhiV: return "6d_orientation_velocity";
    case Mode::PairPV: return "6d_position_velocity";
    case Mode::NineP: return "9d_position";
    case Mode::NinePhi: return "9d_orientation";
    case Mode::NineV: return "9d_velocity";
    case Mode::NineAll: return "9d_all";
  }
  return "?";
}

std::optional<Mode> parse_mode(const std::string& name) {
  for (Mode m : {Mode::P3d, Mode::Phi3d, Mode::V3d, Mode::PairPPhi,
                 Mode::PairPhiV, Mode::PairPV, Mode::NineP, Mode::NinePhi,
                 Mode::NineV, Mode::NineAll}) {
    if (name == mode_name(m)) return m;
  }
  return std::nullopt;
}

const char* offsets_name(const OffsetConfig& o) {
  if (o.time_known && o.freq_known) return "none";
  if (!o.time_known && o.freq_known) return "time";
  if (o.time_known && !o.freq_known) return "frequency";
  return "both";
}

std::optional<OffsetConfig> parse_offsets(const std::string& name) {
  if (name == "none") return OffsetConfig::none();
  if (name == "time") return OffsetConfig::time();
  if (name == "frequency") return OffsetConfig::frequency();
  if (name == "both") return OffsetConfig::both();
  return std::nullopt;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Feasible: return "feasible";
    case Verdict::Infeasible: return "infeasible";
    case Verdict::Mixed: return "mixed";
  }
  return "?";
}

namespace {

struct DrawOutcome {
  bool feasible = false;
  double min_eig = 0.0;
  FeasibilityTrace trace;
};

FeasibilityTrace merge_traces(std::vector<FeasibilityTrace> traces) {
  FeasibilityTrace out;
  out.feasible = true;
  for (auto& t : traces) {
    out.feasible = out.feasible && t.feasible;
    for (auto& c : t.conditions) out.conditions.push_back(std::move(c));
  }
  return out;
}

DrawOutcome evaluate_draw(const Scenario& sc, Mode mode) {
  DrawOutcome out;
  auto finish = [&out](bool feasible, const FeasibilityTrace& trace) {
    out.feasible = feasible;
    out.trace = trace;
    out.min_eig = trace.conditions.empty()
                      ? 0.0
                      : trace.conditions.back().min_eig;
  };
  try {
    switch (mode) {
      case Mode::P3d:
        { auto r = efim_3d(Block::Position, sc); finish(r.feasible, r.trace); break; }
      case Mode::Phi3d:
        { auto r = efim_3d(Block::Orientation, sc); finish(r.feasible, r.trace); break; }
      case Mode::V3d:
        { auto r = efim_3d(Block::Velocity, sc); finish(r.feasible, r.trace); break; }
      case Mode::PairPPhi:
        { auto r = efim_6d(Block::Position, Block::Orientation, sc); finish(r.feasible, r.trace); break; }
      case Mode::PairPhiV:
        { auto r = efim_6d(Block::Orientation, Block::Velocity, sc); finish(r.feasible, r.trace); break; }
      case Mode::PairPV:
        { auto r = efim_6d(Block::Position, Block::Velocity, sc); finish(r.feasible, r.trace); break; }
      case Mode::NineP:
        { auto r = efim_9d(Block::Position, sc); finish(r.feasible, r.trace); break; }
      case Mode::NinePhi:
        { auto r = efim_9d(Block::Orientation, sc); finish(r.feasible, r.trace); break; }
      case Mode::NineV:
        { auto r = efim_9d(Block::Velocity, sc); finish(r.feasible, r.trace); break; }
      case Mode::NineAll: {
        auto rp = efim_9d(Block::Position, sc);
        auto rphi = efim_9d(Block::Orientation, sc);
        auto rv = efim_9d(Block::Velocity, sc);
        FeasibilityTrace t = merge_traces({rp.trace, rphi.trace, rv.trace});
        double me = rp.trace.conditions.back().min_eig;
        me = std::min(me, rphi.trace.conditions.back().min_eig);
        me = std::min(me, rv.trace.conditions.back().min_eig);
        out.feasible = rp.feasible && rphi.feasible && rv.feasible;
        out.trace = std::move(t);
        out.trace.feasible = out.feasible;
        out.min_eig = me;
        break;
      }
    }
  } catch (const SingularNuisanceError& e) {
    out.feasible = false;
    out.trace.conditions.push_back({std::string("singular_nuisance: ") + e.what(),
                                    false, 0.0, 0.0});
    out.trace.feasible = false;
    out.min_eig = 0.0;
  }
  return out;
}

uint64_t cell_seed(const ScenarioGrid& grid, Mode mode, int nb, int nk, int nu,
                   const OffsetConfig& off, int draw) {
  uint64_t h = grid.seed;
  h = hash_mix(h, static_cast<uint64_t>(mode));
  h = hash_mix(h, static_cast<uint64_t>(nb));
  h = hash_mix(h, static_cast<uint64_t>(nk));
  h = hash_mix(h, static_cast<uint64_t>(nu));
  h = hash_mix(h, (off.time_known ? 1u : 0u) | (off.freq_known ? 2u : 0u));
  h = hash_mix(h, static_cast<uint64_t>(draw));
  return h;
}

}  // namespace

CellResult evaluate_cell(const ScenarioGrid& grid, Mode mode, int nb, int nk,
                         int nu, const OffsetConfig& off) {
  CellResult cell;
  cell.mode = mode;
  cell.n_sats = nb;
  cell.n_slots = nk;
  cell.n_antennas = nu;
  cell.offsets = off;
  cell.draws = grid.draws;

  std::vector<double> eigs;
  eigs.reserve(grid.draws);
  bool trace_set = false;
  for (int d = 0; d < grid.draws; ++d) {
    SplitMix64 rng(cell_seed(grid, mode, nb, nk, nu, off, d));
    const Scenario sc = draw_scenario(grid.geom, grid.signal, off, nb, nu, nk,
                                      grid.delta_t, rng);
    const DrawOutcome o = evaluate_draw(sc, mode);
    if (o.feasible) ++cell.pd_draws;
    eigs.push_back(o.min_eig);
    if (!trace_set && (!o.feasible || d == 0)) {
      cell.trace = o.trace;
      trace_set = !o.feasible;  // prefer the first failing draw
    }
  }
  std::sort(eigs.begin(), eigs.end());
  cell.min_eig_min = eigs.front();
  cell.min_eig_median = eigs[eigs.size() / 2];
  cell.min_eig_max = eigs.back();
  cell.verdict = (cell.pd_draws == cell.draws)  ? Verdict::Feasible
                 : (cell.pd_draws == 0)         ? Verdict::Infeasible
                                                : Verdict::Mixed;
  return cell;
}

FeasibilityReport scan(const ScenarioGrid& grid, int jobs) {
  struct Key {
    Mode mode;
    int nb, nk, nu;
    OffsetConfig off;
  };
  std::vector<Key> keys;
  for (Mode m : grid.modes) {
    for (int nb : grid.n_sats) {
      for (int nk : grid.n_slots) {
        for (int nu : grid.n_antennas) {
          for (const OffsetConfig& off : grid.offsets) {
            keys.push_back({m, nb, nk, nu, off});
          }
        }
      }
    }
  }

  FeasibilityReport report;
  report.grid = grid;
  report.cells.resize(keys.size());
  parallel_for(static_cast<int>(keys.size()), jobs, [&](int i) {
    const Key& k = keys[i];
    report.cells[i] = evaluate_cell(grid, k.mode, k.nb, k.nk, k.nu, k.off);
  });
  return report;
}

const CellResult* FeasibilityReport::find(Mode mode, int nb, int nk, int nu,
                                          const OffsetConfig& off) const {
  for (const auto& c : cells) {
    if (c.mode == mode && c.n_sats == nb && c.n_slots == nk &&
        c.n_antennas == nu && c.offsets.time_known == off.time_known &&
        c.offsets.freq_known == off.freq_known) {
      return &c;
    }
  }
  return nullptr;
}

void FeasibilityReport::write_csv(std::ostream& os) const {
  os << "mode,n_sats,n_slots,n_antennas,offsets,verdict,pd_draws,draws,"
        "min_eig_min,min_eig_median,min_eig_max,failing_tag\n";
  char buf[128];
  for (const auto& c : cells) {
    os << mode_name(c.mode) << ',' << c.n_sats << ',' << c.n_slots << ','
       << c.n_antennas << ',' << offsets_name(c.offsets) << ','
       << verdict_name(c.verdict) << ',' << c.pd_draws << ',' << c.draws;
    std::snprintf(buf, sizeof(buf), ",%.17g,%.17g,%.17g", c.min_eig_min,
                  c.min_eig_median, c.min_eig_max);
    os << buf << ',' << c.trace.failing_tag() << '\n';
  }
}

void FeasibilityReport::write_text(std::ostream& os) const {
  os << "feasibility grid (" << cells.size() << " cells, " << grid.draws
     << " draws each; F = feasible, - = infeasible, M = mixed)\n";
  bool have_last = false;
  Mode last = Mode::P3d;
  for (size_t i = 0; i < cells.size();) {
    const auto& c = cells[i];
    if (!have_last || c.mode != last) {
      os << "\n[" << mode_name(c.mode) << "]\n";
      os << "  N_B N_K N_U   none time freq both\n";
      last = c.mode;
      have_last = true;
    }
    std::string marks[4] = {".", ".", ".", "."};
    size_t j = i;
    while (j < cells.size() && cells[j].mode == c.mode &&
           cells[j].n_sats == c.n_sats && cells[j].n_slots == c.n_slots &&
           cells[j].n_antennas == c.n_antennas) {
      const auto& cj = cells[j];
      const char mark = cj.verdict == Verdict::Feasible     ? 'F'
                        : cj.verdict == Verdict::Infeasible ? '-'
                                                            : 'M';
      const std::string name = offsets_name(cj.offsets);
      const int col = name == "none"        ? 0
                      : name == "time"      ? 1
                      : name == "frequency" ? 2
                                            : 3;
      marks[col] = std::string(1, mark);
      ++j;
    }
    char line[256];
    std::snprintf(line, sizeof(line), "  %3d %3d %3d   %4s %4s %4s %4s\n",
                  c.n_sats, c.n_slots, c.n_antennas, marks[0].c_str(),
                  marks[1].c_str(), marks[2].c_str(), marks[3].c_str());
    os << line;
    i = j;
  }
}

std::string explain(const CellResult& cell) {
  std::ostringstream os;
  os << mode_name(cell.mode) << " N_B=" << cell.n_sats
     << " N_K=" << cell.n_slots << " N_U=" << cell.n_antennas
     << " offsets=" << offsets_name(cell.offsets) << " -> "
     << verdict_name(cell.verdict) << " (" << cell.pd_draws << "/"
     << cell.draws << " draws positive definite)\n";
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "  relative min eigenvalue across draws: min=%.3e median=%.3e "
                "max=%.3e\n",
                cell.min_eig_min, cell.min_eig_median, cell.min_eig_max);
  os << buf;
  os << "  condition trace (representative draw):\n";
  for (const auto& c : cell.trace.conditions) {
    std::snprintf(buf, sizeof(buf), "    %-34s %s  (min_eig=%.3e max_eig=%.3e)\n",
                  c.name.c_str(), c.ok ? "held" : "FAILED", c.min_eig,
                  c.max_eig);
    os << buf;
  }
  if (cell.trace.failing_tag().empty()) {
    os << "  no failing condition\n";
  }
  return os.str();
}

}  // namespace leofim
