#include "leofim/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "leofim/parallel.hpp"

namespace leofim {

const char* axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::Antennas: return "n_antennas";
    case SweepAxis::DeltaT: return "delta_t";
    case SweepAxis::CarrierFrequency: return "fc";
    case SweepAxis::SnrDb: return "snr_db";
  }
  return "?";
}

std::optional<SweepAxis> parse_axis(const std::string& name) {
  for (SweepAxis a : {SweepAxis::Antennas, SweepAxis::DeltaT,
                      SweepAxis::CarrierFrequency, SweepAxis::SnrDb}) {
    if (name == axis_name(a)) return a;
  }
  return std::nullopt;
}

std::string metric_name(Mode mode) {
  switch (mode) {
    case Mode::P3d:
    case Mode::NineP:
    case Mode::PairPPhi:
    case Mode::PairPV:
      return "position_rms_m";
    case Mode::Phi3d:
    case Mode::NinePhi:
    case Mode::PairPhiV:
      return "orientation_rms_rad";
    case Mode::V3d:
    case Mode::NineV:
      return "velocity_rms_mps";
    default:
      return "unsupported";
  }
}

namespace {

Scenario scenario_for(const RunConfig& cfg, int n_antennas, double delta_t,
                      double fc, double snr_linear) {
  SignalSpec spec = cfg.signal;
  spec.fc = fc;
  spec.snr = snr_linear;
  SplitMix64 rng(hash_mix(cfg.seed, 0x5ce0a91a));
  Scenario sc = draw_scenario(cfg.geom, spec, cfg.offsets, cfg.n_sats,
                              n_antennas, cfg.n_slots, delta_t, rng);
  const double spacing = cfg.geom.array_spacing > 0.0
                             ? cfg.geom.array_spacing
                             : 0.5 * kSpeedOfLight / fc;
  sc.rx.antenna_offsets = nested_array(n_antennas, spacing);
  return sc;
}

}  // namespace

Scenario base_scenario(const RunConfig& cfg) {
  return scenario_for(cfg, cfg.n_antennas, cfg.delta_t, cfg.signal.fc,
                      cfg.signal.snr);
}

SweepRow evaluate_point(const RunConfig& cfg, const SweepSpec& spec,
                        double axis_value) {
  int n_antennas = cfg.n_antennas;
  double delta_t = cfg.delta_t;
  double fc = cfg.signal.fc;
  double snr = cfg.signal.snr;
  switch (spec.axis) {
    case SweepAxis::Antennas:
      n_antennas = static_cast<int>(axis_value);
      break;
    case SweepAxis::DeltaT:
      delta_t = axis_value;
      break;
    case SweepAxis::CarrierFrequency:
      fc = axis_value;
      break;
    case SweepAxis::SnrDb:
      snr = std::pow(10.0, axis_value / 10.0);
      break;
  }

  SweepRow row;
  row.axis_value = axis_value;
  row.bound = std::numeric_limits<double>::quiet_NaN();
  try {
    const Scenario sc = scenario_for(cfg, n_antennas, delta_t, fc, snr);
    EfimResult r;
    switch (spec.mode) {
      case Mode::P3d: r = efim_3d(Block::Position, sc); break;
      case Mode::Phi3d: r = efim_3d(Block::Orientation, sc); break;
      case Mode::V3d: r = efim_3d(Block::Velocity, sc); break;
      case Mode::NineP: r = efim_9d(Block::Position, sc); break;
      case Mode::NinePhi: r = efim_9d(Block::Orientation, sc); break;
      case Mode::NineV: r = efim_9d(Block::Velocity, sc); break;
      case Mode::PairPPhi: {
        const Efim6Result p = efim_6d(Block::Position, Block::Orientation, sc);
        r.feasible = p.feasible && p.first_valid;
        r.efim = p.first;
        break;
      }
      case Mode::PairPhiV: {
        const Efim6Result p = efim_6d(Block::Orientation, Block::Velocity, sc);
        r.feasible = p.feasible && p.first_valid;
        r.efim = p.first;
        break;
      }
      case Mode::PairPV: {
        const Efim6Result p = efim_6d(Block::Position, Block::Velocity, sc);
        r.feasible = p.feasible && p.first_valid;
        r.efim = p.first;
        break;
      }
      default:
        throw std::invalid_argument("mode not usable in a sweep");
    }
    if (r.feasible) {
      row.feasible = true;
      row.bound = crlb_rms(r.efim);
    }
  } catch (const SingularNuisanceError&) {
    row.feasible = false;
  }
  return row;
}

SweepTable run_sweep(const RunConfig& cfg) {
  if (!cfg.has_sweep) {
    throw std::invalid_argument("config has no sweep section");
  }
  const SweepSpec& spec = cfg.sweep;
  if (spec.values.empty()) {
    throw std::invalid_argument("sweep values must be nonempty");
  }
  for (size_t i = 0; i + 1 < spec.values.size(); ++i) {
    if (!(spec.values[i] < spec.values[i + 1])) {
      throw std::invalid_argument("sweep values must be strictly increasing");
    }
  }
  if (spec.axis != SweepAxis::SnrDb) {
    for (double v : spec.values) {
      if (!(v > 0.0)) {
        throw std::invalid_argument("sweep values must be positive");
      }
    }
  }
  SweepTable table;
  table.spec = spec;
  table.cfg = cfg;
  table.rows.resize(spec.values.size());
  parallel_for(static_cast<int>(spec.values.size()), cfg.jobs, [&](int i) {
    table.rows[i] = evaluate_point(cfg, spec, spec.values[i]);
  });
  return table;
}

FeasibilityReport run_tables(const RunConfig& cfg) {
  if (!cfg.has_grid) {
    throw std::invalid_argument("config has no grid section");
  }
  return scan(cfg.grid, cfg.jobs);
}

void SweepTable::write_csv(std::ostream& os) const {
  os << "axis,axis_value,bound,feasible,metric,mode,n_sats,n_slots,offsets,"
        "seed\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%d,", axis_name(spec.axis),
                  r.axis_value, r.bound, r.feasible ? 1 : 0);
    os << buf << metric_name(spec.mode) << ',' << mode_name(spec.mode) << ','
       << cfg.n_sats << ',' << cfg.n_slots << ',' << offsets_name(cfg.offsets)
       << ',' << cfg.seed << '\n';
  }
}

std::vector<SweepRow> parse_sweep_csv(std::istream& is) {
  std::vector<SweepRow> rows;
  std::string line;
  std::getline(is, line);  // header
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    SweepRow r;
    std::getline(ss, field, ',');  // axis name
    std::getline(ss, field, ',');
    r.axis_value = std::strtod(field.c_str(), nullptr);
    std::getline(ss, field, ',');
    r.bound = std::strtod(field.c_str(), nullptr);
    std::getline(ss, field, ',');
    r.feasible = field == "1";
    rows.push_back(r);
  }
  return rows;
}

}  // namespace leofim
