#include "leofim/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace leofim {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& section,
                  const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ConfigError("unknown key '" + it.key() + "' in section '" +
                        section + "'");
    }
  }
}

double get_number(const json& obj, const std::string& section,
                  const std::string& key, double fallback, bool required,
                  bool positive = false) {
  if (!obj.contains(key)) {
    if (required) {
      throw ConfigError("missing required key '" + key + "' in section '" +
                        section + "'");
    }
    return fallback;
  }
  if (!obj[key].is_number()) {
    throw ConfigError("key '" + key + "' in section '" + section +
                      "' must be a number");
  }
  const double v = obj[key].get<double>();
  if (positive && !(v > 0.0)) {
    throw ConfigError("key '" + key + "' in section '" + section +
                      "' must be positive");
  }
  return v;
}

std::vector<double> psd_from_csv(const std::string& path,
                                 std::vector<double>& freq) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open psd_csv file: " + path);
  }
  std::vector<double> dens;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',')) {
      throw ConfigError("psd_csv rows must be 'frequency,density'");
    }
    freq.push_back(std::strtod(a.c_str(), nullptr));
    dens.push_back(std::strtod(b.c_str(), nullptr));
  }
  return dens;
}

SignalSpec parse_signal(const json& sig) {
  require_keys(sig, "signal",
               {"fc_hz", "alpha1_hz", "alpha2", "snr_db", "t2_eff_s2",
                "slot_duration_s", "gain_mag", "psd_csv"});
  SignalSpec spec;
  spec.fc = get_number(sig, "signal", "fc_hz", 0.0, true, true);
  spec.snr = std::pow(10.0, get_number(sig, "signal", "snr_db", 0.0, true) / 10.0);
  spec.slot_duration =
      get_number(sig, "signal", "slot_duration_s", 1e-3, false, true);
  spec.t2_eff = get_number(sig, "signal", "t2_eff_s2", 0.0, false);
  if (spec.t2_eff < 0.0) {
    throw ConfigError("t2_eff_s2 must be nonnegative");
  }
  spec.gain_mag = get_number(sig, "signal", "gain_mag", 1.0, false, true);

  if (sig.contains("psd_csv")) {
    if (sig.contains("alpha1_hz") || sig.contains("alpha2")) {
      throw ConfigError("give either psd_csv or alpha1_hz/alpha2, not both");
    }
    std::vector<double> freq;
    const std::vector<double> dens =
        psd_from_csv(sig["psd_csv"].get<std::string>(), freq);
    const BandwidthResult bw = bandwidth_from_psd(freq, dens);
    spec.alpha1 = bw.alpha1;
    spec.alpha2 = bw.alpha2;
  } else {
    spec.alpha1 = get_number(sig, "signal", "alpha1_hz", 0.0, true);
    spec.alpha2 = get_number(sig, "signal", "alpha2", 0.0, true);
    if (spec.alpha1 < 0.0) throw ConfigError("alpha1_hz must be nonnegative");
    if (std::abs(spec.alpha2) > 1.0) {
      throw ConfigError("alpha2 must lie in [-1, 1]");
    }
  }
  return spec;
}

GeometryConfig parse_geometry(const json& g) {
  require_keys(g, "geometry",
               {"altitude_m", "max_zenith_deg", "sat_speed_mps",
                "rx_speed_mps", "array_spacing_m", "propagation"});
  GeometryConfig geom;
  if (g.contains("propagation")) {
    const std::string p = g["propagation"].get<std::string>();
    if (p == "linear") {
      geom.propagation = Propagation::Linear;
    } else if (p == "arc") {
      geom.propagation = Propagation::Arc;
    } else {
      throw ConfigError("geometry.propagation must be 'linear' or 'arc'");
    }
  }
  geom.altitude = get_number(g, "geometry", "altitude_m", geom.altitude, false, true);
  geom.max_zenith_deg =
      get_number(g, "geometry", "max_zenith_deg", geom.max_zenith_deg, false, true);
  geom.sat_speed = get_number(g, "geometry", "sat_speed_mps", geom.sat_speed, false);
  geom.rx_speed = get_number(g, "geometry", "rx_speed_mps", geom.rx_speed, false);
  geom.array_spacing =
      get_number(g, "geometry", "array_spacing_m", 0.0, false);
  if (geom.sat_speed < 0.0 || geom.rx_speed < 0.0 || geom.array_spacing < 0.0) {
    throw ConfigError("geometry speeds and spacing must be nonnegative");
  }
  return geom;
}

OffsetConfig parse_offsets_or_throw(const std::string& name) {
  const auto off = parse_offsets(name);
  if (!off) {
    throw ConfigError("offsets must be one of none/time/frequency/both, got '" +
                      name + "'");
  }
  return *off;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  require_keys(root, "<root>",
               {"seed", "jobs", "output_dir", "geometry", "signal", "scenario",
                "sweep", "grid"});

  RunConfig cfg;
  cfg.seed = static_cast<uint64_t>(
      get_number(root, "<root>", "seed", 1.0, false));
  cfg.jobs = static_cast<int>(get_number(root, "<root>", "jobs", 1.0, false, true));
  if (root.contains("output_dir")) {
    cfg.output_dir = root["output_dir"].get<std::string>();
  }
  if (root.contains("geometry")) {
    cfg.geom = parse_geometry(root["geometry"]);
  }
  if (!root.contains("signal")) {
    throw ConfigError("missing required section 'signal'");
  }
  cfg.signal = parse_signal(root["signal"]);

  if (!root.contains("scenario")) {
    throw ConfigError("missing required section 'scenario'");
  }
  const json& sc = root["scenario"];
  require_keys(sc, "scenario",
               {"n_sats", "n_slots", "n_antennas", "delta_t_s", "offsets"});
  cfg.n_sats = static_cast<int>(
      get_number(sc, "scenario", "n_sats", 0.0, true, true));
  cfg.n_slots = static_cast<int>(
      get_number(sc, "scenario", "n_slots", 0.0, true, true));
  cfg.n_antennas = static_cast<int>(
      get_number(sc, "scenario", "n_antennas", 0.0, true, true));
  cfg.delta_t = get_number(sc, "scenario", "delta_t_s", 0.0, true, true);
  if (!sc.contains("offsets")) {
    throw ConfigError("missing required key 'offsets' in section 'scenario'");
  }
  cfg.offsets = parse_offsets_or_throw(sc["offsets"].get<std::string>());

  if (root.contains("sweep")) {
    const json& sw = root["sweep"];
    require_keys(sw, "sweep", {"axis", "values", "mode"});
    if (!sw.contains("axis") || !sw.contains("values") || !sw.contains("mode")) {
      throw ConfigError("sweep needs axis, values and mode");
    }
    const auto axis = parse_axis(sw["axis"].get<std::string>());
    if (!axis) {
      throw ConfigError("unknown sweep axis '" +
                        sw["axis"].get<std::string>() + "'");
    }
    cfg.sweep.axis = *axis;
    const auto mode = parse_mode(sw["mode"].get<std::string>());
    if (!mode) {
      throw ConfigError("unknown sweep mode '" + sw["mode"].get<std::string>() +
                        "'");
    }
    if (metric_name(*mode) == "unsupported") {
      throw ConfigError("mode '" + sw["mode"].get<std::string>() +
                        "' has no single-parameter bound");
    }
    cfg.sweep.mode = *mode;
    if (!sw["values"].is_array() || sw["values"].empty()) {
      throw ConfigError("sweep values must be a nonempty array");
    }
    for (const auto& v : sw["values"]) {
      if (!v.is_number()) throw ConfigError("sweep values must be numbers");
      cfg.sweep.values.push_back(v.get<double>());
    }
    cfg.has_sweep = true;
  }

  if (root.contains("grid")) {
    const json& gr = root["grid"];
    require_keys(gr, "grid",
                 {"n_sats", "n_slots", "n_antennas", "offsets", "modes",
                  "draws"});
    // Empty axes are allowed and produce an empty report.
    auto ints = [&](const char* key) {
      if (!gr.contains(key) || !gr[key].is_array()) {
        throw ConfigError(std::string("grid.") + key + " must be an array");
      }
      std::vector<int> out;
      for (const auto& v : gr[key]) {
        if (!v.is_number_integer() || v.get<int>() < 1) {
          throw ConfigError(std::string("grid.") + key +
                            " entries must be positive integers");
        }
        out.push_back(v.get<int>());
      }
      return out;
    };
    cfg.grid.n_sats = ints("n_sats");
    cfg.grid.n_slots = ints("n_slots");
    cfg.grid.n_antennas = ints("n_antennas");
    if (!gr.contains("offsets") || !gr["offsets"].is_array()) {
      throw ConfigError("grid.offsets must be an array");
    }
    for (const auto& o : gr["offsets"]) {
      cfg.grid.offsets.push_back(parse_offsets_or_throw(o.get<std::string>()));
    }
    if (!gr.contains("modes") || !gr["modes"].is_array()) {
      throw ConfigError("grid.modes must be an array");
    }
    for (const auto& m : gr["modes"]) {
      const auto mode = parse_mode(m.get<std::string>());
      if (!mode) {
        throw ConfigError("unknown grid mode '" + m.get<std::string>() + "'");
      }
      cfg.grid.modes.push_back(*mode);
    }
    cfg.grid.draws = static_cast<int>(
        get_number(gr, "grid", "draws", 16.0, false, true));
    cfg.grid.seed = cfg.seed;
    cfg.grid.geom = cfg.geom;
    cfg.grid.signal = cfg.signal;
    cfg.grid.delta_t = cfg.delta_t;
    cfg.has_grid = true;
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace leofim
