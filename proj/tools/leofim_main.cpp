#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "leofim/config.hpp"
#include "leofim/validate.hpp"

namespace fs = std::filesystem;

namespace {

int write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return 1;
  }
  out << content;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fisher-information and CRLB toolkit for LEO-based receiver "
               "localization"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  uint64_t seed = 0;
  bool seed_set = false;
  int jobs = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON run configuration")
        ->required();
    cmd->add_option("--out", out_dir, "output directory (overrides config)");
    cmd->add_option("--seed", seed, "RNG seed (overrides config)")
        ->each([&](const std::string&) { seed_set = true; });
    cmd->add_option("--jobs", jobs, "worker count (overrides config)");
  };

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "run a CRLB sweep and write CSV");
  add_common(sweep_cmd);

  CLI::App* tables_cmd = app.add_subcommand(
      "tables", "run the feasibility grid and write CSV plus a text grid");
  add_common(tables_cmd);

  int n_scenarios = 100;
  uint64_t val_seed = 1;
  CLI::App* validate_cmd = app.add_subcommand(
      "validate", "cross-check closed forms against the numeric oracle");
  validate_cmd->add_option("--scenarios", n_scenarios, "scenario count");
  validate_cmd->add_option("--seed", val_seed, "RNG seed");

  std::string mode_str, offsets_str;
  int ex_nb = 3, ex_nk = 3, ex_nu = 4;
  CLI::App* explain_cmd = app.add_subcommand(
      "explain", "print the feasibility condition trace for one grid cell");
  explain_cmd->add_option("--config", config_path, "JSON run configuration")
      ->required();
  explain_cmd->add_option("--mode", mode_str, "estimation mode")->required();
  explain_cmd->add_option("--n-sats", ex_nb, "satellite count")->required();
  explain_cmd->add_option("--n-slots", ex_nk, "slot count")->required();
  explain_cmd->add_option("--n-antennas", ex_nu, "antenna count")->required();
  explain_cmd->add_option("--offsets", offsets_str,
                          "none | time | frequency | both")
      ->required();
  explain_cmd->add_option("--seed", seed, "RNG seed (overrides config)")
      ->each([&](const std::string&) { seed_set = true; });

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate_cmd->parsed()) {
      const leofim::ValidationSummary sum =
          leofim::validate_oracles(n_scenarios, val_seed);
      std::cout << sum.to_string();
      std::cout << (sum.ok() ? "validate: PASS\n" : "validate: FAIL\n");
      return sum.ok() ? 0 : 2;
    }

    leofim::RunConfig cfg = leofim::load_config(config_path);
    if (seed_set) {
      cfg.seed = seed;
      cfg.grid.seed = seed;
    }
    if (jobs > 0) cfg.jobs = jobs;
    if (!out_dir.empty()) cfg.output_dir = out_dir;

    if (sweep_cmd->parsed()) {
      const leofim::SweepTable table = leofim::run_sweep(cfg);
      fs::create_directories(cfg.output_dir);
      std::ostringstream csv;
      table.write_csv(csv);
      const fs::path path =
          fs::path(cfg.output_dir) /
          (std::string("sweep_") + leofim::mode_name(table.spec.mode) + "_" +
           leofim::axis_name(table.spec.axis) + ".csv");
      if (write_file(path, csv.str()) != 0) return 1;
      std::cout << "wrote " << path.string() << " (" << table.rows.size()
                << " rows)\n";
      return 0;
    }

    if (tables_cmd->parsed()) {
      const leofim::FeasibilityReport report = leofim::run_tables(cfg);
      fs::create_directories(cfg.output_dir);
      std::ostringstream csv, txt;
      report.write_csv(csv);
      report.write_text(txt);
      const fs::path csv_path = fs::path(cfg.output_dir) / "feasibility.csv";
      const fs::path txt_path = fs::path(cfg.output_dir) / "feasibility.txt";
      if (write_file(csv_path, csv.str()) != 0) return 1;
      if (write_file(txt_path, txt.str()) != 0) return 1;
      std::cout << "wrote " << csv_path.string() << " and " << txt_path.string()
                << " (" << report.cells.size() << " cells)\n";
      return 0;
    }

    if (explain_cmd->parsed()) {
      const auto mode = leofim::parse_mode(mode_str);
      if (!mode) {
        std::cerr << "error: unknown mode '" << mode_str << "'\n";
        return 1;
      }
      const auto off = leofim::parse_offsets(offsets_str);
      if (!off) {
        std::cerr << "error: unknown offsets '" << offsets_str << "'\n";
        return 1;
      }
      leofim::ScenarioGrid grid = cfg.grid;
      grid.seed = cfg.seed;
      grid.geom = cfg.geom;
      grid.signal = cfg.signal;
      grid.delta_t = cfg.delta_t;
      if (grid.draws <= 0) grid.draws = 16;
      const leofim::CellResult cell =
          leofim::evaluate_cell(grid, *mode, ex_nb, ex_nk, ex_nu, *off);
      std::cout << leofim::explain(cell);
      return 0;
    }
  } catch (const leofim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
