// Command-line front end: parameter sweeps, figure datasets, entanglement
// classification reports and physical-parameter conversion.
//
// Exit codes: 0 success, 2 usage error, 3 numerical failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <vector>

#include "optomech/entanglement.hpp"
#include "optomech/sweep.hpp"
#include "optomech/teleportation.hpp"
#include "optomech/version.hpp"

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Flat "key = value" config support with the precedence
// flags > config file > defaults: the file's keys are appended as flags
// unless the user already passed them.
std::vector<std::string> apply_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] == "--config") {
      path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
      break;
    }
  }
  if (path.empty()) return args;

  std::ifstream file(path);
  if (!file) throw CLI::FileError("cannot read config file: " + path);
  std::string line;
  while (std::getline(file, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw CLI::FileError("malformed config line: " + line);
    }
    const std::string key = "--" + trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (std::find(args.begin(), args.end(), key) == args.end()) {
      args.push_back(key);
      args.push_back(value);
    }
  }
  return args;
}

int run_sweep_cmd(const optomech::SweepConfig& cfg, const std::string& out_path) {
  const optomech::Table table = optomech::run_sweep(cfg);
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file: " + out_path);
    os = &file;
  }
  if (cfg.format == optomech::OutputFormat::Csv) {
    optomech::write_csv(table, *os);
  } else {
    optomech::write_json(table, cfg, *os);
  }
  return 0;
}

int run_classify_cmd(double t_prime, double r, double n_bar, double clamp_log) {
  const optomech::ScaledParams s(t_prime, r, n_bar);
  const auto result = optomech::classify(s);
  std::cout << "t_prime: " << optomech::format_double(t_prime) << "\n"
            << "r: " << optomech::format_double(r) << "\n"
            << "n_bar: " << optomech::format_double(n_bar) << "\n"
            << "class: " << optomech::to_string(result.label) << "\n"
            << "eta_1: " << optomech::format_double(result.eta_stokes) << "\n"
            << "eta_2: " << optomech::format_double(result.eta_anti_stokes) << "\n"
            << "eta_b: " << optomech::format_double(result.eta_mirror) << "\n"
            << "tolerance: " << optomech::format_double(result.tolerance) << "\n";
  for (int j = 1; j <= 3; ++j) {
    std::cout << "upsilon" << j << ": "
              << optomech::format_double(optomech::simon_marker(s, j).value) << "\n";
  }
  const auto ln = optomech::log_negativity_b(s);
  if (ln) {
    std::cout << "log10_abs_eta_b: "
              << optomech::format_double(std::max(*ln, clamp_log)) << "\n";
  } else {
    std::cout << "log10_abs_eta_b: non-negative\n";
  }
  const double phase = std::abs(std::remainder(t_prime, kTwoPi));
  if (phase < 1e-12) {
    std::cout << "note: product initial state (fully separable)\n";
  }
  return 0;
}

int run_couplings_cmd(const optomech::PhysicalParams& p) {
  const auto c = optomech::couplings_from_physical(p);
  std::cout << "chi: " << optomech::format_double(c.chi) << "\n"
            << "theta: " << optomech::format_double(c.theta) << "\n"
            << "r: " << optomech::format_double(c.ratio) << "\n"
            << "r_minus_1: " << optomech::format_double(c.ratio - 1.0) << "\n"
            << "Theta: " << optomech::format_double(c.big_theta) << "\n"
            << "pulse_duration_full_period_s: "
            << optomech::format_double(kTwoPi / c.big_theta) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-mode radiation-pressure dynamics, entanglement and "
               "teleportation toolkit"};
  app.set_version_flag("--version", optomech::kVersion);
  app.require_subcommand(1);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Tabulate quantities over a parameter grid");
  optomech::SweepConfig cfg;
  std::string quantities_csv;
  std::string format = "csv";
  std::string out_path;
  sweep->add_option("--var", cfg.variable, "Swept variable: t_prime, n_bar or r")
      ->check(CLI::IsMember({"t_prime", "n_bar", "r"}));
  sweep->add_option("--start", cfg.start, "Range start")->required();
  sweep->add_option("--stop", cfg.stop, "Range stop")->required();
  sweep->add_option("--count", cfg.count, "Number of grid points (>= 2)")->required();
  sweep->add_option("--r", cfg.r, "Coupling ratio (fixed value)");
  sweep->add_option("--nbar", cfg.n_bar, "Mean thermal phonon number (fixed value)");
  sweep->add_option("--tprime", cfg.t_prime, "Scaled time (fixed value)");
  sweep->add_option("--quantities", quantities_csv, "Comma-separated quantity names")
      ->required();
  sweep->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--out", out_path, "Output path (default stdout)");
  sweep->add_option("--clamp-log", cfg.clamp_log, "Clamp for log10|eta_b| rows");

  // figures
  auto* figures = app.add_subcommand("figures", "Write bundled figure datasets");
  std::string figure_id;
  std::string fig_dir = ".";
  std::string ids;
  for (const auto& id : optomech::figure_ids()) ids += (ids.empty() ? "" : ", ") + id;
  figures->add_option("figure_id", figure_id, "One of: " + ids)->required();
  figures->add_option("--out", fig_dir, "Output directory");

  // classify
  auto* classify = app.add_subcommand("classify", "Entanglement class report");
  double cl_t = 1.0, cl_r = 1.0 + 2.5e-7, cl_nb = 0.0, cl_clamp = -16.0;
  classify->add_option("--tprime", cl_t, "Scaled time")->required();
  classify->add_option("--r", cl_r, "Coupling ratio");
  classify->add_option("--nbar", cl_nb, "Mean thermal phonon number");
  classify->add_option("--clamp-log", cl_clamp, "Clamp for the log-negativity line");

  // couplings
  auto* couplings = app.add_subcommand("couplings", "Physical parameters -> couplings");
  optomech::PhysicalParams pp{10.0, 2e15, 5e8, 1e7, 1e3, 1e-10, 0.0};
  couplings->add_option("--power", pp.power_w, "Laser power, W");
  couplings->add_option("--omega0", pp.carrier_frequency_rad_s, "Carrier frequency, rad/s");
  couplings->add_option("--omega-m", pp.mechanical_frequency_rad_s,
                        "Mechanical frequency, rad/s");
  couplings->add_option("--det-bandwidth", pp.detection_bandwidth_hz,
                        "Detection bandwidth, Hz");
  couplings->add_option("--mode-bandwidth", pp.mode_bandwidth_hz, "Mode bandwidth, Hz");
  couplings->add_option("--mass", pp.effective_mass_kg, "Effective mass, kg");
  couplings->add_option("--angle", pp.incidence_angle_rad, "Incidence angle, rad");

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = apply_config(std::move(args));
    std::reverse(args.begin(), args.end());  // CLI::App::parse pops from the back
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sweep->parsed()) {
      cfg.quantities = split_list(quantities_csv);
      cfg.format = format == "json" ? optomech::OutputFormat::Json
                                    : optomech::OutputFormat::Csv;
      return run_sweep_cmd(cfg, out_path);
    }
    if (figures->parsed()) {
      optomech::write_figure(figure_id, fig_dir);
      return 0;
    }
    if (classify->parsed()) return run_classify_cmd(cl_t, cl_r, cl_nb, cl_clamp);
    if (couplings->parsed()) return run_couplings_cmd(pp);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
