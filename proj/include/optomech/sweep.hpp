#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "optomech/dynamics.hpp"

namespace optomech {

enum class OutputFormat { Csv, Json };

/// One-variable parameter sweep: `variable` is one of "t_prime", "n_bar",
/// "r"; the other two stay fixed at the values below.
struct SweepConfig {
  std::string variable = "t_prime";
  double start = 0.0;
  double stop = 2.0 * 3.141592653589793;
  int count = 101;
  double t_prime = 0.0;
  double r = 1.0 + 2.5e-7;
  double n_bar = 0.0;
  std::vector<std::string> quantities;
  OutputFormat format = OutputFormat::Csv;
  double clamp_log = -16.0;  // stands in for log10|eta_b| when eta_b >= 0
};

struct Table {
  std::vector<std::string> columns;  // swept variable first
  std::vector<std::vector<double>> rows;
};

/// Names accepted in SweepConfig::quantities.
const std::vector<std::string>& quantity_names();

/// Evaluate one quantity at a point (respecting the clamp policy).
double evaluate_quantity(const std::string& name, const ScaledParams& s,
                         double clamp_log);

/// Rows evaluate in parallel; row order is the grid order.
Table run_sweep(const SweepConfig& config);

/// 17-significant-digit scientific CSV, LF endings, header row first.
void write_csv(const Table& table, std::ostream& os);
void write_json(const Table& table, const SweepConfig& config, std::ostream& os);

std::string format_double(double x);

/// Bundled figure presets. Each writes one CSV per curve plus a
/// manifest.json recording the preset and per-curve peak summaries.
const std::vector<std::string>& figure_ids();
void write_figure(const std::string& figure_id, const std::string& out_dir);

}  // namespace optomech
