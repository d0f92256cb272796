#include "optomech/sweep.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>

#include "optomech/entanglement.hpp"
#include "optomech/teleportation.hpp"
#include "optomech/version.hpp"
#include "parallel.hpp"

namespace optomech {

namespace {

// Per-row evaluation state so a row requesting several quantities reuses
// the shared intermediates.
struct RowCache {
  explicit RowCache(const ScaledParams& sp, double clamp) : s(sp), clamp_log(clamp) {}
  const ScaledParams& s;
  double clamp_log;
  std::optional<CoefficientSet> coeffs;
  std::optional<double> eta_b;

  const CoefficientSet& c() {
    if (!coeffs) coeffs = coefficients(s);
    return *coeffs;
  }
  double etab() {
    if (!eta_b) eta_b = npt_eta(s, Mode::Mirror);
    return *eta_b;
  }
};

using Evaluator = std::function<double(RowCache&)>;

const std::vector<std::pair<std::string, Evaluator>>& registry() {
  static const std::vector<std::pair<std::string, Evaluator>> reg = {
      {"coeff_a", [](RowCache& r) { return r.c().a; }},
      {"coeff_b", [](RowCache& r) { return r.c().b; }},
      {"coeff_c", [](RowCache& r) { return r.c().c; }},
      {"coeff_d", [](RowCache& r) { return r.c().d; }},
      {"coeff_e", [](RowCache& r) { return r.c().e; }},
      {"coeff_f", [](RowCache& r) { return r.c().f; }},
      {"eta1", [](RowCache& r) { return npt_eta(r.s, Mode::Stokes); }},
      {"eta2", [](RowCache& r) { return npt_eta(r.s, Mode::AntiStokes); }},
      {"eta_b", [](RowCache& r) { return r.etab(); }},
      {"upsilon1", [](RowCache& r) { return simon_marker(r.s, 1).value; }},
      {"upsilon2", [](RowCache& r) { return simon_marker(r.s, 2).value; }},
      {"upsilon3", [](RowCache& r) { return simon_marker(r.s, 3).value; }},
      {"fidelity_traced", [](RowCache& r) { return fidelity_traced(r.s).fidelity; }},
      {"fidelity_het", [](RowCache& r) { return fidelity_heterodyne(r.s).fidelity; }},
      {"info_gain", [](RowCache& r) { return information_gain(r.s); }},
      {"n_eff", [](RowCache& r) { return effective_thermal_number(r.s); }},
      {"log_neg_b",
       [](RowCache& r) {
         const double eta = r.etab();
         if (eta >= 0.0) return r.clamp_log;
         return std::max(std::log10(-eta), r.clamp_log);
       }},
      {"log_neg_b_flag", [](RowCache& r) { return r.etab() >= 0.0 ? 1.0 : 0.0; }},
  };
  return reg;
}

const Evaluator& find_quantity(const std::string& name) {
  for (const auto& [n, fn] : registry()) {
    if (n == name) return fn;
  }
  throw std::invalid_argument("unknown quantity: " + name);
}

}  // namespace

const std::vector<std::string>& quantity_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [n, fn] : registry()) v.push_back(n);
    return v;
  }();
  return names;
}

double evaluate_quantity(const std::string& name, const ScaledParams& s,
                         double clamp_log) {
  RowCache cache(s, clamp_log);
  return find_quantity(name)(cache);
}

Table run_sweep(const SweepConfig& config) {
  if (config.count < 2) throw std::invalid_argument("sweep count must be >= 2");
  if (!(config.start < config.stop)) throw std::invalid_argument("sweep range is empty");
  if (config.quantities.empty()) throw std::invalid_argument("no quantities requested");
  if (config.variable != "t_prime" && config.variable != "n_bar" && config.variable != "r") {
    throw std::invalid_argument("unknown sweep variable: " + config.variable);
  }
  std::vector<const Evaluator*> evals;
  for (const auto& q : config.quantities) evals.push_back(&find_quantity(q));

  Table table;
  table.columns.push_back(config.variable);
  for (const auto& q : config.quantities) table.columns.push_back(q);
  table.rows.assign(config.count, {});

  const double step = (config.stop - config.start) / (config.count - 1);
  detail::parallel_for(static_cast<std::size_t>(config.count), [&](std::size_t i) {
    const double x = config.start + step * static_cast<double>(i);
    double tp = config.t_prime, r = config.r, nb = config.n_bar;
    if (config.variable == "t_prime") tp = x;
    else if (config.variable == "n_bar") nb = x;
    else r = x;
    const ScaledParams s(tp, r, nb);
    RowCache cache(s, config.clamp_log);
    std::vector<double> row;
    row.reserve(evals.size() + 1);
    row.push_back(x);
    for (const auto* e : evals) row.push_back((*e)(cache));
    table.rows[i] = std::move(row);
  });
  return table;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

void write_csv(const Table& table, std::ostream& os) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) os << ',';
    os << table.columns[i];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << format_double(row[i]);
    }
    os << '\n';
  }
}

void write_json(const Table& table, const SweepConfig& config, std::ostream& os) {
  nlohmann::json j;
  j["schema"] = "optomech.sweep.v1";
  j["tool_version"] = kVersion;
  j["variable"] = config.variable;
  nlohmann::json fixed;
  if (config.variable != "t_prime") fixed["t_prime"] = config.t_prime;
  if (config.variable != "r") fixed["r"] = config.r;
  if (config.variable != "n_bar") fixed["n_bar"] = config.n_bar;
  j["fixed"] = fixed;
  j["clamp_log"] = config.clamp_log;
  j["columns"] = table.columns;
  j["rows"] = table.rows;
  os << j.dump(2) << '\n';
}

namespace {

constexpr double kPaperRatio = 1.0 + 2.5e-7;
constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

struct FigurePreset {
  std::string id;
  std::string quantity;
  std::vector<double> n_bars;
  double t_lo, t_hi;
  bool peak_is_max;  // otherwise the most negative value is reported
};

const std::vector<FigurePreset>& presets() {
  static const std::vector<FigurePreset> p = {
      {"negativity", "log_neg_b", {0.0, 0.1, 1.0, 1e7}, 0.0, kTwoPi, true},
      {"upsilon3", "upsilon3", {0.0, 1e5, 5e6, 1e7}, 0.0, kTwoPi, false},
      {"upsilon2", "upsilon2", {0.0, 1e-8, 1e-7}, 0.0, kTwoPi, false},
      {"upsilon2_zoom", "upsilon2", {1e3}, kTwoPi - 0.1, kTwoPi, false},
      {"fid_traced", "fidelity_traced", {0.0, 1.0, 10.0, 1e3}, kTwoPi - 0.1, kTwoPi, true},
      {"fid_het", "fidelity_het", {0.0, 1.0, 10.0, 1e3}, kTwoPi - 0.1, kTwoPi, true},
      {"info_gain", "info_gain", {0.0, 1.0, 10.0, 1e3}, kTwoPi - 0.1, kTwoPi, true},
  };
  return p;
}

std::string nbar_tag(double nb) {
  char buf[32];
  if (nb == std::floor(nb) && nb < 1e15) {
    std::snprintf(buf, sizeof buf, "%.0f", nb);
  } else {
    std::snprintf(buf, sizeof buf, "%g", nb);
  }
  std::string s = buf;
  for (auto& ch : s) {
    if (ch == '+' || ch == '.') ch = '_';
    if (ch == '-') ch = 'm';
  }
  return s;
}

}  // namespace

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& p : presets()) v.push_back(p.id);
    return v;
  }();
  return ids;
}

void write_figure(const std::string& figure_id, const std::string& out_dir) {
  const FigurePreset* preset = nullptr;
  for (const auto& p : presets()) {
    if (p.id == figure_id) preset = &p;
  }
  if (!preset) throw std::invalid_argument("unknown figure id: " + figure_id);

  std::filesystem::create_directories(out_dir);

  nlohmann::json manifest;
  manifest["schema"] = "optomech.figure.v1";
  manifest["tool_version"] = kVersion;
  manifest["figure"] = preset->id;
  manifest["quantity"] = preset->quantity;
  manifest["r"] = kPaperRatio;
  manifest["t_prime_range"] = {preset->t_lo, preset->t_hi};
  manifest["curves"] = nlohmann::json::array();

  for (double nb : preset->n_bars) {
    SweepConfig cfg;
    cfg.variable = "t_prime";
    cfg.start = preset->t_lo;
    cfg.stop = preset->t_hi;
    cfg.count = 2001;
    cfg.r = kPaperRatio;
    cfg.n_bar = nb;
    cfg.quantities = {preset->quantity};
    if (preset->quantity == "log_neg_b") cfg.quantities.push_back("log_neg_b_flag");

    const Table table = run_sweep(cfg);
    const std::string file = preset->id + "_nbar" + nbar_tag(nb) + ".csv";
    std::ofstream os(std::filesystem::path(out_dir) / file, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + file + " in " + out_dir);
    write_csv(table, os);

    double best_x = table.rows.front()[0];
    double best_y = table.rows.front()[1];
    for (const auto& row : table.rows) {
      const bool better = preset->peak_is_max ? row[1] > best_y : row[1] < best_y;
      if (better) {
        best_y = row[1];
        best_x = row[0];
      }
    }
    nlohmann::json curve;
    curve["n_bar"] = nb;
    curve["file"] = file;
    curve["grid_peak_value"] = best_y;
    curve["t_prime_at_grid_peak"] = best_x;
    if (preset->quantity == "fidelity_traced" || preset->quantity == "fidelity_het") {
      const auto kind = preset->quantity == "fidelity_traced"
                            ? ChannelKind::TracedOut
                            : ChannelKind::HeterodyneConditioned;
      const auto scan = optimal_fidelity_scan(preset->t_lo, preset->t_hi, kPaperRatio,
                                              nb, kind);
      curve["fidelity_max"] = scan.fidelity_max;
      curve["t_prime_max"] = scan.t_prime_max;
    }
    manifest["curves"].push_back(curve);
  }

  std::ofstream ms(std::filesystem::path(out_dir) / (preset->id + "_manifest.json"),
                   std::ios::binary);
  if (!ms) throw std::runtime_error("cannot write manifest in " + out_dir);
  ms << manifest.dump(2) << '\n';
}

}  // namespace optomech
