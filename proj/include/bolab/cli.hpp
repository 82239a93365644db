#pragma once

// Command-line front end: JSON configs, CSV/JSON/SVG outputs and the
// simulate | sweep | invariants | mms | plot commands. Commands return the
// process exit code:
//
//   0 success, 1 invariant failure, 2 configuration error, 3 blow-up

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bolab/lab.hpp"

namespace bolab::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kInvariantFailure = 1, kConfigError = 2, kBlowUp = 3 };

// ---------------------------------------------------------------------------
// Configs

enum class Schema { simulate, sweep, mms };

/// Loads a flat JSON config, or the "config" member of a run manifest.
/// Throws ConfigError naming the offending field.
nlohmann::json load_config_json(const std::filesystem::path& path);

SimConfig parse_sim_config(const nlohmann::json& doc, Schema schema = Schema::simulate);
SweepConfig parse_sweep_config(const nlohmann::json& doc);

/// Every key with defaults filled in; parses back to the same config.
nlohmann::json to_json(const SimConfig& cfg);
nlohmann::json to_json(const SweepConfig& cfg);

/// FNV-1a over the compact dump, as "fnv1a64:<hex>".
std::string config_hash(const nlohmann::json& resolved);

// ---------------------------------------------------------------------------
// Files

/// Shortest text that round-trips: 17 significant digits.
std::string format_number(double v);

inline constexpr const char* kDiagnosticsHeader =
    "t,l2_sq,hhalf_sq,dhalf_sq,dx_sq,d32_sq,energy,cubic,linf";
inline constexpr const char* kSweepHeader =
    "epsilon,sup_hhalf_err,sup_l2_err,energy_drift,l2_deficit";

std::string diagnostics_csv(const Trajectory& traj);
std::string sweep_csv(const SweepResult& result);
nlohmann::json rates_json(const SweepResult& result);

struct SnapshotTable {
  Index n_points = 0;
  double length = 0;
  std::vector<double> times;
  /// n_points x times.size(), column j holds the snapshot at times[j].
  Eigen::MatrixXd samples;
};

std::string snapshots_text(const Trajectory& traj);
SnapshotTable read_snapshots(const std::filesystem::path& path);

struct SweepRow {
  double epsilon, sup_hhalf_err, sup_l2_err, energy_drift, l2_deficit;
};

/// Parses a sweep CSV; throws ConfigError("csv", ...) when malformed.
std::vector<SweepRow> parse_sweep_csv(const std::string& text);

/// Log-log plot of sup_hhalf_err and energy_drift against epsilon, with a
/// fitted line and slope label per series when at least 3 points exist.
std::string sweep_svg(const std::vector<SweepRow>& rows, std::vector<std::string>& warnings);

// ---------------------------------------------------------------------------
// Commands

struct Context {
  std::filesystem::path config;
  std::filesystem::path out_dir = ".";
  unsigned workers = 1;
  unsigned seed = 0;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
};

/// --out, overridden by BOLAB_OUT when set.
std::filesystem::path resolve_out_dir(const std::optional<std::string>& flag);

int cmd_simulate(const Context& ctx);
int cmd_sweep(const Context& ctx);
int cmd_invariants(const Context& ctx);
int cmd_mms(const Context& ctx);
int cmd_plot(const std::filesystem::path& sweep_csv, const std::filesystem::path& out_svg,
             const Context& ctx);

}  // namespace bolab::cli
