#pragma once

// Flat key = value scenario documents, preset experiments and CSV output.
//
//   # comment
//   name = fig3_complete
//   family = bernoulli            # or gaussian (then noise_sd)
//   means = [0.5, 0.1*16]         # value*count repeats a value
//   n_agents = 64
//   topology = complete           # cycle, kregular (topology_k), grid
//                                 # (grid_rows, grid_cols), custom (edges or edge_file)
//   schedule = static             # gossip, link_failure (fail_prob)
//   policy = dec_ts               # dec_bayes_ucb, isolated_ts, centralized_ts
//   horizon = 5000
//
// Optional keys: eta, quantile_c, n_runs, seed, output, per_run_output,
// record_every, regret, prior_alpha, prior_beta, prior_mean, prior_sd,
// prior_precision, epsilon.

#include "decbandit/engine.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace decbandit {

/// Parse or validation failure. what() reads "source:line: message", or
/// "source: message" when no single line is at fault.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& source, std::size_t line, const std::string& message);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct ScenarioFile {
    Scenario scenario;
    std::filesystem::path output;
    std::optional<std::filesystem::path> per_run_output;
    /// Slack in the regret bound.
    double epsilon = 1.0;

    bool operator==(const ScenarioFile&) const = default;
};

/// Relative edge_file paths resolve against base_dir.
ScenarioFile parse_scenario(std::string_view text, const std::string& source,
                            const std::filesystem::path& base_dir = {});
ScenarioFile load_scenario(const std::filesystem::path& path);

/// A document that parse_scenario maps back to an equal ScenarioFile.
std::string serialize_scenario(const ScenarioFile& file);

/// Shortest decimal text that reads back as the same double.
std::string format_double(double value);

// ------------------------------------------------------------------ presets

struct PresetInfo {
    std::string name;
    std::string description;
};

struct PresetOptions {
    std::optional<std::size_t> runs;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> horizon;
    std::filesystem::path out_dir = ".";
};

inline constexpr std::size_t kPresetRuns = 100;
inline constexpr std::size_t kPresetHorizon = 5000;
inline constexpr std::uint64_t kPresetSeed = 20240601;

std::vector<PresetInfo> presets();

/// The scenarios of one preset, each with its output path under out_dir.
/// Throws std::invalid_argument for an unknown name.
std::vector<ScenarioFile> expand_preset(std::string_view name, const PresetOptions& options = {});

// ------------------------------------------------------------------- output

/// Writes `contents` to a temporary sibling and renames it over `path`, so
/// readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// round,mean_regret,stderr_regret
std::string regret_csv(const AggregateResult& result);
/// run,round,regret
std::string per_run_csv(const AggregateResult& result);
/// key=value lines: run summary and message counts.
std::string stats_text(const ScenarioFile& file, const AggregateResult& result);

/// output with its extension replaced by ".stats.txt".
std::filesystem::path stats_path(const std::filesystem::path& output);

/// Runs the scenario and writes the CSV, optional per-run CSV and stats
/// sidecar. Returns the written paths.
std::vector<std::filesystem::path> run_and_write(const ScenarioFile& file);

/// Writes the regret bound over rounds 1..T (same CSV schema, zero stderr)
/// to "<stem>_bound.csv" next to the output, plus a stats sidecar with the
/// asymptotic slope. Requires a Bernoulli instance and a static schedule.
std::vector<std::filesystem::path> write_bound(const ScenarioFile& file);

} // namespace decbandit
