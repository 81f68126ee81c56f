#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adslab/experiment.hpp"

namespace adslab {

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

inline constexpr std::string_view kStepsHeader = "trial,t,learner,env,action,reward,extra";
inline constexpr std::string_view kDriftHeader =
    "trial,t,learner,accuracy,concept_shift,covariate_shift";
inline constexpr std::string_view kCooperationHeader = "trial,t,cooperation";
inline constexpr std::string_view kWalkthroughHeader = "t,learner,action,reward,replaced_by";

void write_step_rows(std::ostream& out, std::span<const StepRecord> rows);
void write_drift_rows(std::ostream& out, std::span<const DriftSnapshot> rows);

std::string summary_header();
std::string summary_row(const std::string& hash, std::size_t point, const TrialConfig& cfg,
                        const TrialSummary& s, double failure_threshold);

/// Minimal reader for the files written here: comma separated, no quoting.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Throws if the column does not exist.
  std::size_t column(std::string_view name) const;
};

CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(std::string_view text);

/// Per sweep point: share of seeds flagged as failing and the mean and
/// standard error of the headline metric, from summary.csv rows.
std::string failure_table(const CsvTable& summary);

struct RunOptions {
  std::filesystem::path out_dir;
  std::size_t workers = 1;
};

struct RunOutcome {
  std::size_t trials = 0;
  std::size_t failed = 0;
  std::string config_hash;
  std::vector<std::string> files;
};

/// Runs every (sweep point, seed) trial and writes steps.csv, drift.csv,
/// cooperation.csv, summary.csv, failure_rates.csv and manifest.json into
/// `out_dir`. Output bytes do not depend on the worker count. Trial errors
/// are recorded in the manifest and counted in `failed`.
RunOutcome run_experiment(const ExperimentConfig& cfg, const RunOptions& options);

struct ReportOutcome {
  std::vector<std::string> missing;  // non-empty means nothing was written
  std::vector<std::string> written;
  std::vector<std::string> notes;    // one-line findings for the terminal
};

/// Aggregates a finished run directory into report_*.csv tables.
ReportOutcome write_reports(const std::filesystem::path& run_dir,
                            const std::filesystem::path& out_dir);

}  // namespace adslab
