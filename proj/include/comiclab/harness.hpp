#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "comiclab/sweep.hpp"

namespace comiclab::harness {

inline constexpr const char* kConfigSchema = "comic-lab/config/v1";
inline constexpr const char* kRecordSchema = "comic-lab/run-record/v1";
inline constexpr const char* kCsvHeader = "n,realization,aic,aicc,comic,comicc,entropy_term,criterion_kind,seed";

/// Raised for schema violations; carries one line per problem, each prefixed
/// with the JSON pointer of the offending value.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// How the grid was written in the config, kept so the echo round-trips.
struct GridSpec {
  std::optional<double> from_exponent;
  std::optional<double> to_exponent;
  std::size_t points = 0;
  std::vector<std::size_t> explicit_n;
};

struct SeriesConfig {
  std::string label;
  SweepSpec sweep;  // master_seed and jobs are filled in from the experiment
  GridSpec grid;
};

enum class SeedSource { config, env, flag };
std::string_view to_string(SeedSource s);

struct ExperimentConfig {
  std::string experiment = "custom";
  std::string description;
  std::uint64_t master_seed = 0;
  SeedSource seed_source = SeedSource::config;
  unsigned jobs = 1;
  std::optional<std::string> output;
  std::vector<SeriesConfig> series;
};

struct ExperimentInfo {
  std::string id;
  std::string title;
};

std::vector<ExperimentInfo> list_experiments();

/// Canonical preset document for E1..E6 (throws std::out_of_range otherwise).
nlohmann::json preset(const std::string& id);

/// Validates and resolves a config document: preset defaults, then the
/// document's `defaults`, then each series entry. Unknown keys are errors.
ExperimentConfig parse_config(const nlohmann::json& document);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Fully resolved echo; parse_config(to_json(c)) reproduces c.
nlohmann::json to_json(const ExperimentConfig& config);

/// flag > COMIC_LAB_SEED > config.
void apply_seed_override(ExperimentConfig& config, std::optional<std::uint64_t> flag_seed);
std::uint64_t parse_seed(const std::string& text);

std::string config_hash(const ExperimentConfig& config);
std::string fnv1a64_hex(std::string_view bytes);
std::string format_number(double value);

struct RunOptions {
  std::filesystem::path out_dir;
  std::optional<unsigned> jobs;
};

struct RunOutcome {
  std::filesystem::path record_path;
  bool complete = true;  // false when any sweep point failed
  std::vector<std::string> failures;
};

/// Runs every series, then writes the CSVs, summary.txt and record.json from
/// a single collector. Refuses to overwrite an existing record.
RunOutcome run_experiment(const ExperimentConfig& config, const RunOptions& options);

struct VerifyReport {
  bool passed = true;
  std::size_t rerun_points = 0;
  std::vector<std::string> messages;  // failures first, then notes
};

/// Checks the manifest, CSV/record consistency and seed derivation, then
/// re-runs a 10% stratified subsample of points.
VerifyReport verify_record(const std::filesystem::path& record_path);

/// Indices of the re-run subsample for a series of `total` points:
/// max(1, ceil(total / 10)) indices spread evenly over the n-major order.
std::vector<std::size_t> stratified_sample(std::size_t total);

/// CSV rendering of one curve (the exact header plus one row per point).
std::string curve_csv(const SweepCurve& curve, CriterionKind kind);

}  // namespace comiclab::harness
