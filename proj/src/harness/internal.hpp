#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "comiclab/harness.hpp"

namespace comiclab::harness::detail {

using nlohmann::json;

struct Quartiles {
  std::size_t count = 0;
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
};

/// Linear-interpolation quantiles (the "type 7" rule).
Quartiles quartiles(std::vector<double> values);

json point_to_json(const SweepPoint& pt);
json mean_to_json(const CurveMean& m);
json argmin_to_json(const SweepCurve& curve);

std::string mean_csv(const SweepCurve& curve, CriterionKind kind, std::uint64_t master_seed);
std::string estimates_csv(const SweepCurve& curve);
std::string quartiles_csv(const SweepCurve& curve);

/// Splits CSV text into rows of fields (no quoting; the harness never emits any).
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

/// "nan" for JSON null, otherwise format_number of the stored double.
std::string json_number_text(const json& v);

}  // namespace comiclab::harness::detail
