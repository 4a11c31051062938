#include <cmath>
#include <filesystem>
#include <sstream>

#include "comiclab/simd/transfer.hpp"
#include "internal.hpp"

namespace comiclab::harness {

namespace {

using detail::json;

const char* const kValueColumns[] = {"aic", "aicc", "comic", "comicc", "entropy_term"};

class Checker {
 public:
  void fail(std::string msg) { failures_.push_back(std::move(msg)); }
  void note(std::string msg) { notes_.push_back(std::move(msg)); }
  bool ok() const { return failures_.empty(); }

  VerifyReport finish(std::size_t rerun) {
    VerifyReport r;
    r.passed = failures_.empty();
    r.rerun_points = rerun;
    r.messages = failures_;
    r.messages.insert(r.messages.end(), notes_.begin(), notes_.end());
    return r;
  }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string where(const std::string& label, const json& pt) {
  std::ostringstream s;
  s << label << " (n=" << pt.at("n").get<std::size_t>() << ", realization=" << pt.at("realization").get<std::size_t>();
  return s.str();
}

void check_manifest(const json& record, const std::filesystem::path& dir, Checker& c) {
  std::vector<std::string> missing, modified;
  for (const auto& entry : record.at("manifest")) {
    const std::string name = entry.at("path").get<std::string>();
    const auto path = dir / name;
    if (!std::filesystem::exists(path)) {
      missing.push_back(name);
      continue;
    }
    const std::string bytes = detail::read_file(path);
    const std::string hash = fnv1a64_hex(bytes);
    if (hash != entry.at("fnv1a64").get<std::string>() || bytes.size() != entry.at("bytes").get<std::size_t>())
      modified.push_back(name + " (expected fnv1a64 " + entry.at("fnv1a64").get<std::string>() + ", found " + hash +
                         ")");
  }
  if (!missing.empty() || !modified.empty()) {
    std::string diff = "manifest diff:";
    for (const auto& m : missing) diff += "\n    - missing   " + m;
    for (const auto& m : modified) diff += "\n    ~ modified  " + m;
    c.fail(diff);
  }
}

// Every CSV field must equal the record's value as rendered by the writer.
void check_curve_csv(const std::string& label, const json& series, const std::filesystem::path& dir, Checker& c) {
  const auto& files = series.at("files");
  if (!files.contains("curve")) return;
  const auto path = dir / files.at("curve").get<std::string>();
  if (!std::filesystem::exists(path)) return;  // reported by the manifest check
  const auto rows = detail::parse_csv(detail::read_file(path));
  if (rows.empty() || rows[0].size() != 9) {
    c.fail(label + ": curve CSV header is malformed");
    return;
  }
  std::string header;
  for (std::size_t i = 0; i < rows[0].size(); ++i) header += (i ? "," : "") + rows[0][i];
  if (header != kCsvHeader) c.fail(label + ": curve CSV header differs from '" + std::string(kCsvHeader) + "'");
  const auto& points = series.at("points");
  if (rows.size() - 1 != points.size()) {
    c.fail(label + ": curve CSV has " + std::to_string(rows.size() - 1) + " rows, record has " +
           std::to_string(points.size()) + " points");
    return;
  }
  const std::string kind = series.at("criterion_kind").get<std::string>();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& pt = points[i];
    const auto& row = rows[i + 1];
    if (row.size() != 9) {
      c.fail(label + ": CSV row " + std::to_string(i + 1) + " has " + std::to_string(row.size()) + " fields");
      continue;
    }
    if (row[0] != std::to_string(pt.at("n").get<std::size_t>()) ||
        row[1] != std::to_string(pt.at("realization").get<std::size_t>()) ||
        row[8] != std::to_string(pt.at("seed").get<std::uint64_t>()) || row[7] != kind) {
      c.fail(where(label, pt) + "): CSV row " + std::to_string(i + 1) + " key columns differ from the record");
      continue;
    }
    const bool ok = pt.at("ok").get<bool>();
    for (std::size_t col = 0; col < 5; ++col) {
      const std::string expected = ok ? detail::json_number_text(pt.at(kValueColumns[col])) : "nan";
      if (row[2 + col] != expected)
        c.fail(where(label, pt) + ", column=" + kValueColumns[col] + "): CSV has " + row[2 + col] +
               ", record has " + expected);
    }
  }
}

void check_seeds(const std::string& label, const json& series, std::uint64_t master, Checker& c) {
  for (const auto& pt : series.at("points")) {
    const auto r = pt.at("realization").get<std::size_t>();
    const auto stored = pt.at("seed").get<std::uint64_t>();
    const auto derived = realization_seed(master, r);
    if (stored != derived) {
      c.fail(where(label, pt) + "): stored seed " + std::to_string(stored) + " is not derived from master seed " +
             std::to_string(master) + " (expected " + std::to_string(derived) + ")");
      return;  // the first mismatch identifies the problem
    }
  }
}

bool close(double a, double b, double rel) {
  if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
  if (a == b) return true;
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

std::size_t rerun_subsample(const ExperimentConfig& cfg, const json& record, Checker& c) {
  std::size_t count = 0;
  for (std::size_t s = 0; s < cfg.series.size(); ++s) {
    const SeriesConfig& series = cfg.series[s];
    const json& stored = record.at("series").at(s);
    if (stored.at("label") != series.label) {
      c.fail("series " + std::to_string(s) + ": record label '" + stored.at("label").get<std::string>() +
             "' does not match the config echo '" + series.label + "'");
      continue;
    }
    SweepSpec spec = series.sweep;
    spec.master_seed = cfg.master_seed;
    const bool exact = spec.method == Method::mtpt && spec.placement == Spacing::uniform;
    const double rel = exact ? 0.0 : 1e-12;
    const auto& points = stored.at("points");
    for (std::size_t idx : stratified_sample(points.size())) {
      const json& pt = points.at(idx);
      const auto n = pt.at("n").get<std::size_t>();
      const auto r = pt.at("realization").get<std::size_t>();
      const SweepPoint fresh = evaluate_sweep_point(spec, n, r);
      ++count;
      if (fresh.seed != pt.at("seed").get<std::uint64_t>()) {
        c.fail(where(series.label, pt) + "): re-run seed " + std::to_string(fresh.seed) + " differs from stored seed");
        continue;
      }
      if (fresh.ok != pt.at("ok").get<bool>()) {
        c.fail(where(series.label, pt) + "): re-run " + (fresh.ok ? "succeeded" : "failed: " + fresh.error) +
               " but the record says otherwise");
        continue;
      }
      if (!fresh.ok) continue;
      const double values[] = {fresh.report.aic, fresh.report.aicc, fresh.report.comic, fresh.report.comicc,
                               fresh.report.entropy_term};
      for (std::size_t col = 0; col < 5; ++col) {
        const json& v = pt.at(kValueColumns[col]);
        const double recorded = v.is_null() ? std::nan("") : v.get<double>();
        if (!close(values[col], recorded, rel))
          c.fail(where(series.label, pt) + ", column=" + kValueColumns[col] + "): re-run gives " +
                 format_number(values[col]) + ", record has " + format_number(recorded));
      }
      if (fresh.estimate && pt.contains("estimate")) {
        const auto& e = pt.at("estimate");
        if (!close(fresh.estimate->velocity, e.at("velocity").get<double>(), rel) ||
            !close(fresh.estimate->diffusion, e.at("diffusion").get<double>(), rel))
          c.fail(where(series.label, pt) + ", column=estimate): re-run estimate differs from the record");
      }
    }
  }
  return count;
}

}  // namespace

VerifyReport verify_record(const std::filesystem::path& record_path) {
  Checker c;
  json record;
  try {
    record = json::parse(detail::read_file(record_path));
  } catch (const std::exception& e) {
    c.fail("cannot load record '" + record_path.string() + "': " + e.what());
    return c.finish(0);
  }
  if (record.value("schema", "") != kRecordSchema) {
    c.fail("record schema is not " + std::string(kRecordSchema));
    return c.finish(0);
  }
  const auto dir = record_path.parent_path().empty() ? std::filesystem::path(".") : record_path.parent_path();

  ExperimentConfig cfg;
  try {
    cfg = parse_config(record.at("config"));
  } catch (const std::exception& e) {
    c.fail(std::string("config echo does not validate: ") + e.what());
    return c.finish(0);
  }
  const std::string hash = config_hash(cfg);
  if (hash != record.value("config_hash", ""))
    c.fail("config hash mismatch: record has " + record.value("config_hash", "") + ", echo hashes to " + hash);

  try {
    check_manifest(record, dir, c);
    const auto& series = record.at("series");
    if (series.size() != cfg.series.size()) c.fail("record has a different number of series than its config echo");
    for (const auto& s : series) {
      const std::string label = s.at("label").get<std::string>();
      check_seeds(label, s, cfg.master_seed, c);
      check_curve_csv(label, s, dir, c);
    }
  } catch (const std::exception& e) {
    c.fail(std::string("record is malformed: ") + e.what());
    return c.finish(0);
  }
  if (!c.ok()) return c.finish(0);

  const std::string recorded_backend = record.value("simd_backend", "scalar");
  try {
    const auto b = simd::backend_from_string(recorded_backend);
    if (simd::available(b))
      simd::set_backend(b);
    else
      c.note("recorded SIMD backend '" + recorded_backend + "' is unavailable; re-running with " +
             std::string(simd::to_string(simd::active_backend())));
  } catch (const std::exception&) {
    c.note("unknown recorded SIMD backend '" + recorded_backend + "'");
  }
  std::size_t rerun = 0;
  try {
    rerun = rerun_subsample(cfg, record, c);
  } catch (const std::exception& e) {
    c.fail(std::string("re-run failed: ") + e.what());
  }
  return c.finish(rerun);
}

}  // namespace comiclab::harness
