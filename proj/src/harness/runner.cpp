#include <chrono>
#include <ctime>
#include <map>
#include <sstream>

#include "comiclab/simd/transfer.hpp"
#include "internal.hpp"

namespace comiclab::harness {

namespace {

using detail::json;

std::string utc_timestamp(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct SeriesResult {
  const SeriesConfig* config = nullptr;
  SweepCurve curve;
  std::map<std::string, std::string> files;  // role -> file name
};

std::string summary_text(const ExperimentConfig& cfg, const std::vector<SeriesResult>& results,
                         const std::string& hash, const RunOutcome& outcome) {
  std::ostringstream s;
  s << "comic-lab " << COMICLAB_VERSION << "\n";
  s << "experiment: " << cfg.experiment << (cfg.description.empty() ? "" : " (" + cfg.description + ")") << "\n";
  s << "master seed: " << cfg.master_seed << " (from " << to_string(cfg.seed_source) << ")\n";
  s << "config hash: " << hash << "\n";
  s << "status: " << (outcome.complete ? "complete" : "partial") << "\n\n";
  for (const auto& r : results) {
    const SweepSpec& sw = r.config->sweep;
    s << "[" << r.config->label << "] " << to_string(sw.method) << ", k=" << sw.k << ", alpha=" << sw.alpha
      << ", criterion=" << to_string(sw.criterion) << ", entropy=" << to_string(sw.entropy)
      << ", realizations=" << sw.realizations << "\n";
    if (r.curve.found)
      s << "  argmin COMIC at n=" << r.curve.argmin_n << " (bracket " << r.curve.bracket_lo << " .. "
        << r.curve.bracket_hi << "), mean COMIC " << format_number(r.curve.mean[r.curve.argmin_index].comic) << "\n";
    else
      s << "  no successful points\n";
    std::size_t failed = 0;
    for (const auto& pt : r.curve.points) failed += pt.ok ? 0 : 1;
    if (failed) s << "  failed points: " << failed << "\n";
    if (sw.estimate_each_n) {
      std::map<std::size_t, std::vector<const SweepPoint*>> by_n;
      for (const auto& pt : r.curve.points)
        if (pt.estimate) by_n[pt.n].push_back(&pt);
      for (const auto& [n, pts] : by_n) {
        std::vector<double> v, d;
        for (const auto* p : pts) {
          v.push_back(p->estimate->velocity);
          d.push_back(p->estimate->diffusion);
        }
        const auto qv = detail::quartiles(v);
        const auto qd = detail::quartiles(d);
        s << "  n=" << n << ": median v=" << format_number(qv.median) << " (IQR " << format_number(qv.q3 - qv.q1)
          << "), median D=" << format_number(qd.median) << " (IQR " << format_number(qd.q3 - qd.q1) << ")\n";
      }
    }
    for (const auto& [role, file] : r.files) s << "  " << role << ": " << file << "\n";
    s << "\n";
  }
  for (const auto& f : outcome.failures) s << "failure: " << f << "\n";
  return s.str();
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  namespace fs = std::filesystem;
  const fs::path dir = options.out_dir;
  fs::create_directories(dir);
  const fs::path record_path = dir / "record.json";
  if (fs::exists(record_path))
    throw std::runtime_error("'" + record_path.string() + "' already exists; records are never overwritten");

  const auto started = std::chrono::system_clock::now();
  const auto t0 = std::chrono::steady_clock::now();
  const unsigned jobs = options.jobs.value_or(config.jobs);

  RunOutcome outcome;
  outcome.record_path = record_path;
  std::vector<SeriesResult> results;
  for (const auto& series : config.series) {
    SweepSpec spec = series.sweep;
    spec.master_seed = config.master_seed;
    spec.jobs = jobs;
    SeriesResult r;
    r.config = &series;
    r.curve = sweep_particle_numbers(spec);
    for (const auto& pt : r.curve.points)
      if (!pt.ok)
        outcome.failures.push_back(series.label + ": n=" + std::to_string(pt.n) + " realization " +
                                   std::to_string(pt.realization) + ": " + pt.error);
    results.push_back(std::move(r));
  }
  outcome.complete = outcome.failures.empty();

  // Single collector: every file is rendered and written only after all
  // sweep jobs have finished.
  json manifest = json::array();
  auto emit = [&](const std::string& name, const std::string& bytes) {
    detail::write_file(dir / name, bytes);
    manifest.push_back({{"path", name}, {"bytes", bytes.size()}, {"fnv1a64", fnv1a64_hex(bytes)}});
  };
  json series_json = json::array();
  for (auto& r : results) {
    const SweepSpec& sw = r.config->sweep;
    const std::string& label = r.config->label;
    r.files["curve"] = label + ".csv";
    emit(r.files["curve"], curve_csv(r.curve, sw.criterion));
    r.files["mean"] = label + "_mean.csv";
    emit(r.files["mean"], detail::mean_csv(r.curve, sw.criterion, config.master_seed));
    if (sw.estimate_each_n) {
      r.files["estimates"] = label + "_estimates.csv";
      emit(r.files["estimates"], detail::estimates_csv(r.curve));
      r.files["quartiles"] = label + "_quartiles.csv";
      emit(r.files["quartiles"], detail::quartiles_csv(r.curve));
    }
    json points = json::array();
    for (const auto& pt : r.curve.points) points.push_back(detail::point_to_json(pt));
    json mean = json::array();
    for (const auto& m : r.curve.mean) mean.push_back(detail::mean_to_json(m));
    series_json.push_back({{"label", label},
                           {"criterion_kind", to_string(sw.criterion)},
                           {"shared_simulation", shares_simulation(sw)},
                           {"points", points},
                           {"mean", mean},
                           {"argmin", detail::argmin_to_json(r.curve)},
                           {"files", r.files}});
  }

  const std::string hash = config_hash(config);
  emit("summary.txt", summary_text(config, results, hash, outcome));

  const auto finished = std::chrono::system_clock::now();
  json record = {{"schema", kRecordSchema},
                 {"software", {{"name", "comic-lab"}, {"version", COMICLAB_VERSION}}},
                 {"config", to_json(config)},
                 {"config_hash", hash},
                 {"seed_source", to_string(config.seed_source)},
                 {"simd_backend", simd::to_string(simd::active_backend())},
                 {"jobs", jobs},
                 {"started_at", utc_timestamp(started)},
                 {"finished_at", utc_timestamp(finished)},
                 {"wall_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()},
                 {"status", outcome.complete ? "complete" : "partial"},
                 {"failures", outcome.failures},
                 {"series", series_json},
                 {"manifest", manifest}};
  detail::write_file(record_path, record.dump(2) + "\n");
  return outcome;
}

}  // namespace comiclab::harness
