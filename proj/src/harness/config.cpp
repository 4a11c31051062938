#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <regex>
#include <set>
#include <sstream>

#include "comiclab/harness.hpp"

namespace comiclab::harness {

using nlohmann::json;

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error([&] {
        std::string msg = "invalid configuration:";
        for (const auto& p : problems) msg += "\n  " + p;
        return msg;
      }()),
      problems_(std::move(problems)) {}

std::string_view to_string(SeedSource s) {
  switch (s) {
    case SeedSource::config: return "config";
    case SeedSource::env: return "env";
    case SeedSource::flag: return "flag";
  }
  return "config";
}

namespace {

const std::set<std::string> kTopKeys = {"schema", "experiment", "description", "seed",
                                        "jobs",   "output",     "defaults",    "series"};
const std::set<std::string> kSeriesKeys = {"label",     "ade",      "domain",        "k",        "spacing",
                                           "alpha",     "method",   "dt",            "placement", "normalization",
                                           "volumes",   "readout",  "criterion",     "entropy",  "p",
                                           "grid",      "realizations", "estimate",  "estimation"};
const std::set<std::string> kAdeKeys = {"velocity", "diffusion", "release", "final_time"};
const std::set<std::string> kGridKeys = {"from", "to", "points", "n"};
const std::set<std::string> kEstimationKeys = {"initial_velocity", "initial_diffusion", "tol_x", "tol_f",
                                               "max_iterations"};

json base_series() {
  return json{{"ade", {{"velocity", 0.0}, {"diffusion", 1.0}, {"release", 0.0}, {"final_time", 1.0}}},
              {"domain", {-5.0, 5.0}},
              {"k", 30},
              {"spacing", "uniform"},
              {"alpha", 0.0},
              {"method", "mtpt"},
              {"dt", 0.1},
              {"placement", "uniform"},
              {"normalization", "default"},
              {"volumes", "voronoi"},
              {"readout", "auto"},
              {"criterion", "iid-gaussian"},
              {"entropy", "uniform"},
              {"p", 0},
              {"grid", {{"from", 2.0}, {"to", 4.6}, {"points", 12}}},
              {"realizations", 1},
              {"estimate", false},
              {"estimation",
               {{"initial_velocity", 0.5},
                {"initial_diffusion", 0.5},
                {"tol_x", 1e-8},
                {"tol_f", 1e-8},
                {"max_iterations", 400}}}};
}

// Nested parameter groups merge key by key; everything else is replaced.
void overlay(json& target, const json& patch) {
  for (auto it = patch.begin(); it != patch.end(); ++it) {
    if ((it.key() == "ade" || it.key() == "estimation") && it->is_object() && target.contains(it.key()) &&
        target[it.key()].is_object()) {
      for (auto jt = it->begin(); jt != it->end(); ++jt) target[it.key()][jt.key()] = *jt;
    } else {
      target[it.key()] = *it;
    }
  }
}

// Non-negative JSON integers arrive as either signed or unsigned values.
std::optional<std::uint64_t> as_unsigned(const json& v) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  return std::nullopt;
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where,
                std::vector<std::string>& problems) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) problems.push_back(where + "/" + it.key() + ": unknown key");
}

void check_series_shape(const json& s, const std::string& where, std::vector<std::string>& problems) {
  if (!s.is_object()) {
    problems.push_back(where + ": must be an object");
    return;
  }
  check_keys(s, kSeriesKeys, where, problems);
  if (s.contains("ade")) {
    if (s["ade"].is_object())
      check_keys(s["ade"], kAdeKeys, where + "/ade", problems);
    else
      problems.push_back(where + "/ade: must be an object");
  }
  if (s.contains("grid")) {
    if (s["grid"].is_object())
      check_keys(s["grid"], kGridKeys, where + "/grid", problems);
    else
      problems.push_back(where + "/grid: must be an object");
  }
  if (s.contains("estimation")) {
    if (s["estimation"].is_object())
      check_keys(s["estimation"], kEstimationKeys, where + "/estimation", problems);
    else
      problems.push_back(where + "/estimation: must be an object");
  }
}

// Typed readers: each records a problem and returns a fallback on failure.
class Reader {
 public:
  Reader(const json& obj, std::string where, std::vector<std::string>& problems)
      : obj_(obj), where_(std::move(where)), problems_(problems) {}

  double number(const std::string& key, double lo = -std::numeric_limits<double>::infinity(),
                double hi = std::numeric_limits<double>::infinity(), bool open_lo = false) {
    const json& v = obj_.at(key);
    if (!v.is_number()) return fail(key, "must be a number"), 0.0;
    const double x = v.get<double>();
    if (!std::isfinite(x) || x < lo || x > hi || (open_lo && x == lo)) {
      std::ostringstream os;
      os << "must be a finite number in " << (open_lo ? "(" : "[") << lo << ", " << hi << "]";
      return fail(key, os.str()), 0.0;
    }
    return x;
  }

  std::int64_t integer(const std::string& key, std::int64_t lo, std::int64_t hi) {
    const json& v = obj_.at(key);
    if (!v.is_number_integer()) return fail(key, "must be an integer"), lo;
    const auto x = v.get<std::int64_t>();
    if (x < lo || x > hi) return fail(key, "must be an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]"), lo;
    return x;
  }

  bool boolean(const std::string& key) {
    const json& v = obj_.at(key);
    if (!v.is_boolean()) return fail(key, "must be true or false"), false;
    return v.get<bool>();
  }

  template <class F>
  auto choice(const std::string& key, F parse, decltype(parse(std::string_view{})) fallback) {
    const json& v = obj_.at(key);
    if (!v.is_string()) return fail(key, "must be a string"), fallback;
    try {
      return parse(v.get<std::string>());
    } catch (const std::exception& e) {
      return fail(key, e.what()), fallback;
    }
  }

  void fail(const std::string& key, const std::string& what) { problems_.push_back(where_ + "/" + key + ": " + what); }

 private:
  const json& obj_;
  std::string where_;
  std::vector<std::string>& problems_;
};

SeriesConfig read_series(const json& s, const std::string& where, std::vector<std::string>& problems) {
  SeriesConfig out;
  Reader r(s, where, problems);
  if (!s.contains("label") || !s["label"].is_string()) {
    problems.push_back(where + "/label: required string");
  } else {
    out.label = s["label"].get<std::string>();
    static const std::regex pattern("[A-Za-z0-9][A-Za-z0-9_.-]{0,63}");
    if (!std::regex_match(out.label, pattern))
      problems.push_back(where + "/label: must match [A-Za-z0-9][A-Za-z0-9_.-]* (at most 64 characters)");
  }

  SweepSpec& sw = out.sweep;
  if (!s["domain"].is_array() || s["domain"].size() != 2 || !s["domain"][0].is_number() ||
      !s["domain"][1].is_number()) {
    problems.push_back(where + "/domain: must be [lo, hi]");
  } else {
    sw.domain = {s["domain"][0].get<double>(), s["domain"][1].get<double>()};
    if (!(std::isfinite(sw.domain.lo) && std::isfinite(sw.domain.hi) && sw.domain.lo < sw.domain.hi))
      problems.push_back(where + "/domain: requires finite lo < hi");
  }

  Reader ade(s["ade"], where + "/ade", problems);
  {
    sw.truth.velocity = ade.number("velocity");
    sw.truth.diffusion = ade.number("diffusion", 0.0, 1e6, true);
    sw.truth.release = ade.number("release");
    sw.truth.final_time = ade.number("final_time", 0.0, 1e6, true);
    if (!sw.domain.contains(sw.truth.release)) ade.fail("release", "must lie inside the domain");
  }

  sw.k = static_cast<std::size_t>(r.integer("k", 2, 100000));
  sw.spacing = r.choice("spacing", spacing_from_string, Spacing::uniform);
  sw.alpha = r.number("alpha", 0.0, 100.0);
  sw.method = r.choice("method", method_from_string, Method::mtpt);
  sw.dt = r.number("dt", 0.0, 1e6, true);
  if (sw.dt > sw.truth.final_time) r.fail("dt", "must not exceed ade/final_time");
  sw.placement = r.choice("placement", spacing_from_string, Spacing::uniform);
  if (s["normalization"] == "default") {
    sw.normalization.reset();
  } else {
    sw.normalization = r.choice("normalization", normalization_from_string, Normalization::density);
  }
  sw.volumes = r.choice("volumes", volume_rule_from_string, VolumeRule::voronoi);
  sw.readout = r.choice("readout", readout_from_string, MtptReadout::automatic);
  sw.criterion = r.choice("criterion", criterion_from_string, CriterionKind::iid_gaussian);
  sw.entropy = r.choice("entropy", entropy_from_string, EntropyMode::uniform);
  sw.p = static_cast<int>(r.integer("p", 0, 100));
  sw.realizations = static_cast<std::size_t>(r.integer("realizations", 1, 100000));
  sw.estimate_each_n = r.boolean("estimate");

  Reader est(s["estimation"], where + "/estimation", problems);
  {
    sw.estimation.initial_velocity = est.number("initial_velocity");
    sw.estimation.initial_diffusion = est.number("initial_diffusion", 0.0, 1e6, true);
    sw.estimation.simplex.tol_x = est.number("tol_x", 0.0, 1.0, true);
    sw.estimation.simplex.tol_f = est.number("tol_f", 0.0, 1.0, true);
    sw.estimation.simplex.max_iterations = static_cast<int>(est.integer("max_iterations", 1, 1000000));
  }

  const json& g = s["grid"];
  Reader gr(g, where + "/grid", problems);
  constexpr std::size_t kMaxParticles = 1000000;
  if (g.contains("n")) {
    if (g.contains("from") || g.contains("to") || g.contains("points")) {
      problems.push_back(where + "/grid: give either n or from/to/points, not both");
    } else if (!g["n"].is_array() || g["n"].empty()) {
      gr.fail("n", "must be a non-empty array of particle counts");
    } else {
      for (std::size_t i = 0; i < g["n"].size(); ++i) {
        const json& v = g["n"][i];
        const auto u = as_unsigned(v);
        if (!u || *u < 2 || *u > kMaxParticles) {
          gr.fail("n/" + std::to_string(i), "must be an integer in [2, 1000000]");
          continue;
        }
        const auto n = static_cast<std::size_t>(*u);
        if (!out.grid.explicit_n.empty() && n <= out.grid.explicit_n.back())
          gr.fail("n/" + std::to_string(i), "particle counts must be strictly ascending");
        out.grid.explicit_n.push_back(n);
      }
      sw.grid = out.grid.explicit_n;
    }
  } else {
    for (const char* key : {"from", "to", "points"})
      if (!g.contains(key)) gr.fail(key, "required (or give n)");
    if (g.contains("from") && g.contains("to") && g.contains("points")) {
      out.grid.from_exponent = gr.number("from", std::log10(2.0), 6.0);
      out.grid.to_exponent = gr.number("to", std::log10(2.0), 6.0);
      out.grid.points = static_cast<std::size_t>(gr.integer("points", 1, 1000));
      if (*out.grid.to_exponent < *out.grid.from_exponent) gr.fail("to", "must not be below from");
      else if (out.grid.points > 0) sw.grid = log_grid(*out.grid.from_exponent, *out.grid.to_exponent, out.grid.points);
    }
  }
  return out;
}

json series_to_json(const SeriesConfig& s) {
  const SweepSpec& sw = s.sweep;
  json grid;
  if (!s.grid.explicit_n.empty())
    grid = {{"n", s.grid.explicit_n}};
  else
    grid = {{"from", s.grid.from_exponent.value_or(0.0)}, {"to", s.grid.to_exponent.value_or(0.0)}, {"points", s.grid.points}};
  return json{{"label", s.label},
              {"ade",
               {{"velocity", sw.truth.velocity},
                {"diffusion", sw.truth.diffusion},
                {"release", sw.truth.release},
                {"final_time", sw.truth.final_time}}},
              {"domain", {sw.domain.lo, sw.domain.hi}},
              {"k", sw.k},
              {"spacing", to_string(sw.spacing)},
              {"alpha", sw.alpha},
              {"method", to_string(sw.method)},
              {"dt", sw.dt},
              {"placement", to_string(sw.placement)},
              {"normalization", sw.normalization ? std::string(to_string(*sw.normalization)) : "default"},
              {"volumes", to_string(sw.volumes)},
              {"readout", to_string(sw.readout)},
              {"criterion", to_string(sw.criterion)},
              {"entropy", to_string(sw.entropy)},
              {"p", sw.p},
              {"grid", grid},
              {"realizations", sw.realizations},
              {"estimate", sw.estimate_each_n},
              {"estimation",
               {{"initial_velocity", sw.estimation.initial_velocity},
                {"initial_diffusion", sw.estimation.initial_diffusion},
                {"tol_x", sw.estimation.simplex.tol_x},
                {"tol_f", sw.estimation.simplex.tol_f},
                {"max_iterations", sw.estimation.simplex.max_iterations}}}};
}

json series_entry(const std::string& label, json fields) {
  fields["label"] = label;
  return fields;
}

}  // namespace

std::vector<ExperimentInfo> list_experiments() {
  return {{"E1", "fitness versus particle number, uniformly spaced noiseless data, k in {10, 30, 200}, RWPT and MTPT"},
          {"E2", "estimation of (v, D) with uniform data: MTPT n=3000, RWPT n=20000 over 20 seeds, per-n MTPT estimation"},
          {"E3", "estimation of (v, D) with randomly located data, k in {10, 30}"},
          {"E4", "random particle placement with the integral entropy term, 30 realizations; uniform-volume shift check"},
          {"E5", "weighted (concentration-proportional variance) criterion sweeps"},
          {"E6", "noisy data, alpha in {1/3, 1/9, 1/81}, RWPT and MTPT, 30 realizations"}};
}

json preset(const std::string& id) {
  const json standard_grid = {{"from", 2.0}, {"to", 4.6}, {"points", 12}};
  if (id == "E1") {
    json series = json::array();
    for (const char* method : {"mtpt", "rwpt"})
      for (int k : {10, 30, 200})
        series.push_back(series_entry(std::string(method) + "-k" + std::to_string(k),
                                      {{"method", method}, {"k", k}, {"realizations", method[0] == 'r' ? 10 : 1}}));
    return {{"description", list_experiments()[0].title}, {"defaults", {{"grid", standard_grid}}}, {"series", series}};
  }
  if (id == "E2") {
    const json single_mtpt = {{"n", {3000}}};
    const json single_rwpt = {{"n", {20000}}};
    return {{"description", list_experiments()[1].title},
            {"defaults", {{"ade", {{"velocity", 1.0}}}, {"p", 2}, {"estimate", true}}},
            {"series",
             {series_entry("mtpt-k30", {{"k", 30}, {"grid", single_mtpt}}),
              series_entry("mtpt-k10", {{"k", 10}, {"grid", single_mtpt}}),
              series_entry("rwpt-k30", {{"method", "rwpt"}, {"k", 30}, {"grid", single_rwpt}, {"realizations", 20}}),
              series_entry("rwpt-k10", {{"method", "rwpt"}, {"k", 10}, {"grid", single_rwpt}, {"realizations", 20}}),
              series_entry("mtpt-k30-per-n", {{"k", 30}, {"grid", standard_grid}})}}};
  }
  if (id == "E3") {
    const json single_mtpt = {{"n", {3000}}};
    return {{"description", list_experiments()[2].title},
            {"defaults",
             {{"ade", {{"velocity", 1.0}}}, {"spacing", "random"}, {"p", 2}, {"estimate", true}, {"realizations", 10}}},
            {"series",
             {series_entry("mtpt-k30-random", {{"k", 30}, {"grid", single_mtpt}}),
              series_entry("mtpt-k10-random", {{"k", 10}, {"grid", single_mtpt}}),
              series_entry("rwpt-k30-random", {{"method", "rwpt"}, {"k", 30}, {"grid", {{"n", {20000}}}}})}}};
  }
  if (id == "E4") {
    return {{"description", list_experiments()[3].title},
            {"defaults", {{"grid", standard_grid}}},
            {"series",
             {series_entry("mtpt-random-integral", {{"placement", "random"},
                                                    {"entropy", "integral"},
                                                    {"realizations", 30}}),
              series_entry("mtpt-uniform-dv-integral", {{"volumes", "uniform"}, {"entropy", "integral"}}),
              series_entry("mtpt-uniform-dv", {{"volumes", "uniform"}, {"entropy", "uniform"}})}}};
  }
  if (id == "E5") {
    return {{"description", list_experiments()[4].title},
            {"defaults", {{"grid", standard_grid}, {"criterion", "weighted"}}},
            {"series",
             {series_entry("mtpt-weighted", {{"method", "mtpt"}}),
              series_entry("rwpt-weighted", {{"method", "rwpt"}, {"realizations", 10}})}}};
  }
  if (id == "E6") {
    json series = json::array();
    const std::pair<const char*, double> levels[] = {{"a1-3", 1.0 / 3.0}, {"a1-9", 1.0 / 9.0}, {"a1-81", 1.0 / 81.0}};
    for (const char* method : {"mtpt", "rwpt"})
      for (const auto& [tag, alpha] : levels)
        series.push_back(series_entry(std::string(method) + "-" + tag, {{"method", method}, {"alpha", alpha}}));
    return {{"description", list_experiments()[5].title},
            {"defaults", {{"grid", standard_grid}, {"realizations", 30}}},
            {"series", series}};
  }
  throw std::out_of_range("unknown experiment '" + id + "'");
}

ExperimentConfig parse_config(const json& doc) {
  std::vector<std::string> problems;
  if (!doc.is_object()) throw ConfigError({"/: configuration must be a JSON object"});
  check_keys(doc, kTopKeys, "", problems);
  if (!doc.contains("schema"))
    problems.push_back("/schema: required (\"" + std::string(kConfigSchema) + "\")");
  else if (doc["schema"] != kConfigSchema)
    problems.push_back("/schema: unsupported schema version, expected \"" + std::string(kConfigSchema) + "\"");

  ExperimentConfig cfg;
  json preset_doc = json::object();
  if (doc.contains("experiment")) {
    if (!doc["experiment"].is_string()) {
      problems.push_back("/experiment: must be a string");
    } else {
      cfg.experiment = doc["experiment"].get<std::string>();
      if (cfg.experiment != "custom") {
        try {
          preset_doc = preset(cfg.experiment);
        } catch (const std::out_of_range&) {
          problems.push_back("/experiment: unknown experiment '" + cfg.experiment + "' (E1..E6 or custom)");
        }
      }
    }
  }
  cfg.description = preset_doc.value("description", "");
  if (doc.contains("description")) {
    if (doc["description"].is_string())
      cfg.description = doc["description"].get<std::string>();
    else
      problems.push_back("/description: must be a string");
  }
  if (doc.contains("seed")) {
    const json& s = doc["seed"];
    if (const auto u = as_unsigned(s)) {
      cfg.master_seed = *u;
    } else if (s.is_string()) {
      try {
        cfg.master_seed = parse_seed(s.get<std::string>());
      } catch (const std::exception& e) {
        problems.push_back(std::string("/seed: ") + e.what());
      }
    } else {
      problems.push_back("/seed: must be a non-negative integer below 2^64");
    }
  }
  if (doc.contains("jobs")) {
    const auto j = as_unsigned(doc["jobs"]);
    if (j && *j >= 1 && *j <= 1024)
      cfg.jobs = static_cast<unsigned>(*j);
    else
      problems.push_back("/jobs: must be an integer in [1, 1024]");
  }
  if (doc.contains("output")) {
    if (doc["output"].is_string() && !doc["output"].get<std::string>().empty())
      cfg.output = doc["output"].get<std::string>();
    else
      problems.push_back("/output: must be a non-empty path string");
  }

  json defaults = base_series();
  if (preset_doc.contains("defaults")) overlay(defaults, preset_doc["defaults"]);
  if (doc.contains("defaults")) {
    check_series_shape(doc["defaults"], "/defaults", problems);
    if (doc["defaults"].contains("label")) problems.push_back("/defaults/label: labels belong to series entries");
    if (doc["defaults"].is_object()) overlay(defaults, doc["defaults"]);
  }

  json entries;
  std::string entries_where = "/series";
  if (doc.contains("series")) {
    if (!doc["series"].is_array() || doc["series"].empty()) problems.push_back("/series: must be a non-empty array");
    else entries = doc["series"];
  } else if (preset_doc.contains("series")) {
    entries = preset_doc["series"];
  } else {
    problems.push_back("/series: required for custom experiments");
  }

  std::set<std::string> labels;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string where = entries_where + "/" + std::to_string(i);
    const std::size_t before = problems.size();
    check_series_shape(entries[i], where, problems);
    if (problems.size() != before) continue;
    json resolved = defaults;
    overlay(resolved, entries[i]);
    SeriesConfig s = read_series(resolved, where, problems);
    if (problems.size() == before) {
      if (!labels.insert(s.label).second) problems.push_back(where + "/label: duplicate label '" + s.label + "'");
      cfg.series.push_back(std::move(s));
    }
  }
  if (!problems.empty()) throw ConfigError(problems);
  for (auto& s : cfg.series) {
    s.sweep.master_seed = cfg.master_seed;
    s.sweep.jobs = cfg.jobs;
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({"/: cannot open configuration file '" + path.string() + "'"});
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("/: not valid JSON: ") + e.what()});
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& c) {
  json doc = {{"schema", kConfigSchema},
              {"experiment", c.experiment},
              {"description", c.description},
              {"seed", c.master_seed},
              {"jobs", c.jobs}};
  if (c.output) doc["output"] = *c.output;
  json series = json::array();
  for (const auto& s : c.series) series.push_back(series_to_json(s));
  doc["series"] = series;
  return doc;
}

std::uint64_t parse_seed(const std::string& text) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("seed must be a decimal integer, got '" + text + "'");
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (errno == ERANGE || *end != '\0') throw std::invalid_argument("seed does not fit in 64 bits: '" + text + "'");
  return static_cast<std::uint64_t>(v);
}

void apply_seed_override(ExperimentConfig& config, std::optional<std::uint64_t> flag_seed) {
  std::optional<std::uint64_t> chosen;
  if (flag_seed) {
    chosen = flag_seed;
    config.seed_source = SeedSource::flag;
  } else if (const char* env = std::getenv("COMIC_LAB_SEED"); env && *env) {
    try {
      chosen = parse_seed(env);
    } catch (const std::exception& e) {
      throw ConfigError({std::string("COMIC_LAB_SEED: ") + e.what()});
    }
    config.seed_source = SeedSource::env;
  }
  if (!chosen) return;
  config.master_seed = *chosen;
  for (auto& s : config.series) s.sweep.master_seed = *chosen;
}

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const ExperimentConfig& config) {
  // Only inputs that change results: jobs, output and the description do not.
  json doc = to_json(config);
  doc.erase("jobs");
  doc.erase("output");
  doc.erase("description");
  return fnv1a64_hex(doc.dump());
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace comiclab::harness
