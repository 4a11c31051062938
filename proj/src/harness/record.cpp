#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "internal.hpp"

namespace comiclab::harness {

std::string curve_csv(const SweepCurve& curve, CriterionKind kind) {
  std::string out = std::string(kCsvHeader) + "\n";
  const std::string kind_text(to_string(kind));
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& pt : curve.points) {
    const FitnessReport& r = pt.report;
    out += std::to_string(pt.n) + "," + std::to_string(pt.realization) + ",";
    for (double v : {r.aic, r.aicc, r.comic, r.comicc, r.entropy_term}) out += format_number(pt.ok ? v : nan) + ",";
    out += kind_text + "," + std::to_string(pt.seed) + "\n";
  }
  return out;
}

std::vector<std::size_t> stratified_sample(std::size_t total) {
  if (total == 0) return {};
  const std::size_t count = std::max<std::size_t>(1, (total + 9) / 10);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < count; ++i) idx.push_back((2 * i + 1) * total / (2 * count));
  return idx;
}

namespace detail {

Quartiles quartiles(std::vector<double> v) {
  Quartiles q;
  q.count = v.size();
  if (v.empty()) {
    q.min = q.q1 = q.median = q.q3 = q.max = std::numeric_limits<double>::quiet_NaN();
    return q;
  }
  std::sort(v.begin(), v.end());
  auto at = [&](double p) {
    const double h = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  q.min = v.front();
  q.q1 = at(0.25);
  q.median = at(0.5);
  q.q3 = at(0.75);
  q.max = v.back();
  return q;
}

json point_to_json(const SweepPoint& pt) {
  json j = {{"n", pt.n}, {"realization", pt.realization}, {"seed", pt.seed}, {"ok", pt.ok}};
  if (!pt.ok) {
    j["error"] = pt.error;
    return j;
  }
  const FitnessReport& r = pt.report;
  j["aic"] = r.aic;
  j["aicc"] = r.aicc;  // null when undefined
  j["comic"] = r.comic;
  j["comicc"] = r.comicc;
  j["entropy_term"] = r.entropy_term;
  j["comic_uniform"] = pt.comic_uniform;
  j["neg2lnL"] = r.neg2lnL;
  j["p"] = r.p;
  j["k"] = r.k;
  j["excluded"] = r.excluded;
  j["clamped"] = pt.clamped;
  j["negative_mass"] = pt.negative_mass;
  if (pt.estimate) {
    const auto& e = *pt.estimate;
    j["estimate"] = {{"velocity", e.velocity},     {"diffusion", e.diffusion},     {"value", e.value},
                     {"iterations", e.iterations}, {"evaluations", e.evaluations}, {"converged", e.converged}};
  }
  return j;
}

json mean_to_json(const CurveMean& m) {
  return {{"n", m.n},         {"successes", m.successes},       {"aic", m.aic},
          {"aicc", m.aicc},   {"comic", m.comic},               {"comicc", m.comicc},
          {"entropy_term", m.entropy_term}, {"comic_uniform", m.comic_uniform}};
}

json argmin_to_json(const SweepCurve& c) {
  json j = {{"criterion", "comic"}, {"found", c.found}};
  if (c.found) {
    j["n"] = c.argmin_n;
    j["index"] = c.argmin_index;
    j["bracket_lo"] = c.bracket_lo;
    j["bracket_hi"] = c.bracket_hi;
    j["comic"] = c.mean[c.argmin_index].comic;
  }
  return j;
}

std::string mean_csv(const SweepCurve& curve, CriterionKind kind, std::uint64_t master_seed) {
  std::string out = std::string(kCsvHeader) + "\n";
  const std::string kind_text(to_string(kind));
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& m : curve.mean) {
    const bool ok = m.successes > 0;
    out += std::to_string(m.n) + ",mean,";
    for (double v : {m.aic, m.aicc, m.comic, m.comicc, m.entropy_term}) out += format_number(ok ? v : nan) + ",";
    out += kind_text + "," + std::to_string(master_seed) + "\n";
  }
  return out;
}

std::string estimates_csv(const SweepCurve& curve) {
  std::string out = "n,realization,velocity,diffusion,criterion_value,iterations,evaluations,converged,seed\n";
  for (const auto& pt : curve.points) {
    if (!pt.estimate) continue;
    const auto& e = *pt.estimate;
    out += std::to_string(pt.n) + "," + std::to_string(pt.realization) + "," + format_number(e.velocity) + "," +
           format_number(e.diffusion) + "," + format_number(e.value) + "," + std::to_string(e.iterations) + "," +
           std::to_string(e.evaluations) + "," + (e.converged ? "true" : "false") + "," + std::to_string(pt.seed) +
           "\n";
  }
  return out;
}

std::string quartiles_csv(const SweepCurve& curve) {
  std::map<std::size_t, std::pair<std::vector<double>, std::vector<double>>> by_n;
  for (const auto& pt : curve.points)
    if (pt.estimate) {
      by_n[pt.n].first.push_back(pt.estimate->velocity);
      by_n[pt.n].second.push_back(pt.estimate->diffusion);
    }
  std::string out = "n,parameter,count,min,q1,median,q3,max\n";
  for (const auto& [n, values] : by_n) {
    for (const auto& [name, v] : {std::pair{"velocity", values.first}, std::pair{"diffusion", values.second}}) {
      const auto q = quartiles(v);
      out += std::to_string(n) + "," + name + "," + std::to_string(q.count) + "," + format_number(q.min) + "," +
             format_number(q.q1) + "," + format_number(q.median) + "," + format_number(q.q3) + "," +
             format_number(q.max) + "\n";
    }
  }
  return out;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    rows.push_back(std::move(fields));
  }
  return rows;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("short write to '" + tmp + "'");
  }
  std::filesystem::rename(tmp, path);
}

std::string json_number_text(const json& v) {
  if (v.is_null()) return "nan";
  return format_number(v.get<double>());
}

}  // namespace detail
}  // namespace comiclab::harness
