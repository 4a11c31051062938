#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "comiclab/estimation.hpp"

using namespace comiclab;

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

TEST_SUITE("estimation") {

TEST_CASE("MTPT recovers v and D from noiseless uniform data") {
  const AdeParams truth{1.0, 1.0, 0.0, 1.0};
  const auto obs = synthesize_observations(truth, Domain{}, 30, Spacing::uniform, NoiseSpec{});
  SolverSpec solver;
  solver.particles = 3001;  // odd: a lattice particle sits on the release point
  const auto r = estimate_parameters(obs, truth, solver, CriterionKind::iid_gaussian);
  CHECK(r.converged);
  CHECK(std::abs(r.velocity - 1.0) < 1e-3);
  CHECK(std::abs(r.diffusion - 1.0) < 1e-3);
  CHECK(r.diffusion > 0.0);
}

TEST_CASE("even lattices release half a spacing early and the drift absorbs it") {
  const AdeParams truth{1.0, 1.0, 0.0, 1.0};
  const auto obs = synthesize_observations(truth, Domain{}, 30, Spacing::uniform, NoiseSpec{});
  SolverSpec solver;
  solver.particles = 3000;
  const double half_spacing = 0.5 * 10.0 / 2999.0;
  const auto r = estimate_parameters(obs, truth, solver, CriterionKind::iid_gaussian);
  CHECK(std::abs(r.velocity - (1.0 + half_spacing)) < 2e-4);
  CHECK(std::abs(r.diffusion - 1.0) < 1e-3);
}

TEST_CASE("RWPT estimates reuse one increment draw") {
  const AdeParams truth{1.0, 1.0, 0.0, 1.0};
  const auto obs = synthesize_observations(truth, Domain{}, 30, Spacing::uniform, NoiseSpec{});
  SolverSpec solver;
  solver.method = Method::rwpt;
  solver.particles = 5000;
  solver.seed = 12;
  const ForwardModel model(solver, obs, truth);
  const auto a = model.run(0.9, 1.1);
  const auto b = model.run(0.9, 1.1);
  CHECK(a.at_observations == b.at_observations);
  const auto e1 = estimate_parameters(model, obs, CriterionKind::iid_gaussian);
  const auto e2 = estimate_parameters(obs, truth, solver, CriterionKind::iid_gaussian);
  CHECK(e1.velocity == e2.velocity);
  CHECK(e1.diffusion == e2.diffusion);
  CHECK(e1.evaluations == e2.evaluations);
}

TEST_CASE("zero drift is recovered by symmetry with RWPT") {
  const AdeParams truth{0.0, 1.0, 0.0, 1.0};
  const auto obs = synthesize_observations(truth, Domain{}, 30, Spacing::uniform, NoiseSpec{});
  std::vector<double> v;
  for (std::uint64_t s = 0; s < 20; ++s) {
    SolverSpec solver;
    solver.method = Method::rwpt;
    solver.particles = 20000;
    solver.seed = 500 + s;
    v.push_back(estimate_parameters(obs, truth, solver, CriterionKind::iid_gaussian).velocity);
  }
  CHECK(std::abs(median(v)) < 0.05);
}

TEST_CASE("weighted criterion with random data locations") {
  const AdeParams truth{1.0, 1.0, 0.0, 1.0};
  const auto obs = synthesize_observations(truth, Domain{}, 30, Spacing::random, NoiseSpec{0.0, 21});
  SolverSpec solver;
  solver.particles = 3000;
  const auto r = estimate_parameters(obs, truth, solver, CriterionKind::weighted);
  CHECK(r.kind == CriterionKind::weighted);
  CHECK(std::abs(r.velocity - 1.0) < 1e-2);
  CHECK(std::abs(r.diffusion - 1.0) < 1e-2);
}

TEST_CASE("entropy addends") {
  ModelOutput out;
  out.particles = 1000;
  const Domain dom{};
  CHECK(entropy_term(CriterionKind::iid_gaussian, EntropyMode::uniform, out, dom) == std::log(1000.0));
  CHECK(entropy_term(CriterionKind::weighted, EntropyMode::uniform, out, dom) == -std::log(10.0 / 1000.0));
  out.support_concentrations = {0.5, 0.5};
  out.support_volumes = {1.0, 2.0};
  CHECK(entropy_term(CriterionKind::iid_gaussian, EntropyMode::integral, out, dom) ==
        doctest::Approx(-std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("MTPT readouts") {
  const AdeParams truth{0.0, 1.0, 0.0, 1.0};
  const auto obs = synthesize_observations(truth, Domain{}, 30, Spacing::uniform, NoiseSpec{});
  SolverSpec solver;
  solver.particles = 2001;
  const ForwardModel interp(solver, obs, truth);
  CHECK(interp.spec().readout == MtptReadout::interpolate);
  solver.placement = Spacing::random;
  solver.seed = 3;
  const ForwardModel binned(solver, obs, truth);
  CHECK(binned.spec().readout == MtptReadout::bin);
  const auto out = binned.run(0.0, 1.0);
  // Bins cover the domain, so the binned profile carries the unit mass.
  const auto w = default_grid(obs).widths();
  double mass = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) mass += out.at_observations[i] * w[i];
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));

  solver.placement = Spacing::uniform;
  solver.volumes = VolumeRule::uniform;
  const auto uv = ForwardModel(solver, obs, truth).run(0.0, 1.0);
  for (double v : uv.support_volumes) CHECK(v == 10.0 / 2001.0);
}

TEST_CASE("mode names round trip") {
  for (auto m : {Method::rwpt, Method::mtpt}) CHECK(method_from_string(to_string(m)) == m);
  for (auto e : {EntropyMode::uniform, EntropyMode::integral}) CHECK(entropy_from_string(to_string(e)) == e);
  for (auto r : {MtptReadout::automatic, MtptReadout::interpolate, MtptReadout::bin})
    CHECK(readout_from_string(to_string(r)) == r);
  for (auto v : {VolumeRule::voronoi, VolumeRule::uniform}) CHECK(volume_rule_from_string(to_string(v)) == v);
  CHECK_THROWS(method_from_string("sph"));
}

}  // TEST_SUITE
