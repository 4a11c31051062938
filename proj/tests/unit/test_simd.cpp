#include <cmath>
#include <numbers>
#include <algorithm>
#include <random>
#include <vector>

#include "doctest.h"
#include "comiclab/mtpt.hpp"
#include "comiclab/simd/transfer.hpp"

using namespace comiclab;
namespace s = comiclab::simd;

namespace {

std::vector<s::Backend> vector_backends() {
  std::vector<s::Backend> out;
  for (auto b : {s::Backend::avx2, s::Backend::avx512})
    if (s::available(b)) out.push_back(b);
  return out;
}

struct Case {
  std::vector<double> x, density, m;
  s::GaussianPairs pairs;
};

Case make_case(std::uint64_t seed, std::size_t n, bool sorted, bool local, bool lattice) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-5.0, 5.0), pos(0.5, 2.0), mass(0.0, 1.0);
  Case c;
  c.x.resize(n);
  if (lattice) {
    for (std::size_t i = 0; i < n; ++i) c.x[i] = -5.0 + 10.0 * static_cast<double>(i) / static_cast<double>(n - 1);
  } else {
    for (auto& v : c.x) v = u(rng);
    if (sorted) std::sort(c.x.begin(), c.x.end());
  }
  c.m.resize(n);
  for (auto& v : c.m) v = mass(rng);
  if (local) {
    c.density.resize(n);
    for (auto& v : c.density) v = pos(rng) * static_cast<double>(n) / 10.0;
  }
  c.pairs.positions = c.x;
  c.pairs.density = c.density;
  c.pairs.inv_four_d_dt = 1.0 / (4.0 * 1.0 * 0.1);
  c.pairs.amplitude = 1.0 / std::sqrt(4.0 * std::numbers::pi * 0.1) / (local ? 1.0 : static_cast<double>(n) / 10.0);
  c.pairs.sorted = sorted || lattice;
  c.pairs.lattice = lattice ? s::detect_lattice(c.x) : 0.0;
  return c;
}

// Every pair written out, no cutoff and no table.
void naive_transfer(const Case& c, std::vector<double>& delta) {
  const std::size_t n = c.x.size();
  delta.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = c.x[i] - c.x[j];
      double w = c.pairs.amplitude * std::exp(-d * d * c.pairs.inv_four_d_dt);
      if (!c.density.empty()) w /= 0.5 * (c.density[i] + c.density[j]);
      delta[i] += w * (c.m[j] - c.m[i]);
    }
}

}  // namespace

TEST_SUITE("simd") {

TEST_CASE("lattice detection") {
  std::vector<double> x(101);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = -5.0 + 0.1 * static_cast<double>(i);
  CHECK(s::detect_lattice(x) == doctest::Approx(0.1).epsilon(1e-12));
  x[40] += 1e-6;
  CHECK(s::detect_lattice(x) == 0.0);
}

TEST_CASE("scalar kernel agrees with the naive double loop") {
  for (int variant = 0; variant < 8; ++variant) {
    const bool sorted = variant & 1, local = variant & 2, lattice = variant & 4;
    const auto c = make_case(100 + variant, 157, sorted, local, lattice);
    std::vector<double> ref, got(c.x.size());
    naive_transfer(c, ref);
    s::scalar::transfer(c.pairs, c.m, got);
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(std::abs(got[i] - ref[i]) < 1e-13);
  }
}

TEST_CASE("vector backends match the scalar reference") {
  for (auto b : vector_backends()) {
    CAPTURE(s::to_string(b));
    for (int variant = 0; variant < 8; ++variant) {
      const bool sorted = variant & 1, local = variant & 2, lattice = variant & 4;
      // Odd sizes exercise the masked tails.
      for (std::size_t n : {2u, 3u, 9u, 17u, 250u, 1001u}) {
        const auto c = make_case(7 * variant + n, n, sorted, local, lattice);
        std::vector<double> ref(n), got(n), rs_ref(n), rs_got(n);
        s::scalar::transfer(c.pairs, c.m, ref);
        s::transfer(c.pairs, c.m, got, b);
        s::scalar::row_sums(c.pairs, rs_ref);
        s::row_sums(c.pairs, rs_got, b);
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          CHECK(std::abs(got[i] - ref[i]) < 1e-14);
          CHECK(std::abs(rs_got[i] - rs_ref[i]) < 1e-13 * std::max(1.0, rs_ref[i]));
          sum += got[i];
        }
        CHECK(std::abs(sum) < 1e-13);
      }
    }
  }
}

TEST_CASE("vector exp(-q) is accurate across the range") {
  std::vector<double> q;
  for (double v = 0.0; v < 750.0; v += 0.0137) q.push_back(v);
  q.push_back(708.39);
  q.push_back(1e6);
  std::vector<double> out(q.size());
  auto check = [&] {
    for (std::size_t i = 0; i < q.size(); ++i) {
      const double ref = std::exp(-q[i]);
      if (ref < 1e-300)
        CHECK(out[i] <= 1e-300);
      else
        CHECK(std::abs(out[i] - ref) <= 4e-16 * ref);
    }
  };
  if (s::available(s::Backend::avx2)) {
    s::avx2::exp_neg(q, out);
    check();
  }
  if (s::available(s::Backend::avx512)) {
    s::avx512::exp_neg(q, out);
    check();
  }
}

TEST_CASE("full simulations agree across backends") {
  const AdeParams p{1.0, 1.0, 0.0, 1.0};
  for (auto mode : {Spacing::uniform, Spacing::random}) {
    const auto ref = simulate_mtpt(p, Domain{}, 1200, 0.1, PlacementSpec{mode, 5}, s::Backend::scalar);
    for (auto b : vector_backends()) {
      const auto got = simulate_mtpt(p, Domain{}, 1200, 0.1, PlacementSpec{mode, 5}, b);
      for (std::size_t i = 0; i < ref.ensemble.size(); ++i)
        CHECK(std::abs(got.ensemble.masses[i] - ref.ensemble.masses[i]) < 1e-15);
    }
  }
}

TEST_CASE("backend names and selection") {
  for (auto b : {s::Backend::scalar, s::Backend::avx2, s::Backend::avx512})
    CHECK(s::backend_from_string(s::to_string(b)) == b);
  CHECK(s::available(s::Backend::scalar));
  const auto before = s::active_backend();
  s::set_backend(s::Backend::scalar);
  CHECK(s::active_backend() == s::Backend::scalar);
  s::set_backend(before);
}

}  // TEST_SUITE
