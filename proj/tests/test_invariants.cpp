#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mubforge/analytic.hpp"
#include "mubforge/invariants.hpp"
#include "mubforge/optimize.hpp"

using namespace mubforge;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("triple tensor structural symmetries") {
  auto rng = make_rng(51, 2);
  const GramMatrix g = build_gram(random_init(3, rng));
  const TripleTensor t = triple_tensor(g);
  const int n = t.n;
  for (int i = 0; i < n; i += 3) {
    CHECK(t.at(i, i, i) == cplx(std::pow(0.25, 3), 0.0));
    for (int j = 0; j < n; j += 2) {
      for (int k = 0; k < n; k += 2) {
        // The three factors are multiplied in rotated order, so the results
        // agree only up to rounding in the last bit.
        CHECK(std::abs(t.at(i, j, k) - t.at(j, k, i)) < 1e-17);
        CHECK(std::abs(t.at(i, j, k) - t.at(k, i, j)) < 1e-17);
        CHECK(std::abs(t.at(i, k, j) - std::conj(t.at(i, j, k))) < 1e-17);
      }
    }
  }
  // Intra-basis orthogonality zeroes whole lines of the tensor.
  const int a = flat_index(3, 1, 0), b = flat_index(3, 1, 2);
  for (int k = 0; k < n; ++k) CHECK(std::abs(t.at(a, b, k)) == 0.0);
}

TEST_CASE("analytic d=3 entry moduli take the four allowed values") {
  const auto [g, phi] = gram_from_bases(analytic_mubs(3));
  (void)phi;
  const TripleTensor t = triple_tensor(g);
  const double diag = 0.25;
  const double cross = 1.0 / (4.0 * std::sqrt(3.0));
  const std::vector<double> allowed = {0.0, diag * diag * diag,
                                       diag * cross * cross,
                                       cross * cross * cross};
  for (const cplx& v : t.values) {
    double best = 1.0;
    for (double m : allowed) best = std::min(best, std::abs(std::abs(v) - m));
    CHECK(best < 1e-12);
  }
}

TEST_CASE("m_product basics and cyclic invariance") {
  const auto [g, phi] = gram_from_bases(analytic_mubs(3));
  (void)phi;
  CHECK(m_product(g, {5}) == g.m(5, 5));
  const cplx two = m_product(g, {0, 4});
  CHECK(two.imag() == doctest::Approx(0.0));
  CHECK(two.real() == doctest::Approx(1.0 / (16.0 * 3.0)).epsilon(1e-12));

  const TripleTensor t = triple_tensor(g);
  CHECK(std::abs(m_product(g, {1, 5, 9}) - t.at(1, 5, 9)) < 1e-15);
  const std::vector<int> idx = {2, 7, 9, 4};
  const std::vector<int> rot = {7, 9, 4, 2};
  CHECK(std::abs(m_product(g, idx) - m_product(g, rot)) < 1e-15);
}

TEST_CASE("gauge invariance of the triple tensor") {
  MubSet m = analytic_mubs(3);
  const auto [g0, p0] = gram_from_bases(m);
  for (int mu = 0; mu <= 3; ++mu) {
    for (int i = 0; i < 3; ++i) {
      m.bases[mu].col(i) *= std::polar(1.0, 0.1 + 0.37 * flat_index(3, mu, i));
    }
  }
  const auto [g1, p1] = gram_from_bases(m);
  (void)p0;
  (void)p1;
  const TripleTensor t0 = triple_tensor(g0);
  const TripleTensor t1 = triple_tensor(g1);
  for (std::size_t k = 0; k < t0.values.size(); ++k) {
    CHECK(std::abs(t0.values[k] - t1.values[k]) < 1e-12);
  }
}

TEST_CASE("generating set of the analytic d=3 solution matches Table 2") {
  const auto [g, phi] = gram_from_bases(analytic_mubs(3));
  (void)phi;
  const GeneratingSet gs = generating_set(triple_tensor(g));
  REQUIRE(gs.phases.size() == 5);
  const std::vector<double> expected = {0.0, kPi / 6, kPi / 2, 3 * kPi / 2,
                                        11 * kPi / 6};
  const std::vector<long> freqs = {1080, 216, 108, 108, 216};
  long total = 0;
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(gs.phases[i] == doctest::Approx(expected[i]).epsilon(1e-10));
    CHECK(gs.frequencies[i] == freqs[i]);
    total += gs.frequencies[i];
  }
  CHECK(total == 1728);  // N^3
  CHECK(gs.fluctuation < 1e-10);
}

TEST_CASE("generating set frequencies for d=4 and d=5") {
  {
    const auto [g, phi] = gram_from_bases(analytic_mubs(4));
    (void)phi;
    const GeneratingSet gs = generating_set(triple_tensor(g));
    REQUIRE(gs.phases.size() == 3);
    CHECK(gs.frequencies == std::vector<long>{6080, 960, 960});
    CHECK(gs.frequencies[0] + gs.frequencies[1] + gs.frequencies[2] == 8000);
  }
  {
    const auto [g, phi] = gram_from_bases(analytic_mubs(5));
    (void)phi;
    const GeneratingSet gs = generating_set(triple_tensor(g));
    REQUIRE(gs.phases.size() == 6);
    CHECK(gs.frequencies ==
          std::vector<long>{13500, 3000, 3000, 1500, 3000, 3000});
  }
}

TEST_CASE("wraparound clustering near 0/2pi") {
  // A tensor is not needed: feed crafted args through a tiny Gram matrix is
  // awkward, so exercise the clustering through a rotated solution instead.
  // Shifting a gauge phase slightly perturbs nothing; instead verify that a
  // phase cluster hugging 2*pi merges with one hugging 0 only when within
  // tolerance.
  TripleTensor t;
  t.d = 2;
  t.n = 2;
  t.values = {std::polar(1.0, 1e-12), std::polar(1.0, -1e-12),
              std::polar(1.0, 1.0), std::polar(1.0, 1.0 + 2e-13),
              std::polar(1.0, 2.0), std::polar(1.0, 2.0),
              std::polar(1.0, 3.0), std::polar(1.0, 3.0)};
  const GeneratingSet gs = generating_set(t, 1e-9);
  REQUIRE(gs.phases.size() == 4);
  CHECK(gs.phases[0] == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(gs.frequencies[0] == 2);  // the straddling pair merged
  CHECK(gs.phases[1] == doctest::Approx(1.0 + 1e-13));
  CHECK(gs.frequencies == std::vector<long>{2, 2, 2, 2});
}

TEST_CASE("identify_symbolic matches pi-rationals and flags the rest") {
  GeneratingSet gs;
  gs.phases = {0.0, kPi / 6, 4.7123889803846899, 11 * kPi / 6, 0.1234};
  gs.frequencies = {1, 1, 1, 1, 1};
  gs = identify_symbolic(gs);
  REQUIRE(gs.symbolic.size() == 5);
  REQUIRE(gs.symbolic[0].has_value());
  CHECK(gs.symbolic[0]->num == 0);
  REQUIRE(gs.symbolic[1].has_value());
  CHECK(gs.symbolic[1]->num == 1);
  CHECK(gs.symbolic[1]->den == 6);
  REQUIRE(gs.symbolic[2].has_value());
  CHECK(gs.symbolic[2]->num == 3);
  CHECK(gs.symbolic[2]->den == 2);
  REQUIRE(gs.symbolic[3].has_value());
  CHECK(gs.symbolic[3]->num == 11);
  CHECK(gs.symbolic[3]->den == 6);
  CHECK_FALSE(gs.symbolic[4].has_value());
}
