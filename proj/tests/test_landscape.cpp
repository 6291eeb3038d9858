#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mubforge/analytic.hpp"
#include "mubforge/landscape.hpp"
#include "mubforge/optimize.hpp"

using namespace mubforge;

TEST_CASE("restricted defect vanishes for the analytic solutions") {
  for (int d : {3, 4, 5}) {
    const auto [g, phi] = gram_from_bases(analytic_mubs(d));
    (void)phi;
    const DefectReport rep = restricted_defect(g);
    const int N = num_states(d);
    CHECK(rep.N == N);
    // Intra-basis zeros of U = I - 2G: d(d-1)/2 pairs in each of d+1 bases.
    CHECK(rep.z == (d + 1) * d * (d - 1) / 2);
    CHECK(rep.tau == (N - 1) * (N - 2) / 2 - rep.z);
    CHECK(rep.r == rep.tau);
    CHECK(rep.delta == 0);
    CHECK(static_cast<int>(rep.singular_values.size()) >= rep.r);
    // Audit trail: a clean spectral gap above the rank cut.
    CHECK(rep.singular_values[rep.r - 1] >
          1e-6 * rep.singular_values.front());
  }
}

TEST_CASE("restricted defect vanishes for a searched d=3 solution") {
  SearchConfig config;
  config.d = 3;
  config.seed = 777;
  SearchResult res = search_restart(config, 0);
  int restart = 0;
  while (!res.accepted && restart < 20) {
    res = search_restart(config, ++restart);
  }
  REQUIRE(res.accepted);
  const DefectReport rep = restricted_defect(build_gram(res.phi));
  CHECK(rep.z == 12);
  CHECK(rep.tau == 43);
  CHECK(rep.delta == 0);
}

TEST_CASE("restricted defect rejects a non-unitary input") {
  auto rng = make_rng(71, 1);
  const GramMatrix g = build_gram(random_init(3, rng));
  // Generic phases do not give a projector, so I - 2G is far from unitary.
  CHECK_THROWS_AS((void)restricted_defect(g), NotUnitary);
}

TEST_CASE("curvature null space is exactly the gauge space at solutions") {
  for (int d : {3, 4}) {
    const auto [g, phi] = gram_from_bases(analytic_mubs(d));
    (void)g;
    const HessianReport rep = hessian_analysis(phi);
    const int N = num_states(d);
    CHECK(rep.gauge_dim == N - 1);
    CHECK(rep.null_dim == N - 1);
    CHECK(rep.nontrivial_null == 0);
    CHECK(static_cast<long>(rep.eigenvalues.size()) == num_phases(d));
    // Ascending order, no negative curvature beyond roundoff.
    CHECK(rep.eigenvalues.front() > -1e-9);
    CHECK(rep.eigenvalues.back() >= rep.eigenvalues.front());
  }
}

TEST_CASE("gauge directions lie in the curvature kernel explicitly") {
  const int d = 3;
  const auto [g, phi] = gram_from_bases(analytic_mubs(d));
  (void)g;
  const RealMatrix h = 0.5 * hessian_g(phi) - hessian_f(phi);

  // Rephasing state a shifts phi_{a,b} by +delta and phi_{b,a} by -delta.
  const PairTable table(d);
  const int a = flat_index(d, 2, 1);
  Eigen::VectorXd dir = Eigen::VectorXd::Zero(num_phases(d));
  for (long k = 0; k < table.size(); ++k) {
    const auto [p, q] = table.pair(k);
    if (p == a) dir(k) += 1.0;
    if (q == a) dir(k) -= 1.0;
  }
  dir.normalize();
  CHECK((h * dir).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(std::abs(dir.dot(h * dir)) < 1e-12);
}

TEST_CASE("hessian_analysis rejects non-stationary points") {
  auto rng = make_rng(73, 2);
  const PhaseVector phi = random_init(3, rng);
  CHECK_THROWS_AS((void)hessian_analysis(phi), NotStationary);
}
