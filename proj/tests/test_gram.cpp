#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "mubforge/analytic.hpp"
#include "mubforge/gram.hpp"
#include "mubforge/optimize.hpp"

using namespace mubforge;

namespace {

PhaseVector zero_phases(int d) {
  return PhaseVector{d, std::vector<double>(num_phases(d), 0.0)};
}

}  // namespace

TEST_CASE("flat index map is a bijection for d <= 6") {
  for (int d = 2; d <= 6; ++d) {
    std::set<int> images;
    for (int mu = 0; mu <= d; ++mu) {
      for (int i = 0; i < d; ++i) {
        const int a = flat_index(d, mu, i);
        CHECK(a >= 0);
        CHECK(a < num_states(d));
        CHECK(basis_of(d, a) == mu);
        CHECK(state_of(d, a) == i);
        images.insert(a);
      }
    }
    CHECK(static_cast<int>(images.size()) == num_states(d));
  }
}

TEST_CASE("phase counts match d^3(d+1)/2") {
  CHECK(num_phases(2) == 12);
  CHECK(num_phases(3) == 54);
  CHECK(num_phases(4) == 160);
  CHECK(num_phases(5) == 375);
  for (int d = 2; d <= 6; ++d) {
    CHECK(PairTable(d).size() == num_phases(d));
  }
}

TEST_CASE("wrap_2pi lands in [0, 2*pi)") {
  const double two_pi = 2.0 * std::numbers::pi;
  CHECK(wrap_2pi(0.0) == 0.0);
  CHECK(wrap_2pi(-1e-9) == doctest::Approx(two_pi - 1e-9));
  CHECK(wrap_2pi(7.0) == doctest::Approx(7.0 - two_pi));
  CHECK(wrap_2pi(two_pi) == 0.0);
  CHECK(wrap_2pi(-two_pi) == 0.0);
}

TEST_CASE("build_gram with zero phases gives the constant-entry matrix") {
  const int d = 3;
  const GramMatrix g = build_gram(zero_phases(d));
  const double mod = 1.0 / ((d + 1) * std::sqrt(3.0));
  for (int a = 0; a < num_states(d); ++a) {
    for (int b = 0; b < num_states(d); ++b) {
      if (a == b) {
        CHECK(g.m(a, b) == cplx(0.25, 0.0));
      } else if (basis_of(d, a) == basis_of(d, b)) {
        CHECK(g.m(a, b) == cplx(0.0, 0.0));
      } else {
        CHECK(std::abs(g.m(a, b) - cplx(mod, 0.0)) < 1e-15);
      }
    }
  }
}

TEST_CASE("build_gram is Hermitian exactly and has trace d") {
  for (int d : {2, 3, 4, 5}) {
    auto rng = make_rng(42, d);
    const PhaseVector phi = random_init(d, rng);
    const GramMatrix g = build_gram(phi);
    CHECK((g.m - g.m.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(g.m.trace().real() == doctest::Approx(d).epsilon(1e-14));
  }
}

TEST_CASE("phase round trip through build_gram") {
  for (int d : {2, 3, 4}) {
    auto rng = make_rng(7, d);
    PhaseVector phi = random_init(d, rng);
    phi.canonicalize();
    const PhaseVector back = phases_from_gram(build_gram(phi));
    for (long k = 0; k < num_phases(d); ++k) {
      CHECK(back.phases[k] == doctest::Approx(phi.phases[k]).epsilon(1e-12));
    }
  }
}

TEST_CASE("qubit bases: overlaps and round trip") {
  const MubSet m = analytic_mubs(2);
  const auto [g, phi] = gram_from_bases(m);
  const double mod = 1.0 / (3.0 * std::sqrt(2.0));
  for (int a = 0; a < 6; ++a) {
    for (int b = a + 1; b < 6; ++b) {
      if (basis_of(2, a) == basis_of(2, b)) continue;
      CHECK(std::abs(g.m(a, b)) == doctest::Approx(mod).epsilon(1e-12));
    }
  }
  const GramMatrix rebuilt = build_gram(phi);
  CHECK((rebuilt.m - g.m).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("gram_from_bases of analytic d=3 set has rank 3") {
  const auto [g, phi] = gram_from_bases(analytic_mubs(3));
  (void)phi;
  Eigen::SelfAdjointEigenSolver<Matrix> es(g.m, Eigen::EigenvaluesOnly);
  int ones = 0, zeros = 0;
  for (double lam : es.eigenvalues()) {
    if (std::abs(lam - 1.0) < 1e-10) ++ones;
    if (std::abs(lam) < 1e-10) ++zeros;
  }
  CHECK(ones == 3);
  CHECK(zeros == 9);
}

TEST_CASE("gauge covariance: rescaling one state keeps moduli") {
  MubSet m = analytic_mubs(3);
  MubSet shifted = m;
  shifted.bases[1].col(0) *= std::polar(1.0, 0.7);
  const auto [g0, p0] = gram_from_bases(m);
  const auto [g1, p1] = gram_from_bases(shifted);
  (void)p0;
  (void)p1;
  CHECK((g0.m.cwiseAbs() - g1.m.cwiseAbs()).cwiseAbs().maxCoeff() < 1e-12);
  // Triple products around the rescaled state are gauge invariant.
  const int a = flat_index(3, 1, 0);
  for (int b : {0, 5, 9}) {
    for (int c : {2, 7, 11}) {
      if (b == c) continue;
      const cplx t0 = g0.m(a, b) * g0.m(b, c) * g0.m(c, a);
      const cplx t1 = g1.m(a, b) * g1.m(b, c) * g1.m(c, a);
      CHECK(std::abs(t0 - t1) < 1e-14);
    }
  }
}

TEST_CASE("gram_from_bases rejects biased input with diagnostics") {
  MubSet m{2, {Matrix::Identity(2, 2), Matrix::Identity(2, 2),
               Matrix::Identity(2, 2)}};
  CHECK_THROWS_AS((void)gram_from_bases(m), NotUnbiased);
  try {
    (void)gram_from_bases(m);
  } catch (const NotUnbiased& e) {
    CHECK(!e.offending.empty());
    const auto& [mu, i, nu, j, overlap] = e.offending.front();
    CHECK(mu != nu);
    CHECK((overlap == doctest::Approx(0.0) || overlap == doctest::Approx(1.0)));
    (void)i;
    (void)j;
  }
}

TEST_CASE("verify_mub_definition: analytic sets pass, degenerate fails") {
  for (int d : {4, 5}) {
    const MubReport rep = verify_mub_definition(analytic_mubs(d), 1e-10);
    CHECK(rep.pass);
  }
  MubSet twin = analytic_mubs(3);
  twin.bases[2] = twin.bases[1];
  const MubReport rep = verify_mub_definition(twin, 1e-10);
  CHECK_FALSE(rep.pass);
  CHECK(rep.max_unbias_violation ==
        doctest::Approx(1.0 - 1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("verify_gram_projection: analytic passes, random fails") {
  const auto [g, phi] = gram_from_bases(analytic_mubs(3));
  (void)phi;
  const ProjectionReport good = verify_gram_projection(g, 1e-10);
  CHECK(good.pass);
  CHECK(good.rank == 3);
  CHECK(good.trace == doctest::Approx(3.0).epsilon(1e-12));

  auto rng = make_rng(3, 1);
  const ProjectionReport bad =
      verify_gram_projection(build_gram(random_init(3, rng)), 1e-8);
  CHECK_FALSE(bad.pass);
}

TEST_CASE("well_formed rejects wrong sizes and non-finite entries") {
  PhaseVector phi = zero_phases(3);
  CHECK(phi.well_formed());
  phi.phases.pop_back();
  CHECK_FALSE(phi.well_formed());
  phi = zero_phases(3);
  phi.phases[0] = std::nan("");
  CHECK_FALSE(phi.well_formed());
  CHECK_FALSE(PhaseVector{1, {}}.well_formed());
}
