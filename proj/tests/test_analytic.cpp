#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "mubforge/analytic.hpp"
#include "mubforge/symmetry.hpp"
#include "mubforge/trace.hpp"

using namespace mubforge;

namespace {
constexpr double kPi = std::numbers::pi;

double comm_norm(const Matrix& a, const Matrix& b) {
  return (a * b - b * a).cwiseAbs().maxCoeff();
}
}  // namespace

TEST_CASE("pauli_ops: Pauli matrices at d=2, Weyl relation in general") {
  const auto [x2, z2] = pauli_ops(2);
  CHECK((x2 - (Matrix(2, 2) << 0, 1, 1, 0).finished()).cwiseAbs().maxCoeff() <
        1e-15);
  CHECK((z2 - (Matrix(2, 2) << 1, 0, 0, -1).finished()).cwiseAbs().maxCoeff() <
        1e-15);

  for (int d : {2, 3, 4, 5}) {
    const auto [x, z] = pauli_ops(d);
    Matrix xp = Matrix::Identity(d, d), zp = xp;
    for (int k = 0; k < d; ++k) {
      xp = xp * x;
      zp = zp * z;
    }
    CHECK((xp - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((zp - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-13);
    const cplx omega = std::polar(1.0, 2.0 * kPi / d);
    CHECK((z * x - omega * x * z).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("displacement operators are unitary and trace-orthogonal") {
  for (int d : {2, 3, 5}) {
    std::vector<Matrix> ops;
    for (int p1 = 0; p1 < d; ++p1) {
      for (int p2 = 0; p2 < d; ++p2) {
        const WhOperator op = displacement(d, p1, p2);
        CHECK((op.matrix * op.matrix.adjoint() - Matrix::Identity(d, d))
                  .cwiseAbs()
                  .maxCoeff() < 1e-12);
        ops.push_back(op.matrix);
      }
    }
    for (std::size_t p = 0; p < ops.size(); ++p) {
      for (std::size_t q = 0; q < ops.size(); ++q) {
        const cplx tr = (ops[p].adjoint() * ops[q]).trace();
        CHECK(std::abs(tr - (p == q ? cplx(d, 0) : cplx(0, 0))) < 1e-12);
      }
    }
  }
}

TEST_CASE("WH commutation criterion matches the symplectic form") {
  for (int d : {3, 5}) {
    for (int p1 = 0; p1 < d; ++p1)
      for (int p2 = 0; p2 < d; ++p2)
        for (int q1 = 0; q1 < d; ++q1)
          for (int q2 = 0; q2 < d; ++q2) {
            const Matrix a = displacement(d, p1, p2).matrix;
            const Matrix b = displacement(d, q1, q2).matrix;
            const bool commutes = comm_norm(a, b) < 1e-12;
            CHECK(commutes == ((p1 * q2 - p2 * q1) % d == 0));
          }
  }
}

TEST_CASE("prime_classes partition the nonzero exponent lattice") {
  for (int d : {2, 3, 5}) {
    const auto classes = prime_classes(d);
    CHECK(static_cast<int>(classes.size()) == d + 1);
    std::set<std::pair<int, int>> seen;
    for (const CommutingClass& c : classes) {
      CHECK(static_cast<int>(c.members.size()) == d - 1);
      for (std::size_t i = 0; i < c.members.size(); ++i) {
        for (std::size_t j = i + 1; j < c.members.size(); ++j) {
          CHECK(comm_norm(c.members[i], c.members[j]) < 1e-12);
        }
      }
      for (auto [p1, p2] : c.exponents) {
        CHECK(seen.insert({p1, p2}).second);  // disjointness
      }
    }
    CHECK(static_cast<int>(seen.size()) == d * d - 1);
  }
}

TEST_CASE("d=3 classes are exactly {Z,Z^2}, {X,X^2}, {XZ,...}, {XZ^2,...}") {
  const auto classes = prime_classes(3);
  CHECK(classes[0].exponents ==
        std::vector<std::pair<int, int>>{{0, 1}, {0, 2}});
  CHECK(classes[1].exponents ==
        std::vector<std::pair<int, int>>{{1, 0}, {2, 0}});
  CHECK(classes[2].exponents ==
        std::vector<std::pair<int, int>>{{1, 1}, {2, 2}});
  CHECK(classes[3].exponents ==
        std::vector<std::pair<int, int>>{{1, 2}, {2, 1}});
}

TEST_CASE("prime_classes rejects composite dimension") {
  CHECK_THROWS_AS((void)prime_classes(4), NotPrime);
  CHECK_THROWS_AS((void)prime_classes(6), NotPrime);
}

TEST_CASE("d4_classes: five commuting triples, unbiased eigenbases") {
  const auto classes = d4_classes();
  CHECK(classes.size() == 5);
  for (const CommutingClass& c : classes) {
    CHECK(c.members.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = i + 1; j < 3; ++j) {
        CHECK(comm_norm(c.members[i], c.members[j]) < 1e-13);
      }
    }
  }
  const Matrix b1 = common_eigenbasis(classes[0], 1);
  const Matrix b2 = common_eigenbasis(classes[1], 2);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      CHECK(std::abs(std::norm(b1.col(i).dot(b2.col(j))) - 0.25) < 1e-10);
    }
  }
}

TEST_CASE("common_eigenbasis diagonalizes every class member") {
  for (int d : {3, 5}) {
    for (const CommutingClass& c : prime_classes(d)) {
      const Matrix v = common_eigenbasis(c, 77);
      CHECK((v * v.adjoint() - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() <
            1e-12);
      for (const Matrix& m : c.members) {
        Matrix t = v.adjoint() * m * v;
        t.diagonal().setZero();
        CHECK(t.cwiseAbs().maxCoeff() < 1e-10);
      }
    }
  }
}

TEST_CASE("common_eigenbasis flags unresolvable degeneracy") {
  CommutingClass degenerate;
  degenerate.members = {Matrix::Identity(3, 3)};
  CHECK_THROWS_AS((void)common_eigenbasis(degenerate, 1), DegenerateCombination);
}

TEST_CASE("analytic_mubs pass the definition at 1e-10") {
  for (int d : {2, 3, 4, 5}) {
    const MubSet m = analytic_mubs(d);
    CHECK(static_cast<int>(m.bases.size()) == d + 1);
    // Computational basis first (Z class is diagonal).
    CHECK((m.bases[0] - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() <
          1e-12);
    const MubReport rep = verify_mub_definition(m, 1e-10);
    CHECK(rep.pass);
  }
  CHECK_THROWS_AS((void)analytic_mubs(6), UnsupportedDimension);
}

TEST_CASE("analytic solutions reach F < 1e-12 end to end") {
  for (int d : {2, 3, 4, 5}) {
    const auto [g, phi] = gram_from_bases(analytic_mubs(d));
    (void)g;
    CHECK(objective(phi).F < 1e-12);
  }
}

TEST_CASE("Clifford generators permute the analytic states") {
  for (int d : {3, 5}) {
    const MubSet m = analytic_mubs(d);
    const auto perms = clifford_generator_perms(d, m);
    CHECK(perms.size() == 4);
    for (const CliffordPerm& cp : perms) {
      CHECK(is_valid_perm(cp.perm, num_states(d)));
    }
    // Z fixes its own eigenbasis (basis 0) pointwise.
    const CliffordPerm* z = nullptr;
    for (const CliffordPerm& cp : perms) {
      if (cp.source == "Z") z = &cp;
    }
    REQUIRE(z != nullptr);
    for (int i = 0; i < d; ++i) {
      CHECK(z->perm[flat_index(d, 0, i)] == flat_index(d, 0, i));
    }
  }
}

TEST_CASE("Clifford permutations generate a group of order d^3(d^2-1)") {
  for (int d : {3, 5}) {
    const MubSet m = analytic_mubs(d);
    const auto perms = clifford_generator_perms(d, m);
    std::vector<Perm> gens;
    for (const CliffordPerm& cp : perms) gens.push_back(cp.perm);
    const BigInt order = group_order_via_generators(num_states(d), gens);
    CHECK(order == BigInt(d) * d * d * (d * d - 1));
  }
}
