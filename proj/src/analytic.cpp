#include "mubforge/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <unsupported/Eigen/KroneckerProduct>

namespace mubforge {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_prime(int d) {
  if (d < 2) return false;
  for (int k = 2; k * k <= d; ++k) {
    if (d % k == 0) return false;
  }
  return true;
}

Matrix matrix_power(const Matrix& m, int a) {
  Matrix r = Matrix::Identity(m.rows(), m.cols());
  for (int i = 0; i < a; ++i) r = r * m;
  return r;
}

// Gauge-fix every column (first component of modulus > 1e-8 made real
// positive), then sort columns by their rounded component list so the basis
// is deterministic regardless of the eigensolver's internal ordering.
void canonicalize_basis(Matrix& b) {
  const int d = static_cast<int>(b.rows());
  for (int c = 0; c < d; ++c) {
    for (int r = 0; r < d; ++r) {
      if (std::abs(b(r, c)) > 1e-8) {
        b.col(c) *= std::polar(1.0, -std::arg(b(r, c)));
        break;
      }
    }
  }
  std::vector<int> order(d);
  for (int c = 0; c < d; ++c) order[c] = c;
  const auto key = [&](int c) {
    std::vector<long long> k;
    k.reserve(2 * d);
    for (int r = 0; r < d; ++r) {
      k.push_back(std::llround(b(r, c).real() * 1e9));
      k.push_back(std::llround(b(r, c).imag() * 1e9));
    }
    return k;
  };
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return key(x) < key(y); });
  Matrix sorted(d, d);
  for (int c = 0; c < d; ++c) sorted.col(c) = b.col(order[c]);
  b = sorted;
}

}  // namespace

std::pair<Matrix, Matrix> pauli_ops(int d) {
  Matrix x = Matrix::Zero(d, d);
  Matrix z = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    x((k + 1) % d, k) = 1.0;
    z(k, k) = std::polar(1.0, 2.0 * kPi * k / d);
  }
  return {x, z};
}

WhOperator displacement(int d, int p1, int p2) {
  const auto [x, z] = pauli_ops(d);
  const cplx tau = -std::polar(1.0, kPi / d);
  WhOperator op{d, p1, p2, Matrix()};
  op.matrix = std::pow(tau, static_cast<double>(p1) * p2) * matrix_power(x, p1) *
              matrix_power(z, p2);
  return op;
}

std::vector<CommutingClass> prime_classes(int d) {
  if (!is_prime(d)) {
    throw NotPrime("prime_classes: dimension " + std::to_string(d) +
                   " is not prime");
  }
  const auto [x, z] = pauli_ops(d);
  std::vector<CommutingClass> classes;
  classes.reserve(d + 1);

  CommutingClass zc;
  for (int a = 1; a < d; ++a) {
    zc.members.push_back(matrix_power(z, a));
    zc.exponents.emplace_back(0, a);
  }
  classes.push_back(std::move(zc));

  CommutingClass xc;
  for (int a = 1; a < d; ++a) {
    xc.members.push_back(matrix_power(x, a));
    xc.exponents.emplace_back(a, 0);
  }
  classes.push_back(std::move(xc));

  for (int m = 1; m < d; ++m) {
    const Matrix base = x * matrix_power(z, m);
    CommutingClass c;
    for (int a = 1; a < d; ++a) {
      c.members.push_back(matrix_power(base, a));
      c.exponents.emplace_back(a, (m * a) % d);
    }
    classes.push_back(std::move(c));
  }
  return classes;
}

std::vector<CommutingClass> d4_classes() {
  const auto [x, z] = pauli_ops(2);
  const Matrix id = Matrix::Identity(2, 2);
  const Matrix xz = x * z;
  const Matrix xz2 = x * z * z;  // = x for d=2, kept as written
  const auto kron = [](const Matrix& a, const Matrix& b) {
    return Matrix(Eigen::kroneckerProduct(a, b));
  };
  std::vector<CommutingClass> classes(5);
  classes[0].members = {kron(z, id), kron(id, z), kron(z, z)};
  classes[1].members = {kron(x, id), kron(id, x), kron(x, x)};
  classes[2].members = {kron(xz, id), kron(id, xz), kron(xz, xz)};
  classes[3].members = {kron(x, z), kron(z, xz), kron(xz, xz2)};
  classes[4].members = {kron(xz, z), kron(z, x), kron(xz2, xz)};
  return classes;
}

Matrix common_eigenbasis(const CommutingClass& c, std::uint64_t seed) {
  const int d = static_cast<int>(c.members.front().rows());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  for (int attempt = 0; attempt < 10; ++attempt) {
    Matrix h = Matrix::Zero(d, d);
    for (const Matrix& m : c.members) {
      const double c1 = normal(rng), c2 = normal(rng);
      h += c1 * (m + m.adjoint()) / 2.0;
      h += c2 * (m - m.adjoint()) / cplx(0, 2);
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    bool gaps_ok = true;
    for (int i = 1; i < d; ++i) {
      if (es.eigenvalues()[i] - es.eigenvalues()[i - 1] < 1e-8) {
        gaps_ok = false;
        break;
      }
    }
    if (!gaps_ok) continue;

    Matrix v = es.eigenvectors();
    bool diagonalizes = true;
    for (const Matrix& m : c.members) {
      Matrix t = v.adjoint() * m * v;
      t.diagonal().setZero();
      if (t.cwiseAbs().maxCoeff() > 1e-10) {
        diagonalizes = false;
        break;
      }
    }
    if (!diagonalizes) continue;

    canonicalize_basis(v);
    return v;
  }
  throw DegenerateCombination(
      "common_eigenbasis: no gap-separated combination in 10 attempts");
}

MubSet analytic_mubs(int d) {
  std::vector<CommutingClass> classes;
  if (d == 2 || d == 3 || d == 5) {
    classes = prime_classes(d);
  } else if (d == 4) {
    classes = d4_classes();
  } else {
    throw UnsupportedDimension("analytic_mubs: d = " + std::to_string(d) +
                               " not supported");
  }
  MubSet m{d, {}};
  m.bases.reserve(d + 1);
  // The Z class is diagonal; use the computational basis exactly.
  m.bases.push_back(Matrix::Identity(d, d));
  for (std::size_t c = 1; c < classes.size(); ++c) {
    m.bases.push_back(common_eigenbasis(classes[c], 2024 + c));
  }
  return m;
}

std::vector<CliffordPerm> clifford_generator_perms(int d, const MubSet& m) {
  if (d != 3 && d != 5) {
    throw UnsupportedDimension(
        "clifford_generator_perms: supported for d in {3, 5}");
  }
  const int n = num_states(d);
  const auto [x, z] = pauli_ops(d);

  Matrix fourier(d, d);
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) {
      fourier(j, k) = std::polar(1.0 / std::sqrt(static_cast<double>(d)),
                                 2.0 * kPi * j * k / d);
    }
  }
  // Quadratic phase gate; for odd d the wraparound k -> k+d is consistent
  // because k(k+1)/2 shifts by a multiple of d.
  Matrix s_gate = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    s_gate(k, k) = std::polar(1.0, 2.0 * kPi * (k * (k + 1) / 2 % d) / d);
  }

  std::vector<Vector> states(n);
  for (int a = 0; a < n; ++a) {
    states[a] = m.bases[basis_of(d, a)].col(state_of(d, a));
  }

  const auto induced_perm = [&](const Matrix& u, const std::string& name) {
    CliffordPerm cp;
    cp.source = name;
    cp.perm.assign(n, -1);
    std::vector<bool> used(n, false);
    for (int a = 0; a < n; ++a) {
      const Vector mapped = u * states[a];
      int image = -1;
      for (int b = 0; b < n; ++b) {
        if (std::abs(states[b].dot(mapped)) > 1.0 - 1e-8) {
          image = b;
          break;
        }
      }
      if (image < 0 || used[image]) {
        throw NoMatch("generator " + name +
                      " does not permute the MUB state set");
      }
      used[image] = true;
      cp.perm[a] = image;
    }
    return cp;
  };

  std::vector<CliffordPerm> perms;
  perms.push_back(induced_perm(fourier, "F"));
  perms.push_back(induced_perm(s_gate, "S"));
  perms.push_back(induced_perm(x, "X"));
  perms.push_back(induced_perm(z, "Z"));
  return perms;
}

}  // namespace mubforge
