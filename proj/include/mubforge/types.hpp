#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace mubforge {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXcd;

// N = d(d+1): total number of states in a complete set of d+1 bases.
inline int num_states(int d) { return d * (d + 1); }

// P = d^3(d+1)/2: number of free inter-basis relative phases.
inline long num_phases(int d) {
  return static_cast<long>(d) * d * d * (d + 1) / 2;
}

// Basis-major flattening of (basis mu, state i), 0-based:
//   flat(mu, i) = mu*d + i,  mu in 0..d,  i in 0..d-1.
// This is a bijection onto 0..N-1 (tested exhaustively in the unit suite).
inline int flat_index(int d, int mu, int i) { return mu * d + i; }
inline int basis_of(int d, int flat) { return flat / d; }
inline int state_of(int d, int flat) { return flat % d; }

// Canonical phase storage: [0, 2*pi).
double wrap_2pi(double x);

class MubError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotUnbiased : public MubError {
 public:
  // (mu, i, nu, j, |overlap|) for every offending cross-basis pair.
  std::vector<std::tuple<int, int, int, int, double>> offending;
  explicit NotUnbiased(std::vector<std::tuple<int, int, int, int, double>> p);
};

class NonHermitianInput : public MubError {
 public:
  using MubError::MubError;
};

class NotPrime : public MubError {
 public:
  using MubError::MubError;
};

class UnsupportedDimension : public MubError {
 public:
  using MubError::MubError;
};

class DegenerateCombination : public MubError {
 public:
  using MubError::MubError;
};

class NoMatch : public MubError {
 public:
  using MubError::MubError;
};

class UnstableRounding : public MubError {
 public:
  using MubError::MubError;
};

class PolishDiverged : public MubError {
 public:
  using MubError::MubError;
};

class NotUnitary : public MubError {
 public:
  using MubError::MubError;
};

class NotStationary : public MubError {
 public:
  using MubError::MubError;
};

class RankDeficient : public MubError {
 public:
  using MubError::MubError;
};

}  // namespace mubforge
