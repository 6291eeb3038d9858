#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mubforge/gram.hpp"

namespace mubforge {

// Weyl-Heisenberg displacement operator D_p = tau^{p1 p2} X^{p1} Z^{p2},
// tau = -e^{i pi/d}.
struct WhOperator {
  int d = 0;
  int p1 = 0, p2 = 0;
  Matrix matrix;
};

struct CommutingClass {
  std::vector<Matrix> members;
  // Exponent pairs of the members when they are plain WH powers (prime d);
  // empty for the d=4 tensor-product classes.
  std::vector<std::pair<int, int>> exponents;
};

struct CliffordPerm {
  std::vector<int> perm;  // images of the N flat state indices
  std::string source;     // generator word
};

// Shift and phase operators: X|k> = |k+1 mod d>, Z|k> = w^k |k>, w=e^{2pi i/d}.
std::pair<Matrix, Matrix> pauli_ops(int d);

WhOperator displacement(int d, int p1, int p2);

// The d+1 maximal commuting classes {Z^a}, {X^a}, {(XZ^m)^a} for prime d.
// Throws NotPrime otherwise.
std::vector<CommutingClass> prime_classes(int d);

// The five tensor-product classes for d = 4.
std::vector<CommutingClass> d4_classes();

// Orthonormal basis simultaneously diagonalizing every class member, via a
// seeded random Hermitian combination; retries on eigenvalue clustering and
// throws DegenerateCombination after 10 attempts. Columns are the basis
// vectors, gauge-fixed (first significant component real positive) and
// deterministically ordered.
Matrix common_eigenbasis(const CommutingClass& c, std::uint64_t seed = 2024);

// Complete analytic set of d+1 MUBs for d in {2, 3, 4, 5}, computational
// basis first. Throws UnsupportedDimension otherwise.
MubSet analytic_mubs(int d);

// Permutations of the N MUB states induced by the Clifford generators
// (Fourier, quadratic phase gate, X, Z) for odd prime d in {3, 5}.
// Throws NoMatch if some generator fails to permute the state set.
std::vector<CliffordPerm> clifford_generator_perms(int d, const MubSet& m);

}  // namespace mubforge
