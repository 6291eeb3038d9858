#pragma once

#include <utility>
#include <vector>

#include "mubforge/types.hpp"

namespace mubforge {

// The free parameters of a candidate configuration: one phase per unordered
// cross-basis pair of states, stored in lexicographic order of the flat index
// pair (a, b), a < b, intra-basis pairs skipped.
struct PhaseVector {
  int d = 0;
  std::vector<double> phases;

  bool well_formed() const;
  void canonicalize();  // wrap every phase into [0, 2*pi)
};

// Lookup table between flat index pairs and phase slots.
class PairTable {
 public:
  explicit PairTable(int d);

  int d() const { return d_; }
  long size() const { return static_cast<long>(pairs_.size()); }

  // Slot of the unordered cross-basis pair {a, b}; -1 for intra-basis pairs
  // and the diagonal.
  long slot(int a, int b) const { return slot_(a, b); }
  std::pair<int, int> pair(long k) const { return pairs_[k]; }

  // Signed phase of the ordered pair (a, b): phi_ab = -phi_ba.
  double phase(const PhaseVector& phi, int a, int b) const;

 private:
  int d_;
  Eigen::MatrixXi slot_;
  std::vector<std::pair<int, int>> pairs_;
};

struct GramMatrix {
  int d = 0;
  Matrix m;  // N x N, Hermitian by construction
};

// d+1 orthonormal bases; bases[mu].col(i) is state i of basis mu.
struct MubSet {
  int d = 0;
  std::vector<Matrix> bases;
};

struct MubReport {
  double max_ortho_violation = 0.0;
  double max_unbias_violation = 0.0;
  bool pass = false;
};

struct ProjectionReport {
  double max_projection_residual = 0.0;  // ||G^2 - G||_max
  double max_eigenvalue_distance = 0.0;  // to the nearest of {0, 1}
  double trace = 0.0;
  int rank = 0;  // eigenvalues within tol of 1
  bool pass = false;
};

// Gram matrix of the piecewise definition: delta_ij/(d+1) within a basis,
// e^{+i phi}/((d+1) sqrt(d)) across bases for flat(a) < flat(b), Hermitian.
GramMatrix build_gram(const PhaseVector& phi);

// G = VV^dagger from explicit bases plus the extracted relative phases.
// Throws NotUnbiased if some cross-basis overlap modulus deviates from
// 1/sqrt(d) by more than tol.
std::pair<GramMatrix, PhaseVector> gram_from_bases(const MubSet& m,
                                                   double tol = 1e-8);

// arg of every inter-basis entry, canonicalized to [0, 2*pi).
PhaseVector phases_from_gram(const GramMatrix& g);

MubReport verify_mub_definition(const MubSet& m, double tol);

// Projection certificate: ||G^2-G||_max, eigenvalue distances to {0,1},
// Tr(G), rank at tol; pass iff everything is within tol and rank == d.
ProjectionReport verify_gram_projection(const GramMatrix& g, double tol);

}  // namespace mubforge
