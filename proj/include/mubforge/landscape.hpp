#pragma once

#include <vector>

#include "mubforge/trace.hpp"

namespace mubforge {

// First-order isolatedness certificate from the restricted defect of the
// unitary U = I - 2G.
struct DefectReport {
  int N = 0;
  int z = 0;        // zero entries in the strict upper triangle of U
  int tau = 0;      // (N-1)(N-2)/2 - z
  int r = 0;        // numerical rank of the linearized constraint system
  int delta = 0;    // tau - r; 0 means no unitary deformation direction
  std::vector<double> singular_values;  // descending, for auditing rank_tol
};

// Second-order isolatedness certificate from the curvature of the trace
// constraints at a stationary point.
struct HessianReport {
  std::vector<double> eigenvalues;  // ascending
  int null_dim = 0;                 // |lambda| < null_tol
  int gauge_dim = 0;                // N - 1 rephasing directions
  int nontrivial_null = 0;          // null_dim - gauge_dim
};

// Linearizes d/dt [V(t) V(t)^dagger] = 0 at t = 0 for V_jk = U_jk e^{i t R_jk}
// over the free antisymmetric parameters R_jk (strict upper triangle, skipping
// positions where |U_jk| <= zero_tol). delta = tau - rank. Throws NotUnitary
// when U strays from unitarity by more than 1e-6.
DefectReport restricted_defect(const GramMatrix& g, double zero_tol = 1e-10,
                               double rank_tol = 1e-8);

// Eigen-decomposition of the curvature form H = hessian_g/2 - hessian_f,
// which is positive semidefinite at exact solutions with the N-1 gauge
// directions as its only generic null space. (The squared objective itself
// has an identically vanishing Hessian at solutions, since both trace
// gradients vanish there, so it cannot separate gauge from genuine flat
// directions.) Throws NotStationary when the objective gradient norm
// is 1e-6 or larger.
HessianReport hessian_analysis(const PhaseVector& phi, double null_tol = 1e-7);

}  // namespace mubforge
