#pragma once

#include <array>
#include <vector>

#include "mubforge/gram.hpp"

namespace mubforge {

struct ConstraintValue {
  double f = 0.0;        // Tr(G^3)
  double g = 0.0;        // Tr(G^4)
  double F = 0.0;        // sqrt((f-d)^2 + (g-d)^2)
  double F_squared = 0.0;
};

// Breakdown of the fourth-order trace into its summation families, for
// diagnostics (`verify --explain`) and the combinatorial unit tests.
struct GExpansionTerms {
  double constant = 0.0;
  double triangle = 0.0;        // third-order cycles entering Tr(G^4)
  std::array<double, 7> quad{}; // four-cycle families (3 over four bases,
                                // 3 over three bases, 1 over two bases)
  double total = 0.0;
};

// Third-order trace via the explicit cosine expansion.
double f_expansion(const PhaseVector& phi);

// Fourth-order trace via the explicit cosine expansion. Exact identity with
// Tr(G^4); the triangle family ties it to the third-order cycles, so it
// differs from the pure four-cycle sum by 4(f-d)/(d+1) off the f=d surface.
double g_expansion(const PhaseVector& phi);
GExpansionTerms g_expansion_terms(const PhaseVector& phi);

// Direct trace evaluation through dense matrix powers. Throws
// NonHermitianInput if the Hermiticity residual exceeds 1e-12.
double f_matrix(const GramMatrix& g);
double g_matrix(const GramMatrix& g);

// Both trace constraints via the matrix-power path.
ConstraintValue objective(const PhaseVector& phi);

// Gradient of F' = (f-d)^2 + (g-d)^2 with respect to every free phase.
std::vector<double> gradient(const PhaseVector& phi);

// Gradients of the individual trace functions (used by the polish step and
// the landscape analysis). Each uses d Tr(G^k)/d phi = k Tr(G^{k-1} dG/dphi),
// where dG/dphi has exactly two nonzero entries.
void trace_gradients(const PhaseVector& phi, std::vector<double>& df,
                     std::vector<double>& dg);

// Exact second derivatives of the trace functions.
RealMatrix hessian_f(const PhaseVector& phi);
RealMatrix hessian_g(const PhaseVector& phi);

// True iff every eigenvalue lies within 1e-8 of {0, 1} with exactly d
// eigenvalues near 1: the independent certificate that the two trace
// constraints produced a rank-d projector.
bool eigenvalue_sufficiency_check(const GramMatrix& g);

}  // namespace mubforge
