#include "mubforge/landscape.hpp"

#include <algorithm>
#include <cmath>

namespace mubforge {

DefectReport restricted_defect(const GramMatrix& g, double zero_tol,
                               double rank_tol) {
  const int n = num_states(g.d);
  const Matrix u = Matrix::Identity(n, n) - 2.0 * g.m;
  const double unitarity = (u * u.adjoint() - Matrix::Identity(n, n))
                               .cwiseAbs()
                               .maxCoeff();
  if (unitarity > 1e-6) {
    throw NotUnitary("restricted_defect: ||UU^dagger - I||_max = " +
                     std::to_string(unitarity));
  }

  DefectReport rep;
  rep.N = n;

  // Free parameters: strict-upper-triangle positions where U is nonzero.
  Eigen::MatrixXi slot = Eigen::MatrixXi::Constant(n, n, -1);
  int num_params = 0;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (std::abs(u(a, b)) > zero_tol) {
        slot(a, b) = num_params++;
      } else {
        ++rep.z;
      }
    }
  }
  rep.tau = (n - 1) * (n - 2) / 2 - rep.z;

  // One complex constraint per ordered pair j < l:
  //   sum_k (R_jk - R_lk) U_jk conj(U_lk) = 0,
  // with R antisymmetric and R_jk present only where U_jk != 0.
  const int num_constraints = n * (n - 1) / 2;
  RealMatrix system = RealMatrix::Zero(2 * num_constraints, num_params);
  int row = 0;
  for (int j = 0; j < n; ++j) {
    for (int l = j + 1; l < n; ++l) {
      for (int k = 0; k < n; ++k) {
        const cplx coeff = u(j, k) * std::conj(u(l, k));
        const auto add = [&](int a, int b, double sign) {
          int s;
          if (a < b) {
            s = slot(a, b);
          } else if (b < a) {
            s = slot(b, a);
            sign = -sign;
          } else {
            return;  // diagonal of an antisymmetric R
          }
          if (s < 0) return;
          system(2 * row, s) += sign * coeff.real();
          system(2 * row + 1, s) += sign * coeff.imag();
        };
        add(j, k, 1.0);
        add(l, k, -1.0);
      }
      ++row;
    }
  }

  Eigen::BDCSVD<RealMatrix> svd(system);
  rep.singular_values.assign(svd.singularValues().data(),
                             svd.singularValues().data() +
                                 svd.singularValues().size());
  const double sigma_max =
      rep.singular_values.empty() ? 0.0 : rep.singular_values.front();
  rep.r = 0;
  for (double s : rep.singular_values) {
    if (s > rank_tol * sigma_max) ++rep.r;
  }
  rep.delta = rep.tau - rep.r;
  return rep;
}

HessianReport hessian_analysis(const PhaseVector& phi, double null_tol) {
  const long p = num_phases(phi.d);
  std::vector<double> df, dg;
  trace_gradients(phi, df, dg);
  double grad_norm_sq = 0.0;
  for (long i = 0; i < p; ++i) {
    grad_norm_sq += df[i] * df[i] + dg[i] * dg[i];
  }
  if (std::sqrt(grad_norm_sq) >= 1e-6) {
    throw NotStationary("hessian_analysis: trace gradient norm " +
                        std::to_string(std::sqrt(grad_norm_sq)));
  }

  RealMatrix h = 0.5 * hessian_g(phi) - hessian_f(phi);
  h = 0.5 * (h + h.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<RealMatrix> es(h);
  HessianReport rep;
  rep.eigenvalues.assign(es.eigenvalues().data(),
                         es.eigenvalues().data() + es.eigenvalues().size());
  rep.gauge_dim = num_states(phi.d) - 1;
  for (double lam : rep.eigenvalues) {
    if (std::abs(lam) < null_tol) ++rep.null_dim;
  }
  rep.nontrivial_null = rep.null_dim - rep.gauge_dim;
  return rep;
}

}  // namespace mubforge
