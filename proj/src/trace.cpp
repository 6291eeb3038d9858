#include "mubforge/trace.hpp"

#include <cmath>

namespace mubforge {

namespace {

double hermiticity_residual(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// Support of dG/dphi_p: two entries, (a,b) -> i*G_ab and (b,a) -> -i*G_ba.
struct PairSupport {
  int a, b;
  cplx vab, vba;
};

PairSupport pair_support(const Matrix& g, int a, int b) {
  return {a, b, cplx(0, 1) * g(a, b), cplx(0, -1) * g(b, a)};
}

}  // namespace

double f_expansion(const PhaseVector& phi) {
  const int d = phi.d;
  const PairTable table(d);
  const auto ph = [&](int a, int b) { return table.phase(phi, a, b); };

  double sum = 0.0;
  for (int mu = 0; mu <= d; ++mu) {
    for (int nu = mu + 1; nu <= d; ++nu) {
      for (int rho = nu + 1; rho <= d; ++rho) {
        for (int i = 0; i < d; ++i) {
          for (int k = 0; k < d; ++k) {
            const int a = flat_index(d, mu, i);
            const int b = flat_index(d, nu, k);
            const double ab = ph(a, b);
            for (int l = 0; l < d; ++l) {
              const int c = flat_index(d, rho, l);
              sum += std::cos(ab + ph(b, c) - ph(a, c));
            }
          }
        }
      }
    }
  }
  const double constant = (d + 3.0 * d * d) / ((d + 1.0) * (d + 1.0));
  return constant +
         6.0 / (std::pow(d, 1.5) * std::pow(d + 1.0, 3)) * sum;
}

GExpansionTerms g_expansion_terms(const PhaseVector& phi) {
  const int d = phi.d;
  const PairTable table(d);
  const auto ph = [&](int a, int b) { return table.phase(phi, a, b); };
  const auto x = [&](int mu, int i) { return flat_index(d, mu, i); };

  GExpansionTerms t;
  t.constant = 2.0 * d * d * (d + 3.0) / std::pow(d + 1.0, 3);

  // Third-order cycles: each triangle enters Tr(G^4) through the walks that
  // pause once on the diagonal.
  double tri = 0.0;
  for (int mu = 0; mu <= d; ++mu) {
    for (int nu = mu + 1; nu <= d; ++nu) {
      for (int rho = nu + 1; rho <= d; ++rho) {
        for (int i = 0; i < d; ++i) {
          for (int k = 0; k < d; ++k) {
            const int a = x(mu, i);
            const int b = x(nu, k);
            const double ab = ph(a, b);
            for (int l = 0; l < d; ++l) {
              const int c = x(rho, l);
              tri += std::cos(ab + ph(b, c) - ph(a, c));
            }
          }
        }
      }
    }
  }
  t.triangle = 24.0 / (std::pow(d, 1.5) * std::pow(d + 1.0, 4)) * tri;

  std::array<double, 7> s{};
  // Families 1-3: four distinct bases, one state in each, the three
  // pairings of the four states into a cycle.
  for (int mu = 0; mu <= d; ++mu) {
    for (int nu = mu + 1; nu <= d; ++nu) {
      for (int rho = nu + 1; rho <= d; ++rho) {
        for (int ga = rho + 1; ga <= d; ++ga) {
          for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
              for (int k = 0; k < d; ++k) {
                for (int l = 0; l < d; ++l) {
                  const int A = x(mu, i), B = x(nu, j), C = x(rho, k),
                            D = x(ga, l);
                  s[0] += std::cos(ph(A, B) + ph(B, C) + ph(C, D) - ph(A, D));
                  s[1] += std::cos(ph(A, B) + ph(B, D) - ph(C, D) - ph(A, C));
                  s[2] += std::cos(ph(A, C) - ph(B, C) + ph(B, D) - ph(A, D));
                }
              }
            }
          }
        }
      }
    }
  }
  // Families 4-6: three distinct bases; the basis holding the opposite pair
  // of cycle vertices is the middle, smallest, or largest of the three.
  for (int b0 = 0; b0 <= d; ++b0) {
    for (int b1 = b0 + 1; b1 <= d; ++b1) {
      for (int b2 = b1 + 1; b2 <= d; ++b2) {
        for (int i = 0; i < d; ++i) {
          for (int k = i + 1; k < d; ++k) {
            for (int j = 0; j < d; ++j) {
              for (int l = 0; l < d; ++l) {
                // repeated basis b1 (nu < mu < gamma with mu repeated)
                s[3] += std::cos(-ph(x(b0, j), x(b1, i)) +
                                 ph(x(b0, j), x(b1, k)) +
                                 ph(x(b1, k), x(b2, l)) -
                                 ph(x(b1, i), x(b2, l)));
                // repeated basis b0 (mu < nu < gamma with mu repeated)
                s[4] += std::cos(ph(x(b0, i), x(b1, j)) -
                                 ph(x(b0, k), x(b1, j)) +
                                 ph(x(b0, k), x(b2, l)) -
                                 ph(x(b0, i), x(b2, l)));
                // repeated basis b2 (mu < rho < nu with nu repeated);
                // here (i, k) is the pair in b2 and (j, l) the singles.
                s[5] += std::cos(ph(x(b0, j), x(b2, i)) -
                                 ph(x(b1, l), x(b2, i)) +
                                 ph(x(b1, l), x(b2, k)) -
                                 ph(x(b0, j), x(b2, k)));
              }
            }
          }
        }
      }
    }
  }
  // Family 7: two bases, two states in each.
  for (int mu = 0; mu <= d; ++mu) {
    for (int nu = mu + 1; nu <= d; ++nu) {
      for (int i = 0; i < d; ++i) {
        for (int k = i + 1; k < d; ++k) {
          for (int j = 0; j < d; ++j) {
            for (int l = j + 1; l < d; ++l) {
              s[6] += std::cos(ph(x(mu, i), x(nu, j)) -
                               ph(x(mu, k), x(nu, j)) +
                               ph(x(mu, k), x(nu, l)) -
                               ph(x(mu, i), x(nu, l)));
            }
          }
        }
      }
    }
  }

  const double coeff = 8.0 / (d * d * std::pow(d + 1.0, 4));
  t.total = t.constant + t.triangle;
  for (int fam = 0; fam < 7; ++fam) {
    t.quad[fam] = coeff * s[fam];
    t.total += t.quad[fam];
  }
  return t;
}

double g_expansion(const PhaseVector& phi) {
  return g_expansion_terms(phi).total;
}

double f_matrix(const GramMatrix& g) {
  if (hermiticity_residual(g.m) > 1e-12) {
    throw NonHermitianInput("f_matrix: input Gram matrix is not Hermitian");
  }
  const Matrix g2 = g.m * g.m;
  const cplx tr = g2.cwiseProduct(g.m.transpose()).sum();
  return tr.real();
}

double g_matrix(const GramMatrix& g) {
  if (hermiticity_residual(g.m) > 1e-12) {
    throw NonHermitianInput("g_matrix: input Gram matrix is not Hermitian");
  }
  const Matrix g2 = g.m * g.m;
  return g2.squaredNorm();  // Tr(G^4) = ||G^2||_F^2 for Hermitian G
}

ConstraintValue objective(const PhaseVector& phi) {
  const GramMatrix g = build_gram(phi);
  const Matrix g2 = g.m * g.m;
  ConstraintValue v;
  v.f = g2.cwiseProduct(g.m.transpose()).sum().real();
  v.g = g2.squaredNorm();
  v.F_squared = (v.f - phi.d) * (v.f - phi.d) + (v.g - phi.d) * (v.g - phi.d);
  v.F = std::sqrt(v.F_squared);
  return v;
}

void trace_gradients(const PhaseVector& phi, std::vector<double>& df,
                     std::vector<double>& dg) {
  const GramMatrix g = build_gram(phi);
  const Matrix g2 = g.m * g.m;
  const Matrix g3 = g2 * g.m;
  const PairTable table(phi.d);
  df.resize(table.size());
  dg.resize(table.size());
  for (long k = 0; k < table.size(); ++k) {
    const auto [a, b] = table.pair(k);
    df[k] = -6.0 * (g.m(a, b) * g2(b, a)).imag();
    dg[k] = -8.0 * (g.m(a, b) * g3(b, a)).imag();
  }
}

std::vector<double> gradient(const PhaseVector& phi) {
  const GramMatrix g = build_gram(phi);
  const Matrix g2 = g.m * g.m;
  const Matrix g3 = g2 * g.m;
  const double f = g2.cwiseProduct(g.m.transpose()).sum().real();
  const double gg = g2.squaredNorm();
  const PairTable table(phi.d);
  std::vector<double> grad(table.size());
  for (long k = 0; k < table.size(); ++k) {
    const auto [a, b] = table.pair(k);
    const double df = -6.0 * (g.m(a, b) * g2(b, a)).imag();
    const double dg = -8.0 * (g.m(a, b) * g3(b, a)).imag();
    grad[k] = 2.0 * (f - phi.d) * df + 2.0 * (gg - phi.d) * dg;
  }
  return grad;
}

namespace {

// Tr(M E_q E_p) with both derivative factors sparse.
cplx tr_mee(const Matrix& m, const PairSupport& q, const PairSupport& p) {
  cplx tot = 0.0;
  const int qi[2][2] = {{q.a, q.b}, {q.b, q.a}};
  const cplx qv[2] = {q.vab, q.vba};
  const int pi[2][2] = {{p.a, p.b}, {p.b, p.a}};
  const cplx pv[2] = {p.vab, p.vba};
  for (int u = 0; u < 2; ++u) {
    for (int w = 0; w < 2; ++w) {
      if (pi[w][0] != qi[u][1]) continue;
      tot += m(pi[w][1], qi[u][0]) * qv[u] * pv[w];
    }
  }
  return tot;
}

// Tr(M1 E_q M2 E_p).
cplx tr_meme(const Matrix& m1, const PairSupport& q, const Matrix& m2,
             const PairSupport& p) {
  cplx tot = 0.0;
  const int qi[2][2] = {{q.a, q.b}, {q.b, q.a}};
  const cplx qv[2] = {q.vab, q.vba};
  const int pi[2][2] = {{p.a, p.b}, {p.b, p.a}};
  const cplx pv[2] = {p.vab, p.vba};
  for (int u = 0; u < 2; ++u) {
    for (int w = 0; w < 2; ++w) {
      tot += m1(pi[w][1], qi[u][0]) * qv[u] * m2(qi[u][1], pi[w][0]) * pv[w];
    }
  }
  return tot;
}

}  // namespace

RealMatrix hessian_f(const PhaseVector& phi) {
  const GramMatrix g = build_gram(phi);
  const Matrix g2 = g.m * g.m;
  const PairTable table(phi.d);
  const long n = table.size();
  std::vector<PairSupport> supp;
  supp.reserve(n);
  for (long k = 0; k < n; ++k) {
    const auto [a, b] = table.pair(k);
    supp.push_back(pair_support(g.m, a, b));
  }
  RealMatrix h(n, n);
  for (long p = 0; p < n; ++p) {
    for (long q = p; q < n; ++q) {
      cplx v = 3.0 * (tr_mee(g.m, supp[q], supp[p]) +
                      tr_mee(g.m, supp[p], supp[q]));
      if (p == q) {
        const auto [a, b] = table.pair(p);
        v += -6.0 * (g.m(a, b) * g2(b, a)).real();
      }
      h(p, q) = h(q, p) = v.real();
    }
  }
  return h;
}

RealMatrix hessian_g(const PhaseVector& phi) {
  const GramMatrix g = build_gram(phi);
  const Matrix g2 = g.m * g.m;
  const Matrix g3 = g2 * g.m;
  const PairTable table(phi.d);
  const long n = table.size();
  std::vector<PairSupport> supp;
  supp.reserve(n);
  for (long k = 0; k < n; ++k) {
    const auto [a, b] = table.pair(k);
    supp.push_back(pair_support(g.m, a, b));
  }
  RealMatrix h(n, n);
  for (long p = 0; p < n; ++p) {
    for (long q = p; q < n; ++q) {
      cplx v = 4.0 * (tr_meme(g.m, supp[q], g.m, supp[p]) +
                      tr_mee(g2, supp[q], supp[p]) +
                      tr_mee(g2, supp[p], supp[q]));
      if (p == q) {
        const auto [a, b] = table.pair(p);
        v += -8.0 * (g.m(a, b) * g3(b, a)).real();
      }
      h(p, q) = h(q, p) = v.real();
    }
  }
  return h;
}

bool eigenvalue_sufficiency_check(const GramMatrix& g) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(g.m, Eigen::EigenvaluesOnly);
  int near_one = 0;
  for (double lam : es.eigenvalues()) {
    if (std::abs(lam - 1.0) < 1e-8) {
      ++near_one;
    } else if (std::abs(lam) >= 1e-8) {
      return false;
    }
  }
  return near_one == g.d;
}

}  // namespace mubforge
