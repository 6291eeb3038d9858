#include "mubforge/gram.hpp"

#include <cmath>
#include <numbers>

namespace mubforge {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double wrap_2pi(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;  // guard against fmod rounding to 2*pi
  return r;
}

bool PhaseVector::well_formed() const {
  if (d < 2) return false;
  if (static_cast<long>(phases.size()) != num_phases(d)) return false;
  for (double p : phases) {
    if (!std::isfinite(p)) return false;
  }
  return true;
}

void PhaseVector::canonicalize() {
  for (double& p : phases) p = wrap_2pi(p);
}

PairTable::PairTable(int d) : d_(d) {
  const int n = num_states(d);
  slot_.setConstant(n, n, -1);
  pairs_.reserve(num_phases(d));
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (basis_of(d, a) == basis_of(d, b)) continue;
      slot_(a, b) = static_cast<int>(pairs_.size());
      slot_(b, a) = slot_(a, b);
      pairs_.emplace_back(a, b);
    }
  }
}

double PairTable::phase(const PhaseVector& phi, int a, int b) const {
  const long k = slot_(a, b);
  return a < b ? phi.phases[k] : -phi.phases[k];
}

NotUnbiased::NotUnbiased(
    std::vector<std::tuple<int, int, int, int, double>> p)
    : MubError("cross-basis overlap moduli deviate from 1/sqrt(d)"),
      offending(std::move(p)) {}

GramMatrix build_gram(const PhaseVector& phi) {
  const int d = phi.d;
  const int n = num_states(d);
  const double diag = 1.0 / (d + 1);
  const double mod = 1.0 / ((d + 1) * std::sqrt(static_cast<double>(d)));
  GramMatrix g{d, Matrix::Zero(n, n)};
  for (int a = 0; a < n; ++a) g.m(a, a) = diag;
  const PairTable table(d);
  for (long k = 0; k < table.size(); ++k) {
    const auto [a, b] = table.pair(k);
    const cplx e = std::polar(mod, phi.phases[k]);
    g.m(a, b) = e;
    g.m(b, a) = std::conj(e);
  }
  return g;
}

std::pair<GramMatrix, PhaseVector> gram_from_bases(const MubSet& m,
                                                   double tol) {
  const int d = m.d;
  const int n = num_states(d);
  const double target = 1.0 / std::sqrt(static_cast<double>(d));

  // Rows of V are the bras <psi| / sqrt(d+1).
  Matrix v(n, d);
  for (int mu = 0; mu <= d; ++mu) {
    for (int i = 0; i < d; ++i) {
      v.row(flat_index(d, mu, i)) =
          m.bases[mu].col(i).adjoint() / std::sqrt(d + 1.0);
    }
  }
  GramMatrix g{d, v * v.adjoint()};

  std::vector<std::tuple<int, int, int, int, double>> bad;
  const double scale = 1.0 / (d + 1);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (basis_of(d, a) == basis_of(d, b)) continue;
      const double overlap = std::abs(g.m(a, b)) / scale;
      if (std::abs(overlap - target) > tol) {
        bad.emplace_back(basis_of(d, a), state_of(d, a), basis_of(d, b),
                         state_of(d, b), overlap);
      }
    }
  }
  if (!bad.empty()) throw NotUnbiased(std::move(bad));

  return {g, phases_from_gram(g)};
}

PhaseVector phases_from_gram(const GramMatrix& g) {
  const PairTable table(g.d);
  PhaseVector phi{g.d, std::vector<double>(table.size())};
  for (long k = 0; k < table.size(); ++k) {
    const auto [a, b] = table.pair(k);
    phi.phases[k] = wrap_2pi(std::arg(g.m(a, b)));
  }
  return phi;
}

MubReport verify_mub_definition(const MubSet& m, double tol) {
  const int d = m.d;
  MubReport rep;
  for (int mu = 0; mu <= d; ++mu) {
    const Matrix id_res =
        m.bases[mu].adjoint() * m.bases[mu] - Matrix::Identity(d, d);
    rep.max_ortho_violation =
        std::max(rep.max_ortho_violation, id_res.cwiseAbs().maxCoeff());
    for (int nu = mu + 1; nu <= d; ++nu) {
      const Matrix cross = m.bases[mu].adjoint() * m.bases[nu];
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          const double dev = std::abs(std::norm(cross(i, j)) - 1.0 / d);
          rep.max_unbias_violation = std::max(rep.max_unbias_violation, dev);
        }
      }
    }
  }
  rep.pass = rep.max_ortho_violation < tol && rep.max_unbias_violation < tol;
  return rep;
}

ProjectionReport verify_gram_projection(const GramMatrix& g, double tol) {
  ProjectionReport rep;
  rep.max_projection_residual = (g.m * g.m - g.m).cwiseAbs().maxCoeff();
  rep.trace = g.m.trace().real();
  Eigen::SelfAdjointEigenSolver<Matrix> es(g.m, Eigen::EigenvaluesOnly);
  for (double lam : es.eigenvalues()) {
    const double dist = std::min(std::abs(lam), std::abs(lam - 1.0));
    rep.max_eigenvalue_distance = std::max(rep.max_eigenvalue_distance, dist);
    if (std::abs(lam - 1.0) < tol) ++rep.rank;
  }
  rep.pass = rep.max_projection_residual < tol &&
             rep.max_eigenvalue_distance < tol && rep.rank == g.d;
  return rep;
}

}  // namespace mubforge
