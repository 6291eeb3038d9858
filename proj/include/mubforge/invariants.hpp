#pragma once

#include <optional>
#include <vector>

#include "mubforge/gram.hpp"

namespace mubforge {

// Dense N x N x N tensor of third-order cyclic overlap products
// T_ijk = G_ij G_jk G_ki.
struct TripleTensor {
  int d = 0;
  int n = 0;
  std::vector<cplx> values;  // (i*n + j)*n + k

  cplx at(int i, int j, int k) const { return values[(i * n + j) * n + k]; }
};

struct SymbolicPhase {
  int num = 0;  // phase = num * pi / den
  int den = 1;
};

struct GeneratingSet {
  std::vector<double> phases;       // distinct cluster representatives, sorted
  std::vector<long> frequencies;    // matching counts over all N^3 entries
  double fluctuation = 0.0;         // max intra-cluster spread
  std::vector<std::optional<SymbolicPhase>> symbolic;  // filled by identify_symbolic
};

TripleTensor triple_tensor(const GramMatrix& g);

// Cyclic product G_{j1 j2} G_{j2 j3} ... G_{jm j1}.
cplx m_product(const GramMatrix& g, const std::vector<int>& indices);

// Distinct phases among arg(T_ijk) over all entries, with arg of a
// zero-modulus entry defined as 0 so the frequencies sum to N^3 exactly.
// Clusters come from gap splitting of the sorted phase list (with 2*pi
// wraparound); representatives are circular means.
GeneratingSet generating_set(const TripleTensor& t, double cluster_tol = 1e-9);

// Match each phase to the nearest a*pi/b with b <= max_denom via the
// continued-fraction expansion of phase/pi; phases without a match within
// tol stay unmatched.
GeneratingSet identify_symbolic(GeneratingSet gs, double tol = 1e-13,
                                int max_denom = 60);

}  // namespace mubforge
