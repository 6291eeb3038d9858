#include "mubforge/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mubforge {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TripleTensor triple_tensor(const GramMatrix& g) {
  const int n = num_states(g.d);
  TripleTensor t{g.d, n, std::vector<cplx>(static_cast<std::size_t>(n) * n * n)};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const cplx gij = g.m(i, j);
      for (int k = 0; k < n; ++k) {
        t.values[(static_cast<std::size_t>(i) * n + j) * n + k] =
            gij * g.m(j, k) * g.m(k, i);
      }
    }
  }
  return t;
}

cplx m_product(const GramMatrix& g, const std::vector<int>& indices) {
  cplx prod = 1.0;
  const std::size_t m = indices.size();
  for (std::size_t s = 0; s < m; ++s) {
    prod *= g.m(indices[s], indices[(s + 1) % m]);
  }
  return prod;
}

GeneratingSet generating_set(const TripleTensor& t, double cluster_tol) {
  const double zero_mod = 1e-12 / std::pow(t.d + 1.0, 3);
  std::vector<double> args;
  args.reserve(t.values.size());
  for (const cplx& v : t.values) {
    args.push_back(std::abs(v) < zero_mod ? 0.0 : wrap_2pi(std::arg(v)));
  }
  std::sort(args.begin(), args.end());

  // Gap splitting; the boundary clusters may wrap across 2*pi.
  std::vector<std::pair<std::size_t, std::size_t>> ranges;  // [begin, end)
  std::size_t start = 0;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] - args[i - 1] > cluster_tol) {
      ranges.emplace_back(start, i);
      start = i;
    }
  }
  ranges.emplace_back(start, args.size());

  bool wrapped = false;
  if (ranges.size() > 1) {
    const double gap = args.front() + kTwoPi - args.back();
    if (gap <= cluster_tol) wrapped = true;
  }

  GeneratingSet gs;
  const std::size_t n_clusters = ranges.size() - (wrapped ? 1 : 0);
  for (std::size_t c = 0; c < n_clusters; ++c) {
    double lo, hi;
    long count;
    double sum;
    if (wrapped && c == 0) {
      // merge last range (shifted by -2*pi) with the first
      const auto& head = ranges.front();
      const auto& tail = ranges.back();
      lo = args[tail.first] - kTwoPi;
      hi = args[head.second - 1];
      count = static_cast<long>((head.second - head.first) +
                                (tail.second - tail.first));
      sum = 0.0;
      for (std::size_t i = head.first; i < head.second; ++i) sum += args[i];
      for (std::size_t i = tail.first; i < tail.second; ++i)
        sum += args[i] - kTwoPi;
    } else {
      const auto& r = ranges[c];
      lo = args[r.first];
      hi = args[r.second - 1];
      count = static_cast<long>(r.second - r.first);
      sum = 0.0;
      for (std::size_t i = r.first; i < r.second; ++i) sum += args[i];
    }
    gs.phases.push_back(wrap_2pi(sum / count));
    gs.frequencies.push_back(count);
    gs.fluctuation = std::max(gs.fluctuation, hi - lo);
  }

  // Keep representatives sorted after the wraparound merge.
  std::vector<std::size_t> order(gs.phases.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return gs.phases[a] < gs.phases[b];
  });
  GeneratingSet sorted;
  sorted.fluctuation = gs.fluctuation;
  for (std::size_t i : order) {
    sorted.phases.push_back(gs.phases[i]);
    sorted.frequencies.push_back(gs.frequencies[i]);
  }
  sorted.symbolic.resize(sorted.phases.size());
  return sorted;
}

GeneratingSet identify_symbolic(GeneratingSet gs, double tol, int max_denom) {
  gs.symbolic.assign(gs.phases.size(), std::nullopt);
  for (std::size_t i = 0; i < gs.phases.size(); ++i) {
    const double x = gs.phases[i] / std::numbers::pi;
    // Continued-fraction convergents of x with denominators <= max_denom.
    long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double frac = x;
    long long best_num = 0, best_den = 1;
    double best_err = std::abs(x);  // candidate 0/1
    for (int step = 0; step < 40; ++step) {
      const long long a = static_cast<long long>(std::floor(frac));
      const long long p2 = a * p1 + p0;
      const long long q2 = a * q1 + q0;
      if (q2 > max_denom) break;
      if (q2 > 0) {
        const double err = std::abs(x - static_cast<double>(p2) / q2);
        if (err < best_err) {
          best_err = err;
          best_num = p2;
          best_den = q2;
        }
      }
      p0 = p1; q0 = q1; p1 = p2; q1 = q2;
      const double rem = frac - a;
      if (rem < 1e-15) break;
      frac = 1.0 / rem;
    }
    if (best_err * std::numbers::pi <= tol) {
      gs.symbolic[i] = SymbolicPhase{static_cast<int>(best_num),
                                     static_cast<int>(best_den)};
    }
  }
  return gs;
}

}  // namespace mubforge
