#include "mubforge/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace mubforge {

Perm identity_perm(int n) {
  Perm p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  return p;
}

Perm compose(const Perm& a, const Perm& b) {
  Perm r(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = a[b[i]];
  return r;
}

Perm inverse(const Perm& a) {
  Perm r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[a[i]] = static_cast<int>(i);
  return r;
}

bool is_valid_perm(const Perm& p, int n) {
  if (static_cast<int>(p.size()) != n) return false;
  std::vector<bool> seen(n, false);
  for (int v : p) {
    if (v < 0 || v >= n || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

namespace {

bool is_identity(const Perm& p) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] != static_cast<int>(i)) return false;
  }
  return true;
}

}  // namespace

StabilizerChain::StabilizerChain(int n) : n_(n) {}

void StabilizerChain::rebuild_orbit(Level& lv) const {
  lv.where.assign(n_, -1);
  lv.transversal.clear();
  lv.where[lv.base] = 0;
  lv.transversal.push_back(identity_perm(n_));
  for (std::size_t head = 0; head < lv.transversal.size(); ++head) {
    const Perm u = lv.transversal[head];
    for (const Perm& s : lv.gens) {
      const int q = s[u[lv.base]];
      if (lv.where[q] < 0) {
        lv.where[q] = static_cast<int>(lv.transversal.size());
        lv.transversal.push_back(compose(s, u));
      }
    }
  }
}

void StabilizerChain::add_at(std::size_t level, Perm g) {
  // Sift from this level; a residual of identity means g is already
  // represented and the chain needs no update.
  {
    Perm h = g;
    std::size_t i = level;
    for (; i < levels_.size(); ++i) {
      const int p = h[levels_[i].base];
      if (levels_[i].where[p] < 0) break;
      h = compose(inverse(levels_[i].transversal[levels_[i].where[p]]), h);
    }
    if (i == levels_.size() && is_identity(h)) return;
  }
  if (level == levels_.size()) {
    Level lv;
    lv.base = 0;
    for (int i = 0; i < n_; ++i) {
      if (g[i] != i) {
        lv.base = i;
        break;
      }
    }
    levels_.push_back(std::move(lv));
  }
  // Install g at this level even when it keeps the base inside the current
  // orbit: the level's group grows either way, and skipping the install
  // would leave the deeper levels missing part of the stabilizer.
  levels_[level].gens.push_back(std::move(g));
  rebuild_orbit(levels_[level]);
  // Re-close: every Schreier generator of the updated level must sift to
  // identity through the deeper part of the chain.
  for (std::size_t ti = 0; ti < levels_[level].transversal.size(); ++ti) {
    const Perm u = levels_[level].transversal[ti];  // copy: recursion below
    for (std::size_t si = 0; si < levels_[level].gens.size(); ++si) {
      const Perm su = compose(levels_[level].gens[si], u);
      const Perm& rep =
          levels_[level]
              .transversal[levels_[level].where[su[levels_[level].base]]];
      const Perm schreier = compose(inverse(rep), su);
      if (!is_identity(schreier)) add_at(level + 1, schreier);
    }
  }
}

void StabilizerChain::extend(const Perm& g) { add_at(0, g); }

bool StabilizerChain::contains(const Perm& g) const {
  Perm h = g;
  for (const Level& lv : levels_) {
    const int p = h[lv.base];
    if (lv.where[p] < 0) return false;
    h = compose(inverse(lv.transversal[lv.where[p]]), h);
  }
  return is_identity(h);
}

BigInt StabilizerChain::order() const {
  BigInt o = 1;
  for (const Level& lv : levels_) o *= lv.transversal.size();
  return o;
}

namespace {

// Entry comparison keys: cluster ids of the real and imaginary parts over a
// pooled, sorted value list. Clusters are split at gaps > tol; the rounding
// is only trusted when intra-cluster spread stays below tol/10 and
// inter-cluster gaps exceed 10*tol.
struct KeySpace {
  std::vector<double> reps;  // sorted cluster representatives (lower edges)

  int key_of(double x) const {
    auto it = std::upper_bound(reps.begin(), reps.end(), x);
    return static_cast<int>(it - reps.begin()) - 1;
  }
};

KeySpace build_key_space(std::vector<double> values, double tol) {
  std::sort(values.begin(), values.end());
  KeySpace ks;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= values.size(); ++i) {
    if (i == values.size() || values[i] - values[i - 1] > tol) {
      if (values[i - 1] - values[start] > tol / 10.0) {
        throw UnstableRounding(
            "entry values spread beyond tol/10 within one cluster");
      }
      if (i < values.size() && values[i] - values[i - 1] < 10.0 * tol) {
        throw UnstableRounding(
            "entry value gap inside the ambiguous band (tol/10, 10*tol)");
      }
      ks.reps.push_back(values[start] - tol / 2.0);
      start = i;
    }
  }
  return ks;
}

struct TensorKeys {
  int n = 0;
  std::vector<std::pair<int, int>> key;  // per entry, (re cluster, im cluster)

  const std::pair<int, int>& at(int i, int j, int k) const {
    return key[(static_cast<std::size_t>(i) * n + j) * n + k];
  }
};

// Key both tensors over the pooled value set so equal entries in either
// tensor land in the same cluster.
std::pair<TensorKeys, TensorKeys> shared_keys(const TripleTensor& ta,
                                              const TripleTensor& tb,
                                              double tol) {
  std::vector<double> re, im;
  re.reserve(ta.values.size() + tb.values.size());
  im.reserve(re.capacity());
  for (const cplx& v : ta.values) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  for (const cplx& v : tb.values) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  const KeySpace kre = build_key_space(std::move(re), tol);
  const KeySpace kim = build_key_space(std::move(im), tol);
  const auto keyed = [&](const TripleTensor& t) {
    TensorKeys tk;
    tk.n = t.n;
    tk.key.reserve(t.values.size());
    for (const cplx& v : t.values) {
      tk.key.emplace_back(kre.key_of(v.real()), kim.key_of(v.imag()));
    }
    return tk;
  };
  return {keyed(ta), keyed(tb)};
}

// Relabeling-invariant color of index a: the sorted key lists of the
// "diagonal" families T_{aak}, T_{aja} and of the whole slice T_{ajk}.
std::vector<std::pair<int, int>> vertex_signature(const TensorKeys& tk, int a) {
  std::vector<std::pair<int, int>> sig;
  const int n = tk.n;
  sig.reserve(2 * n + n * n + 2);
  std::vector<std::pair<int, int>> part;
  for (int k = 0; k < n; ++k) part.push_back(tk.at(a, a, k));
  std::sort(part.begin(), part.end());
  sig.insert(sig.end(), part.begin(), part.end());
  sig.emplace_back(-1, -1);  // separator
  part.clear();
  for (int j = 0; j < n; ++j) part.push_back(tk.at(a, j, a));
  std::sort(part.begin(), part.end());
  sig.insert(sig.end(), part.begin(), part.end());
  sig.emplace_back(-1, -1);
  part.clear();
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) part.push_back(tk.at(a, j, k));
  }
  std::sort(part.begin(), part.end());
  sig.insert(sig.end(), part.begin(), part.end());
  return sig;
}

std::vector<int> color_classes(const TensorKeys& tk,
                               std::map<std::vector<std::pair<int, int>>, int>& palette) {
  std::vector<int> colors(tk.n);
  for (int a = 0; a < tk.n; ++a) {
    const auto sig = vertex_signature(tk, a);
    const auto [it, _] = palette.try_emplace(sig, static_cast<int>(palette.size()));
    colors[a] = it->second;
  }
  return colors;
}

bool full_verify(const TensorKeys& ka, const TensorKeys& kb, const Perm& s) {
  const int n = ka.n;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        if (ka.at(i, j, k) != kb.at(s[i], s[j], s[k])) return false;
      }
    }
  }
  return true;
}

// Backtracking engine over color-compatible assignments. Since T is cyclic
// (T_ijk = T_jki), checking every new triple with the fresh vertex in the
// first slot covers all triples gaining their last assigned index.
class MatchSearch {
 public:
  MatchSearch(const TensorKeys& ka, const TensorKeys& kb,
              const std::vector<int>& colors_a, const std::vector<int>& colors_b,
              bool find_all)
      : ka_(ka), kb_(kb), colors_b_(colors_b), find_all_(find_all) {
    const int n = ka.n;
    image_.assign(n, -1);
    used_.assign(n, false);
    // Most-constrained-first static order: smallest target color class.
    std::vector<int> class_size(*std::max_element(colors_b.begin(), colors_b.end()) + 1, 0);
    for (int c : colors_b) ++class_size[c];
    order_ = identity_perm(n);
    std::sort(order_.begin(), order_.end(), [&](int x, int y) {
      const int sx = colors_a[x] < static_cast<int>(class_size.size())
                         ? class_size[colors_a[x]] : 0;
      const int sy = colors_a[y] < static_cast<int>(class_size.size())
                         ? class_size[colors_a[y]] : 0;
      return std::tie(sx, x) < std::tie(sy, y);
    });
    colors_a_ = colors_a;
  }

  std::vector<Perm> run() {
    dfs(0);
    return results_;
  }

 private:
  bool consistent(int v, int w, int depth) const {
    for (int p = 0; p <= depth; ++p) {
      const int a = order_[p];
      const int ia = (a == v) ? w : image_[a];
      for (int q = 0; q <= depth; ++q) {
        const int b = order_[q];
        const int ib = (b == v) ? w : image_[b];
        if (ka_.at(v, a, b) != kb_.at(w, ia, ib)) return false;
      }
    }
    return true;
  }

  bool dfs(int depth) {
    const int n = ka_.n;
    if (depth == n) {
      Perm s = image_;
      if (full_verify(ka_, kb_, s)) {
        results_.push_back(std::move(s));
        return !find_all_;
      }
      return false;
    }
    const int v = order_[depth];
    for (int w = 0; w < n; ++w) {
      if (used_[w] || colors_b_[w] != colors_a_[v]) continue;
      if (!consistent(v, w, depth)) continue;
      image_[v] = w;
      used_[w] = true;
      const bool done = dfs(depth + 1);
      used_[w] = false;
      image_[v] = -1;
      if (done) return true;
    }
    return false;
  }

  const TensorKeys& ka_;
  const TensorKeys& kb_;
  std::vector<int> colors_a_;
  std::vector<int> colors_b_;
  bool find_all_;
  Perm order_;
  Perm image_;
  std::vector<bool> used_;
  std::vector<Perm> results_;
};

}  // namespace

PermGroup automorphisms(const TripleTensor& t, double tol) {
  const auto [ka, kb] = shared_keys(t, t, tol);
  std::map<std::vector<std::pair<int, int>>, int> palette;
  const std::vector<int> colors = color_classes(ka, palette);

  MatchSearch search(ka, kb, colors, colors, /*find_all=*/true);
  std::vector<Perm> elements = search.run();
  std::sort(elements.begin(), elements.end());

  PermGroup group;
  group.n = t.n;
  group.elements = std::move(elements);
  group.order = static_cast<long>(group.elements.size());

  StabilizerChain chain(t.n);
  for (const Perm& e : group.elements) {
    if (!chain.contains(e)) {
      chain.extend(e);
      group.generators.push_back(e);
    }
  }
  return group;
}

bool contains(const PermGroup& group, const Perm& perm) {
  if (!is_valid_perm(perm, group.n)) return false;
  if (!group.elements.empty()) {
    if (std::is_sorted(group.elements.begin(), group.elements.end())) {
      return std::binary_search(group.elements.begin(), group.elements.end(),
                                perm);
    }
    return std::find(group.elements.begin(), group.elements.end(), perm) !=
           group.elements.end();
  }
  StabilizerChain chain(group.n);
  for (const Perm& g : group.generators) chain.extend(g);
  return chain.contains(perm);
}

BigInt group_order_via_generators(int n, const std::vector<Perm>& gens) {
  StabilizerChain chain(n);
  for (const Perm& g : gens) chain.extend(g);
  return chain.order();
}

std::optional<Perm> isomorphic(const TripleTensor& ta, const TripleTensor& tb,
                               double tol) {
  if (ta.n != tb.n) return std::nullopt;
  const auto [ka, kb] = shared_keys(ta, tb, tol);
  std::map<std::vector<std::pair<int, int>>, int> palette;
  const std::vector<int> colors_a = color_classes(ka, palette);
  const std::vector<int> colors_b = color_classes(kb, palette);

  // Color multisets must match for a bijection to exist at all.
  std::vector<int> ha = colors_a, hb = colors_b;
  std::sort(ha.begin(), ha.end());
  std::sort(hb.begin(), hb.end());
  if (ha != hb) return std::nullopt;

  MatchSearch search(ka, kb, colors_a, colors_b, /*find_all=*/false);
  std::vector<Perm> found = search.run();
  if (found.empty()) return std::nullopt;
  return found.front();
}

MubSet bases_from_gram(const GramMatrix& g, double tol) {
  const int d = g.d;
  const int n = num_states(d);
  Eigen::SelfAdjointEigenSolver<Matrix> es(g.m);
  int rank = 0;
  for (int i = 0; i < n; ++i) {
    const double lam = es.eigenvalues()[i];
    if (std::abs(lam - 1.0) < tol) {
      ++rank;
    } else if (std::abs(lam) >= tol) {
      throw RankDeficient("eigenvalue " + std::to_string(lam) +
                          " is neither 0 nor 1 at tol");
    }
  }
  if (rank != d) {
    throw RankDeficient("projector rank " + std::to_string(rank) +
                        ", expected " + std::to_string(d));
  }
  // Columns with unit eigenvalues span the range; V's rows are the bras of
  // the states scaled by 1/sqrt(d+1), so states are the conjugated rows.
  Matrix v(n, d);
  int col = 0;
  for (int i = 0; i < n; ++i) {
    if (std::abs(es.eigenvalues()[i] - 1.0) < tol) {
      v.col(col++) = es.eigenvectors().col(i);
    }
  }
  const double scale = std::sqrt(static_cast<double>(d + 1));
  MubSet m{d, std::vector<Matrix>(d + 1, Matrix(d, d))};
  for (int a = 0; a < n; ++a) {
    const Vector state = scale * v.row(a).conjugate().transpose();
    m.bases[basis_of(d, a)].col(state_of(d, a)) = state;
  }
  return m;
}

}  // namespace mubforge
