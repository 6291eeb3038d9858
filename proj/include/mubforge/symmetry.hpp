#pragma once

#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mubforge/invariants.hpp"

namespace mubforge {

using Perm = std::vector<int>;
using BigInt = boost::multiprecision::cpp_int;

Perm identity_perm(int n);
Perm compose(const Perm& a, const Perm& b);  // (a*b)(i) = a[b[i]]
Perm inverse(const Perm& a);
bool is_valid_perm(const Perm& p, int n);

// Deterministic incremental Schreier-Sims stabilizer chain.
class StabilizerChain {
 public:
  explicit StabilizerChain(int n);

  void extend(const Perm& g);
  bool contains(const Perm& g) const;
  BigInt order() const;

 private:
  struct Level {
    int base = -1;
    std::vector<Perm> gens;
    std::vector<int> where;       // orbit point -> transversal slot, -1 outside
    std::vector<Perm> transversal;
  };

  void rebuild_orbit(Level& lv) const;
  void add_at(std::size_t level, Perm g);

  int n_;
  std::vector<Level> levels_;
};

struct PermGroup {
  int n = 0;
  std::vector<Perm> generators;  // minimal set recovered from a chain sift
  BigInt order = 1;
  std::vector<Perm> elements;    // materialized when order <= 10^6
};

// Exact automorphism group {sigma | T_{s(i)s(j)s(k)} = T_{ijk}} found by
// color-refined backtracking; every reported element is re-verified on all
// N^3 entries. Throws UnstableRounding when entry values do not cluster
// cleanly at tol (spread below tol/10 within clusters, gaps above 10*tol
// between them).
PermGroup automorphisms(const TripleTensor& t, double tol = 1e-9);

bool contains(const PermGroup& group, const Perm& perm);

BigInt group_order_via_generators(int n, const std::vector<Perm>& gens);

// A permutation sigma with T^B_{s(i)s(j)s(k)} = T^A_{ijk}, or nullopt after
// exhausting the search. Entry keys are clustered over the pooled values of
// both tensors so the comparison is symmetric.
std::optional<Perm> isomorphic(const TripleTensor& ta, const TripleTensor& tb,
                               double tol = 1e-9);

// Factor G = V V^dagger through its d unit eigenvalues and read the states
// off the rows of sqrt(d+1) V. Throws RankDeficient unless the spectrum is
// d ones and N-d zeros at tol.
MubSet bases_from_gram(const GramMatrix& g, double tol = 1e-8);

}  // namespace mubforge
