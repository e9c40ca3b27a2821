#pragma once
// Brute-force reference implementations. They share no code with the
// library beyond the MetricGround distance accessor, and favour obvious
// correctness over speed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <set>
#include <vector>

#include "finiteshape/metric.hpp"

namespace oracle {

using Idx = std::uint32_t;
using Subset = std::vector<Idx>;
using Simplices = std::vector<std::vector<Subset>>;  // per dimension

inline double diameter(const finiteshape::MetricGround& g, const Subset& s) {
  double d = 0.0;
  for (Idx a : s)
    for (Idx b : s) d = std::max(d, g.dist(a, b));
  return d;
}

inline double dist_to_set(const finiteshape::MetricGround& g, Idx x, const Subset& s) {
  double d = INFINITY;
  for (Idx a : s) d = std::min(d, g.dist(x, a));
  return d;
}

inline double covering_radius(const finiteshape::MetricGround& g, const Subset& s) {
  double r = 0.0;
  for (Idx x = 0; x < g.size(); ++x) r = std::max(r, dist_to_set(g, x, s));
  return r;
}

// Every point strictly within eps of s.
inline bool is_approximation(const finiteshape::MetricGround& g, const Subset& s, double eps) {
  for (Idx x = 0; x < g.size(); ++x)
    if (!(dist_to_set(g, x, s) < eps)) return false;
  return true;
}

// Smallest cardinality of an eps-approximation, by trying all subsets.
inline std::size_t min_approximation_size(const finiteshape::MetricGround& g, double eps) {
  const std::size_t n = g.size();
  std::size_t best = n;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    Subset s;
    for (Idx i = 0; i < n; ++i)
      if (mask >> i & 1u) s.push_back(i);
    if (s.size() < best && is_approximation(g, s, eps)) best = s.size();
  }
  return best;
}

inline Subset nearest(const finiteshape::MetricGround& g, Idx x, const Subset& net, double tau) {
  const double d = dist_to_set(g, x, net);
  Subset out;
  for (Idx a : net)
    if (g.dist(x, a) <= d * (1.0 + tau)) out.push_back(a);
  return out;
}

// All non-empty subsets of `net` with diameter < bound and at most `cap`
// members, by bitmask enumeration (|net| <= 24).
inline std::vector<Subset> small_diameter_subsets(const finiteshape::MetricGround& g,
                                                  const Subset& net, double bound,
                                                  std::size_t cap) {
  std::vector<Subset> out;
  const std::size_t n = net.size();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) > cap) continue;
    Subset s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1u) s.push_back(net[i]);
    if (diameter(g, s) < bound) out.push_back(s);
  }
  return out;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
  std::size_t components() {
    std::size_t c = 0;
    for (std::size_t i = 0; i < parent.size(); ++i) c += find(i) == i;
    return c;
  }
};

// Components of the graph joining points of `pts` at distance < scale.
inline std::size_t components_at_scale(const finiteshape::MetricGround& g, const Subset& pts,
                                       double scale) {
  UnionFind uf(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (g.dist(pts[i], pts[j]) < scale) uf.unite(i, j);
  return uf.components();
}

// Rips complex on `net` at scale `bound`, vertices renumbered 0..|net|-1.
inline Simplices rips(const finiteshape::MetricGround& g, const Subset& net, double bound,
                      int max_dim) {
  Simplices out(static_cast<std::size_t>(max_dim) + 1);
  std::function<void(Subset&, std::size_t)> grow = [&](Subset& cur, std::size_t next) {
    if (!cur.empty()) out[cur.size() - 1].push_back(cur);
    if (cur.size() == static_cast<std::size_t>(max_dim) + 1) return;
    for (std::size_t v = next; v < net.size(); ++v) {
      bool ok = true;
      for (Idx u : cur) ok = ok && g.dist(net[u], net[v]) < bound;
      if (!ok) continue;
      cur.push_back(static_cast<Idx>(v));
      grow(cur, v + 1);
      cur.pop_back();
    }
  };
  Subset cur;
  grow(cur, 0);
  return out;
}

inline bool subset_of(const Subset& a, const Subset& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Strict chains of the inclusion order on `elements`, as sorted lists of
// element positions (positions must already be sorted so that subsets come
// first, e.g. by cardinality).
inline Simplices chains(const std::vector<Subset>& elements, int max_dim) {
  Simplices out(static_cast<std::size_t>(max_dim) + 1);
  std::function<void(Subset&)> grow = [&](Subset& cur) {
    out[cur.size() - 1].push_back(cur);
    if (cur.size() == static_cast<std::size_t>(max_dim) + 1) return;
    const auto& top = elements[cur.back()];
    for (Idx j = cur.back() + 1; j < elements.size(); ++j)
      if (elements[j].size() > top.size() && subset_of(top, elements[j])) {
        cur.push_back(j);
        grow(cur);
        cur.pop_back();
      }
  };
  for (Idx i = 0; i < elements.size(); ++i) {
    Subset cur{i};
    grow(cur);
  }
  return out;
}

// Rank over the two-element field of a dense 0/1 matrix.
inline std::size_t rank_gf2(std::vector<std::vector<std::uint8_t>> m) {
  std::size_t rank = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t p = rank;
    while (p < m.size() && !m[p][c]) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[rank]);
    for (std::size_t r = 0; r < m.size(); ++r)
      if (r != rank && m[r][c])
        for (std::size_t k = c; k < cols; ++k) m[r][k] ^= m[rank][k];
    ++rank;
  }
  return rank;
}

// Dense boundary matrix from dimension d to d - 1 (rows = faces).
inline std::vector<std::vector<std::uint8_t>> boundary(const Simplices& k, std::size_t d) {
  const auto& faces = k[d - 1];
  std::vector<std::vector<std::uint8_t>> m(faces.size(),
                                           std::vector<std::uint8_t>(k[d].size(), 0));
  for (std::size_t j = 0; j < k[d].size(); ++j)
    for (std::size_t drop = 0; drop < k[d][j].size(); ++drop) {
      Subset f = k[d][j];
      f.erase(f.begin() + static_cast<long>(drop));
      auto it = std::find(faces.begin(), faces.end(), f);
      m[static_cast<std::size_t>(it - faces.begin())][j] = 1;
    }
  return m;
}

// Betti numbers 0..max_degree; the complex must hold dimension
// max_degree + 1.
inline std::vector<std::size_t> betti(const Simplices& k, int max_degree) {
  std::vector<std::size_t> rank(k.size() + 1, 0);
  for (std::size_t d = 1; d < k.size(); ++d)
    if (!k[d].empty() && !k[d - 1].empty()) rank[d] = rank_gf2(boundary(k, d));
  std::vector<std::size_t> b;
  for (int d = 0; d <= max_degree; ++d) {
    const auto du = static_cast<std::size_t>(d);
    b.push_back(k[du].size() - rank[du] - rank[du + 1]);
  }
  return b;
}

// Clusters of the generation-`depth` middle-thirds endpoints when points
// closer than `scale` are joined. Separations are the gaps 3^-j (j = 1 ..
// depth) and the 3^-depth spacing of the two endpoints of each interval;
// every separation of at least `scale` doubles the count.
inline std::size_t cantor_clusters(int depth, double scale) {
  std::size_t k = 0;
  for (int j = 1; j <= depth; ++j)
    if (std::pow(3.0, -j) >= scale) ++k;
  if (std::pow(3.0, -depth) >= scale) ++k;
  return std::size_t{1} << k;
}

}  // namespace oracle
