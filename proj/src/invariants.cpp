#include "finiteshape/invariants.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "finiteshape/error.hpp"

namespace finiteshape {

namespace {

constexpr VertexId kNoVertex = 0xFFFFFFFFu;

using Column = std::vector<std::uint32_t>;

// a ^= b over the two-element field, both ascending.
void add_into(Column& a, const Column& b) {
  Column out;
  out.reserve(a.size() + b.size());
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  a.swap(out);
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0u); }
  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<std::uint32_t> parent_;
};

// Rank of the boundary map from dim-simplices to (dim-1)-simplices.
std::size_t boundary_rank(const SimplicialComplex& k, int dim) {
  if (dim <= 0 || dim > k.max_dim()) return 0;
  if (dim == 1) {
    UnionFind uf(k.vertex_count());
    std::size_t r = 0;
    for (SimplexIndex e = 0; e < k.count(1); ++e) {
      const auto s = k.simplex(1, e);
      if (uf.unite(s[0], s[1])) ++r;
    }
    return r;
  }
  std::vector<std::int64_t> pivot(k.count(dim - 1), -1);
  std::vector<Column> reduced;
  for (SimplexIndex j = 0; j < k.count(dim); ++j) {
    Column col = k.boundary(dim, j);
    while (!col.empty() && pivot[col.back()] >= 0) add_into(col, reduced[pivot[col.back()]]);
    if (!col.empty()) {
      pivot[col.back()] = static_cast<std::int64_t>(reduced.size());
      reduced.push_back(std::move(col));
    }
  }
  return reduced.size();
}

}  // namespace

SimplicialComplex::SimplicialComplex(std::size_t vertex_count, int max_dim)
    : vertex_count_(vertex_count), max_dim_(max_dim) {
  if (max_dim < 0 || max_dim > kMaxSupportedDim)
    throw InvalidArgument("complex dimension must lie in [0, 3]");
  flat_.resize(static_cast<std::size_t>(max_dim) + 1);
  index_.resize(static_cast<std::size_t>(max_dim) + 1);
  for (VertexId v = 0; v < vertex_count; ++v) {
    flat_[0].push_back(v);
    index_[0].emplace(make_key(std::span<const VertexId>(&v, 1)), v);
  }
}

SimplicialComplex::Key SimplicialComplex::make_key(std::span<const VertexId> v) {
  VertexId slot[4] = {kNoVertex, kNoVertex, kNoVertex, kNoVertex};
  std::copy(v.begin(), v.end(), slot);
  return Key{std::uint64_t{slot[0]} | (std::uint64_t{slot[1]} << 32),
             std::uint64_t{slot[2]} | (std::uint64_t{slot[3]} << 32)};
}

SimplexIndex SimplicialComplex::add(std::span<const VertexId> vertices) {
  const int dim = static_cast<int>(vertices.size()) - 1;
  if (dim < 1 || dim > max_dim_) throw InvalidArgument("simplex dimension out of range");
  auto& idx = index_[static_cast<std::size_t>(dim)];
  const auto [it, fresh] = idx.emplace(make_key(vertices), static_cast<SimplexIndex>(count(dim)));
  if (fresh) {
    auto& flat = flat_[static_cast<std::size_t>(dim)];
    flat.insert(flat.end(), vertices.begin(), vertices.end());
  }
  return it->second;
}

std::size_t SimplicialComplex::count(int dim) const {
  if (dim < 0 || dim > max_dim_) return 0;
  return flat_[static_cast<std::size_t>(dim)].size() / static_cast<std::size_t>(dim + 1);
}

std::span<const VertexId> SimplicialComplex::simplex(int dim, SimplexIndex i) const {
  const auto stride = static_cast<std::size_t>(dim + 1);
  return std::span<const VertexId>(flat_[static_cast<std::size_t>(dim)]).subspan(i * stride, stride);
}

std::optional<SimplexIndex> SimplicialComplex::find(std::span<const VertexId> vertices) const {
  const int dim = static_cast<int>(vertices.size()) - 1;
  if (dim < 0 || dim > max_dim_) return std::nullopt;
  const auto& idx = index_[static_cast<std::size_t>(dim)];
  const auto it = idx.find(make_key(vertices));
  if (it == idx.end()) return std::nullopt;
  return it->second;
}

Chain SimplicialComplex::boundary(int dim, SimplexIndex i) const {
  Chain out;
  if (dim == 0) return out;
  const auto s = simplex(dim, i);
  VertexId face[4];
  for (std::size_t skip = 0; skip < s.size(); ++skip) {
    std::size_t w = 0;
    for (std::size_t t = 0; t < s.size(); ++t)
      if (t != skip) face[w++] = s[t];
    const auto f = find(std::span<const VertexId>(face, w));
    if (!f) throw InvariantViolation("complex is not closed under faces");
    out.push_back(*f);
  }
  std::sort(out.begin(), out.end());
  return out;
}

long long SimplicialComplex::euler_characteristic() const {
  long long chi = 0;
  for (int d = 0; d <= max_dim_; ++d)
    chi += (d % 2 == 0 ? 1 : -1) * static_cast<long long>(count(d));
  return chi;
}

void SimplicialComplex::check_face_closed() const {
  for (int d = 1; d <= max_dim_; ++d)
    for (SimplexIndex i = 0; i < count(d); ++i) (void)boundary(d, i);
}

SimplicialComplex order_complex(const HyperLevel& poset, const ComplexOptions& options) {
  const std::size_t n = poset.size();
  std::vector<std::vector<ElementId>> down(n);
  std::vector<std::size_t> height(n, 1);  // longest chain ending at the element
  for (std::size_t e = 0; e < n; ++e) {
    down[e] = poset.strict_subsets(static_cast<ElementId>(e));
    for (ElementId c : down[e]) height[e] = std::max(height[e], height[c] + 1);
  }
  SimplicialComplex k(n, options.max_dim);
  const std::size_t longest = n ? *std::max_element(height.begin(), height.end()) : 0;
  k.set_truncated(longest > static_cast<std::size_t>(options.max_dim) + 1);

  // Chains are grown downwards from their top element, so each is produced
  // once; `stack` holds it top-first.
  std::vector<VertexId> stack;
  std::size_t total = n;
  std::function<void(ElementId)> grow = [&](ElementId top) {
    if (stack.size() >= 2) {
      std::vector<VertexId> simplex(stack.rbegin(), stack.rend());
      k.add(simplex);
      if (++total > options.max_simplices)
        throw CapacityError("order complex exceeds " + std::to_string(options.max_simplices) +
                            " simplices");
    }
    if (stack.size() == static_cast<std::size_t>(options.max_dim) + 1) return;
    for (ElementId c : down[top]) {
      stack.push_back(c);
      grow(c);
      stack.pop_back();
    }
  };
  for (std::size_t e = 0; e < n; ++e) {
    stack.assign(1, static_cast<VertexId>(e));
    grow(static_cast<ElementId>(e));
  }
  return k;
}

SimplicialComplex rips_complex(const MetricGround& ground, const Level& level,
                               const ComplexOptions& options) {
  HyperLevelOptions ho;
  ho.cardinality_cap = static_cast<std::size_t>(options.max_dim) + 1;
  ho.max_elements = options.max_simplices;
  const HyperLevel faces = HyperLevel::build(ground, level, ho);
  const auto& net = level.net;
  SimplicialComplex k(net.size(), options.max_dim);
  auto position = [&](PointIndex p) {
    return static_cast<VertexId>(std::lower_bound(net.begin(), net.end(), p) - net.begin());
  };
  std::vector<VertexId> simplex;
  bool truncated = false;
  const double bound = 2.0 * level.epsilon;
  for (const auto& members : faces.elements()) {
    if (members.size() < 2) continue;
    simplex.clear();
    for (PointIndex p : members) simplex.push_back(position(p));
    k.add(simplex);
    if (!truncated && members.size() == static_cast<std::size_t>(options.max_dim) + 1) {
      for (PointIndex c : net) {
        if (std::binary_search(members.begin(), members.end(), c)) continue;
        bool all = true;
        for (PointIndex p : members)
          if (!(ground.dist(p, c) < bound)) {
            all = false;
            break;
          }
        if (all) {
          truncated = true;
          break;
        }
      }
    }
  }
  k.set_truncated(truncated);
  return k;
}

std::vector<std::size_t> betti(const SimplicialComplex& complex, int max_degree) {
  if (max_degree < 0) throw InvalidArgument("degree must be non-negative");
  if (max_degree > complex.max_dim() ||
      (max_degree == complex.max_dim() && complex.truncated()))
    throw InvalidArgument("complex is not built high enough for degree " +
                          std::to_string(max_degree));
  std::vector<std::size_t> ranks(static_cast<std::size_t>(max_degree) + 2, 0);
  for (int d = 1; d <= max_degree + 1; ++d) ranks[static_cast<std::size_t>(d)] = boundary_rank(complex, d);
  std::vector<std::size_t> out;
  for (int d = 0; d <= max_degree; ++d)
    out.push_back(complex.count(d) - ranks[static_cast<std::size_t>(d)] -
                  ranks[static_cast<std::size_t>(d) + 1]);
  return out;
}

HomologyBasis::HomologyBasis(const SimplicialComplex& complex, int degree)
    : degree_(degree) {
  if (degree < 0 || degree > complex.max_dim() ||
      (degree == complex.max_dim() && complex.truncated()))
    throw InvalidArgument("complex is not built high enough for degree " + std::to_string(degree));
  const std::size_t n = complex.count(degree);
  order_of_.assign(n, 0);
  simplex_at_.clear();
  std::vector<std::uint8_t> positive(n, 0);

  if (degree == 1) {
    // Spanning forest by breadth-first search; forest edges take the first
    // order positions.
    const std::size_t nv = complex.vertex_count();
    std::vector<std::vector<std::pair<VertexId, SimplexIndex>>> adj(nv);
    endpoints_.reserve(2 * n);
    for (SimplexIndex e = 0; e < n; ++e) {
      const auto s = complex.simplex(1, e);
      endpoints_.push_back(s[0]);
      endpoints_.push_back(s[1]);
      adj[s[0]].emplace_back(s[1], e);
      adj[s[1]].emplace_back(s[0], e);
    }
    parent_edge_.assign(nv, -1);
    parent_.assign(nv, kNoVertex);
    depth_.assign(nv, 0);
    std::vector<std::uint8_t> seen(nv, 0), in_forest(n, 0);
    std::vector<VertexId> queue;
    for (VertexId root = 0; root < nv; ++root) {
      if (seen[root]) continue;
      seen[root] = 1;
      queue.assign(1, root);
      for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        const VertexId u = queue[qi];
        for (auto [v, e] : adj[u]) {
          if (seen[v]) continue;
          seen[v] = 1;
          parent_[v] = u;
          parent_edge_[v] = e;
          depth_[v] = depth_[u] + 1;
          in_forest[e] = 1;
          queue.push_back(v);
        }
      }
    }
    for (SimplexIndex e = 0; e < n; ++e)
      if (in_forest[e]) simplex_at_.push_back(e);
    for (SimplexIndex e = 0; e < n; ++e)
      if (!in_forest[e]) {
        positive[simplex_at_.size()] = 1;
        simplex_at_.push_back(e);
      }
    for (std::uint32_t p = 0; p < n; ++p) order_of_[simplex_at_[p]] = p;
  } else {
    simplex_at_.resize(n);
    std::iota(simplex_at_.begin(), simplex_at_.end(), 0u);
    std::iota(order_of_.begin(), order_of_.end(), 0u);
    // Cycles: reduce the boundary of this degree, tracking the combination.
    if (degree == 0) {
      for (std::uint32_t v = 0; v < n; ++v) {
        positive[v] = 1;
        cycles_.emplace(v, Column{v});
      }
    } else {
      std::vector<std::int64_t> piv(complex.count(degree - 1), -1);
      std::vector<Column> red(n), comb(n);
      for (SimplexIndex j = 0; j < n; ++j) {
        red[j] = complex.boundary(degree, j);
        comb[j] = {j};
        while (!red[j].empty() && piv[red[j].back()] >= 0) {
          const auto i = static_cast<std::size_t>(piv[red[j].back()]);
          add_into(red[j], red[i]);
          add_into(comb[j], comb[i]);
        }
        if (red[j].empty()) {
          positive[j] = 1;
          cycles_.emplace(j, std::move(comb[j]));
        } else {
          piv[red[j].back()] = j;
        }
      }
    }
  }

  reduce_boundaries(complex);
  class_of_.assign(n, -1);
  for (std::uint32_t p = 0; p < n; ++p)
    if (positive[p] && pivot_[p] < 0) {
      class_of_[p] = static_cast<std::int64_t>(classes_.size());
      classes_.push_back(p);
    }
}

void HomologyBasis::reduce_boundaries(const SimplicialComplex& complex) {
  pivot_.assign(complex.count(degree_), -1);
  if (degree_ + 1 > complex.max_dim()) return;
  for (SimplexIndex j = 0; j < complex.count(degree_ + 1); ++j) {
    Column col = to_order(complex.boundary(degree_ + 1, j));
    while (!col.empty() && pivot_[col.back()] >= 0) add_into(col, reduced_[pivot_[col.back()]]);
    if (!col.empty()) {
      pivot_[col.back()] = static_cast<std::int64_t>(reduced_.size());
      reduced_.push_back(std::move(col));
    }
  }
  boundary_rank_ = reduced_.size();
}

HomologyBasis::Column HomologyBasis::to_order(const Chain& chain) const {
  Column col;
  col.reserve(chain.size());
  for (SimplexIndex s : chain) col.push_back(order_of_.at(s));
  std::sort(col.begin(), col.end());
  return col;
}

Chain HomologyBasis::from_order(const Column& col) const {
  Chain out;
  out.reserve(col.size());
  for (auto p : col) out.push_back(simplex_at_[p]);
  std::sort(out.begin(), out.end());
  return out;
}

HomologyBasis::Column HomologyBasis::fundamental_cycle(std::uint32_t pos) const {
  if (degree_ != 1) return cycles_.at(pos);
  const std::size_t e = simplex_at_[pos];
  VertexId u = endpoints_[2 * e], v = endpoints_[2 * e + 1];
  Column col{pos};
  while (u != v) {
    if (depth_[u] >= depth_[v]) {
      col.push_back(order_of_[static_cast<std::size_t>(parent_edge_[u])]);
      u = parent_[u];
    } else {
      col.push_back(order_of_[static_cast<std::size_t>(parent_edge_[v])]);
      v = parent_[v];
    }
  }
  std::sort(col.begin(), col.end());
  return col;
}

Chain HomologyBasis::representative(std::size_t i) const {
  return from_order(fundamental_cycle(classes_.at(i)));
}

std::vector<std::uint8_t> HomologyBasis::coordinates(const Chain& cycle) const {
  std::vector<std::uint8_t> coords(classes_.size(), 0);
  Column y = to_order(cycle);
  while (!y.empty()) {
    const auto low = y.back();
    if (pivot_[low] >= 0) {
      add_into(y, reduced_[static_cast<std::size_t>(pivot_[low])]);
    } else if (class_of_[low] >= 0) {
      coords[static_cast<std::size_t>(class_of_[low])] ^= 1;
      add_into(y, fundamental_cycle(low));
    } else {
      throw InvalidArgument("chain is not a cycle");
    }
  }
  return coords;
}

Chain push_chain(const SimplicialComplex& from, const SimplicialComplex& to,
                 std::span<const VertexId> vertex_image, int dim, const Chain& chain) {
  Chain out;
  std::vector<VertexId> image;
  for (SimplexIndex s : chain) {
    image.clear();
    for (VertexId v : from.simplex(dim, s)) image.push_back(vertex_image[v]);
    std::sort(image.begin(), image.end());
    if (std::adjacent_find(image.begin(), image.end()) != image.end()) continue;
    const auto t = to.find(image);
    if (!t) throw InvariantViolation("image of a simplex is not a simplex of the target");
    out.push_back(*t);
  }
  // Cancel pairs.
  std::sort(out.begin(), out.end());
  Chain reduced;
  for (std::size_t i = 0; i < out.size();) {
    std::size_t j = i;
    while (j < out.size() && out[j] == out[i]) ++j;
    if ((j - i) % 2) reduced.push_back(out[i]);
    i = j;
  }
  return reduced;
}

std::vector<Chain> chain_map_matrix(const SimplicialComplex& from, const SimplicialComplex& to,
                                    std::span<const VertexId> vertex_image, int dim) {
  std::vector<Chain> cols(from.count(dim));
  for (SimplexIndex s = 0; s < from.count(dim); ++s)
    cols[s] = push_chain(from, to, vertex_image, dim, {s});
  return cols;
}

std::vector<Chain> compose(const std::vector<Chain>& outer, const std::vector<Chain>& inner) {
  std::vector<Chain> out(inner.size());
  for (std::size_t j = 0; j < inner.size(); ++j)
    for (SimplexIndex r : inner[j]) add_into(out[j], outer.at(r));
  return out;
}

std::vector<std::vector<std::uint8_t>> induced_homology_matrix(
    const SimplicialComplex& from, const HomologyBasis& from_basis, const SimplicialComplex& to,
    const HomologyBasis& to_basis, std::span<const VertexId> vertex_image) {
  std::vector<std::vector<std::uint8_t>> rows;
  for (std::size_t i = 0; i < from_basis.rank(); ++i)
    rows.push_back(to_basis.coordinates(
        push_chain(from, to, vertex_image, from_basis.degree(), from_basis.representative(i))));
  return rows;
}

std::size_t gf2_rank(std::vector<std::vector<std::uint8_t>> rows) {
  std::size_t rank = 0;
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t p = rank;
    while (p < rows.size() && !rows[p][c]) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (r != rank && rows[r][c])
        for (std::size_t k = c; k < cols; ++k) rows[r][k] ^= rows[rank][k];
    ++rank;
  }
  return rank;
}

std::vector<VertexId> poset_vertex_map(const MultiMap& map, const HyperLevel& domain,
                                       const HyperLevel& target) {
  const auto cont = is_continuous(map, domain);
  if (!cont.continuous)
    throw InvalidArgument("map is not monotone: element " + std::to_string(cont.violation->first) +
                          " <= " + std::to_string(cont.violation->second) +
                          " but the images are not nested");
  std::vector<VertexId> out(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) {
    const auto id = target.find(map.images[i]);
    if (!id) throw InvalidArgument("image of element " + std::to_string(i) + " is not in the target");
    out[i] = *id;
  }
  return out;
}

std::size_t induced_homology_rank(const MultiMap& bonding, const HyperLevel& fine,
                                  const HyperLevel& coarse, int degree,
                                  const ComplexOptions& options) {
  const auto vmap = poset_vertex_map(bonding, fine, coarse);
  const auto kf = order_complex(fine, options);
  const auto kc = order_complex(coarse, options);
  const HomologyBasis bf(kf, degree), bc(kc, degree);
  return gf2_rank(induced_homology_matrix(kf, bf, kc, bc, vmap));
}

namespace {

struct LevelComplexes {
  HyperLevel poset;
  SimplicialComplex complex;
  std::vector<HomologyBasis> bases;
};

LevelComplexes analyse(HyperLevel poset, int max_degree, const ComplexOptions& co) {
  SimplicialComplex k = order_complex(poset, co);
  std::vector<HomologyBasis> bases;
  for (int d = 0; d <= max_degree; ++d) bases.emplace_back(k, d);
  return {std::move(poset), std::move(k), std::move(bases)};
}

}  // namespace

HomologyReport shape_report(const MetricGround& ground, const AdjustedSequence& seq,
                            const ShapeOptions& options) {
  if (seq.depth() < 2) throw InvalidArgument("shape report needs at least two levels");
  if (options.max_degree < 0 || options.max_degree > 2)
    throw InvalidArgument("homology degree must lie in [0, 2]");
  if (options.window < 2) throw InvalidArgument("stabilization window must cover two levels");
  HyperLevelOptions ho;
  ho.cardinality_cap = options.cardinality_cap ? options.cardinality_cap
                                               : static_cast<std::size_t>(options.max_degree) + 2;
  ho.max_elements = options.max_elements;
  if (ho.cardinality_cap < static_cast<std::size_t>(options.max_degree) + 2)
    throw InvalidArgument("cardinality cap too small for the requested homology degree");
  ComplexOptions co;
  co.max_dim = options.max_degree + 1;
  co.max_simplices = options.max_simplices;

  HomologyReport rep;
  rep.window = options.window;
  std::vector<LevelComplexes> levels;
  for (const auto& lv : seq.levels) {
    levels.push_back(analyse(HyperLevel::build(ground, lv, ho), options.max_degree, co));
    const auto& lc = levels.back();
    LevelHomology lh;
    lh.n = lv.index;
    lh.epsilon = lv.epsilon;
    lh.net_size = lv.net.size();
    lh.elements = lc.poset.size();
    for (int d = 0; d <= co.max_dim; ++d) lh.simplex_counts.push_back(lc.complex.count(d));
    for (const auto& b : lc.bases) lh.betti.push_back(b.rank());
    if (options.cross_check_rips) lh.rips_betti = betti(rips_complex(ground, lv, co), options.max_degree);
    rep.levels.push_back(std::move(lh));
  }

  for (std::size_t f = 1; f < levels.size(); ++f) {
    const auto& fine = levels[f];
    const auto& coarse_base = levels[f - 1];
    const MultiMap p = bonding_map(ground, fine.poset, coarse_base.poset.level(), options.tie_tolerance);
    std::vector<PointSet> extra;
    for (const auto& img : p.images)
      if (!coarse_base.poset.find(img)) extra.push_back(img);
    PairHomology ph;
    ph.fine = fine.poset.level().index;
    ph.coarse = coarse_base.poset.level().index;
    std::optional<LevelComplexes> widened;
    if (!extra.empty()) {
      widened = analyse(coarse_base.poset.augmented(ground, extra), options.max_degree, co);
      ph.augmented_elements = widened->poset.size() - coarse_base.poset.size();
      // Elements above the cap cone off simply connected pieces, so low
      // degree homology must not move.
      for (int d = 0; d <= std::min(options.max_degree, 1); ++d)
        if (widened->bases[static_cast<std::size_t>(d)].rank() !=
            coarse_base.bases[static_cast<std::size_t>(d)].rank())
          throw InvariantViolation("augmenting level " + std::to_string(ph.coarse) +
                                   " changed its Betti numbers");
    }
    const LevelComplexes& coarse = widened ? *widened : coarse_base;
    const auto vmap = poset_vertex_map(p, fine.poset, coarse.poset);
    for (int d = 0; d <= options.max_degree; ++d) {
      const auto& bf = fine.bases[static_cast<std::size_t>(d)];
      const auto& bc = coarse.bases[static_cast<std::size_t>(d)];
      const std::size_t r =
          gf2_rank(induced_homology_matrix(fine.complex, bf, coarse.complex, bc, vmap));
      if (r > std::min(bf.rank(), bc.rank()))
        throw InvariantViolation("induced rank exceeds a Betti number");
      ph.ranks.push_back(r);
    }
    rep.pairs.push_back(std::move(ph));
  }

  const std::size_t depth = seq.depth();
  const std::size_t first_fine = depth >= options.window ? depth - options.window + 2 : 2;
  rep.stabilized.assign(static_cast<std::size_t>(options.max_degree) + 1, SIZE_MAX);
  for (const auto& ph : rep.pairs)
    if (static_cast<std::size_t>(ph.fine) >= first_fine)
      for (std::size_t d = 0; d < ph.ranks.size(); ++d)
        rep.stabilized[d] = std::min(rep.stabilized[d], ph.ranks[d]);
  return rep;
}

}  // namespace finiteshape
