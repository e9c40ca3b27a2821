#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "finiteshape/construction.hpp"
#include "finiteshape/hyperspace.hpp"
#include "finiteshape/metric.hpp"

namespace finiteshape {

using VertexId = std::uint32_t;
using SimplexIndex = std::uint32_t;
// A chain over the two-element field: sorted indices of the simplices with
// coefficient 1.
using Chain = std::vector<SimplexIndex>;

// Simplicial complex stored per dimension up to `max_dim` (at most 3).
// Simplices are sorted vertex tuples; `truncated` records whether the
// underlying complex has simplices above `max_dim` that were not stored.
class SimplicialComplex {
 public:
  static constexpr int kMaxSupportedDim = 3;

  SimplicialComplex(std::size_t vertex_count, int max_dim);

  // Appends a simplex; the caller guarantees faces come first or are added
  // before boundaries are requested. Returns its index in its dimension.
  SimplexIndex add(std::span<const VertexId> vertices);
  void set_truncated(bool t) { truncated_ = t; }

  std::size_t vertex_count() const { return vertex_count_; }
  int max_dim() const { return max_dim_; }
  bool truncated() const { return truncated_; }
  std::size_t count(int dim) const;
  std::span<const VertexId> simplex(int dim, SimplexIndex i) const;
  std::optional<SimplexIndex> find(std::span<const VertexId> vertices) const;
  // Facet indices (dimension dim - 1) of simplex i, ascending.
  Chain boundary(int dim, SimplexIndex i) const;
  // Alternating sum of simplex counts over the stored dimensions.
  long long euler_characteristic() const;
  // Throws InvariantViolation if a stored simplex has a missing facet.
  void check_face_closed() const;

 private:
  struct Key {
    std::uint64_t lo = 0, hi = 0;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      return std::hash<std::uint64_t>{}(k.lo * 0x9e3779b97f4a7c15ULL ^ k.hi);
    }
  };
  static Key make_key(std::span<const VertexId> v);

  std::size_t vertex_count_;
  int max_dim_;
  bool truncated_ = false;
  std::vector<std::vector<VertexId>> flat_;  // per dim, stride dim + 1
  std::vector<std::unordered_map<Key, SimplexIndex, KeyHash>> index_;
};

struct ComplexOptions {
  // Highest simplex dimension to build; homology is exact below it.
  int max_dim = 2;
  std::size_t max_simplices = 30'000'000;
};

// Chains C_0 < C_1 < ... < C_k of the poset as k-simplices (vertex = element
// id). For a down-closed family of simplices this is its barycentric
// subdivision.
SimplicialComplex order_complex(const HyperLevel& poset, const ComplexOptions& options = {});

// Subsets of the net with diameter below 2 * epsilon. Vertex i is the i-th
// net point (in sorted order).
SimplicialComplex rips_complex(const MetricGround& ground, const Level& level,
                               const ComplexOptions& options = {});

// Betti numbers over the two-element field in degrees 0..max_degree.
// Degree k needs (k+1)-simplices unless the complex is not truncated and k
// is its top stored dimension.
std::vector<std::size_t> betti(const SimplicialComplex& complex, int max_degree);

// A basis of H_k(K) with a way to express any k-cycle in it.
//
// The k-simplices are put in a total order; for k = 1 the edges of a
// spanning forest come first, so the boundary columns reduced against that
// order have their pivots on non-forest edges and the remaining non-forest
// edges each carry one homology class (represented by its fundamental
// cycle). Other degrees use the standard column reduction with the
// reduction matrix tracked.
class HomologyBasis {
 public:
  HomologyBasis(const SimplicialComplex& complex, int degree);

  int degree() const { return degree_; }
  std::size_t rank() const { return classes_.size(); }
  std::size_t boundary_rank() const { return boundary_rank_; }
  // Cycle representative of class i, in complex indices.
  Chain representative(std::size_t i) const;
  // Coordinates of the class of `cycle` (complex indices). Throws
  // InvalidArgument if the chain is not a cycle.
  std::vector<std::uint8_t> coordinates(const Chain& cycle) const;

 private:
  using Column = std::vector<std::uint32_t>;  // ascending, in order positions
  void reduce_boundaries(const SimplicialComplex& complex);
  Column to_order(const Chain& chain) const;
  Chain from_order(const Column& col) const;
  Column fundamental_cycle(std::uint32_t pos) const;

  int degree_;
  std::vector<std::uint32_t> order_of_;   // simplex index -> order position
  std::vector<SimplexIndex> simplex_at_;  // order position -> simplex index
  std::vector<Column> reduced_;           // reduced boundary columns
  std::vector<std::int64_t> pivot_;       // order position -> reduced column or -1
  std::size_t boundary_rank_ = 0;
  std::vector<std::uint32_t> classes_;    // order positions carrying a class
  std::vector<std::int64_t> class_of_;    // order position -> class or -1
  // Cycle representatives by order position, for degrees other than 1.
  std::unordered_map<std::uint32_t, Column> cycles_;
  // Spanning forest for degree 1.
  std::vector<std::int64_t> parent_edge_;  // vertex -> forest edge to parent, -1 at roots
  std::vector<VertexId> parent_;
  std::vector<std::uint32_t> depth_;
  std::vector<VertexId> endpoints_;  // two per edge, degree 1 only
};

// Image of a k-chain under the simplicial map given by a vertex map.
// Simplices whose image repeats a vertex are dropped (they are degenerate).
// Throws InvariantViolation if an image is not a simplex of `to`.
Chain push_chain(const SimplicialComplex& from, const SimplicialComplex& to,
                 std::span<const VertexId> vertex_image, int dim, const Chain& chain);

// Matrix of the chain map in degree dim: column j is the image of simplex j.
std::vector<Chain> chain_map_matrix(const SimplicialComplex& from, const SimplicialComplex& to,
                                    std::span<const VertexId> vertex_image, int dim);

// Product of chain map matrices over the two-element field: (outer o inner).
std::vector<Chain> compose(const std::vector<Chain>& outer, const std::vector<Chain>& inner);

// Matrix of the induced map H_k(from) -> H_k(to) in the two bases; entry
// [i][j] is the coordinate of class j of `to` in the image of class i.
std::vector<std::vector<std::uint8_t>> induced_homology_matrix(
    const SimplicialComplex& from, const HomologyBasis& from_basis, const SimplicialComplex& to,
    const HomologyBasis& to_basis, std::span<const VertexId> vertex_image);

std::size_t gf2_rank(std::vector<std::vector<std::uint8_t>> rows);

// Element-wise vertex map for the order complexes of a monotone poset map.
// Throws InvalidArgument if the map is not monotone (not continuous) or an
// image is missing from `target`.
std::vector<VertexId> poset_vertex_map(const MultiMap& map, const HyperLevel& domain,
                                       const HyperLevel& target);

// Rank of H_k(fine) -> H_k(coarse) induced by a bonding map on order
// complexes. `coarse` must contain every image (see HyperLevel::augmented).
std::size_t induced_homology_rank(const MultiMap& bonding, const HyperLevel& fine,
                                  const HyperLevel& coarse, int degree,
                                  const ComplexOptions& options = {});

struct ShapeOptions {
  int max_degree = 1;
  // Subsets enumerated per level; 0 means max_degree + 2.
  std::size_t cardinality_cap = 0;
  std::size_t window = 2;
  double tie_tolerance = kDefaultTieTolerance;
  bool cross_check_rips = true;
  std::size_t max_elements = 5'000'000;
  std::size_t max_simplices = 30'000'000;
};

struct LevelHomology {
  int n = 0;
  double epsilon = 0.0;
  std::size_t net_size = 0;
  std::size_t elements = 0;
  std::vector<std::size_t> simplex_counts;
  std::vector<std::size_t> betti;       // order complex
  std::vector<std::size_t> rips_betti;  // empty unless cross-checked
};

struct PairHomology {
  int fine = 0;    // n + 1
  int coarse = 0;  // n
  std::size_t augmented_elements = 0;  // images above the cardinality cap
  std::vector<std::size_t> ranks;      // per degree
};

struct HomologyReport {
  std::vector<LevelHomology> levels;
  std::vector<PairHomology> pairs;
  std::size_t window = 2;
  // Minimum induced rank per degree over the pairs inside the trailing
  // window of levels.
  std::vector<std::size_t> stabilized;
};

HomologyReport shape_report(const MetricGround& ground, const AdjustedSequence& seq,
                            const ShapeOptions& options = {});

}  // namespace finiteshape
