#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "finiteshape/construction.hpp"
#include "finiteshape/metric.hpp"

namespace finiteshape {

using ElementId = std::uint32_t;

struct PointSetHash {
  std::size_t operator()(const PointSet& s) const noexcept;
};

struct HyperLevelOptions {
  // Largest subset cardinality enumerated. Homology in degree k needs
  // cardinality k + 2.
  std::size_t cardinality_cap = 4;
  std::size_t max_elements = 5'000'000;
};

// The finite poset U_{2 eps}(A): non-empty subsets of the net with diameter
// strictly below 2 * epsilon, ordered by inclusion. On a finite set the upper
// semifinite topology has exactly the down-sets of this order as open sets.
//
// Elements are numbered by (cardinality, lexicographic members), so a strict
// subset always has a smaller id. Enumeration stops at the cardinality cap;
// the base part is down-closed. `augmented` may append larger elements (for
// instance images of a bonding map) above the cap.
class HyperLevel {
 public:
  static HyperLevel build(const MetricGround& ground, const Level& level,
                          const HyperLevelOptions& options = {});

  const Level& level() const { return level_; }
  double epsilon() const { return level_.epsilon; }
  double bound() const { return 2.0 * level_.epsilon; }
  std::size_t cardinality_cap() const { return cap_; }

  std::size_t size() const { return elements_.size(); }
  // Number of elements enumerated under the cap (the rest were appended).
  std::size_t base_size() const { return base_size_; }
  const PointSet& element(ElementId id) const { return elements_[id]; }
  const std::vector<PointSet>& elements() const { return elements_; }
  double diameter(ElementId id) const { return diameters_[id]; }

  std::optional<ElementId> find(const PointSet& members) const;
  // a is a subset of b.
  bool leq(ElementId a, ElementId b) const;
  // Every element strictly below id, ascending.
  std::vector<ElementId> strict_subsets(ElementId id) const;
  // Maximal elements strictly below id.
  std::vector<ElementId> lower_covers(ElementId id) const;
  // All (C, D) with D covering C.
  std::vector<std::pair<ElementId, ElementId>> covering_pairs() const;

  // Copy with the given subsets added (duplicates and existing members are
  // ignored). Each must be a subset of the net with diameter < bound() and
  // cardinality above the cap.
  HyperLevel augmented(const MetricGround& ground, const std::vector<PointSet>& extra) const;

 private:
  Level level_;
  std::size_t cap_ = 0;
  std::size_t base_size_ = 0;
  std::vector<PointSet> elements_;
  std::vector<double> diameters_;
  std::unordered_map<PointSet, ElementId, PointSetHash> index_;
};

enum class MapDomain { ground_points, elements };

// A multivalued map: one non-empty image per domain item, each a sorted set
// of ground indices, plus the largest image diameter.
struct MultiMap {
  MapDomain domain = MapDomain::ground_points;
  std::vector<PointSet> images;
  double diameter = 0.0;

  std::size_t size() const { return images.size(); }
};

// Builds a MultiMap and records its diameter. Throws on an empty image.
MultiMap make_multimap(const MetricGround& ground, MapDomain domain, std::vector<PointSet> images);

// Sorted union of two sorted sets.
PointSet set_union(const PointSet& a, const PointSet& b);

// Tie tolerance for nearest points: a counts as nearest to x when
// d(x, a) <= d(x, A) * (1 + tie_tolerance).
inline constexpr double kDefaultTieTolerance = 1e-9;

PointSet nearest_points(const MetricGround& ground, const PointSet& net, PointIndex x,
                        double tie_tolerance = kDefaultTieTolerance);

// q_A over every ground point.
MultiMap nearest_point_map(const MetricGround& ground, const PointSet& net,
                           double tie_tolerance = kDefaultTieTolerance);

// Union of q_A(a) over a in members, using a precomputed q_A.
PointSet push_forward(const MultiMap& nearest, const PointSet& members);

// p_{n,n+1}: C -> union of q_{A_n}(a), a in C, for every element of `fine`.
// Throws InvariantViolation if an image reaches diameter 2 * epsilon_n.
MultiMap bonding_map(const MetricGround& ground, const HyperLevel& fine, const Level& coarse,
                     double tie_tolerance = kDefaultTieTolerance);

// p_{n,m} evaluated element-wise on `fine` (level m). `chain` holds levels
// n, n+1, ..., m-1 in that order. Every intermediate image is checked against
// its own level's bound.
MultiMap composite_bonding(const MetricGround& ground, const std::vector<Level>& chain,
                           const HyperLevel& fine, double tie_tolerance = kDefaultTieTolerance);

// Looks up every image of `map` in `target`; nullopt for images that are
// not elements.
std::vector<std::optional<ElementId>> image_ids(const MultiMap& map, const HyperLevel& target);

struct ContinuityResult {
  bool continuous = true;
  std::size_t pairs_checked = 0;
  // A pair C <= D with image(C) not contained in image(D).
  std::optional<std::pair<ElementId, ElementId>> violation;
};

// Continuity between finite posets with the upper semifinite topology is
// monotonicity; checks every comparable pair of the domain.
ContinuityResult is_continuous(const MultiMap& map, const HyperLevel& domain);

struct DistanceClause {
  std::string name;
  std::size_t instances = 0;
  std::size_t violations = 0;
  double worst_slack = INFINITY;   // min over instances of epsilon_n - distance
  double worst_ratio = 0.0;        // max over instances of distance / epsilon_n
  // Failures restricted to level pairs with m > n + 1.
  std::size_t nonconsecutive_instances = 0;
  std::size_t nonconsecutive_violations = 0;
  std::string first_violation;
  bool passed() const { return violations == 0; }
};

struct DistanceBoundsReport {
  DistanceClause nearest_pairs;    // a_n in q_n(x), a_m in q_m(x)   => d(a_n, a_m) < eps_n
  DistanceClause bonded_points;    // a_n in p_{n,m}({a_m})           => d(a_n, a_m) < eps_n
  DistanceClause bonded_nearest;   // a_n in p_{n,m}(q_m(x))          => d(a_n, x)   < eps_n
  bool passed() const {
    return nearest_pairs.passed() && bonded_points.passed() && bonded_nearest.passed();
  }
};

// Exhaustive check of the three distance clauses over every ground point,
// every level pair n < m and every witness.
DistanceBoundsReport verify_distance_bounds(const MetricGround& ground, const AdjustedSequence& seq,
                           double tie_tolerance = kDefaultTieTolerance);

}  // namespace finiteshape
