#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "finiteshape/construction.hpp"
#include "finiteshape/hyperspace.hpp"
#include "finiteshape/metric.hpp"

namespace finiteshape {

// Certificate for a homotopy f ~ g inside the basic neighbourhood
// U_bound = {C : diam(C) < bound}. Every homotopy used here has the shape
// H = f on [0, 1/2), f u g at 1/2, g on (1/2, 1], which is continuous into
// the upper semifinite hyperspace whenever f and g are; it stays inside
// U_bound iff every union f(x) u g(x) has diameter below the bound.
struct HomotopyWitness {
  std::string name;
  double bound = 0.0;
  std::vector<double> union_diameters;
  double max_union_diameter = 0.0;
  std::size_t worst_item = 0;
  bool passed = false;

  double slack() const { return bound - max_union_diameter; }
};

HomotopyWitness check_homotopic_in_U(const MetricGround& target, const MultiMap& f,
                                     const MultiMap& g, double bound, std::string name = {});

// x -> {x}, the canonical copy of the ground in its hyperspace.
MultiMap singleton_map(const MetricGround& ground);

struct BoundWitness {
  double bound = 0.0;
  // Smallest n such that every witness from n to the end of the stored
  // prefix passes; nullopt when even the last one fails.
  std::optional<int> n0_consecutive;  // q_{A_k} ~ q_{A_{k+1}}
  std::optional<int> n0_identity;     // q_{A_k} ~ (x -> {x})
  // The consecutive condition has no pair to test at the last level.
  bool consecutive_vacuous = false;
};

struct IdentityMorphismReport {
  std::vector<BoundWitness> bounds;
  // Per level n: witnesses at the level's own bound 2 * epsilon_n. A failure
  // here is a violation of the construction, not a lack of depth.
  std::vector<HomotopyWitness> consecutive;  // n = 1 .. depth-1
  std::vector<HomotopyWitness> identity;     // n = 1 .. depth
  std::vector<std::string> violations;
  std::vector<std::string> insufficient_depth;

  bool passed() const { return violations.empty() && insufficient_depth.empty(); }
};

// Checks that the nearest-point maps form an approximative map homotopic to
// x -> {x}. The bound schedule is {2 epsilon_n} followed by `extra_bounds`.
IdentityMorphismReport check_identity_morphism(const MetricGround& ground,
                                               const AdjustedSequence& seq,
                                               const std::vector<double>& extra_bounds = {},
                                               double tie_tolerance = kDefaultTieTolerance);

// Witness that q_{A_n} and p_{n,n+1} o q_{A_{n+1}} are homotopic inside
// U_{2 epsilon_n}(A_n). `n` is 1-based.
HomotopyWitness check_diagram_commutes(const MetricGround& ground, const AdjustedSequence& seq,
                                       int n, double tie_tolerance = kDefaultTieTolerance);

// A finite stored prefix f_1, f_2, ... of an approximative map between two
// grounds. Images are subsets of the target ground.
struct ApproximativeMap {
  const MetricGround* source = nullptr;
  const MetricGround* target = nullptr;
  std::vector<MultiMap> terms;

  std::vector<double> diameters() const;
  // D_n non-increasing over the stored prefix.
  bool diameters_non_increasing() const;
};

ApproximativeMap make_approximative_map(const MetricGround& source, const MetricGround& target,
                                        std::vector<MultiMap> terms);

// Replaces every image by the nearest points of a finite net: each term
// becomes y-images pushed through q_{B_n}. Nets must be beta_n-dense in the
// target and betas strictly decreasing and positive.
ApproximativeMap finite_type_convert(const ApproximativeMap& f, const std::vector<double>& betas,
                                     const std::vector<PointSet>& nets,
                                     double tie_tolerance = kDefaultTieTolerance);

struct FiniteTypeBound {
  int n = 0;
  double beta = 0.0;
  double source_diameter = 0.0;     // D_n
  double converted_diameter = 0.0;  // diam of the converted term
  bool images_in_net = false;
  bool passed() const { return images_in_net && converted_diameter < 2.0 * beta + source_diameter; }
};

// Recomputes diam(converted_n) < 2 beta_n + D_n and image containment in
// B_n for every stored index.
std::vector<FiniteTypeBound> check_finite_type(const ApproximativeMap& f,
                                               const ApproximativeMap& converted,
                                               const std::vector<double>& betas,
                                               const std::vector<PointSet>& nets);

}  // namespace finiteshape
