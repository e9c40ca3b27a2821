#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "finiteshape/metric.hpp"

namespace finiteshape {

// Sorted list of ground point indices.
using PointSet = std::vector<PointIndex>;

// One stage of an adjusted approximative sequence: a finite net that is an
// epsilon-approximation of the ground, and its realized covering radius.
struct Level {
  int index = 1;
  double epsilon = 0.0;
  PointSet net;
  double gamma = 0.0;
};

enum class SequenceStatus {
  complete,           // every requested level was built
  stopped_at_density  // the next epsilon would not exceed 2 * density
};

std::string_view to_string(SequenceStatus status);

struct SequenceOptions {
  // The next epsilon is safety * (epsilon - gamma) / 2.
  double safety = 0.9;
  // Nets are built at radius net_ratio * epsilon. Values below 1 trade larger
  // nets for a slower decay of epsilon (and hence more usable levels).
  double net_ratio = 1.0;
};

struct AdjustedSequence {
  std::vector<Level> levels;
  double density = 0.0;
  std::size_t ground_size = 0;
  SequenceOptions options;
  SequenceStatus status = SequenceStatus::complete;

  std::size_t depth() const { return levels.size(); }
  // 1-based, as in the level indices.
  const Level& level(int n) const { return levels.at(static_cast<std::size_t>(n - 1)); }
};

// Greedy farthest-point net: starts at point 0, repeatedly adds the point
// farthest from the current net (lowest index on ties) until every ground
// point is strictly within epsilon. Returned sorted.
PointSet build_net(const MetricGround& ground, double epsilon);

// Max over ground points of the distance to the nearest net point.
double gamma(const MetricGround& ground, const PointSet& net);

// Distance from each ground point to the nearest net point.
std::vector<double> distance_to_net(const MetricGround& ground, const PointSet& net);

AdjustedSequence build_adjusted_sequence(const MetricGround& ground, double epsilon1, int depth,
                                         const SequenceOptions& options = {});

// One inequality check on an existing sequence (possibly read back from a
// file and edited), with its slack rhs - lhs. Strict checks pass iff the
// slack is positive; the gamma equality check passes at slack 0.
struct SequenceCheck {
  std::string name;
  int level = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool passed = false;
  double slack() const { return rhs - lhs; }
};

// Re-derives every construction condition from scratch: recorded gamma
// equals the recomputed one, gamma_n < epsilon_n, nets cover within
// epsilon_n, epsilons decrease, and epsilon_{n+1} < (epsilon_n - gamma_n)/2.
std::vector<SequenceCheck> check_sequence(const MetricGround& ground, const AdjustedSequence& seq);

}  // namespace finiteshape
