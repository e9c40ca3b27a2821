#include "finiteshape/construction.hpp"

#include <algorithm>
#include <cmath>

#include "finiteshape/error.hpp"
#include "finiteshape/parallel.hpp"

namespace finiteshape {

std::string_view to_string(SequenceStatus status) {
  return status == SequenceStatus::complete ? "complete" : "stopped_at_density";
}

PointSet build_net(const MetricGround& ground, double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  const std::size_t n = ground.size();
  std::vector<double> nearest(n, INFINITY);
  PointSet net;
  PointIndex next = 0;
  while (true) {
    net.push_back(next);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i)
        nearest[i] = std::min(nearest[i], ground.dist(next, static_cast<PointIndex>(i)));
    });
    // max_element returns the first maximum: lowest index on ties.
    const auto far = std::max_element(nearest.begin(), nearest.end());
    if (*far < epsilon) break;
    next = static_cast<PointIndex>(far - nearest.begin());
  }
  std::sort(net.begin(), net.end());
  return net;
}

std::vector<double> distance_to_net(const MetricGround& ground, const PointSet& net) {
  if (net.empty()) throw InvalidArgument("net must be non-empty");
  std::vector<double> out(ground.size(), INFINITY);
  parallel_for(ground.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      for (PointIndex a : net) out[i] = std::min(out[i], ground.dist(static_cast<PointIndex>(i), a));
  });
  return out;
}

double gamma(const MetricGround& ground, const PointSet& net) {
  const auto d = distance_to_net(ground, net);
  return *std::max_element(d.begin(), d.end());
}

AdjustedSequence build_adjusted_sequence(const MetricGround& ground, double epsilon1, int depth,
                                         const SequenceOptions& options) {
  if (depth < 1) throw InvalidArgument("depth must be at least 1");
  if (!(options.safety > 0.0 && options.safety < 1.0))
    throw InvalidArgument("safety must lie in (0, 1)");
  if (!(options.net_ratio > 0.0 && options.net_ratio <= 1.0))
    throw InvalidArgument("net ratio must lie in (0, 1]");
  if (!(epsilon1 > 2.0 * ground.density()))
    throw InvalidArgument("epsilon1 = " + std::to_string(epsilon1) +
                          " must exceed twice the ground density " +
                          std::to_string(ground.density()));

  AdjustedSequence seq;
  seq.density = ground.density();
  seq.ground_size = ground.size();
  seq.options = options;
  double epsilon = epsilon1;
  for (int n = 1; n <= depth; ++n) {
    Level level;
    level.index = n;
    level.epsilon = epsilon;
    level.net = build_net(ground, options.net_ratio * epsilon);
    level.gamma = gamma(ground, level.net);
    if (!(level.gamma < level.epsilon))
      throw InvariantViolation("gamma_" + std::to_string(n) + " not below epsilon_" +
                               std::to_string(n));
    seq.levels.push_back(std::move(level));
    if (n == depth) break;
    const Level& last = seq.levels.back();
    const double next = options.safety * (last.epsilon - last.gamma) / 2.0;
    if (next <= 2.0 * ground.density()) {
      seq.status = SequenceStatus::stopped_at_density;
      break;
    }
    epsilon = next;
  }
  return seq;
}

std::vector<SequenceCheck> check_sequence(const MetricGround& ground, const AdjustedSequence& seq) {
  std::vector<SequenceCheck> out;
  for (std::size_t k = 0; k < seq.levels.size(); ++k) {
    const Level& lv = seq.levels[k];
    for (PointIndex a : lv.net)
      if (a >= ground.size())
        throw InvalidArgument("net of level " + std::to_string(lv.index) +
                              " references point " + std::to_string(a) + " outside the ground");
    const double g = lv.net.empty() ? INFINITY : gamma(ground, lv.net);
    out.push_back({"recorded gamma_n equals recomputed gamma_n", lv.index, std::abs(g - lv.gamma),
                   0.0, g == lv.gamma});
    out.push_back({"gamma_n < epsilon_n", lv.index, g, lv.epsilon, g < lv.epsilon});
    if (k + 1 < seq.levels.size()) {
      const Level& nx = seq.levels[k + 1];
      out.push_back({"epsilon_{n+1} < epsilon_n", lv.index, nx.epsilon, lv.epsilon,
                     nx.epsilon < lv.epsilon});
      const double bound = (lv.epsilon - g) / 2.0;
      out.push_back({"epsilon_{n+1} < (epsilon_n - gamma_n)/2", lv.index, nx.epsilon, bound,
                     nx.epsilon < bound});
    }
  }
  return out;
}

}  // namespace finiteshape
