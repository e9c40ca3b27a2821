#include "finiteshape/homotopy.hpp"

#include <algorithm>

#include "finiteshape/error.hpp"
#include "finiteshape/parallel.hpp"

namespace finiteshape {

HomotopyWitness check_homotopic_in_U(const MetricGround& target, const MultiMap& f,
                                     const MultiMap& g, double bound, std::string name) {
  if (f.domain != g.domain || f.size() != g.size())
    throw InvalidArgument("homotopy check needs maps on a common domain");
  HomotopyWitness w;
  w.name = std::move(name);
  w.bound = bound;
  w.union_diameters.resize(f.size());
  parallel_for(f.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t x = begin; x < end; ++x)
      w.union_diameters[x] = target.diameter_of(set_union(f.images[x], g.images[x]));
  });
  for (std::size_t x = 0; x < f.size(); ++x)
    if (w.union_diameters[x] > w.max_union_diameter) {
      w.max_union_diameter = w.union_diameters[x];
      w.worst_item = x;
    }
  w.passed = w.max_union_diameter < bound;
  return w;
}

MultiMap singleton_map(const MetricGround& ground) {
  std::vector<PointSet> images(ground.size());
  for (std::size_t x = 0; x < ground.size(); ++x) images[x] = {static_cast<PointIndex>(x)};
  return make_multimap(ground, MapDomain::ground_points, std::move(images));
}

IdentityMorphismReport check_identity_morphism(const MetricGround& ground,
                                               const AdjustedSequence& seq,
                                               const std::vector<double>& extra_bounds,
                                               double tie_tolerance) {
  const int depth = static_cast<int>(seq.depth());
  if (depth < 1) throw InvalidArgument("sequence has no levels");
  std::vector<MultiMap> q;
  for (const auto& lv : seq.levels) q.push_back(nearest_point_map(ground, lv.net, tie_tolerance));
  const MultiMap id = singleton_map(ground);

  IdentityMorphismReport rep;
  // Union diameters do not depend on the bound, so compute them once.
  std::vector<double> consecutive_max, identity_max;
  for (int n = 1; n <= depth; ++n) {
    const double own = 2.0 * seq.level(n).epsilon;
    const auto k = static_cast<std::size_t>(n - 1);
    if (n < depth) {
      rep.consecutive.push_back(check_homotopic_in_U(
          ground, q[k], q[k + 1], own, "q_" + std::to_string(n) + " ~ q_" + std::to_string(n + 1)));
      consecutive_max.push_back(rep.consecutive.back().max_union_diameter);
      if (!rep.consecutive.back().passed)
        rep.violations.push_back("union of q_" + std::to_string(n) + " and q_" +
                                 std::to_string(n + 1) + " reaches 2*epsilon_" + std::to_string(n));
    }
    rep.identity.push_back(
        check_homotopic_in_U(ground, q[k], id, own, "q_" + std::to_string(n) + " ~ id"));
    identity_max.push_back(rep.identity.back().max_union_diameter);
    if (!rep.identity.back().passed)
      rep.violations.push_back("union of q_" + std::to_string(n) + " and x -> {x} reaches 2*epsilon_" +
                               std::to_string(n));
  }

  std::vector<double> schedule;
  for (const auto& lv : seq.levels) schedule.push_back(2.0 * lv.epsilon);
  schedule.insert(schedule.end(), extra_bounds.begin(), extra_bounds.end());

  // Smallest k such that witnesses k, k+1, ... up to the end of the prefix
  // all pass; size + 1 when the last one already fails.
  auto suffix_start = [](const std::vector<double>& maxima, double bound) {
    int start = static_cast<int>(maxima.size()) + 1;
    for (int k = static_cast<int>(maxima.size()); k >= 1; --k) {
      if (!(maxima[static_cast<std::size_t>(k - 1)] < bound)) break;
      start = k;
    }
    return start;
  };

  const double finest = 2.0 * seq.levels.back().epsilon;
  for (double bound : schedule) {
    BoundWitness bw;
    bw.bound = bound;
    const int id_start = suffix_start(identity_max, bound);
    if (id_start <= depth) bw.n0_identity = id_start;
    // Pairs (k, k+1) exist for k < depth; an empty suffix starting at depth
    // is accepted vacuously, but only down to the finest own bound.
    bw.n0_consecutive = suffix_start(consecutive_max, bound);
    bw.consecutive_vacuous = *bw.n0_consecutive == depth;
    if (bw.consecutive_vacuous && depth > 1 && bound < finest) bw.n0_consecutive.reset();
    if (!bw.n0_identity || !bw.n0_consecutive)
      rep.insufficient_depth.push_back("no n0 within " + std::to_string(depth) +
                                       " levels for bound " + std::to_string(bound));
    rep.bounds.push_back(bw);
  }
  return rep;
}

HomotopyWitness check_diagram_commutes(const MetricGround& ground, const AdjustedSequence& seq,
                                       int n, double tie_tolerance) {
  if (n < 1 || n + 1 > static_cast<int>(seq.depth()))
    throw InvalidArgument("diagram check needs levels n and n+1");
  const Level& coarse = seq.level(n);
  const Level& fine = seq.level(n + 1);
  const MultiMap q_coarse = nearest_point_map(ground, coarse.net, tie_tolerance);
  const MultiMap q_fine = nearest_point_map(ground, fine.net, tie_tolerance);
  std::vector<PointSet> around(ground.size());
  for (std::size_t x = 0; x < ground.size(); ++x)
    around[x] = push_forward(q_coarse, q_fine.images[x]);
  const MultiMap g = make_multimap(ground, MapDomain::ground_points, std::move(around));
  return check_homotopic_in_U(ground, q_coarse, g, 2.0 * coarse.epsilon,
                              "q_" + std::to_string(n) + " ~ p_{" + std::to_string(n) + "," +
                                  std::to_string(n + 1) + "} q_" + std::to_string(n + 1));
}

std::vector<double> ApproximativeMap::diameters() const {
  std::vector<double> d;
  for (const auto& t : terms) d.push_back(t.diameter);
  return d;
}

bool ApproximativeMap::diameters_non_increasing() const {
  for (std::size_t i = 1; i < terms.size(); ++i)
    if (terms[i].diameter > terms[i - 1].diameter) return false;
  return true;
}

ApproximativeMap make_approximative_map(const MetricGround& source, const MetricGround& target,
                                        std::vector<MultiMap> terms) {
  for (const auto& t : terms) {
    if (t.domain != MapDomain::ground_points || t.size() != source.size())
      throw InvalidArgument("approximative map terms must be defined on every source point");
    for (const auto& img : t.images)
      for (PointIndex y : img)
        if (y >= target.size()) throw InvalidArgument("image point outside the target ground");
  }
  ApproximativeMap f{&source, &target, std::move(terms)};
  if (!f.diameters_non_increasing())
    throw InvalidArgument("approximative map diameters must be non-increasing");
  return f;
}

ApproximativeMap finite_type_convert(const ApproximativeMap& f, const std::vector<double>& betas,
                                     const std::vector<PointSet>& nets, double tie_tolerance) {
  if (betas.size() != f.terms.size() || nets.size() != f.terms.size())
    throw InvalidArgument("need one beta and one net per stored term");
  const MetricGround& target = *f.target;
  for (std::size_t n = 0; n < betas.size(); ++n) {
    if (!(betas[n] > 0.0)) throw InvalidArgument("betas must be positive");
    if (n > 0 && !(betas[n] < betas[n - 1])) throw InvalidArgument("betas must decrease");
    const double g = gamma(target, nets[n]);
    if (!(g < betas[n]))
      throw InvalidArgument("net " + std::to_string(n + 1) + " is not beta-dense: covering radius " +
                            std::to_string(g) + " >= " + std::to_string(betas[n]));
  }
  std::vector<MultiMap> terms;
  for (std::size_t n = 0; n < f.terms.size(); ++n) {
    const MultiMap q = nearest_point_map(target, nets[n], tie_tolerance);
    std::vector<PointSet> images(f.terms[n].size());
    for (std::size_t x = 0; x < images.size(); ++x) images[x] = push_forward(q, f.terms[n].images[x]);
    terms.push_back(make_multimap(target, MapDomain::ground_points, std::move(images)));
  }
  // The converted diameters need not be monotone, so skip that check here.
  return ApproximativeMap{f.source, f.target, std::move(terms)};
}

std::vector<FiniteTypeBound> check_finite_type(const ApproximativeMap& f,
                                               const ApproximativeMap& converted,
                                               const std::vector<double>& betas,
                                               const std::vector<PointSet>& nets) {
  std::vector<FiniteTypeBound> out;
  for (std::size_t n = 0; n < f.terms.size(); ++n) {
    FiniteTypeBound b;
    b.n = static_cast<int>(n + 1);
    b.beta = betas.at(n);
    b.source_diameter = f.terms[n].diameter;
    b.images_in_net = true;
    for (const auto& img : converted.terms.at(n).images) {
      b.converted_diameter = std::max(b.converted_diameter, f.target->diameter_of(img));
      if (!std::includes(nets[n].begin(), nets[n].end(), img.begin(), img.end()))
        b.images_in_net = false;
    }
    out.push_back(b);
  }
  return out;
}

}  // namespace finiteshape
