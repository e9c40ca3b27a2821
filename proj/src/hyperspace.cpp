#include "finiteshape/hyperspace.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "finiteshape/error.hpp"
#include "finiteshape/parallel.hpp"

namespace finiteshape {

std::size_t PointSetHash::operator()(const PointSet& s) const noexcept {
  std::size_t h = s.size();
  for (PointIndex v : s) h ^= std::hash<PointIndex>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

namespace {

bool element_order(const PointSet& a, const PointSet& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

std::string show(const PointSet& s) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << '}';
  return os.str();
}

// Calls fn on every subset of `members` with 1..max_card elements.
void for_each_small_subset(const PointSet& members, std::size_t max_card,
                           const std::function<void(const PointSet&)>& fn) {
  PointSet current;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (!current.empty()) fn(current);
    if (current.size() == max_card) return;
    for (std::size_t i = start; i < members.size(); ++i) {
      current.push_back(members[i]);
      rec(i + 1);
      current.pop_back();
    }
  };
  rec(0);
}

}  // namespace

HyperLevel HyperLevel::build(const MetricGround& ground, const Level& level,
                             const HyperLevelOptions& options) {
  if (level.net.empty()) throw InvalidArgument("level has an empty net");
  if (options.cardinality_cap < 1) throw InvalidArgument("cardinality cap must be at least 1");
  HyperLevel h;
  h.level_ = level;
  h.cap_ = options.cardinality_cap;
  const double bound = 2.0 * level.epsilon;
  const auto& net = level.net;
  const std::size_t m = net.size();

  // Forward neighbourhoods within the net, by position.
  std::vector<std::vector<std::uint32_t>> higher(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (ground.dist(net[i], net[j]) < bound) higher[i].push_back(static_cast<std::uint32_t>(j));

  // Clique extension, one cardinality at a time so overflow reports the
  // cardinality being enumerated.
  std::vector<std::vector<std::uint32_t>> frontier;
  for (std::uint32_t i = 0; i < m; ++i) frontier.push_back({i});
  std::vector<PointSet> all;
  std::size_t card = 1;
  while (!frontier.empty()) {
    for (const auto& pos : frontier) {
      PointSet s;
      s.reserve(pos.size());
      for (auto p : pos) s.push_back(net[p]);
      all.push_back(std::move(s));
      if (all.size() > options.max_elements)
        throw CapacityError("hyperlevel " + std::to_string(level.index) + ": more than " +
                            std::to_string(options.max_elements) +
                            " elements while enumerating cardinality " + std::to_string(card));
    }
    if (card == options.cardinality_cap) break;
    std::vector<std::vector<std::uint32_t>> next;
    for (const auto& pos : frontier) {
      for (auto cand : higher[pos.back()]) {
        bool ok = true;
        for (std::size_t t = 0; t + 1 < pos.size() && ok; ++t)
          ok = ground.dist(net[pos[t]], net[cand]) < bound;
        if (!ok) continue;
        auto ext = pos;
        ext.push_back(cand);
        next.push_back(std::move(ext));
      }
    }
    frontier = std::move(next);
    ++card;
  }
  std::sort(all.begin(), all.end(), element_order);
  h.elements_ = std::move(all);
  h.base_size_ = h.elements_.size();
  h.diameters_.resize(h.elements_.size());
  h.index_.reserve(h.elements_.size());
  for (std::size_t i = 0; i < h.elements_.size(); ++i) {
    h.diameters_[i] = ground.diameter_of(h.elements_[i]);
    h.index_.emplace(h.elements_[i], static_cast<ElementId>(i));
  }
  return h;
}

HyperLevel HyperLevel::augmented(const MetricGround& ground,
                                 const std::vector<PointSet>& extra) const {
  std::vector<PointSet> fresh;
  for (const auto& s : extra) {
    if (index_.count(s)) continue;
    if (s.size() <= cap_)
      throw InvalidArgument("augmenting element " + show(s) +
                            " is under the cardinality cap but missing from the level");
    for (PointIndex a : s)
      if (!std::binary_search(level_.net.begin(), level_.net.end(), a))
        throw InvalidArgument("augmenting element " + show(s) + " leaves the net");
    if (!(ground.diameter_of(s) < bound()))
      throw InvariantViolation("augmenting element " + show(s) + " has diameter >= 2*epsilon_" +
                               std::to_string(level_.index));
    fresh.push_back(s);
  }
  std::sort(fresh.begin(), fresh.end(), element_order);
  fresh.erase(std::unique(fresh.begin(), fresh.end()), fresh.end());
  HyperLevel out = *this;
  for (auto& s : fresh) {
    const auto id = static_cast<ElementId>(out.elements_.size());
    out.diameters_.push_back(ground.diameter_of(s));
    out.index_.emplace(s, id);
    out.elements_.push_back(std::move(s));
  }
  return out;
}

std::optional<ElementId> HyperLevel::find(const PointSet& members) const {
  const auto it = index_.find(members);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool HyperLevel::leq(ElementId a, ElementId b) const {
  const auto& x = elements_[a];
  const auto& y = elements_[b];
  return x.size() <= y.size() && std::includes(y.begin(), y.end(), x.begin(), x.end());
}

std::vector<ElementId> HyperLevel::strict_subsets(ElementId id) const {
  const auto& members = elements_[id];
  std::vector<ElementId> out;
  const std::size_t small = std::min(cap_, members.size() - 1);
  for_each_small_subset(members, small, [&](const PointSet& s) {
    if (const auto f = find(s)) out.push_back(*f);
  });
  for (std::size_t other = base_size_; other < elements_.size(); ++other)
    if (other != id && elements_[other].size() < members.size() &&
        leq(static_cast<ElementId>(other), id))
      out.push_back(static_cast<ElementId>(other));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ElementId> HyperLevel::lower_covers(ElementId id) const {
  const auto& members = elements_[id];
  std::vector<ElementId> out;
  if (id < base_size_) {
    // Down-closed under the cap: the covers are the one-smaller subsets.
    if (members.size() == 1) return out;
    for (std::size_t skip = 0; skip < members.size(); ++skip) {
      PointSet s;
      for (std::size_t i = 0; i < members.size(); ++i)
        if (i != skip) s.push_back(members[i]);
      out.push_back(*find(s));
    }
    std::sort(out.begin(), out.end());
    return out;
  }
  const auto below = strict_subsets(id);
  for (ElementId c : below) {
    bool maximal = true;
    for (ElementId d : below)
      if (d != c && elements_[d].size() > elements_[c].size() && leq(c, d)) {
        maximal = false;
        break;
      }
    if (maximal) out.push_back(c);
  }
  return out;
}

std::vector<std::pair<ElementId, ElementId>> HyperLevel::covering_pairs() const {
  std::vector<std::pair<ElementId, ElementId>> out;
  for (std::size_t d = 0; d < elements_.size(); ++d)
    for (ElementId c : lower_covers(static_cast<ElementId>(d)))
      out.emplace_back(c, static_cast<ElementId>(d));
  return out;
}

MultiMap make_multimap(const MetricGround& ground, MapDomain domain, std::vector<PointSet> images) {
  MultiMap m;
  m.domain = domain;
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (images[i].empty())
      throw InvalidArgument("multivalued map has an empty image at item " + std::to_string(i));
    m.diameter = std::max(m.diameter, ground.diameter_of(images[i]));
  }
  m.images = std::move(images);
  return m;
}

PointSet set_union(const PointSet& a, const PointSet& b) {
  PointSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

PointSet nearest_points(const MetricGround& ground, const PointSet& net, PointIndex x,
                        double tie_tolerance) {
  if (net.empty()) throw InvalidArgument("net must be non-empty");
  double best = INFINITY;
  for (PointIndex a : net) best = std::min(best, ground.dist(x, a));
  const double cut = best * (1.0 + tie_tolerance);
  PointSet out;
  for (PointIndex a : net)
    if (ground.dist(x, a) <= cut) out.push_back(a);
  return out;
}

MultiMap nearest_point_map(const MetricGround& ground, const PointSet& net, double tie_tolerance) {
  if (net.empty()) throw InvalidArgument("net must be non-empty");
  std::vector<PointSet> images(ground.size());
  parallel_for(ground.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t x = begin; x < end; ++x)
      images[x] = nearest_points(ground, net, static_cast<PointIndex>(x), tie_tolerance);
  });
  return make_multimap(ground, MapDomain::ground_points, std::move(images));
}

PointSet push_forward(const MultiMap& nearest, const PointSet& members) {
  PointSet out;
  for (PointIndex a : members) out = set_union(out, nearest.images.at(a));
  return out;
}

namespace {

void require_below(const MetricGround& ground, const PointSet& image, const Level& coarse,
                   const PointSet& source) {
  const double d = ground.diameter_of(image);
  if (!(d < 2.0 * coarse.epsilon)) {
    std::ostringstream os;
    os.precision(17);
    os << "bonding image " << show(image) << " of " << show(source) << " has diameter " << d
       << " >= 2*epsilon_" << coarse.index << " = " << 2.0 * coarse.epsilon;
    throw InvariantViolation(os.str());
  }
}

}  // namespace

MultiMap bonding_map(const MetricGround& ground, const HyperLevel& fine, const Level& coarse,
                     double tie_tolerance) {
  return composite_bonding(ground, {coarse}, fine, tie_tolerance);
}

MultiMap composite_bonding(const MetricGround& ground, const std::vector<Level>& chain,
                           const HyperLevel& fine, double tie_tolerance) {
  if (chain.empty()) throw InvalidArgument("composite bonding needs at least one coarse level");
  for (std::size_t k = 0; k + 1 < chain.size(); ++k)
    if (chain[k + 1].index != chain[k].index + 1)
      throw InvalidArgument("composite bonding needs consecutive levels");
  if (chain.back().index + 1 != fine.level().index)
    throw InvalidArgument("bonding map needs consecutive levels: got " +
                          std::to_string(fine.level().index) + " -> " +
                          std::to_string(chain.back().index));
  std::vector<MultiMap> nearest;
  nearest.reserve(chain.size());
  for (const auto& lv : chain) nearest.push_back(nearest_point_map(ground, lv.net, tie_tolerance));

  std::vector<PointSet> images(fine.size());
  for (std::size_t e = 0; e < fine.size(); ++e) {
    PointSet current = fine.element(static_cast<ElementId>(e));
    for (std::size_t k = chain.size(); k-- > 0;) {
      PointSet next = push_forward(nearest[k], current);
      require_below(ground, next, chain[k], fine.element(static_cast<ElementId>(e)));
      current = std::move(next);
    }
    images[e] = std::move(current);
  }
  return make_multimap(ground, MapDomain::elements, std::move(images));
}

std::vector<std::optional<ElementId>> image_ids(const MultiMap& map, const HyperLevel& target) {
  std::vector<std::optional<ElementId>> out(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) out[i] = target.find(map.images[i]);
  return out;
}

ContinuityResult is_continuous(const MultiMap& map, const HyperLevel& domain) {
  if (map.size() != domain.size())
    throw InvalidArgument("map and domain sizes differ");
  ContinuityResult r;
  for (std::size_t d = 0; d < domain.size(); ++d) {
    const auto& big = map.images[d];
    for (ElementId c : domain.strict_subsets(static_cast<ElementId>(d))) {
      ++r.pairs_checked;
      const auto& small = map.images[c];
      if (!std::includes(big.begin(), big.end(), small.begin(), small.end())) {
        r.continuous = false;
        if (!r.violation) r.violation = std::make_pair(c, static_cast<ElementId>(d));
      }
    }
  }
  return r;
}

namespace {

void record(DistanceClause& clause, double distance, double epsilon, bool nonconsecutive,
            const std::function<std::string()>& describe) {
  ++clause.instances;
  if (nonconsecutive) ++clause.nonconsecutive_instances;
  clause.worst_slack = std::min(clause.worst_slack, epsilon - distance);
  clause.worst_ratio = std::max(clause.worst_ratio, distance / epsilon);
  if (!(distance < epsilon)) {
    ++clause.violations;
    if (nonconsecutive) ++clause.nonconsecutive_violations;
    if (clause.first_violation.empty()) clause.first_violation = describe();
  }
}

}  // namespace

DistanceBoundsReport verify_distance_bounds(const MetricGround& ground, const AdjustedSequence& seq,
                           double tie_tolerance) {
  DistanceBoundsReport rep;
  rep.nearest_pairs.name = "nearest points of one x at levels n < m lie within epsilon_n";
  rep.bonded_points.name = "p_{n,m}({a_m}) lies within epsilon_n of a_m";
  rep.bonded_nearest.name = "p_{n,m}(q_m(x)) lies within epsilon_n of x";
  const std::size_t depth = seq.depth();
  std::vector<MultiMap> q;
  q.reserve(depth);
  for (const auto& lv : seq.levels) q.push_back(nearest_point_map(ground, lv.net, tie_tolerance));

  for (std::size_t m = 1; m < depth; ++m) {
    for (std::size_t n = 0; n < m; ++n) {
      const double eps = seq.levels[n].epsilon;
      const bool far = m > n + 1;
      for (std::size_t x = 0; x < ground.size(); ++x)
        for (PointIndex an : q[n].images[x])
          for (PointIndex am : q[m].images[x])
            record(rep.nearest_pairs, ground.dist(an, am), eps, far, [&] {
              return "x=" + std::to_string(x) + " a_" + std::to_string(n + 1) + "=" +
                     std::to_string(an) + " a_" + std::to_string(m + 1) + "=" + std::to_string(am);
            });
    }
    // Walk p_{n,m} downwards from level m one step at a time.
    for (PointIndex am : seq.levels[m].net) {
      PointSet current{am};
      for (std::size_t n = m; n-- > 0;) {
        current = push_forward(q[n], current);
        for (PointIndex an : current)
          record(rep.bonded_points, ground.dist(an, am), seq.levels[n].epsilon, m > n + 1, [&] {
            return "a_" + std::to_string(m + 1) + "=" + std::to_string(am) + " a_" +
                   std::to_string(n + 1) + "=" + std::to_string(an);
          });
      }
    }
    for (std::size_t x = 0; x < ground.size(); ++x) {
      PointSet current = q[m].images[x];
      for (std::size_t n = m; n-- > 0;) {
        current = push_forward(q[n], current);
        for (PointIndex an : current)
          record(rep.bonded_nearest, ground.dist(an, static_cast<PointIndex>(x)),
                 seq.levels[n].epsilon, m > n + 1, [&] {
                   return "x=" + std::to_string(x) + " m=" + std::to_string(m + 1) + " a_" +
                          std::to_string(n + 1) + "=" + std::to_string(an);
                 });
      }
    }
  }
  return rep;
}

}  // namespace finiteshape
