#include <doctest.h>

#include <cmath>
#include <set>

#include "finiteshape/error.hpp"
#include "finiteshape/hyperspace.hpp"
#include "oracles.hpp"
#include "util.hpp"

using namespace finiteshape;

namespace {

MetricGround triangle() {
  return MetricGround({{0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}}, 0.0);
}

Level level_of(const PointSet& net, double eps, int index = 1) {
  Level l;
  l.index = index;
  l.epsilon = eps;
  l.net = net;
  return l;
}

std::set<PointSet> as_set(const std::vector<PointSet>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("hyperlevel of one point") {
  const MetricGround one({{0.0}}, 0.0);
  const auto h = HyperLevel::build(one, level_of({0}, 1.0));
  CHECK(h.size() == 1);
  CHECK(h.element(0) == PointSet{0});
}

TEST_CASE("equilateral triangle hyperlevels") {
  const auto t = triangle();
  const auto wide = HyperLevel::build(t, level_of({0, 1, 2}, 0.6));
  CHECK(wide.size() == 7);
  std::size_t singles = 0, pairs = 0, triples = 0;
  for (const auto& e : wide.elements()) {
    singles += e.size() == 1;
    pairs += e.size() == 2;
    triples += e.size() == 3;
  }
  CHECK(singles == 3);
  CHECK(pairs == 3);
  CHECK(triples == 1);
  CHECK(as_set(wide.elements()) ==
        as_set(oracle::small_diameter_subsets(t, {0, 1, 2}, 1.2, 3)));

  const auto narrow = HyperLevel::build(t, level_of({0, 1, 2}, 0.4));
  CHECK(narrow.size() == 3);
  for (const auto& e : narrow.elements()) CHECK(e.size() == 1);
}

TEST_CASE("property: enumeration matches exhaustive subset search") {
  for (unsigned seed = 1; seed <= 10; ++seed) {
    const auto g = random_cloud(14, seed);
    PointSet net(g.size());
    for (PointIndex i = 0; i < g.size(); ++i) net[i] = i;
    for (double eps : {0.05, 0.15, 0.3})
      for (std::size_t cap : {1, 2, 3, 4}) {
        HyperLevelOptions o;
        o.cardinality_cap = cap;
        const auto h = HyperLevel::build(g, level_of(net, eps), o);
        const auto expect = oracle::small_diameter_subsets(g, net, 2.0 * eps, cap);
        REQUIRE(as_set(h.elements()) == as_set(expect));
        REQUIRE(h.size() == expect.size());
        // Element ids follow (cardinality, members) so subsets come first.
        for (ElementId i = 0; i + 1 < h.size(); ++i)
          CHECK(h.element(i).size() <= h.element(i + 1).size());
        for (ElementId i = 0; i < h.size(); ++i) {
          CHECK(h.diameter(i) < h.bound());
          CHECK(h.diameter(i) == oracle::diameter(g, h.element(i)));
          // Down-closure: every one-smaller subset is present.
          const auto& e = h.element(i);
          for (std::size_t skip = 0; e.size() > 1 && skip < e.size(); ++skip) {
            PointSet s = e;
            s.erase(s.begin() + static_cast<long>(skip));
            CHECK(h.find(s));
          }
        }
      }
  }
}

TEST_CASE("order queries agree with plain set inclusion") {
  const auto g = random_cloud(10, 3);
  PointSet net(g.size());
  for (PointIndex i = 0; i < g.size(); ++i) net[i] = i;
  const auto h = HyperLevel::build(g, level_of(net, 0.25));
  std::size_t covers = 0;
  for (ElementId d = 0; d < h.size(); ++d) {
    std::vector<ElementId> below;
    for (ElementId c = 0; c < h.size(); ++c) {
      const bool inc = c != d && oracle::subset_of(h.element(c), h.element(d));
      CHECK(h.leq(c, d) == (inc || c == d));
      if (inc) below.push_back(c);
    }
    CHECK(h.strict_subsets(d) == below);
    std::vector<ElementId> cov;
    for (ElementId c : below)
      if (h.element(c).size() + 1 == h.element(d).size()) cov.push_back(c);
    CHECK(h.lower_covers(d) == cov);
    covers += cov.size();
  }
  CHECK(h.covering_pairs().size() == covers);
}

TEST_CASE("element budget overflow names the cap and the cardinality") {
  const auto g = random_cloud(30, 9);
  PointSet net(g.size());
  for (PointIndex i = 0; i < g.size(); ++i) net[i] = i;
  HyperLevelOptions o;
  o.max_elements = 100;
  try {
    HyperLevel::build(g, level_of(net, 2.0), o);
    FAIL("expected a capacity error");
  } catch (const CapacityError& e) {
    const std::string what = e.what();
    CHECK(what.find("100") != std::string::npos);
    CHECK(what.find("cardinality 2") != std::string::npos);
  }
}

TEST_CASE("augmenting with sets above the cap") {
  const auto g = polygon(8);
  PointSet net{0, 1, 2, 3, 4, 5, 6, 7};
  HyperLevelOptions o;
  o.cardinality_cap = 2;
  const auto h = HyperLevel::build(g, level_of(net, 0.9), o);
  const auto a = h.augmented(g, {{0, 1, 2}, {0, 1, 2}, {0, 1}});
  CHECK(a.size() == h.size() + 1);
  CHECK(a.base_size() == h.base_size());
  const auto top = *a.find({0, 1, 2});
  CHECK(a.strict_subsets(top).size() == 6);
  CHECK(a.lower_covers(top).size() == 3);
  CHECK_THROWS_AS(h.augmented(g, {{0, 4}}), InvalidArgument);      // under cap, missing
  CHECK_THROWS_AS(h.augmented(g, {{0, 4, 5}}), InvariantViolation);  // too wide
}

TEST_CASE("nearest-point maps") {
  SUBCASE("net points map to themselves") {
    const auto g = random_cloud(30, 4);
    const PointSet net{2, 7, 11, 20};
    const auto q = nearest_point_map(g, net);
    for (PointIndex a : net) CHECK(q.images[a] == PointSet{a});
  }
  SUBCASE("interval midpoint ties to both ends") {
    const auto g = generated(SpaceKind::interval, 101);
    const auto q = nearest_point_map(g, {0, 100});
    CHECK(q.images[50] == PointSet{0, 100});
    CHECK(q.images[49] == PointSet{0});
    CHECK(nearest_points(g, {0, 100}, 50, 0.0) == PointSet{0, 100});
  }
  SUBCASE("four-point circle, antipodal net") {
    const auto g = polygon(4);
    const auto q = nearest_point_map(g, {0, 2});
    CHECK(q.images[1] == PointSet{0, 2});
    CHECK(q.images[3] == PointSet{0, 2});
    CHECK(q.diameter == doctest::Approx(2.0));
  }
  SUBCASE("matches the direct scan") {
    const auto g = random_cloud(50, 5);
    const PointSet net{0, 5, 9, 13, 30, 41};
    const auto q = nearest_point_map(g, net);
    for (PointIndex x = 0; x < g.size(); ++x)
      CHECK(q.images[x] == oracle::nearest(g, x, net, kDefaultTieTolerance));
  }
}

TEST_CASE("bonding maps on the four-point circle") {
  const auto g = polygon(4);
  const auto seq = build_adjusted_sequence(g, 1.5, 2);
  const auto fine = HyperLevel::build(g, seq.level(2));
  const auto p = bonding_map(g, fine, seq.level(1));
  const auto id1 = *fine.find({1});
  CHECK(p.images[id1] == PointSet{0, 2});
  CHECK(g.diameter_of(p.images[id1]) == doctest::Approx(2.0));  // antipodal, not the adjacent chord
  CHECK(g.diameter_of(p.images[id1]) < 2.0 * seq.level(1).epsilon);
  // Coarse net points go to themselves.
  CHECK(p.images[*fine.find({0})] == PointSet{0});
  CHECK(p.images[*fine.find({2})] == PointSet{2});
  CHECK(is_continuous(p, fine).continuous);
}

TEST_CASE("bonding and continuity on the triangle") {
  const auto t = triangle();
  const auto coarse = level_of({0}, 2.0, 1);
  const auto fine = HyperLevel::build(t, level_of({0, 1, 2}, 0.6, 2));
  const auto p = bonding_map(t, fine, coarse);
  for (const auto& img : p.images) CHECK(img == PointSet{0});
  const auto r = is_continuous(p, fine);
  CHECK(r.continuous);
  CHECK(r.pairs_checked == 12);  // comparable pairs of the face poset of a 2-simplex

  const auto coarse_all = level_of({0, 1, 2}, 0.9, 1);
  const auto q = bonding_map(t, fine, coarse_all);
  for (ElementId e = 0; e < fine.size(); ++e) CHECK(q.images[e] == fine.element(e));
  CHECK(is_continuous(q, fine).continuous);
}

TEST_CASE("constant maps are continuous, a broken map is caught") {
  const auto t = triangle();
  const auto fine = HyperLevel::build(t, level_of({0, 1, 2}, 0.6, 2));
  std::vector<PointSet> constant(fine.size(), PointSet{1});
  CHECK(is_continuous(make_multimap(t, MapDomain::elements, constant), fine).continuous);

  std::vector<PointSet> broken(fine.size(), PointSet{0, 1, 2});
  const auto single = *fine.find({0});
  const auto pair = *fine.find({0, 1});
  broken[single] = {2};
  broken[pair] = {0, 1};
  const auto r = is_continuous(make_multimap(t, MapDomain::elements, broken), fine);
  CHECK_FALSE(r.continuous);
  REQUIRE(r.violation);
  CHECK(r.violation->first == single);
  CHECK(r.violation->second == pair);
  CHECK_THROWS_AS(make_multimap(t, MapDomain::elements, {{}}), InvalidArgument);
}

TEST_CASE("composite bonding") {
  const auto g = generated(SpaceKind::circle, 256);
  const auto seq = sequence_at(g, 1.0, 3, 0.25);
  REQUIRE(seq.depth() == 3);
  HyperLevelOptions o;
  o.cardinality_cap = 3;
  const auto fine = HyperLevel::build(g, seq.level(3), o);
  SUBCASE("one step equals the bonding map") {
    const auto a = composite_bonding(g, {seq.level(2)}, fine);
    const auto b = bonding_map(g, fine, seq.level(2));
    CHECK(a.images == b.images);
  }
  SUBCASE("two steps equal iterated push-forward") {
    const auto p = composite_bonding(g, {seq.level(1), seq.level(2)}, fine);
    const auto q2 = nearest_point_map(g, seq.level(2).net);
    const auto q1 = nearest_point_map(g, seq.level(1).net);
    for (ElementId e = 0; e < fine.size(); ++e) {
      CHECK(p.images[e] == push_forward(q1, push_forward(q2, fine.element(e))));
      CHECK(g.diameter_of(p.images[e]) < 2.0 * seq.level(1).epsilon);
    }
    CHECK(is_continuous(p, fine).continuous);
    // Images of net points stay within epsilon_n of them.
    for (PointIndex a : seq.level(3).net)
      for (PointIndex b : p.images[*fine.find({a})]) CHECK(g.dist(a, b) < seq.level(1).epsilon);
  }
  SUBCASE("non-consecutive chains are refused") {
    CHECK_THROWS_AS(composite_bonding(g, {seq.level(1)}, fine), InvalidArgument);
    CHECK_THROWS_AS(composite_bonding(g, {}, fine), InvalidArgument);
  }
  SUBCASE("singleton ground chain is the identity") {
    const MetricGround one({{0.0}}, 0.0);
    const auto s = build_adjusted_sequence(one, 1.0, 4);
    const auto top = HyperLevel::build(one, s.level(4));
    const auto p = composite_bonding(one, {s.level(1), s.level(2), s.level(3)}, top);
    CHECK(p.images == std::vector<PointSet>{{0}});
  }
}

TEST_CASE("bonding aborts when an image is too wide") {
  const auto g = polygon(4);
  // A hand-made pair of levels violating the construction inequality.
  const auto coarse = level_of({0, 2}, 0.8, 1);
  const auto fine = HyperLevel::build(g, level_of({0, 1, 2, 3}, 0.5, 2));
  CHECK_THROWS_AS(bonding_map(g, fine, coarse), InvariantViolation);
}

TEST_CASE("distance bounds") {
  SUBCASE("single point") {
    const MetricGround one({{0.0}}, 0.0);
    const auto r = verify_distance_bounds(one, build_adjusted_sequence(one, 1.0, 4));
    CHECK(r.passed());
    CHECK(r.nearest_pairs.worst_ratio == 0.0);
  }
  SUBCASE("four-point circle") {
    const auto g = polygon(4);
    const auto r = verify_distance_bounds(g, build_adjusted_sequence(g, 1.5, 2));
    CHECK(r.passed());
    CHECK(r.nearest_pairs.instances > 0);
    CHECK(r.nearest_pairs.worst_slack > 0.0);
    CHECK(r.bonded_points.worst_slack > 0.0);
    CHECK(r.bonded_nearest.worst_slack > 0.0);
  }
  SUBCASE("warsaw circle, acceptance parameters") {
    const auto g = generated(SpaceKind::warsaw_circle, 2000);
    const auto seq = sequence_at(g, g.diameter() / 2.0, 8, 0.2);
    REQUIRE(seq.depth() >= 4);
    const auto r = verify_distance_bounds(g, seq);
    CHECK(r.passed());
    CHECK(r.nearest_pairs.nonconsecutive_instances > 0);
    CHECK(r.nearest_pairs.nonconsecutive_violations == 0);
  }
  SUBCASE("clause recount by brute force on random clouds") {
    for (unsigned seed = 1; seed <= 5; ++seed) {
      const auto g = random_cloud(60, seed);
      const auto seq = sequence_at(g, g.diameter() / 2.0, 5, 0.5);
      const auto r = verify_distance_bounds(g, seq);
      CHECK(r.passed());
      std::size_t expect = 0;
      for (std::size_t m = 1; m < seq.depth(); ++m)
        for (std::size_t n = 0; n < m; ++n)
          for (PointIndex x = 0; x < g.size(); ++x)
            expect += oracle::nearest(g, x, seq.levels[n].net, kDefaultTieTolerance).size() *
                      oracle::nearest(g, x, seq.levels[m].net, kDefaultTieTolerance).size();
      CHECK(r.nearest_pairs.instances == expect);
    }
  }
}

TEST_CASE("property: images stay inside the neighbourhoods") {
  for (unsigned seed = 1; seed <= 6; ++seed) {
    const auto g = random_cloud(80, seed + 100);
    const auto seq = sequence_at(g, g.diameter() / 2.0, 5, 0.4);
    for (std::size_t n = 0; n < seq.depth(); ++n) {
      const auto q = nearest_point_map(g, seq.levels[n].net);
      CHECK(q.diameter < 2.0 * seq.levels[n].epsilon);
      if (n + 1 < seq.depth()) {
        const auto q1 = nearest_point_map(g, seq.levels[n + 1].net);
        for (PointIndex x = 0; x < g.size(); ++x)
          CHECK(g.diameter_of(set_union(q.images[x], q1.images[x])) < 2.0 * seq.levels[n].epsilon);
        HyperLevelOptions o;
        o.cardinality_cap = 3;
        const auto fine = HyperLevel::build(g, seq.levels[n + 1], o);
        const auto p = bonding_map(g, fine, seq.levels[n]);
        CHECK(p.diameter < 2.0 * seq.levels[n].epsilon);
        CHECK(is_continuous(p, fine).continuous);
        // The union of two monotone maps is monotone.
        std::vector<PointSet> u(fine.size());
        for (ElementId e = 0; e < fine.size(); ++e) u[e] = set_union(p.images[e], fine.element(e));
        CHECK(is_continuous(make_multimap(g, MapDomain::elements, u), fine).continuous);
      }
    }
  }
}
