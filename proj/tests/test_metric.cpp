#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "finiteshape/error.hpp"
#include "finiteshape/metric.hpp"
#include "oracles.hpp"
#include "util.hpp"

using namespace finiteshape;

TEST_CASE("two points at the requested separation") {
  SpaceSpec s;
  s.kind = SpaceKind::two_points;
  s.separation = 1.0;
  const auto g = generate(s);
  REQUIRE(g.size() == 2);
  CHECK(g.dist(0, 1) == 1.0);
  CHECK(g.density() == 0.0);
}

TEST_CASE("four-point circle has chordal distances") {
  SpaceSpec s;
  s.kind = SpaceKind::circle;
  s.samples = 4;
  const auto g = generate(s);
  REQUIRE(g.size() == 4);
  for (PointIndex i = 0; i < 4; ++i) {
    CHECK(g.dist(i, (i + 1) % 4) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(g.dist(i, (i + 2) % 4) == doctest::Approx(2.0).epsilon(1e-15));
  }
  g.validate();
}

TEST_CASE("warsaw circle sample is connected at twice its density") {
  SpaceSpec s;
  s.kind = SpaceKind::warsaw_circle;
  s.samples = 2000;
  const auto g = generate(s);
  REQUIRE(g.size() == 2000);
  oracle::Subset all(g.size());
  for (oracle::Idx i = 0; i < g.size(); ++i) all[i] = i;
  CHECK(oracle::components_at_scale(g, all, 2.0 * g.density()) == 1);
  g.validate(7);
}

TEST_CASE("warsaw circle reaches the limit segment, the arc and the graph") {
  SpaceSpec s;
  s.kind = SpaceKind::warsaw_circle;
  s.samples = 2000;
  const auto g = generate(s);
  bool top = false, bottom = false, arc = false, right = false;
  double xmin_graph = 1.0;
  for (const auto& p : g.coords()) {
    if (p[0] == 0.0 && p[1] >= 1.0 - g.density()) top = true;
    if (p[0] == 0.0 && p[1] <= -1.0 + g.density() && p[1] >= -1.0 - g.density()) bottom = true;
    if (p[1] == -1.5) arc = true;
    if (std::abs(p[0] - 2.0 / M_PI) < 1e-12 && p[1] > 0.9) right = true;
    if (p[0] > 0.0 && p[1] > -1.0 - 1e-12 && p[1] < 1.0 + 1e-12 && p[0] < 2.0 / M_PI - 1e-9)
      xmin_graph = std::min(xmin_graph, p[0]);
  }
  CHECK(top);
  CHECK(bottom);
  CHECK(arc);
  CHECK(right);
  // The truncated part of the graph lies within density of the segment.
  CHECK(xmin_graph <= g.density());
}

TEST_CASE("claimed density is honest for generated continua and Cantor sets") {
  std::vector<SpaceSpec> specs;
  for (std::size_t n : {1, 2, 3, 64, 256}) {
    SpaceSpec c;
    c.kind = SpaceKind::circle;
    c.samples = n;
    specs.push_back(c);
    SpaceSpec i;
    i.kind = SpaceKind::interval;
    i.samples = n;
    specs.push_back(i);
  }
  for (int d : {0, 1, 3, 4}) {
    SpaceSpec k;
    k.kind = SpaceKind::cantor;
    k.cantor_depth = d;
    specs.push_back(k);
  }
  SpaceSpec w;
  w.kind = SpaceKind::warsaw_circle;
  w.samples = 500;
  specs.push_back(w);
  for (const auto& s : specs) {
    const auto g = generate(s);
    CAPTURE(to_string(s.kind));
    CAPTURE(g.size());
    double worst = 0.0;
    for (oracle::Idx x = 0; x < g.size(); ++x) {
      double nn = INFINITY;
      for (oracle::Idx y = 0; y < g.size(); ++y)
        if (y != x) nn = std::min(nn, g.dist(x, y));
      if (g.size() > 1) worst = std::max(worst, nn);
    }
    CHECK(worst <= g.density());
  }
}

TEST_CASE("cantor set has 2^(depth+1) endpoints in [0, 1]") {
  SpaceSpec s;
  s.kind = SpaceKind::cantor;
  s.cantor_depth = 4;
  const auto g = generate(s);
  CHECK(g.size() == 32);
  CHECK(g.diameter() == doctest::Approx(1.0));
  CHECK(g.density() == doctest::Approx(1.0 / 81.0));
}

TEST_CASE("generation is deterministic") {
  SpaceSpec s;
  s.kind = SpaceKind::warsaw_circle;
  s.samples = 300;
  const auto a = generate(s);
  const auto b = generate(s);
  CHECK(a.coords() == b.coords());
}

TEST_CASE("invalid specs are rejected") {
  SpaceSpec s;
  s.kind = SpaceKind::circle;
  s.samples = 0;
  CHECK_THROWS_AS(generate(s), InvalidArgument);
  s.samples = 4;
  s.radius = -1.0;
  CHECK_THROWS_AS(generate(s), InvalidArgument);
  s.kind = SpaceKind::custom;
  CHECK_THROWS_AS(generate(s), InvalidArgument);
  CHECK(parse_space_kind("warsaw") == SpaceKind::warsaw_circle);
  CHECK(parse_space_kind("warsaw_circle") == SpaceKind::warsaw_circle);
  CHECK_FALSE(parse_space_kind("torus"));
}

TEST_CASE("loading ground samples from files") {
  TempDir dir;
  SUBCASE("single point") {
    write_file(dir / "one.csv", "id,x,y\n0,0.5,0.5\n");
    const auto g = load_ground(dir / "one.csv", GroundFormat::coords_csv);
    CHECK(g.size() == 1);
    CHECK(g.diameter() == 0.0);
  }
  SUBCASE("three points give Pythagorean distances") {
    write_file(dir / "three.csv", "id,x,y\n0,0,0\n1,1,0\n2,0,1\n");
    const auto g = load_ground(dir / "three.csv", GroundFormat::coords_csv);
    CHECK(g.dist(0, 1) == 1.0);
    CHECK(g.dist(0, 2) == 1.0);
    CHECK(g.dist(1, 2) == doctest::Approx(std::sqrt(2.0)));
  }
  SUBCASE("triangle inequality failure names the triple") {
    write_file(dir / "bad.csv", "0,1,5\n1,0,1\n5,1,0\n");
    try {
      load_ground(dir / "bad.csv", GroundFormat::distmatrix_csv);
      FAIL("expected a metric error");
    } catch (const MetricError& e) {
      CHECK(std::string(e.what()).find("(0,1,2)") != std::string::npos);
    }
  }
  SUBCASE("asymmetric and negative matrices") {
    write_file(dir / "asym.csv", "0,1\n2,0\n");
    CHECK_THROWS_AS(load_ground(dir / "asym.csv", GroundFormat::distmatrix_csv), MetricError);
    write_file(dir / "neg.csv", "0,-1\n-1,0\n");
    CHECK_THROWS_AS(load_ground(dir / "neg.csv", GroundFormat::distmatrix_csv), MetricError);
    write_file(dir / "rect.csv", "0,1,2\n1,0,1\n");
    CHECK_THROWS_AS(load_ground(dir / "rect.csv", GroundFormat::distmatrix_csv), ParseError);
  }
  SUBCASE("malformed coordinates") {
    write_file(dir / "gap.csv", "id,x\n0,0\n2,1\n");
    CHECK_THROWS_AS(load_ground(dir / "gap.csv", GroundFormat::coords_csv), ParseError);
    write_file(dir / "nan.csv", "id,x\n0,abc\n");
    CHECK_THROWS_AS(load_ground(dir / "nan.csv", GroundFormat::coords_csv), ParseError);
    CHECK_THROWS(load_ground(dir / "missing.csv", GroundFormat::coords_csv));
  }
  SUBCASE("write then read reproduces every distance") {
    SpaceSpec s;
    s.kind = SpaceKind::warsaw_circle;
    s.samples = 200;
    const auto g = generate(s);
    write_coords_csv(g, dir / "w.csv");
    const auto h = load_ground(dir / "w.csv", GroundFormat::coords_csv, g.density());
    write_distmatrix_csv(g, dir / "wd.csv");
    const auto m = load_ground(dir / "wd.csv", GroundFormat::distmatrix_csv);
    for (PointIndex i = 0; i < g.size(); ++i)
      for (PointIndex j = 0; j < g.size(); ++j) {
        REQUIRE(h.dist(i, j) == g.dist(i, j));
        REQUIRE(m.dist(i, j) == g.dist(i, j));
      }
  }
}

TEST_CASE("sampled triangle check on large grounds is seeded") {
  const std::size_t n = 600;
  std::vector<double> table(n * n, 1.0);
  for (std::size_t i = 0; i < n; ++i) table[i * n + i] = 0.0;
  const auto g = MetricGround::from_distances(n, table, 0.0);
  CHECK_NOTHROW(g.validate(1));
  CHECK_NOTHROW(g.validate(2));
}
