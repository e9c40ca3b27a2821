#include "finiteshape/metric.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "finiteshape/error.hpp"
#include "finiteshape/parallel.hpp"

namespace finiteshape {

namespace {

constexpr double kPi = std::numbers::pi;

// Relative slack for triangle-inequality checks; Euclidean tables built in
// floating point miss the exact inequality by a few ulps.
constexpr double kTriangleSlack = 1e-12;

bool triangle_fails(double ik, double ij, double jk) {
  return ik > ij + jk + kTriangleSlack * std::max(1.0, ij + jk);
}

std::string fmt_triple(std::size_t i, std::size_t j, std::size_t k) {
  std::ostringstream os;
  os << "(" << i << "," << j << "," << k << ")";
  return os.str();
}

}  // namespace

MetricGround::MetricGround(std::vector<Point> coords, double density)
    : n_(coords.size()), coords_(std::move(coords)), density_(density) {
  if (n_ == 0) throw InvalidArgument("metric ground needs at least one point");
  if (!(density_ >= 0.0) || !std::isfinite(density_))
    throw InvalidArgument("density must be a finite non-negative real");
  const std::size_t dim = coords_.front().size();
  for (const auto& p : coords_) {
    if (p.size() != dim) throw InvalidArgument("points have mixed dimensions");
    for (double c : p)
      if (!std::isfinite(c)) throw InvalidArgument("non-finite coordinate");
  }
  table_.assign(n_ * n_, 0.0);
  parallel_for(n_, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (i == j) continue;
        double s = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
          const double diff = coords_[i][d] - coords_[j][d];
          s += diff * diff;
        }
        table_[i * n_ + j] = std::sqrt(s);
      }
    }
  });
  // Exact symmetry regardless of summation order.
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j) table_[j * n_ + i] = table_[i * n_ + j];
}

MetricGround MetricGround::from_distances(std::size_t n, std::vector<double> table,
                                          double density) {
  if (n == 0) throw InvalidArgument("metric ground needs at least one point");
  if (table.size() != n * n) throw InvalidArgument("distance table is not n x n");
  if (!(density >= 0.0)) throw InvalidArgument("density must be non-negative");
  MetricGround g;
  g.n_ = n;
  g.table_ = std::move(table);
  g.density_ = density;
  g.validate();
  return g;
}

double MetricGround::diameter() const { return *std::max_element(table_.begin(), table_.end()); }

double MetricGround::max_nearest_neighbor() const {
  if (n_ < 2) return 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    double best = INFINITY;
    for (std::size_t j = 0; j < n_; ++j)
      if (j != i) best = std::min(best, table_[i * n_ + j]);
    worst = std::max(worst, best);
  }
  return worst;
}

double MetricGround::diameter_of(const std::vector<PointIndex>& subset) const {
  double d = 0.0;
  for (std::size_t a = 0; a < subset.size(); ++a)
    for (std::size_t b = a + 1; b < subset.size(); ++b) d = std::max(d, dist(subset[a], subset[b]));
  return d;
}

void MetricGround::validate(std::uint64_t seed) const {
  for (std::size_t i = 0; i < n_; ++i) {
    if (table_[i * n_ + i] != 0.0)
      throw MetricError("nonzero diagonal entry at " + std::to_string(i));
    for (std::size_t j = 0; j < n_; ++j) {
      const double v = table_[i * n_ + j];
      if (!std::isfinite(v) || v < 0.0)
        throw MetricError("negative or non-finite distance at (" + std::to_string(i) + "," +
                          std::to_string(j) + ")");
      if (v != table_[j * n_ + i])
        throw MetricError("asymmetric distance at (" + std::to_string(i) + "," +
                          std::to_string(j) + ")");
      if (i != j && v == 0.0)
        throw MetricError("distinct points " + std::to_string(i) + " and " + std::to_string(j) +
                          " at distance 0");
    }
  }
  auto check = [&](std::size_t i, std::size_t j, std::size_t k) {
    if (triangle_fails(table_[i * n_ + k], table_[i * n_ + j], table_[j * n_ + k]))
      throw MetricError("triangle inequality violated: d(" + std::to_string(i) + "," +
                        std::to_string(k) + ") > d(" + std::to_string(i) + "," +
                        std::to_string(j) + ") + d(" + std::to_string(j) + "," +
                        std::to_string(k) + ") for triple " + fmt_triple(i, j, k));
  };
  if (n_ <= 512) {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t k = i + 1; k < n_; ++k)
        for (std::size_t j = 0; j < n_; ++j)
          if (j != i && j != k) check(i, j, k);
    return;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n_ - 1);
  for (int t = 0; t < 2'000'000; ++t) {
    std::size_t i = pick(rng), j = pick(rng), k = pick(rng);
    if (i == j || j == k || i == k) continue;
    if (i > k) std::swap(i, k);
    check(i, j, k);
  }
}

std::string_view to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::circle: return "circle";
    case SpaceKind::warsaw_circle: return "warsaw_circle";
    case SpaceKind::interval: return "interval";
    case SpaceKind::cantor: return "cantor";
    case SpaceKind::two_points: return "two_points";
    case SpaceKind::custom: return "custom";
  }
  return "unknown";
}

std::optional<SpaceKind> parse_space_kind(std::string_view name) {
  if (name == "circle") return SpaceKind::circle;
  if (name == "warsaw_circle" || name == "warsaw") return SpaceKind::warsaw_circle;
  if (name == "interval") return SpaceKind::interval;
  if (name == "cantor") return SpaceKind::cantor;
  if (name == "two_points") return SpaceKind::two_points;
  if (name == "custom") return SpaceKind::custom;
  return std::nullopt;
}

namespace {

// The analytic density can sit an ulp below the realized nearest-neighbour
// distance; never claim less than the sample shows.
MetricGround honest(std::vector<Point> pts, double density) {
  MetricGround g(pts, density);
  const double nn = g.max_nearest_neighbor();
  if (nn <= density) return g;
  return MetricGround(std::move(pts), nn);
}

MetricGround make_circle(std::size_t n, double radius) {
  std::vector<Point> pts(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
    pts[i] = {radius * std::cos(t), radius * std::sin(t)};
  }
  const double density = n == 1 ? 2.0 * radius : 2.0 * radius * std::sin(kPi / static_cast<double>(n));
  return honest(std::move(pts), density);
}

MetricGround make_interval(std::size_t n, double length) {
  std::vector<Point> pts(n);
  for (std::size_t i = 0; i < n; ++i)
    pts[i] = {n == 1 ? 0.0 : length * static_cast<double>(i) / static_cast<double>(n - 1)};
  return honest(std::move(pts), n == 1 ? length : length / static_cast<double>(n - 1));
}

MetricGround make_cantor(int depth) {
  // Both endpoints of each of the 2^depth middle-thirds intervals.
  const std::uint64_t denom = static_cast<std::uint64_t>(std::llround(std::pow(3.0, depth)));
  std::vector<Point> pts;
  pts.reserve(std::size_t{2} << depth);
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << depth); ++code) {
    std::uint64_t left = 0;
    for (int i = 0; i < depth; ++i) {
      // Most significant bit picks the first ternary digit.
      const bool right_half = (code >> (depth - 1 - i)) & 1U;
      left = left * 3 + (right_half ? 2 : 0);
    }
    const double a = static_cast<double>(left) / static_cast<double>(denom);
    const double b = static_cast<double>(left + 1) / static_cast<double>(denom);
    pts.push_back({a});
    pts.push_back({b});
  }
  return honest(std::move(pts), 1.0 / static_cast<double>(denom));
}

// Cumulative arc length of u -> (1/u, sin u) for u >= pi/2, tabulated on a
// uniform grid and grown on demand.
class GraphArcTable {
 public:
  static constexpr double kStep = 1e-3;

  double length_to(double u) {
    if (u <= u0_) return 0.0;
    extend(u);
    const double pos = (u - u0_) / kStep;
    const auto k = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(k);
    return cum_[k] + frac * (cum_[k + 1] - cum_[k]);
  }

  // Inverse of length_to on [u0, u_max].
  double parameter_at(double s) {
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
    if (it == cum_.begin()) return u0_;
    if (it == cum_.end()) return u0_ + kStep * static_cast<double>(cum_.size() - 1);
    const auto k = static_cast<std::size_t>(it - cum_.begin()) - 1;
    const double frac = (s - cum_[k]) / (cum_[k + 1] - cum_[k]);
    return u0_ + kStep * (static_cast<double>(k) + frac);
  }

 private:
  static double speed(double u) {
    const double c = std::cos(u);
    return std::sqrt(1.0 / (u * u * u * u) + c * c);
  }

  void extend(double u) {
    while (u0_ + kStep * static_cast<double>(cum_.size() - 1) < u + kStep) {
      const double a = u0_ + kStep * static_cast<double>(cum_.size() - 1);
      const double b = a + kStep;
      // Simpson on each grid cell.
      const double area = kStep / 6.0 * (speed(a) + 4.0 * speed(0.5 * (a + b)) + speed(b));
      cum_.push_back(cum_.back() + area);
    }
  }

  double u0_ = kPi / 2.0;
  std::vector<double> cum_{0.0};
};

MetricGround make_warsaw(std::size_t n) {
  const double w = 2.0 / kPi;
  if (n == 1) return MetricGround({{0.0, 1.0}}, 2.0 + 2.5 + w);

  // Ratio between the truncation abscissa and the sample step. Any graph
  // point left of the cut sits within sqrt(c^2 + 1/4) * h of a sample on the
  // limit segment, which stays below h for c < sqrt(3)/2.
  constexpr double kCutRatio = 0.85;
  // Straight part: limit segment (0,1)->(0,-1), then the closing arc.
  const double straight = 2.0 + 0.5 + w + 2.5;
  GraphArcTable graph;
  auto total_length = [&](double h) {
    const double x_min = kCutRatio * h;
    return x_min >= w ? straight : straight + graph.length_to(1.0 / x_min);
  };
  // Fixed point h = L(cut(h)) / (n - 1); the left side grows with h and the
  // right side shrinks, so bisect.
  double lo = 1e-7, hi = straight + 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (total_length(mid) / static_cast<double>(n - 1) > mid)
      lo = mid;
    else
      hi = mid;
  }
  const double h = hi;
  const double length = total_length(h);
  const double step = length / static_cast<double>(n - 1);

  std::vector<Point> pts(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = i + 1 == n ? length : step * static_cast<double>(i);
    if (s <= 2.5) {
      pts[i] = {0.0, 1.0 - s};  // limit segment and first leg of the arc
    } else if ((s -= 2.5) <= w) {
      pts[i] = {s, -1.5};
    } else if ((s -= w) <= 2.5) {
      pts[i] = {w, -1.5 + s};
    } else {
      s -= 2.5;
      const double u = graph.parameter_at(s);
      pts[i] = {1.0 / u, std::sin(u)};
    }
  }
  MetricGround probe(pts, 0.0);
  double chord = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i)
    chord = std::max(chord, probe.dist(static_cast<PointIndex>(i), static_cast<PointIndex>(i + 1)));
  const double x_min = kCutRatio * step;
  const double density =
      std::max({step, chord, std::sqrt(x_min * x_min + 0.25 * step * step)});
  return honest(std::move(pts), density);
}

}  // namespace

MetricGround generate(const SpaceSpec& spec) {
  auto need_samples = [&] {
    if (spec.samples < 1) throw InvalidArgument("sample count must be at least 1");
  };
  switch (spec.kind) {
    case SpaceKind::circle:
      need_samples();
      if (!(spec.radius > 0.0)) throw InvalidArgument("circle radius must be positive");
      return make_circle(spec.samples, spec.radius);
    case SpaceKind::interval:
      need_samples();
      if (!(spec.length > 0.0)) throw InvalidArgument("interval length must be positive");
      return make_interval(spec.samples, spec.length);
    case SpaceKind::warsaw_circle:
      need_samples();
      return make_warsaw(spec.samples);
    case SpaceKind::cantor:
      if (spec.cantor_depth < 0 || spec.cantor_depth > 20)
        throw InvalidArgument("cantor depth must be in [0, 20]");
      return make_cantor(spec.cantor_depth);
    case SpaceKind::two_points:
      if (!(spec.separation > 0.0)) throw InvalidArgument("separation must be positive");
      return MetricGround({{0.0}, {spec.separation}}, 0.0);
    case SpaceKind::custom:
      throw InvalidArgument("custom spaces are loaded from a file, not generated");
  }
  throw InvalidArgument("unknown space kind");
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_real(const std::string& cell, std::size_t line_no) {
  double v = 0.0;
  const auto* first = cell.data();
  const auto* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || cell.empty())
    throw ParseError("line " + std::to_string(line_no) + ": cannot parse number '" + cell + "'");
  return v;
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

MetricGround load_ground(const std::filesystem::path& path, GroundFormat format, double density) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;

  if (format == GroundFormat::coords_csv) {
    if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");
    ++line_no;
    const auto header = split_csv(line);
    if (header.size() < 2 || header[0] != "id")
      throw ParseError(path.string() + ": header must be id,x[,y...]");
    const std::size_t dim = header.size() - 1;
    std::vector<std::pair<long long, Point>> rows;
    while (std::getline(in, line)) {
      ++line_no;
      if (blank(line)) continue;
      const auto cells = split_csv(line);
      if (cells.size() != dim + 1)
        throw ParseError("line " + std::to_string(line_no) + ": expected " +
                         std::to_string(dim + 1) + " fields");
      const double id = parse_real(cells[0], line_no);
      Point p(dim);
      for (std::size_t d = 0; d < dim; ++d) p[d] = parse_real(cells[d + 1], line_no);
      rows.emplace_back(static_cast<long long>(id), std::move(p));
    }
    if (rows.empty()) throw ParseError(path.string() + ": no points");
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Point> pts;
    pts.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].first != static_cast<long long>(i))
        throw ParseError(path.string() + ": ids must be 0..n-1 without gaps or repeats");
      pts.push_back(std::move(rows[i].second));
    }
    return MetricGround(std::move(pts), density);
  }

  std::vector<double> table;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const auto cells = split_csv(line);
    if (n == 0) n = cells.size();
    if (cells.size() != n)
      throw ParseError("line " + std::to_string(line_no) + ": matrix is not square");
    for (const auto& c : cells) table.push_back(parse_real(c, line_no));
  }
  if (n == 0) throw ParseError(path.string() + ": empty matrix");
  if (table.size() != n * n) throw ParseError(path.string() + ": matrix is not square");
  return MetricGround::from_distances(n, std::move(table), density);
}

void write_coords_csv(const MetricGround& ground, const std::filesystem::path& path) {
  if (!ground.has_coords()) throw InvalidArgument("ground has no coordinates to export");
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out.precision(17);
  out << "id";
  static constexpr const char* kAxes[] = {"x", "y", "z"};
  for (std::size_t d = 0; d < ground.dimension(); ++d)
    out << ',' << (d < 3 ? std::string(kAxes[d]) : "x" + std::to_string(d));
  out << '\n';
  for (std::size_t i = 0; i < ground.size(); ++i) {
    out << i;
    for (double c : ground.coords()[i]) out << ',' << c;
    out << '\n';
  }
}

void write_distmatrix_csv(const MetricGround& ground, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out.precision(17);
  for (std::size_t i = 0; i < ground.size(); ++i) {
    for (std::size_t j = 0; j < ground.size(); ++j) {
      if (j) out << ',';
      out << ground.dist(static_cast<PointIndex>(i), static_cast<PointIndex>(j));
    }
    out << '\n';
  }
}

}  // namespace finiteshape
