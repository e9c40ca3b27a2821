#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace finiteshape {

using PointIndex = std::uint32_t;
using Point = std::vector<double>;

// A compact metric space stood in for by a finite sample with a full
// distance table. `density` is the claimed covering radius: every point of
// the idealized space lies within `density` of some sample point.
class MetricGround {
 public:
  // Euclidean metric on the given coordinates. All points need the same
  // dimension.
  MetricGround(std::vector<Point> coords, double density);

  // Distances taken verbatim (row-major, size n*n). Validated as a metric.
  static MetricGround from_distances(std::size_t n, std::vector<double> table, double density);

  std::size_t size() const { return n_; }
  double dist(PointIndex i, PointIndex j) const { return table_[std::size_t{i} * n_ + j]; }
  double density() const { return density_; }
  bool has_coords() const { return !coords_.empty(); }
  const std::vector<Point>& coords() const { return coords_; }
  std::size_t dimension() const { return coords_.empty() ? 0 : coords_.front().size(); }

  double diameter() const;
  // Max over points of the distance to the nearest other point (0 for n = 1).
  double max_nearest_neighbor() const;
  // Diameter of a subset of point indices.
  double diameter_of(const std::vector<PointIndex>& subset) const;

  // Throws MetricError on asymmetry, negative entries, nonzero diagonal or a
  // triangle-inequality failure. Triples are checked exhaustively for
  // size() <= 512 and by seeded sampling above that.
  void validate(std::uint64_t seed = 0) const;

 private:
  MetricGround() = default;

  std::size_t n_ = 0;
  std::vector<double> table_;
  std::vector<Point> coords_;
  double density_ = 0.0;
};

enum class SpaceKind { circle, warsaw_circle, interval, cantor, two_points, custom };

std::string_view to_string(SpaceKind kind);
// Accepts the canonical names plus "warsaw" as a short alias.
std::optional<SpaceKind> parse_space_kind(std::string_view name);

struct SpaceSpec {
  SpaceKind kind = SpaceKind::circle;
  std::size_t samples = 256;     // circle, interval, warsaw_circle
  double radius = 1.0;           // circle
  double length = 1.0;           // interval
  int cantor_depth = 4;          // cantor
  double separation = 1.0;       // two_points
  std::uint64_t seed = 0;
};

// Samples one of the built-in test spaces. Deterministic in (spec).
//
// Plane embeddings use the Euclidean (chordal) metric. The Warsaw circle is
// the closure of the sin(1/x) graph over (0, 2/pi] closed up by the
// rectangular arc (0,-1) -> (0,-1.5) -> (2/pi,-1.5) -> (2/pi,1); the whole
// curve is sampled uniformly in arc length.
MetricGround generate(const SpaceSpec& spec);

enum class GroundFormat { coords_csv, distmatrix_csv };

// Reads a ground sample. Density is unknown for files, so it is set to 0
// unless given.
MetricGround load_ground(const std::filesystem::path& path, GroundFormat format,
                         double density = 0.0);

void write_coords_csv(const MetricGround& ground, const std::filesystem::path& path);
void write_distmatrix_csv(const MetricGround& ground, const std::filesystem::path& path);

}  // namespace finiteshape
