#pragma once

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "finiteshape/construction.hpp"
#include "finiteshape/metric.hpp"

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    static std::atomic<int> counter{0};
    path = std::filesystem::temp_directory_path() /
           ("finiteshape_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::filesystem::path operator/(const std::string& name) const { return path / name; }
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// The regular n-gon of radius 1 taken as a space in its own right, so its
// density is 0 rather than the half-chord of a circle sample.
inline finiteshape::MetricGround polygon(std::size_t n) {
  std::vector<finiteshape::Point> pts;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n);
    pts.push_back({std::cos(t), std::sin(t)});
  }
  return finiteshape::MetricGround(std::move(pts), 0.0);
}

inline finiteshape::MetricGround generated(finiteshape::SpaceKind kind, std::size_t samples = 0) {
  finiteshape::SpaceSpec s;
  s.kind = kind;
  if (samples) s.samples = samples;
  return finiteshape::generate(s);
}

// Random points in the unit square (seeded).
inline finiteshape::MetricGround random_cloud(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<finiteshape::Point> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back({u(rng), u(rng)});
  return finiteshape::MetricGround(std::move(pts), 0.0);
}

inline finiteshape::AdjustedSequence sequence_at(const finiteshape::MetricGround& g, double eps1,
                                                 int depth, double ratio) {
  finiteshape::SequenceOptions o;
  o.net_ratio = ratio;
  return finiteshape::build_adjusted_sequence(g, eps1, depth, o);
}
