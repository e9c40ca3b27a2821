#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "finiteshape/construction.hpp"
#include "finiteshape/homotopy.hpp"
#include "finiteshape/hyperspace.hpp"
#include "finiteshape/invariants.hpp"
#include "finiteshape/metric.hpp"

namespace finiteshape {

// Everything a run needs. Either `space` is generated or `input` is read.
struct RunConfig {
  SpaceSpec space;
  std::filesystem::path input;  // empty: generate `space`
  GroundFormat input_format = GroundFormat::coords_csv;
  double input_density = 0.0;

  std::optional<double> epsilon1;  // default: half the ground diameter
  int depth = 8;
  double safety = 0.9;
  double net_ratio = 0.2;
  double tie_tolerance = kDefaultTieTolerance;
  int max_degree = 1;
  std::size_t cardinality_cap = 0;  // 0: max_degree + 2
  std::size_t window = 2;
  std::vector<double> extra_bounds;

  bool check_distance_bounds = true;
  bool check_continuity = true;
  bool check_identity = true;
  bool check_diagram = true;
  bool compute_homology = true;
  bool cross_check_rips = true;

  std::filesystem::path output_dir;
  std::uint64_t seed = 0;

  // Throws InvalidArgument naming the first bad field.
  void validate() const;
};

// Reads or generates the ground and validates it as a metric (seeded
// sampling of triples on large grounds).
MetricGround prepare_ground(const RunConfig& config);

AdjustedSequence build_sequence(const MetricGround& ground, const RunConfig& config);

struct Verdict {
  std::string stage;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct RunReport {
  std::uint64_t seed = 0;
  AdjustedSequence sequence;
  std::vector<Verdict> verdicts;
  std::vector<SequenceCheck> sequence_checks;
  std::optional<DistanceBoundsReport> distance_bounds;
  std::optional<IdentityMorphismReport> identity;
  std::vector<HomotopyWitness> diagram;
  std::optional<HomologyReport> homology;
  std::vector<std::pair<std::string, double>> timings;  // stage, seconds

  bool all_passed() const;
};

// Runs every enabled check on a given sequence. Stage errors are caught and
// turned into failing verdicts, so one broken inequality does not hide the
// others. `with_homology` adds the shape report.
RunReport evaluate(const MetricGround& ground, const AdjustedSequence& seq,
                   const RunConfig& config, bool with_homology);

// sequence.txt, sequence.csv, witnesses.txt, verdicts.txt, report.txt and,
// when computed, homology.csv and homology.txt.
void write_bundle(const RunReport& report, const RunConfig& config,
                  const std::filesystem::path& dir);

// "PASS <stage>: <name>" or "FAIL <stage>: <name> (<detail>)".
std::string verdict_line(const Verdict& v);

}  // namespace finiteshape
