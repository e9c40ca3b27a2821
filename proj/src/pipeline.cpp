#include "finiteshape/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "finiteshape/error.hpp"
#include "finiteshape/io.hpp"

namespace finiteshape {

void RunConfig::validate() const {
  auto bad = [](const std::string& what) { throw InvalidArgument(what); };
  if (input.empty()) {
    switch (space.kind) {
      case SpaceKind::custom: bad("space 'custom' needs an input file"); break;
      case SpaceKind::circle:
      case SpaceKind::interval:
      case SpaceKind::warsaw_circle:
        if (space.samples < 1) bad("sample count must be at least 1");
        break;
      default: break;
    }
    if (!(space.radius > 0.0)) bad("radius must be positive");
    if (!(space.length > 0.0)) bad("length must be positive");
    if (!(space.separation > 0.0)) bad("separation must be positive");
    if (space.cantor_depth < 0 || space.cantor_depth > 20) bad("cantor depth must be in [0, 20]");
  } else if (!(input_density >= 0.0)) {
    bad("input density must be non-negative");
  }
  if (epsilon1 && !(*epsilon1 > 0.0)) bad("epsilon1 must be positive");
  if (depth < 1) bad("depth must be at least 1");
  if (!(safety > 0.0 && safety < 1.0)) bad("safety must lie in (0, 1)");
  if (!(net_ratio > 0.0 && net_ratio <= 1.0)) bad("net ratio must lie in (0, 1]");
  if (!(tie_tolerance >= 0.0)) bad("tie tolerance must be non-negative");
  if (max_degree < 0 || max_degree > 2) bad("homology degree cap must lie in [0, 2]");
  if (cardinality_cap != 0 && cardinality_cap < static_cast<std::size_t>(max_degree) + 2)
    bad("cardinality cap must be at least degree cap + 2");
  if (window < 2) bad("stabilization window must be at least 2");
  for (double b : extra_bounds)
    if (!(b > 0.0)) bad("extra bounds must be positive");
}

MetricGround prepare_ground(const RunConfig& config) {
  if (config.input.empty()) {
    MetricGround g = generate(config.space);
    g.validate(config.seed);
    return g;
  }
  if (!std::filesystem::exists(config.input))
    throw Error("input file not found: " + config.input.string());
  MetricGround g = load_ground(config.input, config.input_format, config.input_density);
  g.validate(config.seed);
  return g;
}

AdjustedSequence build_sequence(const MetricGround& ground, const RunConfig& config) {
  double e1 = config.epsilon1.value_or(ground.diameter() / 2.0);
  // A one-point ground has diameter 0; any positive start works there.
  if (!config.epsilon1 && !(e1 > 0.0)) e1 = 1.0;
  SequenceOptions o;
  o.safety = config.safety;
  o.net_ratio = config.net_ratio;
  return build_adjusted_sequence(ground, e1, config.depth, o);
}

bool RunReport::all_passed() const {
  for (const auto& v : verdicts)
    if (!v.passed) return false;
  return true;
}

std::string verdict_line(const Verdict& v) {
  std::string s = (v.passed ? "PASS " : "FAIL ") + v.stage + ": " + v.name;
  if (!v.detail.empty()) s += " (" + v.detail + ")";
  return s;
}

namespace {

using Clock = std::chrono::steady_clock;

std::string lhs_rhs(double lhs, double rhs) {
  return "lhs=" + format_real(lhs) + " rhs=" + format_real(rhs) + " slack=" + format_real(rhs - lhs);
}

std::string clause_detail(const DistanceClause& c) {
  std::string s = "instances=" + std::to_string(c.instances) +
                  " violations=" + std::to_string(c.violations) +
                  " worst_slack=" + format_real(c.worst_slack) +
                  " worst_ratio=" + format_real(c.worst_ratio);
  if (!c.first_violation.empty()) s += " first=" + c.first_violation;
  return s;
}

std::string witness_detail(const HomotopyWitness& w) {
  return "max_union_diameter=" + format_real(w.max_union_diameter) +
         " bound=" + format_real(w.bound) + " slack=" + format_real(w.slack()) +
         " worst_item=" + std::to_string(w.worst_item);
}

}  // namespace

RunReport evaluate(const MetricGround& ground, const AdjustedSequence& seq,
                   const RunConfig& config, bool with_homology) {
  RunReport rep;
  rep.seed = config.seed;
  rep.sequence = seq;
  auto add = [&](std::string stage, std::string name, bool ok, std::string detail) {
    rep.verdicts.push_back({std::move(stage), std::move(name), ok, std::move(detail)});
  };
  auto stage = [&](const std::string& name, auto&& body) {
    const auto t0 = Clock::now();
    try {
      body();
    } catch (const std::exception& e) {
      add(name, "stage completed", false, e.what());
    }
    rep.timings.emplace_back(name, std::chrono::duration<double>(Clock::now() - t0).count());
  };
  const int depth = static_cast<int>(seq.depth());

  stage("sequence", [&] {
    if (seq.ground_size != 0 && seq.ground_size != ground.size())
      throw InvalidArgument("sequence was built on a ground of " + std::to_string(seq.ground_size) +
                            " points, this one has " + std::to_string(ground.size()));
    rep.sequence_checks = check_sequence(ground, seq);
    for (const auto& c : rep.sequence_checks)
      add("sequence", c.name + " at n=" + std::to_string(c.level), c.passed, lhs_rhs(c.lhs, c.rhs));
  });

  if (config.check_distance_bounds && depth >= 2)
    stage("distance", [&] {
      rep.distance_bounds = verify_distance_bounds(ground, seq, config.tie_tolerance);
      const auto& d = *rep.distance_bounds;
      add("distance", "d(a_n, a_m) < epsilon_n for nearest points of x", d.nearest_pairs.passed(),
          clause_detail(d.nearest_pairs));
      add("distance", "d(a_n, a_m) < epsilon_n for a_n in p_{n,m}({a_m})",
          d.bonded_points.passed(), clause_detail(d.bonded_points));
      add("distance", "d(a_n, x) < epsilon_n for a_n in p_{n,m}(q_m(x))",
          d.bonded_nearest.passed(), clause_detail(d.bonded_nearest));
    });

  if (config.check_continuity && depth >= 2)
    stage("continuity", [&] {
      HyperLevelOptions ho;
      ho.cardinality_cap = config.cardinality_cap
                               ? config.cardinality_cap
                               : static_cast<std::size_t>(config.max_degree) + 2;
      for (int m = 2; m <= depth; ++m) {
        const HyperLevel fine = HyperLevel::build(ground, seq.level(m), ho);
        for (int n = m - 1; n >= 1; --n) {
          const std::string name = "p_{" + std::to_string(n) + "," + std::to_string(m) + "} monotone";
          try {
            std::vector<Level> chain(seq.levels.begin() + (n - 1), seq.levels.begin() + (m - 1));
            const MultiMap p = composite_bonding(ground, chain, fine, config.tie_tolerance);
            const ContinuityResult c = is_continuous(p, fine);
            std::string detail = "pairs=" + std::to_string(c.pairs_checked) +
                                 " image_diameter=" + format_real(p.diameter);
            if (c.violation)
              detail += " violation=" + std::to_string(c.violation->first) + "<=" +
                        std::to_string(c.violation->second);
            add("continuity", name, c.continuous, detail);
          } catch (const Error& e) {
            add("continuity", name, false, e.what());
          }
        }
      }
    });

  if (config.check_identity)
    stage("identity", [&] {
      rep.identity = check_identity_morphism(ground, seq, config.extra_bounds, config.tie_tolerance);
      const auto& idm = *rep.identity;
      for (const auto& w : idm.consecutive) add("identity", w.name + " in U_{2 epsilon_n}", w.passed, witness_detail(w));
      for (const auto& w : idm.identity) add("identity", w.name + " in U_{2 epsilon_n}", w.passed, witness_detail(w));
      for (std::size_t i = 0; i < idm.bounds.size(); ++i) {
        const auto& b = idm.bounds[i];
        const bool own = i < static_cast<std::size_t>(depth);
        const int limit = own ? static_cast<int>(i) + 1 : depth;
        const bool ok = b.n0_consecutive && b.n0_identity && *b.n0_consecutive <= limit &&
                        *b.n0_identity <= limit;
        std::string name = own ? "n0 <= " + std::to_string(limit) + " for bound 2*epsilon_" +
                                     std::to_string(limit)
                               : "n0 exists for extra bound " + format_real(b.bound);
        std::string detail = "bound=" + format_real(b.bound) + " n0_consecutive=" +
                             (b.n0_consecutive ? std::to_string(*b.n0_consecutive) : "none") +
                             " n0_identity=" +
                             (b.n0_identity ? std::to_string(*b.n0_identity) : "none");
        if (b.consecutive_vacuous) detail += " consecutive_vacuous";
        add("identity", name, ok, detail);
      }
    });

  if (config.check_diagram)
    stage("diagram", [&] {
      for (int n = 1; n < depth; ++n) {
        rep.diagram.push_back(check_diagram_commutes(ground, seq, n, config.tie_tolerance));
        const auto& w = rep.diagram.back();
        add("diagram", w.name + " in U_{2 epsilon_" + std::to_string(n) + "}", w.passed,
            witness_detail(w));
      }
    });

  if (with_homology && config.compute_homology && depth >= 2)
    stage("homology", [&] {
      ShapeOptions so;
      so.max_degree = config.max_degree;
      so.cardinality_cap = config.cardinality_cap;
      so.window = config.window;
      so.tie_tolerance = config.tie_tolerance;
      so.cross_check_rips = config.cross_check_rips;
      rep.homology = shape_report(ground, seq, so);
      for (const auto& lh : rep.homology->levels) {
        if (!config.cross_check_rips) break;
        std::string detail = "order";
        for (auto b : lh.betti) detail += " " + std::to_string(b);
        detail += " rips";
        for (auto b : lh.rips_betti) detail += " " + std::to_string(b);
        add("homology", "order complex and Rips complex Betti numbers agree at n=" +
                            std::to_string(lh.n),
            lh.betti == lh.rips_betti, detail);
      }
      std::string detail = "window=" + std::to_string(rep.homology->window) + " ranks";
      for (auto r : rep.homology->stabilized) detail += " " + std::to_string(r);
      add("homology", "stabilized ranks computed", true, detail);
    });
  return rep;
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw Error("cannot write " + p.string());
  return out;
}

}  // namespace

void write_bundle(const RunReport& report, const RunConfig& config,
                  const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_out(dir / "sequence.txt");
    write_sequence_text(report.sequence, out);
  }
  {
    auto out = open_out(dir / "sequence.csv");
    write_sequence_csv(report.sequence, out);
  }
  {
    auto out = open_out(dir / "witnesses.txt");
    if (report.identity) {
      for (const auto& w : report.identity->consecutive) write_witness_text(w, out);
      for (const auto& w : report.identity->identity) write_witness_text(w, out);
    }
    for (const auto& w : report.diagram) write_witness_text(w, out);
  }
  {
    auto out = open_out(dir / "verdicts.txt");
    for (const auto& v : report.verdicts) out << verdict_line(v) << '\n';
  }
  if (report.homology) {
    auto csv = open_out(dir / "homology.csv");
    write_homology_csv(*report.homology, csv);
    auto txt = open_out(dir / "homology.txt");
    write_homology_text(*report.homology, txt);
  }
  auto out = open_out(dir / "report.txt");
  out << "seed " << report.seed << '\n';
  if (config.input.empty()) {
    out << "space " << to_string(config.space.kind) << '\n';
    out << "samples " << config.space.samples << '\n';
  } else {
    out << "input " << config.input.string() << '\n';
  }
  out << "epsilon1 "
      << (report.sequence.levels.empty() ? std::string("none")
                                         : format_real(report.sequence.levels.front().epsilon))
      << '\n';
  out << "requested_depth " << config.depth << '\n';
  out << "depth " << report.sequence.depth() << '\n';
  out << "status " << to_string(report.sequence.status) << '\n';
  out << "density " << format_real(report.sequence.density) << '\n';
  out << "safety " << format_real(config.safety) << '\n';
  out << "net_ratio " << format_real(config.net_ratio) << '\n';
  out << "tie_tolerance " << format_real(config.tie_tolerance) << '\n';
  out << "max_degree " << config.max_degree << '\n';
  out << "window " << config.window << '\n';
  std::size_t failed = 0;
  for (const auto& v : report.verdicts) failed += v.passed ? 0 : 1;
  out << "checks " << report.verdicts.size() << " failed " << failed << '\n';
  if (report.homology) {
    out << "stabilized";
    for (auto r : report.homology->stabilized) out << ' ' << r;
    out << '\n';
  }
  for (const auto& [name, secs] : report.timings) out << "time " << name << ' ' << secs << '\n';
  out << "verdict " << (report.all_passed() ? "PASS" : "FAIL") << '\n';
}

}  // namespace finiteshape
