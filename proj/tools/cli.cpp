#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <memory>
#include <optional>
#include <fstream>
#include <ostream>

#include "finiteshape/error.hpp"
#include "finiteshape/io.hpp"
#include "finiteshape/parallel.hpp"
#include "finiteshape/pipeline.hpp"

namespace finiteshape {
namespace {

struct StageError : Error {
  StageError(const std::string& stage, const std::string& what) : Error(stage + ": " + what) {}
};

// Runs body and tags anything it throws with the stage name.
template <typename F>
auto in_stage(const std::string& stage, F&& body) {
  try {
    return body();
  } catch (const InvalidArgument&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

// Long option plus its underscore spelling, so config files can use either.
std::string names(const std::string& flag) {
  std::string alt = flag;
  for (char& c : alt)
    if (c == '-') c = '_';
  return "--" + flag + (alt == flag ? "" : ",--" + alt);
}

// Flat key = value config files, with the keys read as options of whichever
// subcommand was given.
class SubcommandConfig : public CLI::ConfigINI {
 public:
  explicit SubcommandConfig(const CLI::App& app) : app_(app) {}
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    auto items = CLI::ConfigINI::from_config(input);
    const auto subs = app_.get_subcommands();
    if (!subs.empty())
      for (auto& item : items)
        if (item.parents.empty()) item.parents.push_back(subs.front()->get_name());
    return items;
  }

 private:
  const CLI::App& app_;
};

struct SpaceArgs {
  std::string kind = "circle";
};

void add_space_options(CLI::App* app, RunConfig& cfg, SpaceArgs& sa) {
  app->add_option(names("space"), sa.kind,
                  "circle, warsaw_circle (warsaw), interval, cantor, two_points");
  app->add_option("--n," + names("samples"), cfg.space.samples, "sample count");
  app->add_option(names("radius"), cfg.space.radius);
  app->add_option(names("length"), cfg.space.length);
  app->add_option(names("cantor-depth"), cfg.space.cantor_depth);
  app->add_option(names("separation"), cfg.space.separation);
  app->add_option(names("seed"), cfg.seed, "root seed for every randomized step");
}

struct RunArgs {
  SpaceArgs space;
  std::string input_format = "coords";
  double epsilon1 = 0.0;
  bool no_distance = false, no_continuity = false, no_identity = false, no_diagram = false,
       no_homology = false, no_rips = false;
};

void add_run_options(CLI::App* app, RunConfig& cfg, RunArgs& ra) {
  add_space_options(app, cfg, ra.space);
  app->add_option(names("input"), cfg.input, "read the ground from a file instead");
  app->add_option(names("input-format"), ra.input_format, "coords or distmatrix")
      ->check(CLI::IsMember({"coords", "distmatrix"}));
  app->add_option(names("density"), cfg.input_density, "claimed density of an input file");
  app->add_option(names("epsilon1"), ra.epsilon1, "first epsilon (default: half the diameter)");
  app->add_option(names("depth"), cfg.depth, "levels requested");
  app->add_option(names("safety"), cfg.safety);
  app->add_option(names("net-ratio"), cfg.net_ratio, "nets are built at radius ratio * epsilon");
  app->add_option(names("tie-tolerance"), cfg.tie_tolerance);
  app->add_option(names("dim-cap"), cfg.max_degree, "highest homology degree");
  app->add_option(names("cardinality-cap"), cfg.cardinality_cap, "0: dim cap + 2");
  app->add_option(names("window"), cfg.window, "stabilization window in levels");
  app->add_option(names("extra-bound"), cfg.extra_bounds, "extra neighbourhood bounds to test");
  app->add_flag(names("no-distance"), ra.no_distance);
  app->add_flag(names("no-continuity"), ra.no_continuity);
  app->add_flag(names("no-identity"), ra.no_identity);
  app->add_flag(names("no-diagram"), ra.no_diagram);
  app->add_flag(names("no-homology"), ra.no_homology);
  app->add_flag(names("no-rips"), ra.no_rips);
}

SpaceKind space_kind(const std::string& s) {
  auto k = parse_space_kind(s);
  if (!k) throw InvalidArgument("unknown space '" + s + "'");
  return *k;
}

void finish_run_config(RunConfig& cfg, const RunArgs& ra, const CLI::App* app) {
  cfg.space.kind = space_kind(ra.space.kind);
  cfg.input_format =
      ra.input_format == "distmatrix" ? GroundFormat::distmatrix_csv : GroundFormat::coords_csv;
  if (app->count("--epsilon1")) cfg.epsilon1 = ra.epsilon1;
  cfg.check_distance_bounds = !ra.no_distance;
  cfg.check_continuity = !ra.no_continuity;
  cfg.check_identity = !ra.no_identity;
  cfg.check_diagram = !ra.no_diagram;
  cfg.compute_homology = !ra.no_homology;
  cfg.cross_check_rips = !ra.no_rips;
  cfg.validate();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  return out;
}

std::string fixed(double x, int prec = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, x);
  return buf;
}

void print_summary(const RunReport& rep, std::ostream& out) {
  out << "seed " << rep.seed << "  status " << to_string(rep.sequence.status) << "  depth "
      << rep.sequence.depth() << '\n';
  out << "   n     epsilon       gamma   net  elements  betti      rank_to_prev\n";
  for (const auto& lv : rep.sequence.levels) {
    char line[160];
    std::snprintf(line, sizeof line, "%4d %11s %11s %5zu", lv.index, fixed(lv.epsilon).c_str(),
                  fixed(lv.gamma).c_str(), lv.net.size());
    out << line;
    if (rep.homology) {
      const auto& lh = rep.homology->levels.at(static_cast<std::size_t>(lv.index - 1));
      std::string b, r;
      for (auto x : lh.betti) b += (b.empty() ? "" : ",") + std::to_string(x);
      for (const auto& ph : rep.homology->pairs)
        if (ph.fine == lv.index)
          for (auto x : ph.ranks) r += (r.empty() ? "" : ",") + std::to_string(x);
      std::snprintf(line, sizeof line, " %9zu  %-10s %s", lh.elements, b.c_str(),
                    r.empty() ? "-" : r.c_str());
      out << line;
    }
    out << '\n';
  }
  if (rep.homology) {
    out << "stabilized ranks (window " << rep.homology->window << "):";
    for (auto r : rep.homology->stabilized) out << ' ' << r;
    out << '\n';
  }
  std::size_t failed = 0;
  for (const auto& v : rep.verdicts)
    if (!v.passed) {
      ++failed;
      out << verdict_line(v) << '\n';
    }
  out << rep.verdicts.size() - failed << '/' << rep.verdicts.size() << " checks passed\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite approximations of compact metric spaces and their shape invariants"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "flat key = value file read as options of the subcommand; flags win");
  app.config_formatter(std::make_shared<SubcommandConfig>(app));
  app.allow_config_extras(CLI::config_extras_mode::error);
  std::size_t threads = 0;
  app.add_option("--threads", threads, "worker cap (0: available cores)")
      ->envname("FINITESHAPE_THREADS");

  // generate
  auto* gen = app.add_subcommand("generate", "sample a built-in space to a CSV file");
  RunConfig gen_cfg;
  SpaceArgs gen_space;
  std::string gen_out, gen_format = "coords";
  add_space_options(gen, gen_cfg, gen_space);
  gen->add_option("-o,--output", gen_out, "output file")->required();
  gen->add_option("--format", gen_format, "coords or distmatrix")
      ->check(CLI::IsMember({"coords", "distmatrix"}));

  // run / verify / exports share the run options
  RunConfig cfg;
  RunArgs ra;
  auto* run = app.add_subcommand("run", "build the sequence, run every check, write the bundle");
  add_run_options(run, cfg, ra);
  run->add_option(names("out"), cfg.output_dir, "output directory")->required();

  RunConfig vcfg;
  RunArgs vra;
  std::string sequence_file;
  auto* verify = app.add_subcommand("verify", "run the checks only, one verdict line each");
  add_run_options(verify, vcfg, vra);
  verify->add_option(names("sequence"), sequence_file, "check this sequence file instead");

  RunConfig pcfg;
  RunArgs pra;
  int poset_level = 1;
  std::string poset_out, poset_format = "dot";
  auto* export_poset = app.add_subcommand("export-poset", "write U_{2 epsilon_n}(A_n)");
  add_run_options(export_poset, pcfg, pra);
  export_poset->add_option("--level", poset_level)->required();
  export_poset->add_option("--format", poset_format)->check(CLI::IsMember({"dot", "csv"}));
  export_poset->add_option("-o,--output", poset_out)->required();

  RunConfig ccfg;
  RunArgs cra;
  int complex_level = 1;
  std::string complex_out, complex_format = "off", complex_kind = "order";
  auto* export_complex = app.add_subcommand("export-complex", "write an order or Rips complex");
  add_run_options(export_complex, ccfg, cra);
  export_complex->add_option("--level", complex_level)->required();
  export_complex->add_option("--kind", complex_kind)->check(CLI::IsMember({"order", "rips"}));
  export_complex->add_option("--format", complex_format)->check(CLI::IsMember({"off", "csv"}));
  export_complex->add_option("-o,--output", complex_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  set_thread_count(threads);

  try {
    if (gen->parsed()) {
      gen_cfg.space.kind = space_kind(gen_space.kind);
      gen_cfg.validate();
      const MetricGround g = in_stage("generate", [&] { return generate(gen_cfg.space); });
      in_stage("write", [&] {
        if (gen_format == "coords") write_coords_csv(g, gen_out);
        else write_distmatrix_csv(g, gen_out);
        return 0;
      });
      out << "wrote " << g.size() << " points to " << gen_out << " (density "
          << format_real(g.density()) << ", seed " << gen_cfg.seed << ")\n";
      return 0;
    }

    if (run->parsed()) {
      finish_run_config(cfg, ra, run);
      const MetricGround g = in_stage("ground", [&] { return prepare_ground(cfg); });
      const AdjustedSequence seq = in_stage("construction", [&] { return build_sequence(g, cfg); });
      const RunReport rep = evaluate(g, seq, cfg, true);
      in_stage("write", [&] {
        write_bundle(rep, cfg, cfg.output_dir);
        return 0;
      });
      print_summary(rep, out);
      return rep.all_passed() ? 0 : 1;
    }

    if (verify->parsed()) {
      finish_run_config(vcfg, vra, verify);
      const MetricGround g = in_stage("ground", [&] { return prepare_ground(vcfg); });
      const AdjustedSequence seq = in_stage("construction", [&] {
        return sequence_file.empty() ? build_sequence(g, vcfg) : read_sequence_file(sequence_file);
      });
      const RunReport rep = evaluate(g, seq, vcfg, false);
      out << "seed " << rep.seed << '\n';
      for (const auto& v : rep.verdicts) out << verdict_line(v) << '\n';
      return rep.all_passed() ? 0 : 1;
    }

    if (export_poset->parsed()) {
      finish_run_config(pcfg, pra, export_poset);
      const MetricGround g = in_stage("ground", [&] { return prepare_ground(pcfg); });
      const AdjustedSequence seq = in_stage("construction", [&] { return build_sequence(g, pcfg); });
      if (poset_level < 1 || poset_level > static_cast<int>(seq.depth()))
        throw InvalidArgument("level must lie in [1, " + std::to_string(seq.depth()) + "]");
      HyperLevelOptions ho;
      ho.cardinality_cap = pcfg.cardinality_cap ? pcfg.cardinality_cap
                                                : static_cast<std::size_t>(pcfg.max_degree) + 2;
      const HyperLevel h =
          in_stage("hyperspace", [&] { return HyperLevel::build(g, seq.level(poset_level), ho); });
      in_stage("write", [&] {
        auto f = open_output(poset_out);
        if (poset_format == "dot") write_poset_dot(h, f);
        else write_poset_csv(h, f);
        return 0;
      });
      out << "wrote " << h.size() << " elements of level " << poset_level << " to " << poset_out
          << '\n';
      return 0;
    }

    if (export_complex->parsed()) {
      finish_run_config(ccfg, cra, export_complex);
      const MetricGround g = in_stage("ground", [&] { return prepare_ground(ccfg); });
      const AdjustedSequence seq = in_stage("construction", [&] { return build_sequence(g, ccfg); });
      if (complex_level < 1 || complex_level > static_cast<int>(seq.depth()))
        throw InvalidArgument("level must lie in [1, " + std::to_string(seq.depth()) + "]");
      ComplexOptions co;
      co.max_dim = ccfg.max_degree + 1;
      const Level& lv = seq.level(complex_level);
      in_stage("invariants", [&] {
        VertexPositions pos;
        std::optional<SimplicialComplex> k;
        if (complex_kind == "rips") {
          k.emplace(rips_complex(g, lv, co));
          pos = net_positions(g, lv);
        } else {
          HyperLevelOptions ho;
          ho.cardinality_cap = ccfg.cardinality_cap
                                   ? ccfg.cardinality_cap
                                   : static_cast<std::size_t>(ccfg.max_degree) + 2;
          const HyperLevel h = HyperLevel::build(g, lv, ho);
          k.emplace(order_complex(h, co));
          pos = element_barycentres(g, h);
        }
        auto f = open_output(complex_out);
        if (complex_format == "off") write_complex_off(*k, pos, f);
        else write_complex_csv(*k, f);
        out << "wrote " << complex_kind << " complex of level " << complex_level << " ("
            << k->vertex_count() << " vertices) to " << complex_out << '\n';
        return 0;
      });
      return 0;
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}

}  // namespace finiteshape
