#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "finiteshape/construction.hpp"
#include "finiteshape/error.hpp"
#include "finiteshape/homotopy.hpp"
#include "finiteshape/hyperspace.hpp"
#include "finiteshape/invariants.hpp"
#include "finiteshape/metric.hpp"
#include "finiteshape/parallel.hpp"
#include "finiteshape/pipeline.hpp"

namespace py = pybind11;
using namespace finiteshape;

namespace {

SpaceKind kind_from(const std::string& name) {
  const auto k = parse_space_kind(name);
  if (!k) throw InvalidArgument("unknown space '" + name + "'");
  return *k;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Finite approximations of compact metric spaces and their shape invariants.";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<MetricError>(m, "MetricError", error.ptr());
  py::register_exception<InvariantViolation>(m, "InvariantViolation", error.ptr());
  py::register_exception<CapacityError>(m, "CapacityError", error.ptr());

  m.def("set_thread_count", &set_thread_count, py::arg("threads"));
  m.def("thread_count", &thread_count);

  py::class_<MetricGround>(m, "MetricGround")
      .def(py::init<std::vector<Point>, double>(), py::arg("coords"), py::arg("density") = 0.0)
      .def_static("from_distances", &MetricGround::from_distances, py::arg("n"), py::arg("table"),
                  py::arg("density") = 0.0)
      .def("__len__", &MetricGround::size)
      .def_property_readonly("size", &MetricGround::size)
      .def_property_readonly("density", &MetricGround::density)
      .def_property_readonly("coords", &MetricGround::coords)
      .def("dist", &MetricGround::dist, py::arg("i"), py::arg("j"))
      .def("diameter", &MetricGround::diameter)
      .def("diameter_of", &MetricGround::diameter_of, py::arg("subset"))
      .def("max_nearest_neighbor", &MetricGround::max_nearest_neighbor)
      .def("validate", &MetricGround::validate, py::arg("seed") = 0);

  m.def(
      "generate",
      [](const std::string& space, std::size_t samples, double radius, double length, int cantor_depth,
         double separation, std::uint64_t seed) {
        SpaceSpec s;
        s.kind = kind_from(space);
        s.samples = samples;
        s.radius = radius;
        s.length = length;
        s.cantor_depth = cantor_depth;
        s.separation = separation;
        s.seed = seed;
        return generate(s);
      },
      py::arg("space"), py::arg("samples") = 256, py::arg("radius") = 1.0, py::arg("length") = 1.0,
      py::arg("cantor_depth") = 4, py::arg("separation") = 1.0, py::arg("seed") = 0);

  m.def(
      "load_ground",
      [](const std::filesystem::path& path, const std::string& format, double density) {
        if (format != "coords" && format != "distmatrix")
          throw InvalidArgument("format must be 'coords' or 'distmatrix'");
        return load_ground(path, format == "coords" ? GroundFormat::coords_csv : GroundFormat::distmatrix_csv,
                           density);
      },
      py::arg("path"), py::arg("format") = "coords", py::arg("density") = 0.0);

  py::class_<Level>(m, "Level")
      .def_readonly("index", &Level::index)
      .def_readonly("epsilon", &Level::epsilon)
      .def_readonly("gamma", &Level::gamma)
      .def_readonly("net", &Level::net)
      .def("__repr__", [](const Level& l) {
        return "<Level " + std::to_string(l.index) + " epsilon=" + std::to_string(l.epsilon) +
               " net=" + std::to_string(l.net.size()) + ">";
      });

  py::class_<AdjustedSequence>(m, "AdjustedSequence")
      .def_readonly("levels", &AdjustedSequence::levels)
      .def_readonly("density", &AdjustedSequence::density)
      .def_readonly("ground_size", &AdjustedSequence::ground_size)
      .def_property_readonly("depth", &AdjustedSequence::depth)
      .def_property_readonly("status",
                             [](const AdjustedSequence& s) { return std::string(to_string(s.status)); })
      .def("level", &AdjustedSequence::level, py::arg("n"), py::return_value_policy::reference_internal);

  m.def("build_net", &build_net, py::arg("ground"), py::arg("epsilon"));
  m.def(
      "gamma", [](const MetricGround& g, const PointSet& net) { return finiteshape::gamma(g, net); },
      py::arg("ground"), py::arg("net"));
  m.def(
      "build_adjusted_sequence",
      [](const MetricGround& g, double epsilon1, int depth, double safety, double net_ratio) {
        SequenceOptions o;
        o.safety = safety;
        o.net_ratio = net_ratio;
        return build_adjusted_sequence(g, epsilon1, depth, o);
      },
      py::arg("ground"), py::arg("epsilon1"), py::arg("depth"), py::arg("safety") = 0.9,
      py::arg("net_ratio") = 1.0);

  py::class_<SequenceCheck>(m, "SequenceCheck")
      .def_readonly("name", &SequenceCheck::name)
      .def_readonly("level", &SequenceCheck::level)
      .def_readonly("lhs", &SequenceCheck::lhs)
      .def_readonly("rhs", &SequenceCheck::rhs)
      .def_readonly("passed", &SequenceCheck::passed)
      .def_property_readonly("slack", &SequenceCheck::slack);
  m.def("check_sequence", &check_sequence, py::arg("ground"), py::arg("sequence"));

  py::class_<MultiMap>(m, "MultiMap")
      .def_readonly("images", &MultiMap::images)
      .def_readonly("diameter", &MultiMap::diameter);
  m.def("nearest_point_map", &nearest_point_map, py::arg("ground"), py::arg("net"),
        py::arg("tie_tolerance") = kDefaultTieTolerance);

  py::class_<HyperLevel>(m, "HyperLevel")
      .def_static(
          "build",
          [](const MetricGround& g, const Level& lv, std::size_t cap) {
            HyperLevelOptions o;
            o.cardinality_cap = cap;
            return HyperLevel::build(g, lv, o);
          },
          py::arg("ground"), py::arg("level"), py::arg("cardinality_cap") = 4)
      .def("__len__", &HyperLevel::size)
      .def_property_readonly("elements", &HyperLevel::elements)
      .def_property_readonly("bound", &HyperLevel::bound)
      .def("find", &HyperLevel::find, py::arg("members"))
      .def("leq", &HyperLevel::leq)
      .def("covering_pairs", &HyperLevel::covering_pairs);
  m.def("bonding_map", &bonding_map, py::arg("ground"), py::arg("fine"), py::arg("coarse"),
        py::arg("tie_tolerance") = kDefaultTieTolerance);
  m.def(
      "is_continuous",
      [](const MultiMap& map, const HyperLevel& domain) { return is_continuous(map, domain).continuous; },
      py::arg("map"), py::arg("domain"));

  py::class_<DistanceClause>(m, "DistanceClause")
      .def_readonly("name", &DistanceClause::name)
      .def_readonly("instances", &DistanceClause::instances)
      .def_readonly("violations", &DistanceClause::violations)
      .def_readonly("worst_slack", &DistanceClause::worst_slack)
      .def_readonly("worst_ratio", &DistanceClause::worst_ratio);
  py::class_<DistanceBoundsReport>(m, "DistanceBoundsReport")
      .def_readonly("nearest_pairs", &DistanceBoundsReport::nearest_pairs)
      .def_readonly("bonded_points", &DistanceBoundsReport::bonded_points)
      .def_readonly("bonded_nearest", &DistanceBoundsReport::bonded_nearest)
      .def_property_readonly("passed", &DistanceBoundsReport::passed);
  m.def("verify_distance_bounds", &verify_distance_bounds, py::arg("ground"), py::arg("sequence"),
        py::arg("tie_tolerance") = kDefaultTieTolerance);

  py::class_<HomotopyWitness>(m, "HomotopyWitness")
      .def_readonly("name", &HomotopyWitness::name)
      .def_readonly("bound", &HomotopyWitness::bound)
      .def_readonly("max_union_diameter", &HomotopyWitness::max_union_diameter)
      .def_readonly("worst_item", &HomotopyWitness::worst_item)
      .def_readonly("passed", &HomotopyWitness::passed)
      .def_property_readonly("slack", &HomotopyWitness::slack);
  m.def("check_homotopic_in_U", &check_homotopic_in_U, py::arg("target"), py::arg("f"), py::arg("g"),
        py::arg("bound"), py::arg("name") = "");

  py::class_<BoundWitness>(m, "BoundWitness")
      .def_readonly("bound", &BoundWitness::bound)
      .def_readonly("n0_consecutive", &BoundWitness::n0_consecutive)
      .def_readonly("n0_identity", &BoundWitness::n0_identity);
  py::class_<IdentityMorphismReport>(m, "IdentityMorphismReport")
      .def_readonly("bounds", &IdentityMorphismReport::bounds)
      .def_readonly("violations", &IdentityMorphismReport::violations)
      .def_readonly("insufficient_depth", &IdentityMorphismReport::insufficient_depth)
      .def_property_readonly("passed", &IdentityMorphismReport::passed);
  m.def("check_identity_morphism", &check_identity_morphism, py::arg("ground"), py::arg("sequence"),
        py::arg("extra_bounds") = std::vector<double>{}, py::arg("tie_tolerance") = kDefaultTieTolerance);
  m.def("check_diagram_commutes", &check_diagram_commutes, py::arg("ground"), py::arg("sequence"),
        py::arg("n"), py::arg("tie_tolerance") = kDefaultTieTolerance);

  py::class_<LevelHomology>(m, "LevelHomology")
      .def_readonly("n", &LevelHomology::n)
      .def_readonly("epsilon", &LevelHomology::epsilon)
      .def_readonly("net_size", &LevelHomology::net_size)
      .def_readonly("elements", &LevelHomology::elements)
      .def_readonly("betti", &LevelHomology::betti)
      .def_readonly("rips_betti", &LevelHomology::rips_betti);
  py::class_<PairHomology>(m, "PairHomology")
      .def_readonly("fine", &PairHomology::fine)
      .def_readonly("coarse", &PairHomology::coarse)
      .def_readonly("ranks", &PairHomology::ranks);
  py::class_<HomologyReport>(m, "HomologyReport")
      .def_readonly("levels", &HomologyReport::levels)
      .def_readonly("pairs", &HomologyReport::pairs)
      .def_readonly("window", &HomologyReport::window)
      .def_readonly("stabilized", &HomologyReport::stabilized);
  m.def(
      "shape_report",
      [](const MetricGround& g, const AdjustedSequence& seq, int max_degree, std::size_t window,
         bool cross_check_rips) {
        ShapeOptions o;
        o.max_degree = max_degree;
        o.window = window;
        o.cross_check_rips = cross_check_rips;
        return shape_report(g, seq, o);
      },
      py::arg("ground"), py::arg("sequence"), py::arg("max_degree") = 1, py::arg("window") = 2,
      py::arg("cross_check_rips") = true);

  m.def(
      "rips_betti",
      [](const MetricGround& g, const Level& lv, int max_degree) {
        ComplexOptions o;
        o.max_dim = max_degree + 1;
        return betti(rips_complex(g, lv, o), max_degree);
      },
      py::arg("ground"), py::arg("level"), py::arg("max_degree") = 1);
  m.def(
      "order_betti",
      [](const HyperLevel& h, int max_degree) {
        ComplexOptions o;
        o.max_dim = max_degree + 1;
        return betti(order_complex(h, o), max_degree);
      },
      py::arg("poset"), py::arg("max_degree") = 1);

  py::class_<Verdict>(m, "Verdict")
      .def_readonly("stage", &Verdict::stage)
      .def_readonly("name", &Verdict::name)
      .def_readonly("passed", &Verdict::passed)
      .def_readonly("detail", &Verdict::detail)
      .def("__str__", &verdict_line);
  py::class_<RunReport>(m, "RunReport")
      .def_readonly("seed", &RunReport::seed)
      .def_readonly("sequence", &RunReport::sequence)
      .def_readonly("verdicts", &RunReport::verdicts)
      .def_readonly("homology", &RunReport::homology)
      .def_readonly("timings", &RunReport::timings)
      .def_property_readonly("all_passed", &RunReport::all_passed);

  // The whole pipeline in one call, as `finiteshape run` does it.
  m.def(
      "run",
      [](const std::string& space, std::size_t samples, std::optional<double> epsilon1, int depth,
         double safety, double net_ratio, bool homology, const std::filesystem::path& output_dir,
         std::uint64_t seed) {
        RunConfig cfg;
        cfg.space.kind = kind_from(space);
        cfg.space.samples = samples;
        cfg.epsilon1 = epsilon1;
        cfg.depth = depth;
        cfg.safety = safety;
        cfg.net_ratio = net_ratio;
        cfg.compute_homology = homology;
        cfg.output_dir = output_dir;
        cfg.seed = seed;
        cfg.validate();
        py::gil_scoped_release release;
        const auto g = prepare_ground(cfg);
        const auto seq = build_sequence(g, cfg);
        auto rep = evaluate(g, seq, cfg, homology);
        if (!output_dir.empty()) write_bundle(rep, cfg, output_dir);
        return rep;
      },
      py::arg("space") = "circle", py::arg("samples") = 256, py::arg("epsilon1") = py::none(),
      py::arg("depth") = 8, py::arg("safety") = 0.9, py::arg("net_ratio") = 0.2,
      py::arg("homology") = true, py::arg("output_dir") = std::filesystem::path{}, py::arg("seed") = 0);
}
