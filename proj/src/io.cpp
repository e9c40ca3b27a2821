#include "finiteshape/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "finiteshape/error.hpp"

namespace finiteshape {

std::string format_real(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw Error("cannot format number");
  return std::string(buf, end);
}

void write_sequence_text(const AdjustedSequence& seq, std::ostream& out) {
  out << "# adjusted approximative sequence\n";
  out << "density " << format_real(seq.density) << '\n';
  out << "ground_size " << seq.ground_size << '\n';
  out << "safety " << format_real(seq.options.safety) << '\n';
  out << "net_ratio " << format_real(seq.options.net_ratio) << '\n';
  out << "status " << to_string(seq.status) << '\n';
  for (const auto& lv : seq.levels) {
    out << "level " << lv.index << " epsilon " << format_real(lv.epsilon) << " gamma "
        << format_real(lv.gamma) << " net";
    for (PointIndex a : lv.net) out << ' ' << a;
    out << '\n';
  }
}

namespace {

double parse_real(const std::string& s, std::size_t line) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw ParseError("line " + std::to_string(line) + ": bad number '" + s + "'");
  return v;
}

template <typename T>
T parse_int(const std::string& s, std::size_t line) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw ParseError("line " + std::to_string(line) + ": bad integer '" + s + "'");
  return v;
}

}  // namespace

AdjustedSequence read_sequence_text(std::istream& in) {
  AdjustedSequence seq;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string key, value;
    ss >> key;
    if (key.empty()) continue;
    auto next = [&](const char* what) {
      std::string tok;
      if (!(ss >> tok))
        throw ParseError("line " + std::to_string(lineno) + ": missing " + what);
      return tok;
    };
    if (key == "density") {
      seq.density = parse_real(next("density"), lineno);
    } else if (key == "ground_size") {
      seq.ground_size = parse_int<std::size_t>(next("ground size"), lineno);
    } else if (key == "safety") {
      seq.options.safety = parse_real(next("safety"), lineno);
    } else if (key == "net_ratio") {
      seq.options.net_ratio = parse_real(next("net ratio"), lineno);
    } else if (key == "status") {
      value = next("status");
      if (value == "complete") seq.status = SequenceStatus::complete;
      else if (value == "stopped_at_density") seq.status = SequenceStatus::stopped_at_density;
      else throw ParseError("line " + std::to_string(lineno) + ": unknown status '" + value + "'");
    } else if (key == "level") {
      Level lv;
      lv.index = parse_int<int>(next("level index"), lineno);
      if (next("epsilon keyword") != "epsilon")
        throw ParseError("line " + std::to_string(lineno) + ": expected 'epsilon'");
      lv.epsilon = parse_real(next("epsilon"), lineno);
      if (next("gamma keyword") != "gamma")
        throw ParseError("line " + std::to_string(lineno) + ": expected 'gamma'");
      lv.gamma = parse_real(next("gamma"), lineno);
      if (next("net keyword") != "net")
        throw ParseError("line " + std::to_string(lineno) + ": expected 'net'");
      std::string tok;
      while (ss >> tok) lv.net.push_back(parse_int<PointIndex>(tok, lineno));
      if (lv.net.empty()) throw ParseError("line " + std::to_string(lineno) + ": empty net");
      std::sort(lv.net.begin(), lv.net.end());
      if (lv.index != static_cast<int>(seq.levels.size()) + 1)
        throw ParseError("line " + std::to_string(lineno) + ": levels must be numbered 1, 2, ...");
      seq.levels.push_back(std::move(lv));
    } else {
      throw ParseError("line " + std::to_string(lineno) + ": unknown record '" + key + "'");
    }
  }
  if (seq.levels.empty()) throw ParseError("sequence has no levels");
  return seq;
}

AdjustedSequence read_sequence_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_sequence_text(in);
}

void write_sequence_csv(const AdjustedSequence& seq, std::ostream& out) {
  out << "n,epsilon,gamma,net_size\n";
  for (const auto& lv : seq.levels)
    out << lv.index << ',' << format_real(lv.epsilon) << ',' << format_real(lv.gamma) << ','
        << lv.net.size() << '\n';
}

namespace {

void write_members(const PointSet& s, std::ostream& out) {
  for (std::size_t i = 0; i < s.size(); ++i) out << (i ? " " : "") << s[i];
}

}  // namespace

void write_poset_dot(const HyperLevel& poset, std::ostream& out) {
  out << "digraph U_" << poset.level().index << " {\n";
  for (ElementId id = 0; id < poset.size(); ++id) {
    out << "  e" << id << " [label=\"{";
    const auto& m = poset.element(id);
    for (std::size_t i = 0; i < m.size(); ++i) out << (i ? "," : "") << m[i];
    out << "}\"];\n";
  }
  for (const auto& [c, d] : poset.covering_pairs()) out << "  e" << c << " -> e" << d << ";\n";
  out << "}\n";
}

void write_poset_csv(const HyperLevel& poset, std::ostream& out) {
  out << "element_id,cardinality,diameter,members\n";
  for (ElementId id = 0; id < poset.size(); ++id) {
    out << id << ',' << poset.element(id).size() << ',' << format_real(poset.diameter(id)) << ',';
    write_members(poset.element(id), out);
    out << '\n';
  }
}

VertexPositions element_barycentres(const MetricGround& ground, const HyperLevel& poset) {
  if (!ground.has_coords()) return {};
  VertexPositions out;
  for (const auto& m : poset.elements()) {
    Point c(ground.dimension(), 0.0);
    for (PointIndex a : m)
      for (std::size_t k = 0; k < c.size(); ++k) c[k] += ground.coords()[a][k];
    for (double& v : c) v /= static_cast<double>(m.size());
    out.push_back(std::move(c));
  }
  return out;
}

VertexPositions net_positions(const MetricGround& ground, const Level& level) {
  if (!ground.has_coords()) return {};
  VertexPositions out;
  for (PointIndex a : level.net) out.push_back(ground.coords()[a]);
  return out;
}

void write_complex_off(const SimplicialComplex& complex, const VertexPositions& positions,
                       std::ostream& out) {
  if (!positions.empty() && positions.size() != complex.vertex_count())
    throw InvalidArgument("one position per vertex required");
  // A simplex is maximal when no stored simplex one dimension up has it as
  // a facet.
  std::vector<std::vector<char>> covered(static_cast<std::size_t>(complex.max_dim()) + 1);
  for (int d = 0; d <= complex.max_dim(); ++d) covered[d].assign(complex.count(d), 0);
  for (int d = 1; d <= complex.max_dim(); ++d)
    for (SimplexIndex i = 0; i < complex.count(d); ++i)
      for (SimplexIndex f : complex.boundary(d, i)) covered[d - 1][f] = 1;
  std::size_t facets = 0;
  for (int d = 0; d <= complex.max_dim(); ++d)
    for (char c : covered[d]) facets += c ? 0 : 1;

  out << "OFF\n" << complex.vertex_count() << ' ' << facets << " 0\n";
  for (std::size_t v = 0; v < complex.vertex_count(); ++v) {
    for (std::size_t k = 0; k < 3; ++k) {
      const double x = (!positions.empty() && k < positions[v].size()) ? positions[v][k] : 0.0;
      out << (k ? " " : "") << format_real(x);
    }
    out << '\n';
  }
  for (int d = 0; d <= complex.max_dim(); ++d)
    for (SimplexIndex i = 0; i < complex.count(d); ++i) {
      if (covered[d][i]) continue;
      out << d + 1;
      for (VertexId v : complex.simplex(d, i)) out << ' ' << v;
      out << '\n';
    }
}

void write_complex_csv(const SimplicialComplex& complex, std::ostream& out) {
  out << "dim,vertices\n";
  for (int d = 0; d <= complex.max_dim(); ++d)
    for (SimplexIndex i = 0; i < complex.count(d); ++i) {
      out << d << ',';
      const auto s = complex.simplex(d, i);
      for (std::size_t k = 0; k < s.size(); ++k) out << (k ? " " : "") << s[k];
      out << '\n';
    }
}

void write_homology_csv(const HomologyReport& report, std::ostream& out) {
  const std::size_t degrees = report.levels.empty() ? 0 : report.levels.front().betti.size();
  out << 'n';
  for (std::size_t d = 0; d < degrees; ++d) out << ",b" << d;
  for (std::size_t d = 0; d < degrees; ++d) out << ",rank" << d << "_to_prev";
  out << '\n';
  for (const auto& lh : report.levels) {
    out << lh.n;
    for (std::size_t b : lh.betti) out << ',' << b;
    const PairHomology* pair = nullptr;
    for (const auto& ph : report.pairs)
      if (ph.fine == lh.n) pair = &ph;
    for (std::size_t d = 0; d < degrees; ++d) {
      out << ',';
      if (pair) out << pair->ranks[d];
    }
    out << '\n';
  }
}

void write_homology_text(const HomologyReport& report, std::ostream& out) {
  for (const auto& lh : report.levels) {
    out << "level " << lh.n << " epsilon " << format_real(lh.epsilon) << " net " << lh.net_size
        << " elements " << lh.elements << " simplices";
    for (std::size_t c : lh.simplex_counts) out << ' ' << c;
    out << " betti";
    for (std::size_t b : lh.betti) out << ' ' << b;
    if (!lh.rips_betti.empty()) {
      out << " rips_betti";
      for (std::size_t b : lh.rips_betti) out << ' ' << b;
    }
    out << '\n';
  }
  for (const auto& ph : report.pairs) {
    out << "pair " << ph.fine << " -> " << ph.coarse << " augmented " << ph.augmented_elements
        << " ranks";
    for (std::size_t r : ph.ranks) out << ' ' << r;
    out << '\n';
  }
  out << "stabilized window " << report.window << " ranks";
  for (std::size_t r : report.stabilized) out << ' ' << r;
  out << '\n';
}

void write_witness_text(const HomotopyWitness& w, std::ostream& out) {
  out << "check=\"" << w.name << "\" bound=" << format_real(w.bound)
      << " max_union_diameter=" << format_real(w.max_union_diameter)
      << " slack=" << format_real(w.slack()) << " worst_item=" << w.worst_item
      << " verdict=" << (w.passed ? "PASS" : "FAIL") << '\n';
}

}  // namespace finiteshape
