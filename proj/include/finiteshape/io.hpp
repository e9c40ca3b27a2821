#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "finiteshape/construction.hpp"
#include "finiteshape/homotopy.hpp"
#include "finiteshape/hyperspace.hpp"
#include "finiteshape/invariants.hpp"
#include "finiteshape/metric.hpp"

namespace finiteshape {

// Shortest text that reads back to the same double.
std::string format_real(double x);

// One record per level:
//   level <n> epsilon <e> gamma <g> net <i0> <i1> ...
// preceded by `density`, `ground_size`, `safety`, `net_ratio` and `status`
// lines. Lines starting with '#' are comments.
void write_sequence_text(const AdjustedSequence& seq, std::ostream& out);
AdjustedSequence read_sequence_text(std::istream& in);
AdjustedSequence read_sequence_file(const std::filesystem::path& path);

// n,epsilon,gamma,net_size
void write_sequence_csv(const AdjustedSequence& seq, std::ostream& out);

// Edge C -> D iff D covers C; nodes labelled with their sorted members.
void write_poset_dot(const HyperLevel& poset, std::ostream& out);
// element_id,cardinality,diameter,members (members space separated)
void write_poset_csv(const HyperLevel& poset, std::ostream& out);

// Vertex positions for a complex export; empty means all at the origin.
using VertexPositions = std::vector<Point>;
// Barycentres of the poset elements (the barycentric subdivision picture).
VertexPositions element_barycentres(const MetricGround& ground, const HyperLevel& poset);
// Coordinates of the net points of a level.
VertexPositions net_positions(const MetricGround& ground, const Level& level);

// OFF header, vertex positions padded to three coordinates, then the
// maximal simplices as "k v0 .. v{k-1}".
void write_complex_off(const SimplicialComplex& complex, const VertexPositions& positions,
                       std::ostream& out);
// dim,vertices with one row per stored simplex, vertices space separated.
void write_complex_csv(const SimplicialComplex& complex, std::ostream& out);

// n,b0,b1[,b2],rank0_to_prev,rank1_to_prev[,rank2_to_prev]; the ranks are
// those of H_k(level n) -> H_k(level n-1), empty at level 1.
void write_homology_csv(const HomologyReport& report, std::ostream& out);
void write_homology_text(const HomologyReport& report, std::ostream& out);

// check=<name> bound=.. max_union_diameter=.. slack=.. worst_item=.. verdict=PASS|FAIL
void write_witness_text(const HomotopyWitness& w, std::ostream& out);

}  // namespace finiteshape
