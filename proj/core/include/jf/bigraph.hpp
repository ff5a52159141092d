#pragma once
// Bipartite graphs with optional dual data, their codec strings, certified
// Frobenius-Perron data, and based-loop enumeration.
//
// Codec: ("bwd"|"gbg") block ("v" block)* ["duals" dblock ("v" dblock)*]
//   block  = row ("p" row)*            one block per new depth (depth 1, 2, ...)
//   row    = digit ("x" digit)*        one row per vertex at the new depth,
//                                      entries = edge multiplicities to the
//                                      vertices of the previous depth
//   dblock = int ("x" int)*            one per even depth: 1-based image of
//                                      each vertex under the dual involution
// Depth 0 always holds a single base vertex (the star).

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "jf/scalar.hpp"

namespace jf {

struct BipartiteGraph {
  std::string kind;  // "bwd" or "gbg"
  std::vector<int> depth_of;               // per vertex id (codec order)
  std::vector<std::vector<int>> at_depth;  // vertex ids per depth
  // symmetric adjacency with multiplicities, ascending neighbor id
  std::vector<std::vector<std::pair<int, int>>> adj;
  std::vector<int> dual;  // global vertex id, or -1 where undefined
  bool has_duals = false;

  int num_vertices() const { return static_cast<int>(depth_of.size()); }
  int max_depth() const { return static_cast<int>(at_depth.size()) - 1; }
  bool simply_laced() const;
  int multiplicity(int u, int v) const;
  // 0 for vertices at even depth (the star side), 1 for odd
  int parity(int v) const { return depth_of[static_cast<size_t>(v)] & 1; }
  std::string vertex_name(int v) const;  // "<depth>.<index-within-depth>"
  int vertex_at(int depth, int index) const {
    return at_depth[static_cast<size_t>(depth)][static_cast<size_t>(index)];
  }
};

BipartiteGraph parse_graph(const std::string& codec);
std::string print_graph(const BipartiteGraph& g);

// JSON alternative: {"kind": "...", "depths":[counts per depth, depth 0
// first], "edges":[[d,i,j],...], "duals":[flat 0-based images, even depths
// ascending]}.  An edge entry [d,i,j] joins vertex i at depth d to vertex j
// at depth d+1; repeating an entry raises the multiplicity.
BipartiteGraph graph_from_json_text(const std::string& json_text);
std::string graph_to_json_text(const BipartiteGraph& g);

// ------------------------------------------------------- Frobenius-Perron

struct FPData {
  Ball norm;               // graph norm delta (largest adjacency eigenvalue)
  std::vector<Ball> dims;  // per vertex id, normalized dims[star] = 1
};

// Certified enclosures: the norm via Collatz-Wielandt bounds on an exact
// positive test vector, the dimension vector by solving the eigensystem with
// the star entry pinned to 1.
FPData fp_dimensions(const BipartiteGraph& g);

// ----------------------------------------------------------------- loops

// A based loop, listed as its 2k visited vertices starting at the base.
using Loop = std::vector<uint8_t>;

// All loops of the given (even) length based at `base`, in lexicographic
// order.  Requires a simply-laced graph.
std::vector<Loop> enumerate_loops(const BipartiteGraph& g, int length, int base);

// Loops based at every vertex of the given parity, lexicographic (so grouped
// by base vertex id).
std::vector<Loop> enumerate_loops_with_parity(const BipartiteGraph& g,
                                              int length, int parity);

// Independent loop-counting oracle: (A^length)_{base,base} via integer
// matrix powers.
long long count_closed_walks(const BipartiteGraph& g, int length, int base);

}  // namespace jf
