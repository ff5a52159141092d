#pragma once
// Graph planar algebra engine: boxes are finitely supported functionals on
// based loops of a bipartite graph, with multiplication, trace, partial
// traces, caps/cup insertions, rotation, Fourier shift, tensoring, and an
// embedding of Temperley-Lieb diagrams.
//
// Loop coordinates for a k-box: the 2k boundary points are numbered 1..k along
// the bottom (left to right) and k+1..2k along the top (right to left).  The
// loop entry gamma[i] is the region label between points i and i+1, so
// gamma[0] is the left region, gamma[k] the right region, gamma[1..k-1] the
// bottom interior and gamma[k+1..2k-1] the top interior read right to left.
//
// Two weight conventions are supported.  For cap/cup arcs, with
// w = dim(enclosed)/dim(ambient) per critical point:
//   spherical: sqrt(w) for every critical point;
//   lopsided:  w for each minimum, 1 for each maximum.
// Caps/cups adjacent to the bottom or top boundary have one critical point.
// Cap arcs closing around a side of a box have two (one minimum and one
// maximum); side cup insertions are straight chords with none.  The rotation
// weights are documented at fourier_shift below.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "jf/bigraph.hpp"
#include "jf/scalar.hpp"
#include "jf/tl.hpp"

namespace jf::gpa {

enum class Convention { spherical, lopsided };

// Immutable per-graph data shared by all boxes: certified Frobenius-Perron
// dimensions and the graph norm at the ambient working precision.
struct Context {
  BipartiteGraph graph;
  std::vector<Ball> dim;   // per vertex, dim[star] = 1
  std::vector<Ball> root_dim;  // sqrt(dim), cached
  Ball delta;
  int star = 0;

  explicit Context(BipartiteGraph g);
  int num_vertices() const { return graph.num_vertices(); }
  // Neighbor ids in ascending order (simply laced graphs only).
  const std::vector<int>& neighbors(int v) const { return nbrs_[(size_t)v]; }
  bool adjacent(int u, int v) const;

 private:
  std::vector<std::vector<int>> nbrs_;
};

// Loops are packed one vertex per nibble, entry 0 in the highest used nibble,
// so numeric order on keys equals lexicographic order on loops.
using PackedLoop = std::uint64_t;

PackedLoop pack_loop(const std::vector<int>& loop);
std::vector<int> unpack_loop(PackedLoop key, int length);

class Box {
 public:
  Box(const Context* ctx, int k, int base_parity,
      Convention conv = Convention::spherical);

  const Context& ctx() const { return *ctx_; }
  int depth() const { return k_; }
  int base_parity() const { return base_parity_; }
  Convention convention() const { return conv_; }
  const std::map<PackedLoop, CBall>& terms() const { return vals_; }
  bool empty() const { return vals_.empty(); }

  // Absent loops read as zero.
  CBall value(const std::vector<int>& loop) const;
  CBall value(PackedLoop key) const;
  void set_value(const std::vector<int>& loop, const CBall& v);
  void add_value(PackedLoop key, const CBall& v);

  Box operator+(const Box& o) const;
  Box operator-(const Box& o) const;
  Box scaled(const CBall& c) const;
  Box scaled(const Ball& c) const;

  // True when every stored value has magnitude certainly below 2^mag_exp.
  bool is_zero(long mag_exp) const;
  // Largest upper bound over stored values' magnitudes (0 if empty).
  Ball sup_magnitude() const;

  static Box identity(const Context* ctx, int k, int base_parity,
                      Convention conv = Convention::spherical);

 private:
  const Context* ctx_;
  int k_;
  int base_parity_;
  Convention conv_;
  std::map<PackedLoop, CBall> vals_;

  friend Box multiply(const Box& x, const Box& y);
  friend Box adjoint(const Box& x);
  friend Box tensor(const Box& x, const Box& y);
  friend Box cap(const Box& x, int p);
  friend Box cup(const Box& x, int q);
};

// Stacked composition, x below y, gluing x's top path to y's bottom path.
Box multiply(const Box& x, const Box& y);
// x*(gamma) = conj(x(gamma reversed)), the vertical mirror.
Box adjoint(const Box& x);
// Horizontal juxtaposition, x to the left of y; no weight factors.
Box tensor(const Box& x, const Box& y);

// Join boundary points p and p+1 (cyclic; 1 <= p <= 2k) with an outside arc,
// producing a (k-1)-box.  p = k closes around the right side, p = 2k around
// the left side (which moves the base point and flips the base parity).
Box cap(const Box& x, int p);

// Insert a new arc whose endpoints become points q and q+1 of the resulting
// (k+1)-box (cyclic; 1 <= q <= 2k+2).  q <= k inserts a bottom arc (one
// maximum), k+2 <= q <= 2k+1 a top arc (one minimum); q = k+1 and q = 2k+2
// insert a straight vertical chord right resp. left of the box, the same as
// tensoring with a single identity strand on that side.
Box cup(const Box& x, int q);

// Close the rightmost / leftmost strand (cap at p = k resp. p = 2k).
Box partial_trace_right(const Box& x);
Box partial_trace_left(const Box& x);

// Full right closure evaluated at base vertex v:
//   sum over paths p from v of x(p . reverse(p)) * dim(end)/dim(v).
CBall trace_at(const Box& x, int v);
// trace_at for every vertex of the box's base parity, ascending vertex id.
std::vector<CBall> trace_table(const Box& x);
// trace_at the canonical base (the star for even parity, else the first odd
// vertex).
CBall trace(const Box& x);
// Largest magnitude upper bound of pairwise differences in trace_table: zero
// exactly when the closure is a scalar multiple of the empty diagram.
Ball scalarity_defect(const Box& x);

// <x,y> = Tr(x* y): conjugate-linear in x, linear in y.
CBall inner_product(const Box& x, const Box& y);

// One-click rotation of the boundary: shift forward moves gamma'[i] =
// gamma[i+1] (the base parity flips).  The rotation tangle bends one strand
// around each side of the box (a maximum on one side, a minimum on the
// other), so the weight is
//   spherical: sqrt(dim(g0) dim(gk) / (dim(g'0) dim(g'k)))
//   lopsided:  dim(gk)/dim(g'0) for direction -1, dim(g0)/dim(g'k) for +1
// (the conjugate of the spherical weight by the diagonal convention
// translation; it squares to the lopsided two-click rotation factor).
Box fourier_shift(const Box& x, int direction /* +1 or -1 */);
// Two clicks: gamma'[i] = gamma[i+2·direction].
Box rotate(const Box& x, int direction = +1);

// Values restricted to loops whose base region carries vertex v.
Box restrict_to_base(const Box& x, int v);
// Values restricted to loops based at the context's star vertex.
Box cut_down(const Box& x);

// Embedding of a square Temperley-Lieb diagram (or linear combination) as a
// box: a loop contributes when its regions are constant across every strand,
// weighted per same-row arc (bottom arcs as maxima, top arcs as minima).
Box box_from_tl(const Context* ctx, const tl::Diagram& d, int base_parity,
                Convention conv = Convention::spherical);
Box box_from_tl(const Context* ctx, const tl::Element& e, int base_parity,
                Convention conv = Convention::spherical);

// One line per stored loop, "v0-v1-...-v(2k-1): <scalar>", lexicographic;
// scalars printed as exact dyadic rationals of the ball midpoints.
std::string dump(const Box& x);

}  // namespace jf::gpa
