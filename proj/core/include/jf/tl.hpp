#pragma once
// Temperley-Lieb diagram algebra with ball-arithmetic coefficients.
//
// A diagram is a non-crossing perfect pairing of boundary points of a
// rectangle, indexed cyclically: bottom row left to right, then top row right
// to left (counterclockwise).  Rectangular diagrams (different numbers of
// bottom and top points) are supported so that strands can be bent around a
// corner; bending only reassigns points between the two rows and leaves the
// cyclic pairing untouched.
//
// Elements are finite linear combinations of diagrams with complex ball
// coefficients.  Composition stacks one element on top of another; every
// closed circle formed contributes a factor of the loop parameter delta.
// A Context caches quantum numbers and Jones-Wenzl projections for one delta.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "jf/scalar.hpp"

namespace jf::tl {

// ------------------------------------------------------------------ Diagram

struct Diagram {
  int bottom = 0;
  int top = 0;
  // pair[p] = the point matched with p; involution without fixed points over
  // bottom + top cyclic indices.
  std::vector<int> pair;

  int points() const { return bottom + top; }
  // Cyclic index of the i-th bottom point from the left.
  int bottom_point(int i) const { return i; }
  // Cyclic index of the i-th top point from the left.
  int top_point(int i) const { return bottom + top - 1 - i; }

  bool is_square() const { return bottom == top; }
  bool is_identity() const;
  // Involution, no fixed points, and non-crossing in the cyclic order.
  bool valid() const;

  static Diagram identity(int k);
  // Square k-diagram with a cap joining bottom points (i, i+1) and a cup
  // joining top points (i, i+1); 0 <= i <= k-2.
  static Diagram cap_cup(int k, int i);
  // Square k-diagram with one cap joining bottom points (cap_left, cap_left+1)
  // and one cup joining top points (cup_left, cup_left+1); all other strands
  // are through strands connecting in order.
  static Diagram single_cup_cap(int k, int cup_left, int cap_left);

  friend bool operator==(const Diagram& a, const Diagram& b) = default;
  friend auto operator<=>(const Diagram& a, const Diagram& b) = default;
};

struct Composed {
  Diagram diagram;
  int circles = 0;
};

// Stack `above` on top of `below`; requires below.top == above.bottom.
Composed compose(const Diagram& below, const Diagram& above);

// Vertical flip (bottom row and top row exchanged).
Diagram adjoint_diagram(const Diagram& d);

// Place b to the right of a.
Diagram tensor(const Diagram& a, const Diagram& b);

// Move the rightmost bottom point to become the rightmost top point (or back).
// The cyclic pairing is unchanged.
Diagram bend_up_right(const Diagram& d);
Diagram bend_down_right(const Diagram& d);

// Number of closed loops when the top row is folded onto the bottom row
// (square diagrams only).
int circles_in_closure(const Diagram& d);

// Left->right positions of the left legs of pairs lying entirely in the top
// row (cups) or entirely in the bottom row (caps); each entry is (left leg,
// right leg) in row coordinates.
std::vector<std::pair<int, int>> top_cups(const Diagram& d);
std::vector<std::pair<int, int>> bottom_caps(const Diagram& d);

// All square non-crossing diagrams on k strands, Catalan(k) of them, in a
// deterministic (lexicographic) order.
const std::vector<Diagram>& all_diagrams(int k);

// ------------------------------------------------------------------ Element

class Element {
 public:
  Element(int bottom, int top) : bottom_(bottom), top_(top) {}
  static Element from_diagram(const Diagram& d);
  static Element from_diagram(const Diagram& d, const CBall& coeff);

  int bottom() const { return bottom_; }
  int top() const { return top_; }
  bool is_square() const { return bottom_ == top_; }
  const std::map<Diagram, CBall>& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  void add_term(const Diagram& d, const CBall& coeff);
  CBall coefficient(const Diagram& d) const;

  Element operator+(const Element& o) const;
  Element operator-(const Element& o) const;
  Element scaled(const CBall& c) const;
  Element scaled(const Ball& c) const;

  // Stack `above` on top of *this; circles contribute powers of delta.
  Element compose_with(const Element& above, const Ball& delta) const;
  // Conjugate coefficients, vertically flip diagrams.
  Element adjoint() const;
  // Tensor with a single vertical strand on the right.
  Element with_strand_right() const;
  // Bend applied to every diagram (coefficients unchanged).
  Element bent_up_right() const;
  // Close the rightmost strand (top-right point onto bottom-right point).
  Element partial_close_right(const Ball& delta) const;

  // Markov trace: fold top onto bottom, each circle a factor of delta
  // (square elements only).
  CBall trace_closure(const Ball& delta) const;

 private:
  int bottom_;
  int top_;
  std::map<Diagram, CBall> terms_;
};

// Tr(x* y), conjugate-linear in x, linear in y.
CBall inner_product(const Element& x, const Element& y, const Ball& delta);

// ------------------------------------------------------------------ Context

class Context {
 public:
  explicit Context(Ball delta) : delta_(std::move(delta)) {}

  const Ball& delta() const { return delta_; }
  // Quantum number [k] with [2] = delta, cached.
  Ball q(long k);
  // Jones-Wenzl projection on k strands, cached; computed by the Wenzl
  // recursion f(k+1) = f(k)x1 - ([k]/[k+1]) (f(k)x1) e_k (f(k)x1).
  const Element& jw(int k);

  // Product of jw(n+1) (on top, with its rightmost bottom strand bent up
  // around the right corner to the top boundary) with jw(a+1) x jw(b+1)
  // (below, joined by one interior cup); a square element of TL_{n+2},
  // a + b = n.  Pairs non-trivially with exactly two diagrams.
  Element bridge(int n, int a, int b);

  // Element dual, with respect to the diagram basis of TL_{n+2} (a + b = n),
  // to the unique non-identity diagram that bridge(n,a,b) pairs with:
  //   ([a+1][b+1]/[n+2]^2) bridge(n,a,b) - ((-1)^b [a+1]/([n+2][n+3])) jw(n+2)
  Element dual_single_cup_cap(int n, int a, int b);

 private:
  Ball delta_;
  std::map<long, Ball> q_cache_;
  std::map<int, Element> jw_cache_;
};

// Closed-form Jones-Wenzl coefficient of a square diagram with at most two
// cups in the top row, or nullopt if it has three or more.  Cross-checked
// against the Wenzl recursion in the test suite.
std::optional<CBall> two_cup_jw_coefficient(Context& ctx, const Diagram& d);

}  // namespace jf::tl
