#include "jf/gpa.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace jf::gpa {

namespace {

// Critical point kinds for arc weights.  An arc attached below the bottom
// boundary or hanging from the top boundary inside a rectangle has a single
// minimum resp. maximum; arcs wrapped around a box side have one of each.
enum class Crit { kMin, kMax, kSide };

// Weight of a cap arc closing two adjacent points of a box, by position
// class.  Side closures wrap around the box (one minimum and one maximum);
// bottom/top caps have a single critical point.
Ball cap_weight(const Context& c, Convention conv, Crit kind, int inside,
                int outside) {
  switch (conv) {
    case Convention::spherical:
      if (kind == Crit::kSide)
        return c.dim[(size_t)inside] / c.dim[(size_t)outside];
      return c.root_dim[(size_t)inside] / c.root_dim[(size_t)outside];
    case Convention::lopsided:
      if (kind == Crit::kMax) return Ball::from_int(1);
      return c.dim[(size_t)inside] / c.dim[(size_t)outside];
  }
  throw std::logic_error("cap_weight: bad convention");
}

// Weight of an inserted arc.  Side insertions are straight boundary-to-
// boundary chords with no critical points; bottom insertions rise to one
// maximum, top insertions dip to one minimum.
Ball cup_weight(const Context& c, Convention conv, Crit kind, int inside,
                int outside) {
  if (kind == Crit::kSide) return Ball::from_int(1);
  switch (conv) {
    case Convention::spherical:
      return c.root_dim[(size_t)inside] / c.root_dim[(size_t)outside];
    case Convention::lopsided:
      if (kind == Crit::kMax) return Ball::from_int(1);
      return c.dim[(size_t)inside] / c.dim[(size_t)outside];
  }
  throw std::logic_error("cup_weight: bad convention");
}

void require_same_shape(const Box& x, const Box& y, const char* op) {
  if (&x.ctx() != &y.ctx() || x.depth() != y.depth() ||
      x.base_parity() != y.base_parity() || x.convention() != y.convention())
    throw std::invalid_argument(std::string(op) +
                                ": mismatched box metadata");
}

std::uint64_t pack_span(const std::vector<int>& v, size_t first, size_t count) {
  std::uint64_t key = 0;
  for (size_t i = 0; i < count; ++i) {
    int e = v[first + i];
    if (e < 0 || e > 15) throw std::invalid_argument("pack: vertex id > 15");
    key = (key << 4) | (std::uint64_t)e;
  }
  return key;
}

}  // namespace

Context::Context(BipartiteGraph g) : graph(std::move(g)) {
  if (!graph.simply_laced())
    throw std::invalid_argument("gpa::Context: graph must be simply laced");
  if (graph.num_vertices() > 16)
    throw std::invalid_argument("gpa::Context: more than 16 vertices");
  FPData fp = fp_dimensions(graph);
  delta = fp.norm;
  dim = std::move(fp.dims);
  root_dim.reserve(dim.size());
  for (const Ball& d : dim) root_dim.push_back(sqrt(d));
  nbrs_.resize((size_t)graph.num_vertices());
  for (int v = 0; v < graph.num_vertices(); ++v)
    for (const auto& [u, m] : graph.adj[(size_t)v]) nbrs_[(size_t)v].push_back(u);
}

bool Context::adjacent(int u, int v) const {
  return graph.multiplicity(u, v) > 0;
}

PackedLoop pack_loop(const std::vector<int>& loop) {
  return pack_span(loop, 0, loop.size());
}

std::vector<int> unpack_loop(PackedLoop key, int length) {
  std::vector<int> loop((size_t)length);
  for (int i = length - 1; i >= 0; --i) {
    loop[(size_t)i] = (int)(key & 0xF);
    key >>= 4;
  }
  return loop;
}

Box::Box(const Context* ctx, int k, int base_parity, Convention conv)
    : ctx_(ctx), k_(k), base_parity_(base_parity), conv_(conv) {
  if (k < 1) throw std::invalid_argument("Box: depth must be >= 1");
  if (2 * k > 16) throw std::invalid_argument("Box: depth must be <= 8");
}

CBall Box::value(const std::vector<int>& loop) const {
  if ((int)loop.size() != 2 * k_)
    throw std::invalid_argument("Box::value: wrong loop length");
  return value(pack_loop(loop));
}

CBall Box::value(PackedLoop key) const {
  auto it = vals_.find(key);
  return it == vals_.end() ? CBall() : it->second;
}

void Box::set_value(const std::vector<int>& loop, const CBall& v) {
  if ((int)loop.size() != 2 * k_)
    throw std::invalid_argument("Box::set_value: wrong loop length");
  if (ctx_->graph.parity(loop[0]) != base_parity_)
    throw std::invalid_argument("Box::set_value: base parity mismatch");
  for (size_t i = 0; i < loop.size(); ++i)
    if (!ctx_->adjacent(loop[i], loop[(i + 1) % loop.size()]))
      throw std::invalid_argument("Box::set_value: not a loop in the graph");
  vals_[pack_loop(loop)] = v;
}

void Box::add_value(PackedLoop key, const CBall& v) {
  auto [it, inserted] = vals_.try_emplace(key, v);
  if (!inserted) it->second += v;
}

Box Box::operator+(const Box& o) const {
  require_same_shape(*this, o, "add");
  Box out = *this;
  for (const auto& [key, v] : o.vals_) out.add_value(key, v);
  return out;
}

Box Box::operator-(const Box& o) const {
  require_same_shape(*this, o, "sub");
  Box out = *this;
  for (const auto& [key, v] : o.vals_) out.add_value(key, CBall() - v);
  return out;
}

Box Box::scaled(const CBall& c) const {
  Box out(ctx_, k_, base_parity_, conv_);
  for (const auto& [key, v] : vals_) out.vals_.emplace(key, v * c);
  return out;
}

Box Box::scaled(const Ball& c) const { return scaled(CBall(c)); }

bool Box::is_zero(long mag_exp) const {
  for (const auto& [key, v] : vals_)
    if (!v.magnitude_below_2exp(mag_exp)) return false;
  return true;
}

Ball Box::sup_magnitude() const {
  Ball sup;  // zero
  for (const auto& [key, v] : vals_) {
    Ball m = mag_upper(v).upper_bound();
    if (certainly_less(sup, m)) sup = m;
  }
  return sup;
}

Box Box::identity(const Context* ctx, int k, int base_parity, Convention conv) {
  Box out(ctx, k, base_parity, conv);
  for (const Loop& path_loop :
       enumerate_loops_with_parity(ctx->graph, 2 * k, base_parity)) {
    std::vector<int> g(path_loop.begin(), path_loop.end());
    bool palindromic = true;
    for (int i = 1; i < k; ++i)
      if (g[(size_t)(k + i)] != g[(size_t)(k - i)]) {
        palindromic = false;
        break;
      }
    if (palindromic) out.vals_.emplace(pack_loop(g), CBall::from_int(1));
  }
  return out;
}

Box multiply(const Box& x, const Box& y) {
  require_same_shape(x, y, "multiply");
  const int k = x.k_;
  // Index y by its bottom path (entries 0..k); store the top remainder.
  std::map<std::uint64_t, std::vector<std::pair<std::uint64_t, const CBall*>>>
      by_bottom;
  for (const auto& [key, v] : y.vals_) {
    std::vector<int> g = unpack_loop(key, 2 * k);
    by_bottom[pack_span(g, 0, (size_t)k + 1)].emplace_back(
        k > 1 ? pack_span(g, (size_t)k + 1, (size_t)k - 1) : 0, &v);
  }
  Box out(x.ctx_, k, x.base_parity_, x.conv_);
  for (const auto& [key, xv] : x.vals_) {
    std::vector<int> g = unpack_loop(key, 2 * k);
    // x's top path left to right is (g[0], g[2k-1], ..., g[k+1], g[k]).
    std::vector<int> mid((size_t)k + 1);
    mid[0] = g[0];
    mid[(size_t)k] = g[(size_t)k];
    for (int j = 1; j < k; ++j) mid[(size_t)j] = g[(size_t)(2 * k - j)];
    auto it = by_bottom.find(pack_span(mid, 0, (size_t)k + 1));
    if (it == by_bottom.end()) continue;
    std::uint64_t bottom_part = pack_span(g, 0, (size_t)k + 1);
    for (const auto& [top_part, yv] : it->second) {
      std::uint64_t out_key =
          k > 1 ? (bottom_part << (4 * (k - 1))) | top_part : bottom_part;
      out.add_value(out_key, xv * (*yv));
    }
  }
  return out;
}

Box adjoint(const Box& x) {
  const int n = 2 * x.k_;
  Box out(x.ctx_, x.k_, x.base_parity_, x.conv_);
  for (const auto& [key, v] : x.vals_) {
    std::vector<int> g = unpack_loop(key, n);
    std::vector<int> r((size_t)n);
    r[0] = g[0];
    for (int i = 1; i < n; ++i) r[(size_t)i] = g[(size_t)(n - i)];
    out.add_value(pack_loop(r), conj(v));
  }
  return out;
}

Box tensor(const Box& x, const Box& y) {
  if (&x.ctx() != &y.ctx() || x.convention() != y.convention())
    throw std::invalid_argument("tensor: mismatched context or convention");
  const int j = x.k_, l = y.k_;
  if (2 * (j + l) > 16) throw std::invalid_argument("tensor: result too deep");
  // y's base parity must match the parity of x's right region.
  if (y.base_parity() != ((x.base_parity() + j) & 1))
    throw std::invalid_argument("tensor: parity mismatch at the seam");
  // Group y's entries by base vertex.
  std::map<int, std::vector<std::pair<PackedLoop, const CBall*>>> by_base;
  for (const auto& [key, v] : y.vals_) {
    std::vector<int> g = unpack_loop(key, 2 * l);
    by_base[g[0]].emplace_back(key, &v);
  }
  Box out(x.ctx_, j + l, x.base_parity_, x.conv_);
  for (const auto& [xkey, xv] : x.vals_) {
    std::vector<int> a = unpack_loop(xkey, 2 * j);
    auto it = by_base.find(a[(size_t)j]);
    if (it == by_base.end()) continue;
    for (const auto& [ykey, yv] : it->second) {
      std::vector<int> b = unpack_loop(ykey, 2 * l);
      std::vector<int> g;
      g.reserve((size_t)(2 * (j + l)));
      for (int i = 0; i < j; ++i) g.push_back(a[(size_t)i]);
      for (int i = 0; i < 2 * l; ++i) g.push_back(b[(size_t)i]);
      for (int i = j; i < 2 * j; ++i) g.push_back(a[(size_t)i]);
      out.add_value(pack_loop(g), xv * (*yv));
    }
  }
  return out;
}

namespace {

Crit cap_kind(int p, int k) {
  if (p == k || p == 2 * k) return Crit::kSide;
  return p < k ? Crit::kMin : Crit::kMax;  // arc outside the box
}

Crit cup_kind(int q, int bigk) {
  if (q == bigk || q == 2 * bigk) return Crit::kSide;
  return q < bigk ? Crit::kMax : Crit::kMin;  // arc inside the bigger picture
}

}  // namespace

Box cap(const Box& x, int p) {
  const int k = x.k_, n = 2 * k;
  if (k < 2) throw std::invalid_argument("cap: need depth >= 2");
  if (p < 1 || p > n) throw std::invalid_argument("cap: bad position");
  const Crit kind = cap_kind(p, k);
  const int out_parity =
      p == n ? 1 - x.base_parity_ : x.base_parity_;
  Box out(x.ctx_, k - 1, out_parity, x.conv_);
  for (const auto& [key, v] : x.vals_) {
    std::vector<int> g = unpack_loop(key, n);
    const int e = (p == n) ? 0 : p;
    const int a1 = (e + n - 1) % n, a2 = (e + 1) % n;
    if (g[(size_t)a1] != g[(size_t)a2]) continue;
    Ball w = cap_weight(*x.ctx_, x.conv_, kind, g[(size_t)e], g[(size_t)a1]);
    std::vector<int> outg;
    outg.reserve((size_t)(n - 2));
    int d1, d2;  // indices removed
    if (p <= n - 2) {
      d1 = p;
      d2 = p + 1;
    } else if (p == n - 1) {
      d1 = n - 2;
      d2 = n - 1;
    } else {  // p == n
      d1 = 0;
      d2 = n - 1;
    }
    for (int i = 0; i < n; ++i)
      if (i != d1 && i != d2) outg.push_back(g[(size_t)i]);
    out.add_value(pack_loop(outg), v * w);
  }
  return out;
}

Box cup(const Box& x, int q) {
  const int k = x.k_, bigk = k + 1, bign = 2 * bigk;
  if (2 * bigk > 16) throw std::invalid_argument("cup: result too deep");
  if (q < 1 || q > bign) throw std::invalid_argument("cup: bad position");
  const Crit kind = cup_kind(q, bigk);
  const int out_parity =
      q == bign ? 1 - x.base_parity_ : x.base_parity_;
  Box out(x.ctx_, bigk, out_parity, x.conv_);
  for (const auto& [key, v] : x.vals_) {
    std::vector<int> pi = unpack_loop(key, 2 * k);
    const int a = (q <= bign - 2) ? pi[(size_t)(q - 1)] : pi[0];
    for (int u : x.ctx_->neighbors(a)) {
      Ball w = cup_weight(*x.ctx_, x.conv_, kind, u, a);
      std::vector<int> g;
      g.reserve((size_t)bign);
      if (q <= bign - 2) {
        for (int i = 0; i < q; ++i) g.push_back(pi[(size_t)i]);
        g.push_back(u);
        g.push_back(a);
        for (int i = q; i < 2 * k; ++i) g.push_back(pi[(size_t)i]);
      } else if (q == bign - 1) {
        g = pi;
        g.push_back(a);
        g.push_back(u);
      } else {  // q == bign
        g.push_back(u);
        for (int e : pi) g.push_back(e);
        g.push_back(a);
      }
      out.add_value(pack_loop(g), v * w);
    }
  }
  return out;
}

Box partial_trace_right(const Box& x) { return cap(x, x.depth()); }
Box partial_trace_left(const Box& x) { return cap(x, 2 * x.depth()); }

CBall trace_at(const Box& x, int v) {
  const int k = x.depth();
  CBall sum;
  for (const auto& [key, val] : x.terms()) {
    std::vector<int> g = unpack_loop(key, 2 * k);
    if (g[0] != v) continue;
    bool palindromic = true;
    for (int i = 1; i < k; ++i)
      if (g[(size_t)(k + i)] != g[(size_t)(k - i)]) {
        palindromic = false;
        break;
      }
    if (!palindromic) continue;
    sum += val * (x.ctx().dim[(size_t)g[(size_t)k]] / x.ctx().dim[(size_t)v]);
  }
  return sum;
}

std::vector<CBall> trace_table(const Box& x) {
  std::vector<CBall> out;
  for (int v = 0; v < x.ctx().num_vertices(); ++v)
    if (x.ctx().graph.parity(v) == x.base_parity())
      out.push_back(trace_at(x, v));
  return out;
}

CBall trace(const Box& x) {
  if (x.base_parity() == x.ctx().graph.parity(x.ctx().star))
    return trace_at(x, x.ctx().star);
  for (int v = 0; v < x.ctx().num_vertices(); ++v)
    if (x.ctx().graph.parity(v) == x.base_parity()) return trace_at(x, v);
  throw std::logic_error("trace: no vertex of the base parity");
}

Ball scalarity_defect(const Box& x) {
  std::vector<CBall> t = trace_table(x);
  Ball sup;
  for (size_t i = 0; i < t.size(); ++i)
    for (size_t j = i + 1; j < t.size(); ++j) {
      Ball m = mag_upper(t[i] - t[j]).upper_bound();
      if (certainly_less(sup, m)) sup = m;
    }
  return sup;
}

CBall inner_product(const Box& x, const Box& y) {
  return trace(multiply(adjoint(x), y));
}

Box fourier_shift(const Box& x, int direction) {
  if (direction != 1 && direction != -1)
    throw std::invalid_argument("fourier_shift: direction must be +-1");
  const int k = x.depth(), n = 2 * k;
  Box out(&x.ctx(), k, 1 - x.base_parity(), x.convention());
  const Context& c = x.ctx();
  for (const auto& [key, val] : x.terms()) {
    std::vector<int> g = unpack_loop(key, n);
    std::vector<int> h((size_t)n);
    for (int i = 0; i < n; ++i)
      h[(size_t)i] = g[(size_t)((i + direction + n) % n)];
    Ball w;
    if (x.convention() == Convention::spherical) {
      w = (c.root_dim[(size_t)g[0]] * c.root_dim[(size_t)g[(size_t)k]]) /
          (c.root_dim[(size_t)h[0]] * c.root_dim[(size_t)h[(size_t)k]]);
    } else {
      // Conjugate of the spherical weight by the diagonal translation between
      // the conventions: the side region swallowed by the bends over the side
      // region they expose.  This keeps Temperley-Lieb images functorial and
      // squares to the lopsided two-click rotation factor.
      w = direction == -1
              ? c.dim[(size_t)g[(size_t)k]] / c.dim[(size_t)h[0]]
              : c.dim[(size_t)g[0]] / c.dim[(size_t)h[(size_t)k]];
    }
    out.add_value(pack_loop(h), val * w);
  }
  return out;
}

Box rotate(const Box& x, int direction) {
  return fourier_shift(fourier_shift(x, direction), direction);
}

Box restrict_to_base(const Box& x, int v) {
  Box out(&x.ctx(), x.depth(), x.base_parity(), x.convention());
  const int shift = 4 * (2 * x.depth() - 1);  // g[0] is the leading nibble
  for (const auto& [key, val] : x.terms())
    if ((int)((key >> shift) & 0xF) == v) out.add_value(key, val);
  return out;
}

Box cut_down(const Box& x) { return restrict_to_base(x, x.ctx().star); }

Box box_from_tl(const Context* ctx, const tl::Diagram& d, int base_parity,
                Convention conv) {
  if (!d.is_square() || !d.valid())
    throw std::invalid_argument("box_from_tl: need a valid square diagram");
  const int k = d.bottom, n = 2 * k;
  if (k < 1) throw std::invalid_argument("box_from_tl: need depth >= 1");
  Box out(ctx, k, base_parity, conv);
  // Pairs over 1-based boundary points; tl cyclic index i is point i+1.
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    if (d.pair[(size_t)i] > i) pairs.emplace_back(i + 1, d.pair[(size_t)i] + 1);
  for (const Loop& raw :
       enumerate_loops_with_parity(ctx->graph, n, base_parity)) {
    std::vector<int> g(raw.begin(), raw.end());
    CBall val = CBall::from_int(1);
    bool ok = true;
    for (const auto& [p, pp] : pairs) {
      const bool p_bottom = p <= k, pp_bottom = pp <= k;
      // Region just inside/outside each leg: point P separates regions
      // g[P-1] and g[P mod n].
      const int in1 = g[(size_t)(p % n)], in2 = g[(size_t)(pp - 1)];
      const int out1 = g[(size_t)(p - 1)], out2 = g[(size_t)(pp % n)];
      if (in1 != in2 || out1 != out2) {
        ok = false;
        break;
      }
      if (p_bottom != pp_bottom) continue;  // through strand: no weight
      // Arc within one row: bottom arcs rise to a maximum, top arcs dip to a
      // minimum.
      val = val * cup_weight(*ctx, conv, p_bottom ? Crit::kMax : Crit::kMin,
                             in1, out1);
    }
    if (ok) out.add_value(pack_loop(g), val);
  }
  return out;
}

Box box_from_tl(const Context* ctx, const tl::Element& e, int base_parity,
                Convention conv) {
  if (!e.is_square())
    throw std::invalid_argument("box_from_tl: need a square element");
  Box out(ctx, e.bottom(), base_parity, conv);
  for (const auto& [d, coeff] : e.terms()) {
    Box piece = box_from_tl(ctx, d, base_parity, conv);
    for (const auto& [key, v] : piece.terms()) out.add_value(key, v * coeff);
  }
  return out;
}

std::string dump(const Box& x) {
  std::ostringstream os;
  for (const auto& [key, val] : x.terms()) {
    std::vector<int> g = unpack_loop(key, 2 * x.depth());
    for (size_t i = 0; i < g.size(); ++i) {
      if (i) os << '-';
      os << g[i];
    }
    os << ": " << val.to_string(30) << '\n';
  }
  return os.str();
}

}  // namespace jf::gpa
