#include "jf/tl.hpp"

#include <algorithm>
#include <stdexcept>

namespace jf::tl {

// ------------------------------------------------------------------ Diagram

bool Diagram::is_identity() const {
  if (bottom != top) return false;
  for (int i = 0; i < bottom; ++i)
    if (pair[bottom_point(i)] != top_point(i)) return false;
  return true;
}

bool Diagram::valid() const {
  const int n = points();
  if (static_cast<int>(pair.size()) != n || n % 2 != 0) return false;
  for (int p = 0; p < n; ++p) {
    if (pair[p] < 0 || pair[p] >= n) return false;
    if (pair[p] == p || pair[pair[p]] != p) return false;
  }
  // Non-crossing: scanning the cyclic order, a closing point must match the
  // most recent unclosed opening point.
  std::vector<int> stack;
  for (int p = 0; p < n; ++p) {
    if (pair[p] > p) {
      stack.push_back(p);
    } else {
      if (stack.empty() || stack.back() != pair[p]) return false;
      stack.pop_back();
    }
  }
  return stack.empty();
}

Diagram Diagram::identity(int k) {
  Diagram d;
  d.bottom = d.top = k;
  d.pair.resize(2 * k);
  for (int i = 0; i < k; ++i) {
    d.pair[i] = 2 * k - 1 - i;
    d.pair[2 * k - 1 - i] = i;
  }
  return d;
}

Diagram Diagram::cap_cup(int k, int i) {
  if (i < 0 || i + 1 >= k) throw std::invalid_argument("cap_cup: bad position");
  Diagram d = identity(k);
  const int bl = d.bottom_point(i), br = d.bottom_point(i + 1);
  const int tl = d.top_point(i), tr = d.top_point(i + 1);
  d.pair[bl] = br;
  d.pair[br] = bl;
  d.pair[tl] = tr;
  d.pair[tr] = tl;
  return d;
}

Diagram Diagram::single_cup_cap(int k, int cup_left, int cap_left) {
  if (cup_left < 0 || cup_left + 1 >= k || cap_left < 0 || cap_left + 1 >= k)
    throw std::invalid_argument("single_cup_cap: bad position");
  Diagram d;
  d.bottom = d.top = k;
  d.pair.assign(2 * k, -1);
  const int cl = d.top_point(cup_left), cr = d.top_point(cup_left + 1);
  d.pair[cl] = cr;
  d.pair[cr] = cl;
  const int bl = d.bottom_point(cap_left), br = d.bottom_point(cap_left + 1);
  d.pair[bl] = br;
  d.pair[br] = bl;
  // Remaining points are through strands joined in order.
  std::vector<int> free_bottom, free_top;
  for (int i = 0; i < k; ++i) {
    if (i != cap_left && i != cap_left + 1) free_bottom.push_back(d.bottom_point(i));
    if (i != cup_left && i != cup_left + 1) free_top.push_back(d.top_point(i));
  }
  for (std::size_t i = 0; i < free_bottom.size(); ++i) {
    d.pair[free_bottom[i]] = free_top[i];
    d.pair[free_top[i]] = free_bottom[i];
  }
  return d;
}

Composed compose(const Diagram& below, const Diagram& above) {
  if (below.top != above.bottom)
    throw std::invalid_argument("compose: interface size mismatch");
  const int nb = below.bottom, ni = below.top, nt = above.top;
  Diagram out;
  out.bottom = nb;
  out.top = nt;
  out.pair.assign(nb + nt, -1);

  // Interface positions are counted left to right: position i corresponds to
  // below's top point i and above's bottom point i.
  std::vector<char> iface_seen(ni, 0);

  // Follow the strand starting at an external point until it reaches another
  // external point, marking interface positions along the way.  External
  // points are named in the output's cyclic indexing.
  auto walk = [&](bool in_below, int p) {
    for (;;) {
      if (in_below) {
        int q = below.pair[p];
        if (q < nb) return q;                  // bottom boundary of the result
        int pos = nb + ni - 1 - q;             // interface position
        iface_seen[pos] = 1;
        in_below = false;
        p = pos;                               // above-bottom cyclic index
      } else {
        int q = above.pair[p];
        if (q >= above.bottom) {
          int pos = above.bottom + nt - 1 - q;  // top left->right position
          return out.top_point(pos);
        }
        iface_seen[q] = 1;
        in_below = true;
        p = nb + ni - 1 - q;                   // below-top cyclic index
      }
    }
  };

  for (int i = 0; i < nb; ++i) {
    if (out.pair[i] != -1) continue;
    int j = walk(true, i);
    out.pair[i] = j;
    out.pair[j] = i;
  }
  for (int i = 0; i < nt; ++i) {
    int node = out.top_point(i);
    if (out.pair[node] != -1) continue;
    int j = walk(false, above.bottom + nt - 1 - i);
    out.pair[node] = j;
    out.pair[j] = node;
  }

  // Strands never reached from an external point close up into circles.
  int circles = 0;
  for (int i = 0; i < ni; ++i) {
    if (iface_seen[i]) continue;
    ++circles;
    int pos = i;
    do {
      iface_seen[pos] = 1;
      int q = below.pair[nb + ni - 1 - pos];  // arc through below
      pos = nb + ni - 1 - q;
      iface_seen[pos] = 1;
      pos = above.pair[pos];                  // arc through above
    } while (pos != i);
  }

  return Composed{out, circles};
}

Diagram adjoint_diagram(const Diagram& d) {
  Diagram r;
  r.bottom = d.top;
  r.top = d.bottom;
  r.pair.assign(d.points(), -1);
  // Bottom position i of r <-> top position i of d, and vice versa.
  auto map_point = [&](int p) {
    if (p < d.bottom) return r.top_point(p);        // d-bottom i -> r-top i
    return r.bottom_point(d.bottom + d.top - 1 - p);  // d-top i -> r-bottom i
  };
  for (int p = 0; p < d.points(); ++p) {
    int a = map_point(p), b = map_point(d.pair[p]);
    r.pair[a] = b;
    r.pair[b] = a;
  }
  return r;
}

Diagram tensor(const Diagram& a, const Diagram& b) {
  Diagram r;
  r.bottom = a.bottom + b.bottom;
  r.top = a.top + b.top;
  r.pair.assign(r.points(), -1);
  auto map_a = [&](int p) {
    if (p < a.bottom) return p;                             // bottom i -> i
    int i = a.bottom + a.top - 1 - p;                       // top position
    return r.top_point(i);
  };
  auto map_b = [&](int p) {
    if (p < b.bottom) return a.bottom + p;
    int i = b.bottom + b.top - 1 - p;
    return r.top_point(a.top + i);
  };
  for (int p = 0; p < a.points(); ++p) {
    int x = map_a(p), y = map_a(a.pair[p]);
    r.pair[x] = y;
    r.pair[y] = x;
  }
  for (int p = 0; p < b.points(); ++p) {
    int x = map_b(p), y = map_b(b.pair[p]);
    r.pair[x] = y;
    r.pair[y] = x;
  }
  return r;
}

Diagram bend_up_right(const Diagram& d) {
  if (d.bottom < 1) throw std::invalid_argument("bend_up_right: no bottom point");
  Diagram r = d;
  r.bottom -= 1;
  r.top += 1;
  return r;
}

Diagram bend_down_right(const Diagram& d) {
  if (d.top < 1) throw std::invalid_argument("bend_down_right: no top point");
  Diagram r = d;
  r.bottom += 1;
  r.top -= 1;
  return r;
}

int circles_in_closure(const Diagram& d) {
  if (!d.is_square()) throw std::invalid_argument("closure of non-square diagram");
  const int k = d.bottom;
  std::vector<char> seen(2 * k, 0);
  int circles = 0;
  for (int start = 0; start < 2 * k; ++start) {
    if (seen[start]) continue;
    ++circles;
    int p = start;
    do {
      seen[p] = 1;
      int q = d.pair[p];
      seen[q] = 1;
      // Closure arc: bottom i joins top i.
      p = (q < k) ? d.top_point(q) : d.bottom_point(2 * k - 1 - q);
    } while (p != start);
  }
  return circles;
}

std::vector<std::pair<int, int>> top_cups(const Diagram& d) {
  std::vector<std::pair<int, int>> cups;
  for (int i = 0; i < d.top; ++i) {
    int p = d.top_point(i), q = d.pair[p];
    if (q < d.bottom) continue;  // through strand
    int j = d.bottom + d.top - 1 - q;
    if (i < j) cups.emplace_back(i, j);
  }
  std::sort(cups.begin(), cups.end());
  return cups;
}

std::vector<std::pair<int, int>> bottom_caps(const Diagram& d) {
  std::vector<std::pair<int, int>> caps;
  for (int i = 0; i < d.bottom; ++i) {
    int q = d.pair[d.bottom_point(i)];
    if (q >= d.bottom) continue;
    if (i < q) caps.emplace_back(i, q);
  }
  std::sort(caps.begin(), caps.end());
  return caps;
}

namespace {

// All non-crossing perfect matchings of an ordered point list, as pair lists.
std::vector<std::vector<std::pair<int, int>>> noncrossing_matchings(
    const std::vector<int>& pts) {
  std::vector<std::vector<std::pair<int, int>>> out;
  if (pts.empty()) {
    out.push_back({});
    return out;
  }
  for (std::size_t j = 1; j < pts.size(); j += 2) {
    std::vector<int> inside(pts.begin() + 1, pts.begin() + j);
    std::vector<int> outside(pts.begin() + j + 1, pts.end());
    for (const auto& mi : noncrossing_matchings(inside)) {
      for (const auto& mo : noncrossing_matchings(outside)) {
        std::vector<std::pair<int, int>> m;
        m.reserve(pts.size() / 2);
        m.emplace_back(pts[0], pts[j]);
        m.insert(m.end(), mi.begin(), mi.end());
        m.insert(m.end(), mo.begin(), mo.end());
        out.push_back(std::move(m));
      }
    }
  }
  return out;
}

}  // namespace

const std::vector<Diagram>& all_diagrams(int k) {
  static std::map<int, std::vector<Diagram>> cache;
  auto it = cache.find(k);
  if (it != cache.end()) return it->second;

  std::vector<int> pts(2 * k);
  for (int i = 0; i < 2 * k; ++i) pts[i] = i;

  std::vector<Diagram> result;
  for (const auto& m : noncrossing_matchings(pts)) {
    Diagram d;
    d.bottom = d.top = k;
    d.pair.assign(2 * k, -1);
    for (auto [p, q] : m) {
      d.pair[p] = q;
      d.pair[q] = p;
    }
    result.push_back(std::move(d));
  }
  std::sort(result.begin(), result.end());
  auto [ins, ok] = cache.emplace(k, std::move(result));
  (void)ok;
  return ins->second;
}

// ------------------------------------------------------------------ Element

Element Element::from_diagram(const Diagram& d) {
  return from_diagram(d, CBall::from_int(1));
}

Element Element::from_diagram(const Diagram& d, const CBall& coeff) {
  Element e(d.bottom, d.top);
  e.add_term(d, coeff);
  return e;
}

void Element::add_term(const Diagram& d, const CBall& coeff) {
  if (d.bottom != bottom_ || d.top != top_)
    throw std::invalid_argument("add_term: diagram shape mismatch");
  auto it = terms_.find(d);
  if (it == terms_.end()) {
    terms_.emplace(d, coeff);
  } else {
    it->second += coeff;
  }
}

CBall Element::coefficient(const Diagram& d) const {
  auto it = terms_.find(d);
  return it == terms_.end() ? CBall() : it->second;
}

Element Element::operator+(const Element& o) const {
  if (o.bottom_ != bottom_ || o.top_ != top_)
    throw std::invalid_argument("element addition: shape mismatch");
  Element r = *this;
  for (const auto& [d, c] : o.terms_) r.add_term(d, c);
  return r;
}

Element Element::operator-(const Element& o) const {
  if (o.bottom_ != bottom_ || o.top_ != top_)
    throw std::invalid_argument("element subtraction: shape mismatch");
  Element r = *this;
  for (const auto& [d, c] : o.terms_) r.add_term(d, -c);
  return r;
}

Element Element::scaled(const CBall& c) const {
  Element r(bottom_, top_);
  for (const auto& [d, coeff] : terms_) r.terms_.emplace(d, c * coeff);
  return r;
}

Element Element::scaled(const Ball& c) const { return scaled(CBall(c)); }

Element Element::compose_with(const Element& above, const Ball& delta) const {
  if (top_ != above.bottom_)
    throw std::invalid_argument("element composition: interface mismatch");
  Element r(bottom_, above.top_);
  for (const auto& [dx, cx] : terms_) {
    for (const auto& [dy, cy] : above.terms_) {
      Composed comp = compose(dx, dy);
      CBall c = cx * cy;
      for (int i = 0; i < comp.circles; ++i) c = delta * c;
      r.add_term(comp.diagram, c);
    }
  }
  return r;
}

Element Element::adjoint() const {
  Element r(top_, bottom_);
  for (const auto& [d, c] : terms_) r.add_term(adjoint_diagram(d), conj(c));
  return r;
}

Element Element::with_strand_right() const {
  Element r(bottom_ + 1, top_ + 1);
  const Diagram strand = Diagram::identity(1);
  for (const auto& [d, c] : terms_) r.add_term(tensor(d, strand), c);
  return r;
}

Element Element::bent_up_right() const {
  Element r(bottom_ - 1, top_ + 1);
  for (const auto& [d, c] : terms_) r.add_term(bend_up_right(d), c);
  return r;
}

Element Element::partial_close_right(const Ball& delta) const {
  if (bottom_ < 1 || top_ < 1)
    throw std::invalid_argument("partial_close_right: no strand to close");
  Element r(bottom_ - 1, top_ - 1);
  for (const auto& [d, c] : terms_) {
    const int br = d.bottom_point(d.bottom - 1);
    const int tr = d.top_point(d.top - 1);
    Diagram nd;
    nd.bottom = d.bottom - 1;
    nd.top = d.top - 1;
    nd.pair.assign(d.points() - 2, -1);
    auto remap = [&](int p) {
      // Drop br and tr; br is the largest bottom index, tr the smallest
      // cyclic index of the top row.
      int shift = 0;
      if (p > br) ++shift;
      if (p > tr) ++shift;
      return p - shift;
    };
    CBall c2 = c;
    if (d.pair[br] == tr) {
      c2 = delta * c2;
      for (int p = 0; p < d.points(); ++p) {
        if (p == br || p == tr) continue;
        int q = d.pair[p];
        nd.pair[remap(p)] = remap(q);
      }
    } else {
      int a = d.pair[br], b = d.pair[tr];
      for (int p = 0; p < d.points(); ++p) {
        if (p == br || p == tr || p == a || p == b) continue;
        nd.pair[remap(p)] = remap(d.pair[p]);
      }
      nd.pair[remap(a)] = remap(b);
      nd.pair[remap(b)] = remap(a);
    }
    r.add_term(nd, c2);
  }
  return r;
}

CBall Element::trace_closure(const Ball& delta) const {
  if (!is_square())
    throw std::invalid_argument("trace of non-square element");
  CBall total;
  for (const auto& [d, c] : terms_) {
    int circles = circles_in_closure(d);
    CBall t = c;
    for (int i = 0; i < circles; ++i) t = delta * t;
    total += t;
  }
  return total;
}

CBall inner_product(const Element& x, const Element& y, const Ball& delta) {
  return x.adjoint().compose_with(y, delta).trace_closure(delta);
}

// ------------------------------------------------------------------ Context

Ball Context::q(long k) {
  auto it = q_cache_.find(k);
  if (it != q_cache_.end()) return it->second;
  Ball v = quantum_number(k, delta_);
  q_cache_.emplace(k, v);
  return v;
}

const Element& Context::jw(int k) {
  auto it = jw_cache_.find(k);
  if (it != jw_cache_.end()) return it->second;
  Element result(k, k);
  if (k == 0) {
    Diagram empty;
    result.add_term(empty, CBall::from_int(1));
  } else if (k == 1) {
    result = Element::from_diagram(Diagram::identity(1));
  } else {
    const Element& prev = jw(k - 1);
    Element ext = prev.with_strand_right();
    Element e = Element::from_diagram(Diagram::cap_cup(k, k - 2));
    Element mid = ext.compose_with(e, delta_).compose_with(ext, delta_);
    CBall coeff(q(k - 1) / q(k));
    result = ext - mid.scaled(coeff);
  }
  auto [ins, ok] = jw_cache_.emplace(k, std::move(result));
  (void)ok;
  return ins->second;
}

Element Context::bridge(int n, int a, int b) {
  if (a + b != n || a < 0 || b < 0)
    throw std::invalid_argument("bridge: need a + b = n, a, b >= 0");
  // Bottom layer: jw(a+1) x jw(b+1), square on n+2 strands.
  Element lower(n + 2, n + 2);
  for (const auto& [da, ca] : jw(a + 1).terms())
    for (const auto& [db, cb] : jw(b + 1).terms())
      lower.add_term(tensor(da, db), ca * cb);
  // Middle layer: cap joining interface points (a, a+1), everything else
  // through; rectangular n+2 -> n.
  Diagram mid;
  mid.bottom = n + 2;
  mid.top = n;
  mid.pair.assign(2 * n + 2, -1);
  mid.pair[a] = a + 1;
  mid.pair[a + 1] = a;
  for (int i = 0; i < n + 2; ++i) {
    if (i == a || i == a + 1) continue;
    int pos = (i < a) ? i : i - 2;  // left->right position on top
    int t = mid.top_point(pos);
    mid.pair[i] = t;
    mid.pair[t] = i;
  }
  // Top layer: jw(n+1) with its rightmost bottom strand bent up around the
  // right corner; rectangular n -> n+2.
  Element upper = jw(n + 1).bent_up_right();
  return lower.compose_with(Element::from_diagram(mid), delta_)
      .compose_with(upper, delta_);
}

Element Context::dual_single_cup_cap(int n, int a, int b) {
  if (a + b != n) throw std::invalid_argument("dual_single_cup_cap: a + b != n");
  Ball alpha = q(a + 1) * q(b + 1) / (q(n + 2) * q(n + 2));
  Ball beta = q(a + 1) / (q(n + 2) * q(n + 3));
  CBall cbeta{(b % 2 == 0) ? beta : -beta, Ball()};
  return bridge(n, a, b).scaled(alpha) - jw(n + 2).scaled(cbeta);
}

// ------------------------------------------------- two-cup JW coefficients

namespace {

// Whether the two pairs form a nested configuration {(u,u+3),(u+1,u+2)}.
bool nested_pair(const std::vector<std::pair<int, int>>& cups) {
  return cups.size() == 2 && cups[0].second == cups[1].second + 1 &&
         cups[1].first == cups[0].first + 1;
}

}  // namespace

std::optional<CBall> two_cup_jw_coefficient(Context& ctx, const Diagram& d) {
  if (!d.is_square()) throw std::invalid_argument("two_cup_jw_coefficient: non-square");
  const int k = d.bottom;
  auto cups = top_cups(d);
  auto caps = bottom_caps(d);
  if (cups.size() != caps.size())
    throw std::invalid_argument("two_cup_jw_coefficient: invalid diagram");
  const std::size_t m = cups.size();
  if (m > 2) return std::nullopt;

  auto Q = [&](long j) { return ctx.q(j); };
  auto sign = [](int exponent) { return (exponent % 2 == 0) ? 1 : -1; };

  if (m == 0) return CBall::from_int(1);

  if (m == 1) {
    if (cups[0].second != cups[0].first + 1 ||
        caps[0].second != caps[0].first + 1)
      throw std::logic_error("single cup/cap must join adjacent points");
    int u = cups[0].first, w = caps[0].first;
    int a = std::min(u, w), bgap = std::abs(u - w), c = k - 2 - std::max(u, w);
    Ball val = Q(a + 1) * Q(c + 1) / Q(k);
    if (sign(bgap + 1) < 0) val = -val;
    return CBall(val);
  }

  // m == 2.
  const bool cups_nested = nested_pair(cups);
  const bool caps_nested = nested_pair(caps);
  const Ball denom = Q(k) * Q(k - 1);

  if (cups_nested && caps_nested) {
    int s = caps[0].first, t = cups[0].first;
    int a = std::min(s, t), e = k - 4 - std::max(s, t);
    Ball val = Q(a + 1) * Q(e + 1) * Q(a + 2) * Q(e + 2) / (Q(2) * denom);
    return CBall(val);
  }

  if (cups_nested != caps_nested) {
    // One nested pair, one separated pair.  Normalize so the nest is on the
    // bottom (the coefficient is invariant under vertical flips).
    int s;                 // left leg of the nest
    int t1, t2;            // left legs of the separated pair
    if (caps_nested) {
      s = caps[0].first;
      t1 = cups[0].first;
      t2 = cups[1].first;
    } else {
      s = cups[0].first;
      t1 = caps[0].first;
      t2 = caps[1].first;
    }
    if (t1 <= s && t2 >= s + 2) {
      // Nest horizontally between the separated legs.
      int a = t1, bb = s - t1, dd = t2 - s - 2, e = k - t2 - 2;
      Ball val = Q(a + 1) * Q(e + 1) *
                 (Q(a + bb + 1) * Q(dd + e + 1) + Q(k - 1)) / denom;
      if (sign(bb + dd + 1) < 0) val = -val;
      return CBall(val);
    }
    if (t1 >= s) {
      // Nest entirely to the left of the separated pair.
      int a = s, c = t1 - s, dd = t2 - t1 - 2, e = k - t2 - 2;
      (void)c;
      Ball val = Q(a + 1) * Q(e + 1) * Q(a + 2) * Q(dd + e + 2) / denom;
      if (sign(dd + 1) < 0) val = -val;
      return CBall(val);
    }
    // Nest entirely to the right: reflect horizontally and reuse the branch
    // above.
    {
      int s2 = k - 4 - s;
      int u1 = k - 2 - t2, u2 = k - 2 - t1;
      int a = s2, dd = u2 - u1 - 2, e = k - u2 - 2;
      Ball val = Q(a + 1) * Q(e + 1) * Q(a + 2) * Q(dd + e + 2) / denom;
      if (sign(dd + 1) < 0) val = -val;
      return CBall(val);
    }
  }

  // Two separated cups and two separated caps.  The formula parameters are
  // the sizes of the through-strand bundles, classified by which side of the
  // cup pair (top) and of the cap pair (bottom) each strand passes:
  //   a: fully left    b: left diagonal    c: either vertical middle strands
  //   e: fully right   d: right diagonal      or full-width diagonals
  // Full-width diagonals (left of the caps at the bottom but right of the
  // cups at the top, or vice versa) select the second formula shape.
  for (const auto& side : {cups, caps})
    for (const auto& [l, r] : side)
      if (r != l + 1)
        throw std::logic_error("separated cups/caps must join adjacent points");
  int t1 = cups[0].first, t2 = cups[1].first;
  int s1 = caps[0].first, s2 = caps[1].first;

  auto bottom_slot = [&](int p) { return p < s1 ? 0 : (p < s2 + 2 ? 1 : 2); };
  auto top_slot = [&](int p) { return p < t1 ? 0 : (p < t2 + 2 ? 1 : 2); };
  std::vector<int> free_bottom, free_top;
  for (int i = 0; i < k; ++i) {
    if (i != s1 && i != s1 + 1 && i != s2 && i != s2 + 1) free_bottom.push_back(i);
    if (i != t1 && i != t1 + 1 && i != t2 && i != t2 + 1) free_top.push_back(i);
  }
  int a = 0, bb = 0, c_mid = 0, dd = 0, e = 0, full_width = 0;
  for (std::size_t i = 0; i < free_bottom.size(); ++i) {
    int bs = bottom_slot(free_bottom[i]), ts = top_slot(free_top[i]);
    if (bs == 0 && ts == 0) ++a;
    else if (bs == 2 && ts == 2) ++e;
    else if ((bs == 0 && ts == 2) || (bs == 2 && ts == 0)) ++full_width;
    else if (bs == 1 && ts == 1) ++c_mid;
    else if (ts == 0 || bs == 0) ++bb;
    else ++dd;
  }
  Ball val;
  if (full_width == 0) {
    val = Q(a + 1) * Q(e + 1) *
          (Q(2) * Q(a + bb + 1) * Q(dd + e + 1) + Q(c_mid + 2) * Q(k - 1)) /
          denom;
  } else {
    if (c_mid != 0)
      throw std::logic_error("full-width and middle strands cannot coexist");
    val = Q(2) * Q(a + 1) * Q(e + 1) * Q(a + bb + 2) * Q(dd + e + 2) / denom;
  }
  if (sign(bb + dd) < 0) val = -val;
  return CBall(val);
}

}  // namespace jf::tl
