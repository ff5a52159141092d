#include "jf/bigraph.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "json.hpp"

namespace jf {

bool BipartiteGraph::simply_laced() const {
  for (const auto& nbrs : adj)
    for (auto [u, m] : nbrs)
      if (m != 1) return false;
  return true;
}

int BipartiteGraph::multiplicity(int u, int v) const {
  for (auto [w, m] : adj[static_cast<size_t>(u)])
    if (w == v) return m;
  return 0;
}

std::string BipartiteGraph::vertex_name(int v) const {
  int d = depth_of[static_cast<size_t>(v)];
  const auto& layer = at_depth[static_cast<size_t>(d)];
  int idx = static_cast<int>(std::find(layer.begin(), layer.end(), v) -
                             layer.begin());
  return std::to_string(d) + "." + std::to_string(idx);
}

// ------------------------------------------------------------------ codec

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

BipartiteGraph build_graph(const std::string& kind,
                           const std::vector<std::vector<std::vector<int>>>& blocks,
                           const std::vector<std::vector<int>>& dblocks,
                           bool has_duals, const std::string& codec) {
  BipartiteGraph g;
  g.kind = kind;
  g.depth_of.push_back(0);
  g.at_depth.push_back({0});
  g.adj.emplace_back();
  for (size_t b = 0; b < blocks.size(); ++b) {
    int depth = static_cast<int>(b) + 1;
    const auto& prev = g.at_depth.back();
    std::vector<int> layer;
    for (const auto& row : blocks[b]) {
      if (row.size() != prev.size())
        throw std::invalid_argument("codec row width mismatch at depth " +
                                    std::to_string(depth) + " in " + codec);
      int v = g.num_vertices();
      g.depth_of.push_back(depth);
      g.adj.emplace_back();
      layer.push_back(v);
      for (size_t j = 0; j < row.size(); ++j) {
        if (row[j] == 0) continue;
        int u = prev[j];
        g.adj[static_cast<size_t>(v)].push_back({u, row[j]});
        g.adj[static_cast<size_t>(u)].push_back({v, row[j]});
      }
    }
    if (layer.empty())
      throw std::invalid_argument("empty depth in codec: " + codec);
    g.at_depth.push_back(layer);
  }
  for (auto& nbrs : g.adj) std::sort(nbrs.begin(), nbrs.end());
  g.dual.assign(static_cast<size_t>(g.num_vertices()), -1);
  g.has_duals = has_duals;
  if (has_duals) {
    size_t even_depths = (static_cast<size_t>(g.max_depth()) + 2) / 2;
    if (dblocks.size() != even_depths)
      throw std::invalid_argument("dual data covers " +
                                  std::to_string(dblocks.size()) +
                                  " even depths, expected " +
                                  std::to_string(even_depths) + " in " + codec);
    for (size_t k = 0; k < dblocks.size(); ++k) {
      const auto& layer = g.at_depth[2 * k];
      if (dblocks[k].size() != layer.size())
        throw std::invalid_argument("dual block size mismatch at depth " +
                                    std::to_string(2 * k) + " in " + codec);
      for (size_t i = 0; i < layer.size(); ++i) {
        int img = dblocks[k][i];
        if (img < 1 || static_cast<size_t>(img) > layer.size())
          throw std::invalid_argument("dual index out of range in " + codec);
        g.dual[static_cast<size_t>(layer[i])] = layer[static_cast<size_t>(img - 1)];
      }
    }
    for (int v = 0; v < g.num_vertices(); ++v)
      if (g.dual[static_cast<size_t>(v)] >= 0 &&
          g.dual[static_cast<size_t>(g.dual[static_cast<size_t>(v)])] != v)
        throw std::invalid_argument("dual data is not an involution in " + codec);
  }
  return g;
}

}  // namespace

BipartiteGraph parse_graph(const std::string& codec) {
  std::string s = codec;
  std::string kind;
  if (s.rfind("bwd", 0) == 0)
    kind = "bwd";
  else if (s.rfind("gbg", 0) == 0)
    kind = "gbg";
  else if (!s.empty() && (s[0] == '{' || s[0] == '['))
    return graph_from_json_text(s);
  else
    throw std::invalid_argument("graph codec must start with bwd or gbg: " + codec);
  s = s.substr(3);

  std::string adjacency = s;
  std::string duals;
  bool has_duals = false;
  auto dpos = s.find("duals");
  if (dpos != std::string::npos) {
    adjacency = s.substr(0, dpos);
    duals = s.substr(dpos + 5);
    has_duals = true;
  }

  std::vector<std::vector<std::vector<int>>> blocks;
  for (const std::string& btext : split(adjacency, 'v')) {
    std::vector<std::vector<int>> rows;
    for (const std::string& rtext : split(btext, 'p')) {
      std::vector<int> row;
      for (const std::string& etext : split(rtext, 'x')) {
        if (etext.empty() || !std::all_of(etext.begin(), etext.end(), ::isdigit))
          throw std::invalid_argument("bad codec entry '" + etext + "' in " + codec);
        row.push_back(std::stoi(etext));
      }
      rows.push_back(row);
    }
    blocks.push_back(rows);
  }

  std::vector<std::vector<int>> dblocks;
  if (has_duals) {
    for (const std::string& btext : split(duals, 'v')) {
      std::vector<int> entries;
      for (const std::string& etext : split(btext, 'x')) {
        if (etext.empty() || !std::all_of(etext.begin(), etext.end(), ::isdigit))
          throw std::invalid_argument("bad dual entry '" + etext + "' in " + codec);
        entries.push_back(std::stoi(etext));
      }
      dblocks.push_back(entries);
    }
  }
  return build_graph(kind, blocks, dblocks, has_duals, codec);
}

std::string print_graph(const BipartiteGraph& g) {
  std::string s = g.kind;
  for (int d = 1; d <= g.max_depth(); ++d) {
    if (d > 1) s += "v";
    const auto& prev = g.at_depth[static_cast<size_t>(d - 1)];
    const auto& layer = g.at_depth[static_cast<size_t>(d)];
    for (size_t i = 0; i < layer.size(); ++i) {
      if (i) s += "p";
      for (size_t j = 0; j < prev.size(); ++j) {
        if (j) s += "x";
        s += std::to_string(g.multiplicity(layer[i], prev[j]));
      }
    }
  }
  if (g.has_duals) {
    s += "duals";
    for (int d = 0; d <= g.max_depth(); d += 2) {
      if (d > 0) s += "v";
      const auto& layer = g.at_depth[static_cast<size_t>(d)];
      for (size_t i = 0; i < layer.size(); ++i) {
        if (i) s += "x";
        int img = g.dual[static_cast<size_t>(layer[i])];
        size_t pos = static_cast<size_t>(
            std::find(layer.begin(), layer.end(), img) - layer.begin());
        s += std::to_string(pos + 1);
      }
    }
  }
  return s;
}

BipartiteGraph graph_from_json_text(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  std::string kind = j.value("kind", std::string("gbg"));
  std::vector<int> depths = j.at("depths").get<std::vector<int>>();
  if (depths.empty() || depths[0] != 1)
    throw std::invalid_argument("graph json: depths[0] must be 1");
  std::vector<std::vector<std::vector<int>>> blocks;
  for (size_t d = 1; d < depths.size(); ++d) {
    blocks.emplace_back(static_cast<size_t>(depths[d]),
                        std::vector<int>(static_cast<size_t>(depths[d - 1]), 0));
  }
  for (const auto& e : j.at("edges")) {
    int d = e.at(0).get<int>(), i = e.at(1).get<int>(), jj = e.at(2).get<int>();
    if (d < 0 || static_cast<size_t>(d) + 1 >= depths.size())
      throw std::invalid_argument("graph json: edge depth out of range");
    blocks[static_cast<size_t>(d)].at(static_cast<size_t>(jj)).at(static_cast<size_t>(i)) += 1;
  }
  std::vector<std::vector<int>> dblocks;
  bool has_duals = j.contains("duals") && !j["duals"].empty();
  if (has_duals) {
    std::vector<int> flat = j.at("duals").get<std::vector<int>>();
    size_t pos = 0;
    for (size_t d = 0; d < depths.size(); d += 2) {
      std::vector<int> blk;
      for (int i = 0; i < depths[d]; ++i) {
        if (pos >= flat.size())
          throw std::invalid_argument("graph json: duals too short");
        blk.push_back(flat[pos++] + 1);  // stored 0-based
      }
      dblocks.push_back(blk);
    }
    if (pos != flat.size())
      throw std::invalid_argument("graph json: duals too long");
  }
  return build_graph(kind, blocks, dblocks, has_duals, json_text);
}

std::string graph_to_json_text(const BipartiteGraph& g) {
  nlohmann::json j;
  j["kind"] = g.kind;
  std::vector<int> depths;
  for (const auto& layer : g.at_depth)
    depths.push_back(static_cast<int>(layer.size()));
  j["depths"] = depths;
  nlohmann::json edges = nlohmann::json::array();
  for (int d = 0; d < g.max_depth(); ++d) {
    const auto& cur = g.at_depth[static_cast<size_t>(d)];
    const auto& nxt = g.at_depth[static_cast<size_t>(d + 1)];
    for (size_t i = 0; i < cur.size(); ++i)
      for (size_t k = 0; k < nxt.size(); ++k) {
        int m = g.multiplicity(cur[i], nxt[k]);
        for (int t = 0; t < m; ++t)
          edges.push_back({d, static_cast<int>(i), static_cast<int>(k)});
      }
  }
  j["edges"] = edges;
  if (g.has_duals) {
    std::vector<int> flat;
    for (int d = 0; d <= g.max_depth(); d += 2) {
      const auto& layer = g.at_depth[static_cast<size_t>(d)];
      for (int v : layer) {
        int img = g.dual[static_cast<size_t>(v)];
        flat.push_back(static_cast<int>(
            std::find(layer.begin(), layer.end(), img) - layer.begin()));
      }
    }
    j["duals"] = flat;
  }
  return j.dump();
}

// ------------------------------------------------------- Frobenius-Perron

FPData fp_dimensions(const BipartiteGraph& g) {
  int n = g.num_vertices();
  mpfr_prec_t prec = working_precision();

  // power iteration on (A + I) with plain midpoint arithmetic
  std::vector<Ball> v(static_cast<size_t>(n), Ball::from_int(1));
  auto step = [&](const std::vector<Ball>& x) {
    std::vector<Ball> y(static_cast<size_t>(n));
    for (int a = 0; a < n; ++a) {
      Ball acc = x[static_cast<size_t>(a)];
      for (auto [b, m] : g.adj[static_cast<size_t>(a)])
        acc += Ball::from_int(m) * x[static_cast<size_t>(b)];
      y[static_cast<size_t>(a)] = std::move(acc);
    }
    return y;
  };
  auto snap = [&](std::vector<Ball>& x) {
    for (auto& b : x) b = Ball::exact(b.mid());
  };
  auto cw_bounds = [&](const std::vector<Ball>& x) -> std::pair<Ball, Ball> {
    // x must be exact positive; returns rigorous lower/upper bounds over i
    // of ((A+I)x)_i / x_i as exact balls
    std::vector<Ball> y = step(x);
    Ball lo, hi;
    bool first = true;
    for (int a = 0; a < n; ++a) {
      Ball r = y[static_cast<size_t>(a)] / x[static_cast<size_t>(a)];
      Ball rlo = r.lower_bound(), rhi = r.upper_bound();
      if (first) {
        lo = rlo;
        hi = rhi;
        first = false;
      } else {
        if (mpfr_less_p(rlo.mid(), lo.mid())) lo = rlo;
        if (mpfr_greater_p(rhi.mid(), hi.mid())) hi = rhi;
      }
    }
    return {lo, hi};
  };

  long max_iters = 40L * static_cast<long>(prec);
  Ball lambda_shifted;
  bool certified = false;
  for (long it = 0; it < max_iters && !certified; ++it) {
    v = step(v);
    // normalize by the star entry to keep magnitudes bounded
    Ball pivot = Ball::exact(v[0].mid());
    for (auto& b : v) b = b / pivot;
    snap(v);
    if (it % 32 == 31) {
      bool positive = true;
      for (const auto& b : v) positive = positive && b.certainly_positive();
      if (!positive) continue;
      auto [lo, hi] = cw_bounds(v);
      Ball width = hi - lo;
      if (width.magnitude_below_2exp(-static_cast<long>(prec) + 24)) {
        Ball center = mul_2exp(lo + hi, -1);
        Ball half = mag_upper(mul_2exp(width, -1));
        lambda_shifted = center.widened_by(half);
        certified = true;
      }
    }
  }
  if (!certified)
    throw need_more_precision("graph norm did not certify via power iteration");
  FPData out;
  out.norm = lambda_shifted - Ball::from_int(1);

  // dims: solve (A - delta I) x = 0 with x[0] = 1 via ball elimination
  std::vector<std::vector<Ball>> A(static_cast<size_t>(n - 1),
                                   std::vector<Ball>(static_cast<size_t>(n - 1)));
  std::vector<Ball> rhs(static_cast<size_t>(n - 1));
  for (int r = 1; r < n; ++r) {
    for (int c = 1; c < n; ++c) {
      Ball val = Ball::from_int(g.multiplicity(r, c));
      if (r == c) val -= out.norm;
      A[static_cast<size_t>(r - 1)][static_cast<size_t>(c - 1)] = val;
    }
    rhs[static_cast<size_t>(r - 1)] = Ball::from_int(-g.multiplicity(r, 0));
  }
  int m = n - 1;
  for (int col = 0; col < m; ++col) {
    int piv = -1;
    for (int r = col; r < m; ++r) {
      if (piv < 0 ||
          mpfr_cmpabs(A[static_cast<size_t>(r)][static_cast<size_t>(col)].mid(),
                      A[static_cast<size_t>(piv)][static_cast<size_t>(col)].mid()) > 0)
        piv = r;
    }
    std::swap(A[static_cast<size_t>(col)], A[static_cast<size_t>(piv)]);
    std::swap(rhs[static_cast<size_t>(col)], rhs[static_cast<size_t>(piv)]);
    const Ball& p = A[static_cast<size_t>(col)][static_cast<size_t>(col)];
    for (int r = col + 1; r < m; ++r) {
      Ball f = A[static_cast<size_t>(r)][static_cast<size_t>(col)] / p;
      for (int c = col; c < m; ++c)
        A[static_cast<size_t>(r)][static_cast<size_t>(c)] -=
            f * A[static_cast<size_t>(col)][static_cast<size_t>(c)];
      rhs[static_cast<size_t>(r)] -= f * rhs[static_cast<size_t>(col)];
    }
  }
  std::vector<Ball> x(static_cast<size_t>(m));
  for (int r = m - 1; r >= 0; --r) {
    Ball acc = rhs[static_cast<size_t>(r)];
    for (int c = r + 1; c < m; ++c)
      acc -= A[static_cast<size_t>(r)][static_cast<size_t>(c)] * x[static_cast<size_t>(c)];
    x[static_cast<size_t>(r)] = acc / A[static_cast<size_t>(r)][static_cast<size_t>(r)];
  }
  out.dims.assign(static_cast<size_t>(n), Ball::from_int(1));
  for (int a = 1; a < n; ++a) {
    out.dims[static_cast<size_t>(a)] = x[static_cast<size_t>(a - 1)];
    if (!out.dims[static_cast<size_t>(a)].certainly_positive())
      throw need_more_precision("dimension not certified positive: vertex " +
                                std::to_string(a));
  }
  return out;
}

// ----------------------------------------------------------------- loops

namespace {

void dfs_loops(const BipartiteGraph& g, int base, int length, Loop& cur,
               std::vector<Loop>& out) {
  int pos = static_cast<int>(cur.size());
  int at = cur.back();
  bool last = pos == length - 1;
  for (auto [u, m] : g.adj[static_cast<size_t>(at)]) {
    (void)m;
    if (last && g.multiplicity(u, base) == 0) continue;  // must close up
    cur.push_back(static_cast<uint8_t>(u));
    if (last)
      out.push_back(cur);
    else
      dfs_loops(g, base, length, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<Loop> enumerate_loops(const BipartiteGraph& g, int length, int base) {
  if (!g.simply_laced())
    throw std::invalid_argument("loop enumeration requires a simply-laced graph");
  if (length % 2 != 0) throw std::invalid_argument("loop length must be even");
  std::vector<Loop> out;
  if (length == 0) return out;
  Loop cur{static_cast<uint8_t>(base)};
  dfs_loops(g, base, length, cur, out);
  return out;
}

std::vector<Loop> enumerate_loops_with_parity(const BipartiteGraph& g,
                                              int length, int parity) {
  std::vector<Loop> out;
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (g.parity(v) != parity) continue;
    std::vector<Loop> part = enumerate_loops(g, length, v);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

long long count_closed_walks(const BipartiteGraph& g, int length, int base) {
  int n = g.num_vertices();
  std::vector<std::vector<long long>> M(static_cast<size_t>(n),
                                        std::vector<long long>(static_cast<size_t>(n), 0));
  for (int a = 0; a < n; ++a)
    for (auto [b, m] : g.adj[static_cast<size_t>(a)])
      M[static_cast<size_t>(a)][static_cast<size_t>(b)] = m;
  std::vector<long long> v(static_cast<size_t>(n), 0);
  v[static_cast<size_t>(base)] = 1;
  for (int t = 0; t < length; ++t) {
    std::vector<long long> w(static_cast<size_t>(n), 0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        w[static_cast<size_t>(a)] += M[static_cast<size_t>(a)][static_cast<size_t>(b)] *
                                     v[static_cast<size_t>(b)];
    v = std::move(w);
  }
  return v[static_cast<size_t>(base)];
}

}  // namespace jf
