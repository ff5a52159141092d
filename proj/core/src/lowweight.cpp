#include "jf/lowweight.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "jf/lambda.hpp"

namespace jf::lowweight {

namespace {

using gpa::Box;
using gpa::Context;
using gpa::Convention;
using gpa::PackedLoop;

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument("lowweight: " + msg);
}

CBall eval_literal(const std::string& lit) {
  return eval_scalar(parse_scalar(lit));
}

std::vector<int> to_int_loop(const Loop& l) {
  return std::vector<int>(l.begin(), l.end());
}

std::vector<int> shifted(const std::vector<int>& g, int s) {
  int len = static_cast<int>(g.size());
  std::vector<int> h(g.size());
  for (int i = 0; i < len; ++i) h[(size_t)i] = g[(size_t)((i + s) % len)];
  return h;
}

std::string loop_name(const std::vector<int>& g) {
  std::ostringstream os;
  for (size_t i = 0; i < g.size(); ++i) os << (i ? "-" : "") << g[i];
  return os.str();
}

// sup of two exact upper-bound balls
Ball ball_sup(const Ball& a, const Ball& b) {
  return certainly_greater(b, a) ? b : a;
}

bool near_one(const CBall& x) {
  return (x - CBall::from_int(1)).magnitude_below_2exp(-80);
}

// The two-click rotation factor relating a loop's value to the value of its
// shift by 2j: A(g) = omega^{-j} * factor * A(g shifted by +2j).  The
// lopsided factor is the conjugate of the spherical one through the diagonal
// positional translation between the conventions; on loops whose positions of
// equal index parity carry equal dimensions (all core loops here) both
// factors collapse to 1.
CBall rotation_factor(const Context& ctx, int n, Convention conv,
                      const std::vector<int>& g, int j) {
  int len = 2 * n;
  if (conv == Convention::spherical) {
    Ball num = ctx.dim[(size_t)g[(size_t)((2 * j) % len)]] *
               ctx.dim[(size_t)g[(size_t)((n + 2 * j) % len)]];
    Ball den =
        ctx.dim[(size_t)g[0]] * ctx.dim[(size_t)g[(size_t)n]];
    return CBall(sqrt(num / den));
  }
  Ball p = Ball::from_int(1);
  for (int k = 1; k <= 2 * j; ++k)
    p = p * (ctx.dim[(size_t)g[(size_t)((n + k) % len)]] /
             ctx.dim[(size_t)g[(size_t)(k - 1)]]);
  return CBall(p);
}

CBall omega_power(const CBall& omega, int j) {
  CBall p = CBall::from_int(1);
  for (int m = 0; m < j; ++m) p = p * omega;
  return p;
}

// Memoized single-loop evaluation through the extension rules.
struct Filler {
  const Dataset& ds;
  const Context& ctx;
  Convention conv;
  CBall omega;
  const std::map<PackedLoop, CBall>& table;
  std::map<PackedLoop, CBall> memo;
  int len;

  Filler(const Dataset& d, Convention c, CBall w,
         const std::map<PackedLoop, CBall>& t)
      : ds(d), ctx(d.context()), conv(c), omega(std::move(w)), table(t),
        len(2 * d.n) {}

  CBall eval(const std::vector<int>& g) {
    PackedLoop key = gpa::pack_loop(g);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    int far = 0;
    for (int v : g) far = std::max(far, ds.dist[(size_t)v]);
    CBall value = far == 0 ? core_value(g) : peel(g, far);
    memo.emplace(key, value);
    return value;
  }

  // dimension ratio^(exponent) for replacing s by t at loop position q
  CBall ratio_factor(int t, int s, int q) const {
    Ball ratio = ctx.dim[(size_t)t] / ctx.dim[(size_t)s];
    bool side = q == 0 || q == ds.n;
    if (conv == Convention::spherical)
      return CBall(side ? ratio : sqrt(ratio));
    bool bottom = q >= 1 && q <= ds.n - 1;
    return CBall(side || bottom ? ratio : Ball::from_int(1));
  }

  // Loops leaving the core: eliminate a vertex at maximal distance.  Every
  // position at maximal distance is tried and the results must agree.
  CBall peel(const std::vector<int>& g, int far) {
    bool have = false;
    CBall out;
    for (int q = 0; q < len; ++q) {
      if (ds.dist[(size_t)g[(size_t)q]] != far) continue;
      int s = g[(size_t)q];
      int rl = g[(size_t)((q + len - 1) % len)];
      int rr = g[(size_t)((q + 1) % len)];
      if (rl != rr)
        fail("both loop neighbours of a maximal-distance vertex must agree "
             "at " + loop_name(g));
      int r = rl;
      CBall acc;
      if (far >= 2) {
        int t = ds.fold_target[(size_t)s];
        if (t < 0 || ds.dist[(size_t)r] != far - 1 || !ctx.adjacent(r, t))
          fail("folding structure violated at " + loop_name(g));
        auto h = g;
        h[(size_t)q] = t;
        acc = -(ratio_factor(t, s, q) * eval(h));
      } else {
        for (int t : ctx.neighbors(r)) {
          if (t == s) continue;
          if (ds.dist[(size_t)t] != 0)
            fail("tail-avoiding expects all other neighbours in the core at " +
                 loop_name(g));
          auto h = g;
          h[(size_t)q] = t;
          acc -= ratio_factor(t, s, q) * eval(h);
        }
      }
      if (!have) {
        out = acc;
        have = true;
      } else if (!out.overlaps(acc)) {
        fail("derivations through two positions disagree at " + loop_name(g));
      }
    }
    return out;
  }

  // Loops inside the core: rotate until a tabulated representative is hit.
  CBall core_value(const std::vector<int>& g) {
    bool have = false;
    CBall out;
    for (int j = 0; j < ds.n; ++j) {
      auto rep = shifted(g, 2 * j);
      auto it = table.find(gpa::pack_loop(rep));
      if (it == table.end()) continue;
      CBall cand = conj(omega_power(omega, j)) *
                   rotation_factor(ctx, ds.n, conv, g, j) * it->second;
      if (!have) {
        out = cand;
        have = true;
      } else if (!out.overlaps(cand)) {
        fail("rotation extension is not well defined at " + loop_name(g));
      }
    }
    if (!have) {
      if (single_arm(g)) return CBall();  // omitted by the spoke zero rule
      fail("no representative covers core loop " + loop_name(g));
    }
    return out;
  }

  bool single_arm(const std::vector<int>& g) const {
    if (!ds.spoke_codes) return false;
    for (int i = 2; i < len; i += 2)
      if (g[(size_t)i] != g[0]) return false;
    return true;
  }
};

}  // namespace

// ----------------------------------------------------------------- loading

GeneratorSpec parse_generator_spec(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  GeneratorSpec spec;
  spec.name = j.at("name").get<std::string>();
  spec.graph_code = j.at("graph").get<std::string>();
  spec.lambda_vertices = j.at("lambda_vertices").get<std::vector<int>>();
  spec.n = j.at("n").get<int>();
  spec.omega_lit = j.at("omega").get<std::string>();
  spec.sigma_lit = j.at("sigma").get<std::string>();
  spec.field_poly = j.at("field_poly").get<std::vector<long long>>();
  for (const auto& [code, lit] : j.at("values").items()) {
    if (!lit.is_string()) fail("value for " + code + " must be a string");
    spec.values[code] = lit.get<std::string>();
  }
  if (spec.n <= 0) fail("depth must be positive");
  if (spec.values.empty()) fail("no representative values");
  std::sort(spec.lambda_vertices.begin(), spec.lambda_vertices.end());
  return spec;
}

GeneratorSpec load_generator_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_generator_spec(buf.str());
}

const GeneratorSpec& Dataset::spec(const std::string& name) const {
  for (const auto& s : specs)
    if (s.name == name) return s;
  fail("no generator named " + name + " in dataset " + id);
}

Dataset load_family(const std::string& id,
                    const std::vector<std::string>& paths) {
  if (paths.empty()) fail("empty family");
  Dataset ds;
  ds.id = id;
  for (const auto& p : paths) ds.specs.push_back(load_generator_spec(p));
  const GeneratorSpec& first = ds.specs.front();
  for (const auto& s : ds.specs) {
    if (s.graph_code != first.graph_code || s.n != first.n ||
        s.lambda_vertices != first.lambda_vertices)
      fail("family members disagree on graph, depth, or core subgraph");
  }
  ds.ctx = std::make_unique<Context>(parse_graph(first.graph_code));
  ds.lambda_vertices = first.lambda_vertices;
  ds.n = first.n;
  const Context& ctx = *ds.ctx;
  int nv = ctx.num_vertices();

  std::vector<char> in_core((size_t)nv, 0);
  for (int v : ds.lambda_vertices) {
    if (v < 0 || v >= nv) fail("core vertex out of range");
    in_core[(size_t)v] = 1;
  }

  // Distances to the core by breadth-first search.
  ds.dist.assign((size_t)nv, -1);
  std::queue<int> bfs;
  for (int v : ds.lambda_vertices) {
    ds.dist[(size_t)v] = 0;
    bfs.push(v);
  }
  while (!bfs.empty()) {
    int v = bfs.front();
    bfs.pop();
    for (int u : ctx.neighbors(v))
      if (ds.dist[(size_t)u] < 0) {
        ds.dist[(size_t)u] = ds.dist[(size_t)v] + 1;
        bfs.push(u);
      }
  }
  for (int v = 0; v < nv; ++v)
    if (ds.dist[(size_t)v] < 0) fail("graph is not connected to the core");

  // Structure: outside the core only chains, attached to distinct
  // core vertices.
  ds.fold_target.assign((size_t)nv, -1);
  for (int v = 0; v < nv; ++v) {
    const auto& nb = ctx.neighbors(v);
    if (ds.dist[(size_t)v] == 0) {
      int outside = 0;
      for (int u : nb)
        if (ds.dist[(size_t)u] > 0) ++outside;
      if (outside > 1) fail("two tails attached to one core vertex");
      continue;
    }
    if (nb.size() > 2) fail("tail vertex of degree more than two");
    int closer = -1;
    for (int u : nb) {
      if (ds.dist[(size_t)u] == ds.dist[(size_t)v] - 1) {
        if (closer >= 0) fail("tail vertex with two closer neighbours");
        closer = u;
      } else if (ds.dist[(size_t)u] != ds.dist[(size_t)v] + 1) {
        fail("tail neighbour at unexpected distance");
      }
    }
    if (closer < 0) fail("tail vertex with no closer neighbour");
    if (ds.dist[(size_t)v] >= 2) {
      for (int u : ctx.neighbors(closer))
        if (ds.dist[(size_t)u] == ds.dist[(size_t)v] - 2)
          ds.fold_target[(size_t)v] = u;
      if (ds.fold_target[(size_t)v] < 0)
        fail("no fold target two steps closer");
    }
  }

  // Loop-code dialect: arm digits around a hub, or letters on a diamond.
  char probe = first.values.begin()->first.empty()
                   ? '?'
                   : first.values.begin()->first[0];
  ds.spoke_codes = std::isdigit(static_cast<unsigned char>(probe)) != 0;
  if (ds.spoke_codes) {
    for (int v : ds.lambda_vertices) {
      int core_deg = 0;
      for (int u : ctx.neighbors(v))
        if (in_core[(size_t)u]) ++core_deg;
      if (core_deg >= 2) {
        if (ds.center >= 0) fail("hub is not unique");
        ds.center = v;
      }
    }
    if (ds.center < 0) fail("no hub found for arm-digit codes");
    for (int v : ds.lambda_vertices)
      if (v != ds.center) {
        if (!ctx.adjacent(v, ds.center))
          fail("core arm vertex not adjacent to the hub");
        ds.arm_vertex.push_back(v);
      }
  } else {
    // A diamond: two even and two odd core vertices.  West/east are the even
    // ones ordered by depth; south/north the odd ones ordered by id.
    std::vector<int> evens, odds;
    for (int v : ds.lambda_vertices)
      (ctx.graph.parity(v) == 0 ? evens : odds).push_back(v);
    if (evens.size() != 2 || odds.size() != 2)
      fail("letter codes need a diamond core (two vertices per parity)");
    if (ctx.graph.depth_of[(size_t)evens[0]] ==
        ctx.graph.depth_of[(size_t)evens[1]])
      fail("cannot orient the diamond west-east");
    if (ctx.graph.depth_of[(size_t)evens[0]] >
        ctx.graph.depth_of[(size_t)evens[1]])
      std::swap(evens[0], evens[1]);
    ds.letter_vertex = {{'W', evens[0]},
                        {'E', evens[1]},
                        {'S', odds[0]},
                        {'N', odds[1]}};
  }

  // Every code must decode (this also validates lengths and symbols).
  for (const auto& s : ds.specs)
    for (const auto& [code, lit] : s.values) {
      (void)lit;
      decode_loop(ds, code);
    }
  return ds;
}

std::vector<std::string> example_spec_files(const std::string& id) {
  if (id == "z3") return {"z3_A.json"};
  if (id == "z2z2") return {"z2z2_A.json", "z2z2_B.json"};
  if (id == "z4") return {"z4_A.json", "z4_B.json"};
  fail("unknown example id " + id);
}

Dataset load_example(const std::string& id) {
  const char* env = std::getenv("JF_DATA_DIR");
  std::string dir = env ? env : "data";
  std::vector<std::string> paths;
  for (const auto& f : example_spec_files(id)) paths.push_back(dir + "/" + f);
  return load_family(id, paths);
}

std::vector<int> decode_loop(const Dataset& ds, const std::string& code) {
  const Context& ctx = ds.context();
  std::vector<int> loop((size_t)(2 * ds.n));
  if (ds.spoke_codes) {
    if ((int)code.size() != ds.n)
      fail("arm-digit code " + code + " must have length " +
           std::to_string(ds.n));
    for (int m = 0; m < ds.n; ++m) {
      char c = code[(size_t)m];
      if (!std::isdigit(static_cast<unsigned char>(c)))
        fail("bad arm digit in " + code);
      int d = c - '1';
      if (d < 0 || d >= (int)ds.arm_vertex.size())
        fail("arm digit out of range in " + code);
      loop[(size_t)(2 * m)] = ds.arm_vertex[(size_t)d];
      loop[(size_t)(2 * m + 1)] = ds.center;
    }
  } else {
    if ((int)code.size() != 2 * ds.n)
      fail("letter code " + code + " must have length " +
           std::to_string(2 * ds.n));
    for (int i = 0; i < 2 * ds.n; ++i) {
      auto it = ds.letter_vertex.find(code[(size_t)i]);
      if (it == ds.letter_vertex.end()) fail("bad letter in " + code);
      loop[(size_t)i] = it->second;
    }
  }
  if (ctx.graph.parity(loop[0]) != 0)
    fail("loop code " + code + " is not based at an even vertex");
  for (int i = 0; i < 2 * ds.n; ++i)
    if (!ctx.adjacent(loop[(size_t)i], loop[(size_t)((i + 1) % (2 * ds.n))]))
      fail("loop code " + code + " does not follow graph edges");
  return loop;
}

// ---------------------------------------------------------- reconstruction

Reconstruction reconstruct(const Dataset& ds, const GeneratorSpec& spec,
                           Convention conv) {
  const Context& ctx = ds.context();
  int len = 2 * ds.n;
  CBall omega = eval_literal(spec.omega_lit);
  CBall sigma = eval_literal(spec.sigma_lit);
  if (!near_one(CBall(abs_sq(omega))))
    fail("rotation eigenvalue must have modulus one");
  if (!(sigma * sigma).overlaps(omega))
    fail("sigma squared must equal omega");
  if (!near_one(omega_power(omega, ds.n)))
    fail("omega must be an n-th root of unity");

  std::map<PackedLoop, CBall> table;
  for (const auto& [code, lit] : spec.values) {
    auto loop = decode_loop(ds, code);
    for (int v : loop)
      if (ds.dist[(size_t)v] != 0)
        fail("representative " + code + " leaves the core");
    if (!table.emplace(gpa::pack_loop(loop), eval_literal(lit)).second)
      fail("duplicate representative " + code);
  }

  // Representatives fixed by a rotation whose eigenvalue power is not 1 must
  // vanish, and each orbit may carry at most one representative.
  for (const auto& [key, value] : table) {
    auto loop = gpa::unpack_loop(key, len);
    for (int j = 1; j < ds.n; ++j) {
      auto rot = shifted(loop, 2 * j);
      PackedLoop rkey = gpa::pack_loop(rot);
      if (rkey == key) {
        if (!near_one(omega_power(omega, j)) &&
            !value.magnitude_below_2exp(-100))
          fail("representative " + loop_name(loop) +
               " is fixed by a rotation with eigenvalue power != 1 and must "
               "vanish");
      } else if (table.count(rkey)) {
        fail("two representatives share the rotation orbit of " +
             loop_name(loop));
      }
    }
  }

  Filler filler(ds, conv, omega, table);
  Box box(ds.ctx.get(), ds.n, 0, conv);
  for (const auto& raw : enumerate_loops_with_parity(ctx.graph, len, 0)) {
    auto loop = to_int_loop(raw);
    CBall v = filler.eval(loop);
    if (!v.magnitude_below_2exp(-200)) box.set_value(loop, v);
  }
  return Reconstruction{std::move(box), std::move(omega), std::move(sigma),
                        spec.name};
}

// ----------------------------------------------------------------- defects

Ball cap_defect(const Box& box) {
  Ball worst;
  for (int p = 1; p <= 2 * box.depth(); ++p)
    worst = ball_sup(worst, mag_upper(gpa::cap(box, p).sup_magnitude()));
  return worst;
}

Ball rotation_defect(const Dataset& ds, const Reconstruction& rec) {
  const Context& ctx = ds.context();
  int len = 2 * ds.n;
  Ball worst;
  for (const auto& raw : enumerate_loops_with_parity(ctx.graph, len, 0)) {
    auto loop = to_int_loop(raw);
    CBall lhs = rec.box.value(loop);
    CBall rhs = conj(rec.omega) *
                rotation_factor(ctx, ds.n, rec.box.convention(), loop, 1) *
                rec.box.value(shifted(loop, 2));
    worst = ball_sup(worst, mag_upper(sqrt(abs_sq(lhs - rhs))));
  }
  return worst;
}

Ball translation_defect(const Dataset& ds, const Reconstruction& spherical,
                        const Reconstruction& lopsided) {
  const Context& ctx = ds.context();
  int len = 2 * ds.n;
  if (spherical.box.convention() != Convention::spherical ||
      lopsided.box.convention() != Convention::lopsided)
    fail("translation defect expects one box per convention");
  Ball worst;
  for (const auto& raw : enumerate_loops_with_parity(ctx.graph, len, 0)) {
    auto loop = to_int_loop(raw);
    Ball t = Ball::from_int(1);
    for (int i = 1; i <= ds.n - 1; ++i)
      t = t * sqrt(ctx.dim[(size_t)loop[(size_t)(i + ds.n)]] /
                   ctx.dim[(size_t)loop[(size_t)i]]);
    CBall diff = lopsided.box.value(loop) - spherical.box.value(loop) * t;
    worst = ball_sup(worst, mag_upper(sqrt(abs_sq(diff))));
  }
  return worst;
}

Ball spoke_zero_defect(const Dataset& ds, const Box& box) {
  if (!ds.spoke_codes) return Ball();
  const Context& ctx = ds.context();
  int nv = ctx.num_vertices();
  // Spokes are the connected components after removing the hub.
  std::vector<int> component((size_t)nv, -1);
  int ncomp = 0;
  for (int v = 0; v < nv; ++v) {
    if (v == ds.center || component[(size_t)v] >= 0) continue;
    std::queue<int> bfs;
    bfs.push(v);
    component[(size_t)v] = ncomp;
    while (!bfs.empty()) {
      int x = bfs.front();
      bfs.pop();
      for (int u : ctx.neighbors(x))
        if (u != ds.center && component[(size_t)u] < 0) {
          component[(size_t)u] = ncomp;
          bfs.push(u);
        }
    }
    ++ncomp;
  }
  Ball worst;
  int len = 2 * ds.n;
  for (const auto& raw : enumerate_loops_with_parity(ctx.graph, len, 0)) {
    auto loop = to_int_loop(raw);
    int comp = -1;
    bool single = true;
    for (int v : loop) {
      if (v == ds.center) continue;
      if (comp < 0) comp = component[(size_t)v];
      if (component[(size_t)v] != comp) {
        single = false;
        break;
      }
    }
    if (!single) continue;
    worst = ball_sup(worst, mag_upper(sqrt(abs_sq(box.value(loop)))));
  }
  return worst;
}

// ------------------------------------------------------------ verification

GeneratorReport verify_generator(const Dataset& ds, const Reconstruction& rec,
                                 long tol_exp) {
  if (rec.box.convention() != Convention::spherical)
    fail("the verification gate runs on spherical reconstructions");
  GeneratorReport report;
  auto note = [&report](const char* what, bool ok) {
    if (!ok && report.detail.empty()) report.detail = what;
    return ok;
  };
  report.self_adjoint =
      note("box differs from its adjoint",
           (rec.box - gpa::adjoint(rec.box)).is_zero(tol_exp));
  report.uncappable = note("a boundary cap does not vanish",
                           cap_defect(rec.box).magnitude_below_2exp(tol_exp));
  bool engine_rot =
      (gpa::rotate(rec.box, -1) - rec.box.scaled(rec.omega))
          .is_zero(tol_exp) &&
      (gpa::rotate(rec.box, +1) - rec.box.scaled(conj(rec.omega)))
          .is_zero(tol_exp);
  bool loopwise_rot =
      rotation_defect(ds, rec).magnitude_below_2exp(tol_exp);
  report.rotation_eigenvector =
      note("rotation eigenvector condition fails", engine_rot && loopwise_rot);
  report.zero_rule =
      note("a single-spoke loop has a nonzero value",
           spoke_zero_defect(ds, rec.box).magnitude_below_2exp(tol_exp));
  return report;
}

FamilyReport verify_family(const Dataset& ds,
                           const std::vector<Reconstruction>& recs,
                           long tol_exp) {
  (void)ds;
  FamilyReport report;
  auto note = [&report](const std::string& what, bool ok) {
    if (!ok && report.detail.empty()) report.detail = what;
    return ok;
  };
  Ball floor = mul_2exp(Ball::from_int(1), -16);
  report.nonzero = true;
  for (const auto& r : recs) {
    bool found = false;
    for (const auto& [key, v] : r.box.terms()) {
      (void)key;
      if (certainly_greater(abs_sq(v), floor)) {
        found = true;
        break;
      }
    }
    report.nonzero =
        note("generator " + r.name + " has no clearly nonzero value",
             found) &&
        report.nonzero;
  }
  report.orthogonal = true;
  report.scalar_moments = true;
  for (size_t i = 0; i < recs.size(); ++i)
    for (size_t j = i; j < recs.size(); ++j) {
      if (i != j) {
        bool ok = gpa::inner_product(recs[i].box, recs[j].box)
                      .magnitude_below_2exp(tol_exp);
        report.orthogonal =
            note("<" + recs[i].name + "," + recs[j].name + "> != 0", ok) &&
            report.orthogonal;
      }
      bool scalar = gpa::scalarity_defect(
                        gpa::multiply(recs[i].box, recs[j].box))
                        .magnitude_below_2exp(tol_exp);
      report.scalar_moments =
          note("closure of " + recs[i].name + "*" + recs[j].name +
                   " is not scalar",
               scalar) &&
          report.scalar_moments;
    }
  return report;
}

}  // namespace jf::lowweight
