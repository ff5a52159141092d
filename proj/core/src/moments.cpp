#include "jf/moments.hpp"

#include <stdexcept>
#include <utility>

#include "jf/tl.hpp"

namespace jf::moments {
namespace {

using gpa::Box;
using gpa::Convention;

int canonical_base(const gpa::Context& c, int parity) {
  if (parity == 0) return c.star;
  for (int v = 0; v < c.num_vertices(); ++v)
    if (c.graph.parity(v) == 1) return v;
  throw std::logic_error("graph has no vertex of odd parity");
}

// Keeps the larger of the two defect bounds (by certified upper bound).
void sup_assign(Ball& m, const Ball& d) {
  if (certainly_greater(mag_upper(d), mag_upper(m))) m = d;
}

Box shift_times(Box x, int s) {
  const int dir = s >= 0 ? +1 : -1;
  for (int t = 0; t < (s >= 0 ? s : -s); ++t) x = gpa::fourier_shift(x, dir);
  return x;
}

// Partial stacking: glues the rightmost m top points of x to the leftmost m
// bottom points of y, giving a (kx + ky - m)-box whose base region is x's.
Box pcompose2(const Box& x, const Box& y, int m) {
  const int kx = x.depth(), ky = y.depth();
  if (m < 0 || m > kx || m > ky)
    throw std::invalid_argument("pcompose2: bad strand count");
  const Convention conv = x.convention();
  Box lower = m == ky ? x
                      : gpa::tensor(x, Box::identity(
                                           &x.ctx(), ky - m,
                                           (x.base_parity() + kx) % 2, conv));
  Box upper = m == kx ? y
                      : gpa::tensor(Box::identity(&y.ctx(), kx - m,
                                                  (y.base_parity() + kx - m) % 2,
                                                  conv),
                                    y);
  return gpa::multiply(lower, upper);
}

void validate_spread(const Family& f, int a, int b) {
  if ((a != f.n && a != f.n - 1) || b < 1 || a + b > 2 * f.n)
    throw std::invalid_argument("tetrahedral: unsupported spread (a,b)");
}

const Box& slot(const Family& f, Arg x, bool dual) {
  const Generator& g = f.gens[(size_t)x.index];
  return (x.check != dual) ? g.dual : g.box;
}

// Assembles the closed network as a (2n-a)-box.  With restrict_v >= 0 each
// half is cut down to loops based there (products preserve the base region,
// so this loses nothing but off-base terms the closure would ignore).
Box tetra_network(const Family& f, int a, int b, const Box& bP, const Box& bQ,
                  const Box& bR, const Box& bS, int restrict_v) {
  const int n = f.n;
  const int s = 2 * a + b - 2 * n;
  Box xp = shift_times(bP, n - a);
  if (restrict_v >= 0) xp = gpa::restrict_to_base(xp, restrict_v);
  Box v1 = pcompose2(xp, bQ, a);
  Box xr = shift_times(bR, n - a - b);
  if (restrict_v >= 0 && s == 0) xr = gpa::restrict_to_base(xr, restrict_v);
  Box v2 = pcompose2(xr, bS, a);
  if (s != 0) {
    v2 = shift_times(v2, s);
    if (restrict_v >= 0) v2 = gpa::restrict_to_base(v2, restrict_v);
  }
  return gpa::multiply(v1, v2);
}

int closure_parity(const Family& f, const Box& bP, int a) {
  return (bP.base_parity() + f.n - a) % 2;
}

}  // namespace

Family make_family(const lowweight::Dataset& ds,
                   const std::vector<std::string>& names) {
  const gpa::Context& ctx = ds.context();
  tl::Context tctx(ctx.delta);
  const tl::Element& jw = tctx.jw(ds.n);

  std::vector<Generator> gens;
  auto build = [&](const lowweight::GeneratorSpec& spec) {
    auto sph = lowweight::reconstruct(ds, spec, Convention::spherical);
    auto lop = lowweight::reconstruct(ds, spec, Convention::lopsided);
    Box dual = gpa::fourier_shift(sph.box, -1).scaled(sph.sigma.pow_int(-1));
    CBall norm_sq = gpa::trace(gpa::multiply(sph.box, sph.box));
    gens.push_back(Generator{spec.name, std::move(sph.box), std::move(dual),
                             std::move(lop.box), sph.omega, sph.sigma,
                             std::move(norm_sq)});
  };
  if (names.empty()) {
    for (const auto& spec : ds.specs) build(spec);
  } else {
    for (const auto& name : names) build(ds.spec(name));
  }

  return Family{&ds,
                std::move(gens),
                ds.n,
                quantum_number(ds.n, ctx.delta),
                quantum_number(ds.n + 1, ctx.delta),
                gpa::box_from_tl(&ctx, jw, 0),
                gpa::box_from_tl(&ctx, jw, 1)};
}

CBall chain_trace(const Family& f, const std::vector<int>& idx, bool dual) {
  if (idx.empty()) throw std::invalid_argument("chain_trace: empty chain");
  const int v = canonical_base(f.context(), dual ? 1 : 0);
  auto box_of = [&](int i) -> const Box& {
    const Generator& g = f.gens[(size_t)i];
    return dual ? g.dual : g.box;
  };
  Box acc = gpa::restrict_to_base(box_of(idx[0]), v);
  for (size_t t = 1; t < idx.size(); ++t) acc = gpa::multiply(acc, box_of(idx[t]));
  return gpa::trace_at(acc, v);
}

MomentTable compute_moments(const Family& f) {
  const int nn = (int)f.gens.size();
  MomentTable m;
  m.second.assign((size_t)nn, std::vector<CBall>((size_t)nn));
  m.second_dual = m.second;
  m.third.assign(
      (size_t)nn,
      std::vector<std::vector<CBall>>((size_t)nn, std::vector<CBall>((size_t)nn)));
  m.third_dual = m.third;
  for (int i = 0; i < nn; ++i)
    for (int j = 0; j < nn; ++j) {
      m.second[(size_t)i][(size_t)j] = chain_trace(f, {i, j}, false);
      m.second_dual[(size_t)i][(size_t)j] = chain_trace(f, {i, j}, true);
      for (int l = 0; l < nn; ++l) {
        m.third[(size_t)i][(size_t)j][(size_t)l] = chain_trace(f, {i, j, l}, false);
        m.third_dual[(size_t)i][(size_t)j][(size_t)l] =
            chain_trace(f, {i, j, l}, true);
      }
    }
  for (int i = 0; i < nn; ++i)
    for (int j = i; j < nn; ++j) {
      const std::string ij = f.gens[(size_t)i].name + f.gens[(size_t)j].name;
      m.named["Tr(" + ij + ")"] = m.second[(size_t)i][(size_t)j];
      m.named["TrDual(" + ij + ")"] = m.second_dual[(size_t)i][(size_t)j];
      for (int l = j; l < nn; ++l) {
        const std::string ijl = ij + f.gens[(size_t)l].name;
        m.named["Tr(" + ijl + ")"] = m.third[(size_t)i][(size_t)j][(size_t)l];
        m.named["TrDual(" + ijl + ")"] =
            m.third_dual[(size_t)i][(size_t)j][(size_t)l];
      }
    }
  return m;
}

Ball moment_scalarity_defect(const Family& f) {
  const int nn = (int)f.gens.size();
  Ball defect;
  auto box_of = [&](int i, bool dual) -> const Box& {
    return dual ? f.gens[(size_t)i].dual : f.gens[(size_t)i].box;
  };
  for (bool dual : {false, true})
    for (int i = 0; i < nn; ++i)
      for (int j = 0; j < nn; ++j) {
        Box pq = gpa::multiply(box_of(i, dual), box_of(j, dual));
        sup_assign(defect, gpa::scalarity_defect(pq));
        for (int l = 0; l < nn; ++l)
          sup_assign(defect,
                     gpa::scalarity_defect(gpa::multiply(pq, box_of(l, dual))));
      }
  return defect;
}

Ball closure_defect(const Family& f, const MomentTable& m) {
  const int nn = (int)f.gens.size();
  const Ball inv_qn1 = Ball::from_int(1) / f.qn1;
  Ball defect;
  for (bool dual : {false, true}) {
    const Box& jw = dual ? f.jw_dual : f.jw;
    const auto& second = dual ? m.second_dual : m.second;
    const auto& third = dual ? m.third_dual : m.third;
    for (int i = 0; i < nn; ++i)
      for (int j = 0; j < nn; ++j) {
        const Box& bi = dual ? f.gens[(size_t)i].dual : f.gens[(size_t)i].box;
        const Box& bj = dual ? f.gens[(size_t)j].dual : f.gens[(size_t)j].box;
        Box resid = gpa::multiply(bi, bj) -
                    jw.scaled(second[(size_t)i][(size_t)j] * inv_qn1);
        for (int l = 0; l < nn; ++l) {
          const Box& bl = dual ? f.gens[(size_t)l].dual : f.gens[(size_t)l].box;
          resid = resid - bl.scaled(third[(size_t)i][(size_t)j][(size_t)l] /
                                    f.gens[(size_t)l].norm_sq);
        }
        sup_assign(defect, resid.sup_magnitude());
      }
  }
  return defect;
}

Ball quartic_defect(const Family& f, const MomentTable& m) {
  const int nn = (int)f.gens.size();
  const Ball inv_qn1 = Ball::from_int(1) / f.qn1;
  Ball defect;
  for (bool dual : {false, true}) {
    const auto& second = dual ? m.second_dual : m.second;
    const auto& third = dual ? m.third_dual : m.third;
    for (int i = 0; i < nn; ++i)
      for (int j = 0; j < nn; ++j)
        for (int k = 0; k < nn; ++k)
          for (int l = 0; l < nn; ++l) {
            CBall lhs = chain_trace(f, {i, j, k, l}, dual);
            CBall rhs = second[(size_t)i][(size_t)j] *
                        second[(size_t)k][(size_t)l] * inv_qn1;
            for (int t = 0; t < nn; ++t)
              rhs += third[(size_t)i][(size_t)j][(size_t)t] *
                     third[(size_t)k][(size_t)l][(size_t)t] /
                     f.gens[(size_t)t].norm_sq;
            sup_assign(defect, mag_upper(lhs - rhs));
          }
  }
  return defect;
}

CBall tetrahedral(const Family& f, int a, int b, Arg P, Arg Q, Arg R, Arg S) {
  validate_spread(f, a, b);
  const bool s_dual = (b % 2) != 0;
  const Box& bp = slot(f, P, false);
  const Box& bq = slot(f, Q, false);
  const Box& br = slot(f, R, false);
  const Box& bs = slot(f, S, s_dual);
  const int v = canonical_base(f.context(), closure_parity(f, bp, a));
  Box net = tetra_network(f, a, b, bp, bq, br, bs, v);
  // The assembly walks the network boundary in the sense opposite to the
  // orientation the tables are printed in, so the closure comes out
  // conjugated; flip it here once so every consumer sees the table reading.
  return conj(gpa::trace_at(net, v));
}

Ball tetrahedral_scalarity_defect(const Family& f, int a, int b, Arg P, Arg Q,
                                  Arg R, Arg S, CBall* value) {
  validate_spread(f, a, b);
  const bool s_dual = (b % 2) != 0;
  const Box& bp = slot(f, P, false);
  Box net = tetra_network(f, a, b, bp, slot(f, Q, false), slot(f, R, false),
                          slot(f, S, s_dual), -1);
  if (value != nullptr)
    *value = conj(gpa::trace_at(
        net, canonical_base(f.context(), closure_parity(f, bp, a))));
  return gpa::scalarity_defect(net);
}

CBall tetrahedral_lopsided(const Family& f, int a, int b, int P, int Q, int R,
                           int S) {
  validate_spread(f, a, b);
  if (b % 2 != 0)
    throw std::invalid_argument(
        "tetrahedral_lopsided: odd b needs a dual-shading lopsided box");
  const Box& bp = f.gens[(size_t)P].lop;
  const int v = canonical_base(f.context(), closure_parity(f, bp, a));
  Box net = tetra_network(f, a, b, bp, f.gens[(size_t)Q].lop,
                          f.gens[(size_t)R].lop, f.gens[(size_t)S].lop, v);
  return conj(gpa::trace_at(net, v));
}

CBall tetrahedral_reduced(const Family& f, const MomentTable& m, int a, int b,
                          int P, int Q, int R, int S) {
  if (b != 1 || (a != f.n && a != f.n - 1))
    throw std::invalid_argument("tetrahedral_reduced: supports (n,1), (n-1,1)");
  const int nn = (int)f.gens.size();
  const Ball inv_qq = Ball::from_int(1) / (f.qn * f.qn1);
  const CBall sign = CBall::from_int((f.n - 1) % 2 == 0 ? 1 : -1);
  if (a == f.n) {
    const CBall inv_sr = f.gens[(size_t)R].sigma.pow_int(-1);
    CBall out = sign * inv_sr * m.second[(size_t)P][(size_t)Q] *
                m.second_dual[(size_t)R][(size_t)S] * inv_qq;
    for (int t = 0; t < nn; ++t)
      out += f.gens[(size_t)t].sigma * inv_sr *
             m.third[(size_t)P][(size_t)Q][(size_t)t] *
             m.third_dual[(size_t)R][(size_t)S][(size_t)t] /
             f.gens[(size_t)t].norm_sq;
    return out;
  }
  const CBall sp = f.gens[(size_t)P].sigma;
  CBall out = sign * sp * m.second[(size_t)Q][(size_t)R] *
              m.second_dual[(size_t)S][(size_t)P] * inv_qq;
  for (int t = 0; t < nn; ++t)
    out += f.gens[(size_t)t].sigma.pow_int(-1) * sp *
           m.third[(size_t)Q][(size_t)R][(size_t)t] *
           m.third_dual[(size_t)S][(size_t)P][(size_t)t] /
           f.gens[(size_t)t].norm_sq;
  return out;
}

}  // namespace jf::moments
