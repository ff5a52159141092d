#include "doctest.h"
#include "jf/bigraph.hpp"
#include "jf/lambda.hpp"

using namespace jf;

namespace {

// the graphs used throughout: spoke graphs with a tail of 3 and arms of 3,
// and the diamond graph with tails of 2 on both sides
const char* kSpoke2Arms =
    "bwd1v1v1v1p1v1x0p0x1v1x0p0x1duals1v1v1x2v2x1";
const char* kSpoke2ArmsDual = "bwd1v1v1v1p1v1x0p1x0duals1v1v1x2";
const char* kSpoke3Arms =
    "bwd1v1v1v1p1p1v1x0x0p0x1x0p0x0x1v1x0x0p0x1x0p0x0x1duals1v1v1x2x3v1x3x2";
const char* kDiamond = "bwd1v1v1p1v1x1v1v1duals1v1v1v1";
const char* kDiamondDual =
    "bwd1v1v1p1v1x0p1x0p0x1p0x1v0x1x1x0duals1v1v1x3x2x4";

Ball eval_real(const std::string& text) {
  CBall v = eval_scalar(parse_scalar(text));
  REQUIRE(v.im.magnitude_below_2exp(-60));
  return v.re;
}

}  // namespace

TEST_CASE("codec round-trips on all reference graphs") {
  for (const char* codec :
       {kSpoke2Arms, kSpoke2ArmsDual, kSpoke3Arms, kDiamond, kDiamondDual,
        "gbg1v1v1v1p1v1x1", "gbg1v1v1v1p1v2x0", "gbg1v1v1v1p1v1x0p0x1p0x1",
        "gbg1v1v1v1p1v1x0p0x1v1x1", "gbg1v1v1v1p1v1x0p0x1v2x0",
        "gbg1v1v1v1p1v1x0p0x1v0x1p0x1"}) {
    BipartiteGraph g = parse_graph(codec);
    CHECK(print_graph(g) == codec);
    // JSON round trip as well
    BipartiteGraph g2 = graph_from_json_text(graph_to_json_text(g));
    CHECK(print_graph(g2) == codec);
  }
}

TEST_CASE("parsed shapes match expectations") {
  BipartiteGraph g = parse_graph(kSpoke2Arms);
  CHECK(g.num_vertices() == 10);
  CHECK(g.max_depth() == 6);
  CHECK(g.at_depth[4].size() == 2);
  CHECK(g.simply_laced());
  // duals: swap at depth 6, identity at depth 4
  int d6a = g.vertex_at(6, 0), d6b = g.vertex_at(6, 1);
  CHECK(g.dual[d6a] == d6b);
  CHECK(g.dual[d6b] == d6a);
  CHECK(g.dual[g.vertex_at(4, 0)] == g.vertex_at(4, 0));
  CHECK(g.dual[1] == -1);  // odd depth

  BipartiteGraph s3 = parse_graph(kSpoke3Arms);
  CHECK(s3.num_vertices() == 13);
  CHECK(s3.at_depth[4].size() == 3);
  // dual data distinguishes this pair member: arms 2,3 swap at depth 6
  CHECK(s3.dual[s3.vertex_at(6, 1)] == s3.vertex_at(6, 2));

  BipartiteGraph dia = parse_graph(kDiamond);
  CHECK(dia.num_vertices() == 8);
  CHECK(dia.max_depth() == 6);
  CHECK(dia.at_depth[3].size() == 2);
  // diamond adjacency: depth-2 and depth-4 vertices both join both depth-3s
  CHECK(dia.multiplicity(dia.vertex_at(2, 0), dia.vertex_at(3, 0)) == 1);
  CHECK(dia.multiplicity(dia.vertex_at(2, 0), dia.vertex_at(3, 1)) == 1);
  CHECK(dia.multiplicity(dia.vertex_at(4, 0), dia.vertex_at(3, 0)) == 1);
  CHECK(dia.multiplicity(dia.vertex_at(4, 0), dia.vertex_at(3, 1)) == 1);

  // multi-edges parse but flag as non-simply-laced
  BipartiteGraph m = parse_graph("gbg1v1v1v1p1v2x0");
  CHECK(!m.simply_laced());
  CHECK(m.multiplicity(m.vertex_at(5, 0), m.vertex_at(4, 0)) == 2);
  CHECK_THROWS_AS(enumerate_loops(m, 4, 0), std::invalid_argument);
}

TEST_CASE("codec rejects malformed strings") {
  CHECK_THROWS_AS(parse_graph("xyz1v1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_graph("bwd1v1x0"), std::invalid_argument);  // width
  CHECK_THROWS_AS(parse_graph("bwd1v1duals1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_graph("bwd1v1v1duals1v2"), std::invalid_argument);
}

TEST_CASE("graph norms certify against closed forms") {
  PrecisionGuard g(256);
  SUBCASE("spoke with two arms") {
    FPData fp = fp_dimensions(parse_graph(kSpoke2Arms));
    CHECK(fp.norm.overlaps(sqrt(eval_real("(5+sqrt(13))/2"))));
    CHECK(fp.norm.radius_below_2exp(-200));
  }
  SUBCASE("spoke with three arms") {
    FPData fp = fp_dimensions(parse_graph(kSpoke3Arms));
    CHECK(fp.norm.overlaps(sqrt(eval_real("3+sqrt(5)"))));
  }
  SUBCASE("diamond") {
    FPData fp = fp_dimensions(parse_graph(kDiamond));
    CHECK(fp.norm.overlaps(sqrt(eval_real("3+sqrt(5)"))));
  }
}

TEST_CASE("dimension vectors solve the eigensystem with star pinned to 1") {
  PrecisionGuard guard(256);
  BipartiteGraph g = parse_graph(kSpoke3Arms);
  FPData fp = fp_dimensions(g);
  CHECK(fp.dims[0].overlaps(Ball::from_int(1)));
  // closed forms: tail 1, d, d^2-1, d^3-2d; arms d^2-1, d, 1
  Ball d = fp.norm;
  CHECK(fp.dims[g.vertex_at(1, 0)].overlaps(d));
  CHECK(fp.dims[g.vertex_at(2, 0)].overlaps(d * d - Ball::from_int(1)));
  CHECK(fp.dims[g.vertex_at(3, 0)].overlaps(d * d * d - Ball::from_int(2) * d));
  for (int arm = 0; arm < 3; ++arm) {
    CHECK(fp.dims[g.vertex_at(4, arm)].overlaps(d * d - Ball::from_int(1)));
    CHECK(fp.dims[g.vertex_at(5, arm)].overlaps(d));
    CHECK(fp.dims[g.vertex_at(6, arm)].overlaps(Ball::from_int(1)));
  }
  // eigen equation at every vertex: delta*dim(v) = sum of neighbor dims
  for (int v = 0; v < g.num_vertices(); ++v) {
    Ball lhs = d * fp.dims[v];
    Ball rhs;
    for (auto [u, m] : g.adj[v]) rhs += Ball::from_int(m) * fp.dims[u];
    CHECK(lhs.overlaps(rhs));
  }

  // diamond graph closed forms: dims at the four diamond vertices
  BipartiteGraph dia = parse_graph(kDiamond);
  FPData fpd = fp_dimensions(dia);
  Ball dd = fpd.norm;
  Ball golden = eval_real("(1+sqrt(5))/2");
  CHECK(fpd.dims[dia.vertex_at(2, 0)].overlaps(eval_real("2+sqrt(5)")));
  CHECK(fpd.dims[dia.vertex_at(4, 0)].overlaps(eval_real("2+sqrt(5)")));
  CHECK(fpd.dims[dia.vertex_at(3, 0)].overlaps(dd * golden));
  CHECK(fpd.dims[dia.vertex_at(3, 1)].overlaps(dd * golden));
  CHECK(fpd.dims[dia.vertex_at(6, 0)].overlaps(Ball::from_int(1)));
}

TEST_CASE("candidate continuation norms separate from the target modulus") {
  PrecisionGuard guard(256);
  ZeroPolicy pol = ZeroPolicy::for_precision(256);
  // continuations of the two-arm spoke beyond depth 6 and their norms
  struct Cand {
    const char* codec;
    const char* approx;
  };
  const Cand cands[] = {
      {"gbg1v1v1v1p1v1x1", "2.1889"},
      {"gbg1v1v1v1p1v2x0", "2.38098"},
      {"gbg1v1v1v1p1v1x0p0x1p0x1", "2.11917"},
      {"gbg1v1v1v1p1v1x0p0x1v1x1", "2.14896"},
      {"gbg1v1v1v1p1v1x0p0x1v2x0", "2.34554"},
      {"gbg1v1v1v1p1v1x0p0x1v0x1p0x1", "2.101"},
  };
  Ball delta = sqrt(eval_real("(5+sqrt(13))/2"));
  for (const Cand& c : cands) {
    FPData fp = fp_dimensions(parse_graph(c.codec));
    CHECK(fp.norm.overlaps(Ball::from_decimal_digits(c.approx)));
    // each candidate norm exceeds the modulus: the enclosure proves it
    CHECK(decide_sign_or_escalate(fp.norm - delta, pol) == Sign::positive);
  }
}

TEST_CASE("loop enumeration matches the walk-counting oracle") {
  BipartiteGraph g = parse_graph(kSpoke2Arms);
  for (int base : {0, 4, 3}) {
    for (int len : {2, 4, 6, 8}) {
      auto loops = enumerate_loops(g, len, base);
      CHECK(static_cast<long long>(loops.size()) ==
            count_closed_walks(g, len, base));
      // lexicographic order, base first, alternating parity
      for (size_t i = 0; i + 1 < loops.size(); ++i) CHECK(loops[i] < loops[i + 1]);
      for (const Loop& l : loops) {
        CHECK(l.size() == static_cast<size_t>(len));
        CHECK(l[0] == base);
        for (size_t i = 0; i < l.size(); ++i) {
          int a = l[i], b = l[(i + 1) % l.size()];
          CHECK(g.multiplicity(a, b) == 1);
        }
      }
    }
  }
  // dimension of the 4-box space at the star for the two-arm spoke
  CHECK(enumerate_loops(g, 8, 0).size() == 15);

  BipartiteGraph dia = parse_graph(kDiamond);
  auto all_even = enumerate_loops_with_parity(dia, 8, 0);
  long long total = 0;
  for (int v = 0; v < dia.num_vertices(); ++v)
    if (dia.parity(v) == 0) total += count_closed_walks(dia, 8, v);
  CHECK(static_cast<long long>(all_even.size()) == total);
}
