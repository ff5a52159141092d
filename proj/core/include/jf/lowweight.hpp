#pragma once
// Reconstruction of candidate generators from their values on loops inside a
// distinguished subgraph, and verification of the minimal-generator axioms.
//
// Setting: a simply laced bipartite graph built from a core subgraph Lambda
// by attaching chains ("tails") to distinct Lambda-vertices.  A self-adjoint
// n-box that is killed by every boundary cap and is an eigenvector of the
// two-click rotation is determined by its values on one representative per
// rotation orbit of the loops staying inside Lambda.  The extension rules,
// with s the vertex being eliminated at loop position q and dimension-ratio
// exponents governed by the boundary position (bottom / top / side) and the
// weight convention:
//
//   rotation       A(g) = w^{-j} * (ratio factor) * A(rep),   rep = g shifted
//   tail-avoiding  A(g) = -sum_t (dim t / dim s)^{w_q} A(g with s -> t)
//                  over Lambda-vertices t adjacent to the common neighbour
//                  of s in g, for s at distance 1 from Lambda
//   folding        A(g) = -(dim t / dim s)^{w_q} A(g with s -> t)
//                  where t sits two steps closer on the same tail, for s at
//                  distance >= 2
//
// Exponents w_q per position: spherical 1/2 on top and bottom, 1 on the two
// sides; lopsided 1 on the bottom and sides, 0 on top.
//
// Verification is a separate pass through independent code paths (the
// generic box engine's caps, adjoints, rotation and traces), so the
// reconstruction and its defining properties are checked against each other.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "jf/bigraph.hpp"
#include "jf/gpa.hpp"
#include "jf/scalar.hpp"

namespace jf::lowweight {

// One generator's data file: graph, core subgraph, chiralities, and the
// scalar-literal values on rotation orbit representatives.
struct GeneratorSpec {
  std::string name;
  std::string graph_code;
  std::vector<int> lambda_vertices;  // ascending vertex ids
  int n = 0;                         // box depth
  std::string omega_lit;             // rotation eigenvalue, |omega| = 1
  std::string sigma_lit;             // square root of omega
  std::vector<long long> field_poly;  // ambient number field, leading first
  std::map<std::string, std::string> values;  // loop code -> scalar literal
};

GeneratorSpec parse_generator_spec(const std::string& json_text);
GeneratorSpec load_generator_spec(const std::string& path);

// A family of generator specs over one shared graph, plus the derived
// structural data used by reconstruction.  Movable, not copyable (boxes hold
// a pointer to the owned context).
struct Dataset {
  std::string id;
  std::unique_ptr<gpa::Context> ctx;
  std::vector<int> lambda_vertices;
  int n = 4;
  std::vector<GeneratorSpec> specs;

  // Derived at load time:
  std::vector<int> dist;         // graph distance of each vertex to Lambda
  std::vector<int> fold_target;  // two-closer vertex on the same tail, or -1
  bool spoke_codes = false;      // loop codes are arm digits "1112"
  std::vector<int> arm_vertex;   // digit d -> Lambda arm vertex (spokes)
  int center = -1;               // hub vertex (spokes)
  std::map<char, int> letter_vertex;  // letter -> vertex (diamond codes)

  const gpa::Context& context() const { return *ctx; }
  const GeneratorSpec& spec(const std::string& name) const;
};

// Loads and validates a family; all specs must agree on graph, core subgraph
// and depth.  Throws std::invalid_argument on structural violations.
Dataset load_family(const std::string& id,
                    const std::vector<std::string>& paths);

// File names (relative to the data directory) of the bundled families.
std::vector<std::string> example_spec_files(const std::string& id);
// Loads a bundled family from $JF_DATA_DIR (falling back to "data").
Dataset load_example(const std::string& id);

// Translates a printed loop code ("1112" arm digits, "WSWSWSWN" diamond
// letters) into a based vertex loop of length 2n.
std::vector<int> decode_loop(const Dataset& ds, const std::string& code);

// A reconstructed generator with its resolved chiralities.
struct Reconstruction {
  gpa::Box box;
  CBall omega;
  CBall sigma;
  std::string name;
};

// Extends the spec's representative values to a full box.  Every loop value
// admitting several derivations (several rotations reaching a representative,
// several positions at maximal distance) is computed through each of them and
// the results are required to agree; disagreement or missing table coverage
// throws std::invalid_argument.
Reconstruction reconstruct(const Dataset& ds, const GeneratorSpec& spec,
                           gpa::Convention conv);

// ---------------------------------------------------------------- defects
// Each returns an upper bound on the named residual; verification asserts
// these are below a tolerance.

// max over the 2n boundary positions of |cap_p(box)|.
Ball cap_defect(const gpa::Box& box);
// sup over loops of |A(g) - w^{-1} (ratio factor) A(g shifted by 2)| using
// the per-loop rotation formula of the reconstruction's convention.  This is
// an independent route from the box engine's rotation operator.
Ball rotation_defect(const Dataset& ds, const Reconstruction& rec);
// sup over loops of |A_lop(g) - T(g) A_sph(g)| where T multiplies the square
// roots of top-position dimensions and divides those of bottom positions.
// Zero iff the two conventions' reconstructions are translates of each other.
Ball translation_defect(const Dataset& ds, const Reconstruction& spherical,
                        const Reconstruction& lopsided);
// sup of |A| over loops confined to a single spoke arm (including the tail
// arm) plus the hub; zero ball for non-spoke datasets.
Ball spoke_zero_defect(const Dataset& ds, const gpa::Box& box);

// ------------------------------------------------------------ verification

struct GeneratorReport {
  bool self_adjoint = false;
  bool uncappable = false;
  bool rotation_eigenvector = false;
  bool zero_rule = false;
  std::string detail;  // first failure, empty when all pass
  bool all() const {
    return self_adjoint && uncappable && rotation_eigenvector && zero_rule;
  }
};

// Full per-generator gate on a spherical reconstruction: mirror symmetry,
// vanishing caps (engine route), rotation eigenvector (engine route and
// per-loop formula), spoke zero rule.  Magnitudes below 2^tol_exp pass.
GeneratorReport verify_generator(const Dataset& ds, const Reconstruction& rec,
                                 long tol_exp);

struct FamilyReport {
  bool nonzero = false;         // every generator has a clearly nonzero value
  bool orthogonal = false;      // pairwise <X,Y> = 0
  bool scalar_moments = false;  // closures of pairwise products are scalars
  std::string detail;
  bool all() const { return nonzero && orthogonal && scalar_moments; }
};

// Family-level gate on spherical reconstructions.
FamilyReport verify_family(const Dataset& ds,
                           const std::vector<Reconstruction>& recs,
                           long tol_exp);

}  // namespace jf::lowweight
