#pragma once
// Second and third moments of a verified generator family, closure of the
// spanned algebra under multiplication, and tetrahedral structure constants
// (closed inner-product networks of four boxes) with their reduced one-strand
// forms and symmetries.
//
// Conventions fixed here and used by all downstream derivations:
//   - Tr(PQR) means trace(multiply(multiply(P,Q),R)) at the canonical base.
//   - The dual (checked) generator is fourier_shift(box, -1) / sigma, so a
//     further backward click returns sigma * box.
//   - ||R||^2 := Tr(R^2) is NOT normalized to 1; every expansion carries the
//     norms explicitly.
//   - delta_{a,b}(P,Q,R|S) is the closed network with outer boxes P (lower
//     left), Q (top), R (lower right) and S in the middle, with a parallel
//     strands between P and Q, b between the S-slot and both P and R, and
//     c = 2n-a-b between Q and R; the S slot receives the dual of S when b is
//     odd.  Evaluation rotates P by n-a clicks, joins Q along a strands,
//     rotates R by n-a-b clicks, joins the S-slot box along a strands, aligns
//     the two halves with 2a+b-2n further clicks, and closes the resulting
//     (2n-a)-boxes against each other.  The orientation is pinned so the
//     complex values match the printed tables (the raw closure traverses the
//     boundary the opposite way and is conjugated once at the end).

#include <map>
#include <string>
#include <vector>

#include "jf/gpa.hpp"
#include "jf/lowweight.hpp"
#include "jf/scalar.hpp"

namespace jf::moments {

// One generator in both shadings plus its lopsided counterpart.
struct Generator {
  std::string name;
  gpa::Box box;   // spherical n-box, even base parity
  gpa::Box dual;  // spherical n-box, odd base parity: fourier_shift(box,-1)/sigma
  gpa::Box lop;   // independent lopsided reconstruction, even base parity
  CBall omega;    // two-click rotation eigenvalue
  CBall sigma;    // square root of omega fixed by the data file
  CBall norm_sq;  // Tr(box^2)
};

// A verified family over one dataset together with the ambient constants the
// moment formulas need.  Movable, not copyable (boxes point into the
// dataset's context, which must outlive the family).
struct Family {
  const lowweight::Dataset* ds = nullptr;
  std::vector<Generator> gens;
  int n = 0;
  Ball qn, qn1;           // quantum integers [n], [n+1]
  gpa::Box jw, jw_dual;   // Jones-Wenzl n-box at even / odd base parity

  const gpa::Context& context() const { return ds->context(); }
};

// Reconstructs every generator of the dataset (or the named subset, in the
// given order) in both conventions.  The subset form exists so tests can probe
// families that drop a generator.
Family make_family(const lowweight::Dataset& ds,
                   const std::vector<std::string>& names = {});

// Trace of the product of the listed generators (by index into f.gens), all
// in the plain shading or all in the dual shading.
CBall chain_trace(const Family& f, const std::vector<int>& idx, bool dual);

// All second and third moments in both shadings.  `named` carries the
// ascending-index spellings ("Tr(AAB)", "TrDual(AAB)") used by reports and
// golden files; the index tables carry every ordering.
struct MomentTable {
  std::vector<std::vector<CBall>> second, second_dual;
  std::vector<std::vector<std::vector<CBall>>> third, third_dual;
  std::map<std::string, CBall> named;
};

MomentTable compute_moments(const Family& f);

// Scalarity of all second and third moments in both shadings: the largest
// spread of the closure value across base vertices.  Zero within tolerance
// certifies that every moment is a scalar multiple of the empty diagram.
Ball moment_scalarity_defect(const Family& f);

// Residual of PQ = (Tr(PQ)/[n+1]) jw + sum_R (Tr(PQR)/||R||^2) R for every
// ordered pair in both shadings: the spanned complex subspace together with
// the Jones-Wenzl box closes under multiplication iff this vanishes.
Ball closure_defect(const Family& f, const MomentTable& m);

// Residual of Tr(PQRS) = Tr(PQ)Tr(RS)/[n+1] + sum_T Tr(PQT)Tr(RST)/||T||^2
// over all ordered quadruples in both shadings.
Ball quartic_defect(const Family& f, const MomentTable& m);

// A tetrahedron slot: generator index plus whether the slot receives the dual
// (checked) generator.
struct Arg {
  int index = 0;
  bool check = false;
};

// delta_{a,b}(P,Q,R|S) evaluated through the box engine at the canonical base
// vertex.  Supported spreads: (a,b) with a in {n-1, n} and a+b <= 2n; the
// table producers use (n-1, 2), the reductions (n, 1) and (n-1, 1).
CBall tetrahedral(const Family& f, int a, int b, Arg P, Arg Q, Arg R, Arg S);

// Same network without the cut-down to one base vertex: returns the largest
// spread of the closed value across base vertices (the full-engine scalarity
// spot check) and, through *value, the canonical-base value of that full
// evaluation.
Ball tetrahedral_scalarity_defect(const Family& f, int a, int b, Arg P, Arg Q,
                                  Arg R, Arg S, CBall* value = nullptr);

// The same network evaluated entirely in the lopsided convention from the
// independent lopsided reconstructions.  The diagonal translation between the
// conventions commutes with this evaluation, so the result must equal the
// spherical value; asserting that equality exercises every lopsided weight on
// a disjoint code path.  Requires b even (the lopsided duals are never
// needed) and unchecked slots.
CBall tetrahedral_lopsided(const Family& f, int a, int b, int P, int Q, int R,
                           int S);

// One-strand reductions through the moment tables:
//   (a,b) = (n,1):
//     (-1)^(n-1) sigma_R^-1 Tr(PQ) TrDual(RS) / ([n][n+1])
//       + sum_T sigma_T sigma_R^-1 Tr(PQT) TrDual(RST) / ||T||^2
//   (a,b) = (n-1,1):
//     (-1)^(n-1) sigma_P Tr(QR) TrDual(SP) / ([n][n+1])
//       + sum_T sigma_T^-1 sigma_P Tr(QRT) TrDual(SPT) / ||T||^2
// Both must agree with the direct engine evaluation of the same network.
CBall tetrahedral_reduced(const Family& f, const MomentTable& m, int a, int b,
                          int P, int Q, int R, int S);

}  // namespace jf::moments
