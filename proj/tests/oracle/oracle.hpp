#pragma once

// Brute-force reference implementations used only by the test suites. None of
// these call into the library routine they are meant to check.

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "dltrace/weyl.hpp"

namespace oracle {

using dltrace::SignedPerm;
using dltrace::WeylGroup;

// Bruhat order as the transitive closure of u -> ut, t a reflection with l(ut) > l(u).
// Entry [a][b] is true iff elements()[a] <= elements()[b].
std::vector<std::vector<bool>> bruhat_table(const WeylGroup& W);

}  // namespace oracle

#include "dltrace/field.hpp"

namespace oracle {

// Number of distinct W-translates of the torus point c that are fixed by the
// family's Frobenius, applied straight from the coordinate formulas.
// unitary = true selects the 2n'+1 coordinate model.
long long rational_translates(const WeylGroup& W, const dltrace::FieldCtx& L, const std::vector<dltrace::Elem>& c,
                              bool unitary);

}  // namespace oracle

#include "dltrace/matrix.hpp"

namespace oracle {

// Every k-dimensional subspace of F^N that is totally isotropic for the form
// x^T G y (or x^T G sigma(y)) and, when g is given, stable under g. Subspaces
// are returned as k x N matrices in reduced row echelon form. Throws once more
// than `cap` candidates have been visited.
std::vector<dltrace::Mat> isotropic_subspaces(const dltrace::Mat& gram, bool hermitian, int k,
                                              const dltrace::Mat* g, std::size_t cap = 20000000);

// GL-regularity via eigenspace dimensions in the splitting field of the
// characteristic polynomial: every eigenvalue has a one-dimensional eigenspace.
bool regular_by_eigenspaces(const dltrace::Mat& g);

}  // namespace oracle

#include "dltrace/poly.hpp"

namespace oracle {

// f*(x) coefficientwise: c*_i = sigma(c_{d-i}) / sigma(c_0), sigma = id unless conjugate.
dltrace::Poly reciprocal_by_coeffs(const dltrace::Poly& f, bool conjugate);
// Every monic polynomial of degree d, in counting order.
std::vector<dltrace::Poly> monic_polys(const dltrace::FieldCtx& F, int d);
// No monic factor of degree 1..deg/2, found by trial division.
bool irreducible_by_trial(const dltrace::Poly& f);
// Roots of f in L with multiplicity, by evaluating at every element of L.
std::vector<dltrace::Elem> roots_by_scan(const dltrace::Poly& f, const dltrace::FieldCtx& L);
// All monic U with U U* = g, by trying every monic U of degree deg(g)/2.
std::vector<dltrace::Poly> uu_star_bruteforce(const dltrace::Poly& g, bool conjugate);
// Orderings of `roots` (distinct, in L) satisfying the admissibility relations:
// odd = false: l_1^s = l_2, ..., l_{d/2}^s = l_1^{-1}, second half the inverses;
// odd = true:  l_j^{s^2} = l_{j+1} cyclically.
std::vector<std::vector<dltrace::Elem>> admissible_by_permutation(std::vector<dltrace::Elem> roots,
                                                                  const dltrace::FieldCtx& L, bool odd);

}  // namespace oracle
