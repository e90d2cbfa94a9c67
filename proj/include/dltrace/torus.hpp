#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dltrace/datum.hpp"
#include "dltrace/poly.hpp"
#include "dltrace/weyl.hpp"

namespace dltrace {

/// Coordinate model of the torus T_i of the group G_i at a stratum, n' = n+1-i.
///
/// so-even, so-odd, sp: n' coordinates, Frobenius
///   (l_1, ..., l_n') -> (sigma(l_n')^{-1}, sigma(l_1), ..., sigma(l_{n'-1})).
/// u: N = 2n'+1 coordinates, Frobenius l_j -> sigma(l_{j+n'})^{-1} (indices mod N).
/// In both cases the Frobenius is x -> phi . sigma(x) (with an extra inversion
/// for u), and acts on the Weyl group by conjugation with phi.
struct TorusModel {
  Family family;
  int np;                  // n'
  const FieldCtx* base;    // F_q, or F_{q^2} for u
  const FieldCtx* L;       // field holding all coordinates of rational points
  int coords;
  WeylGroup W;             // D_n', B_n', C_n' or A_{2n'}
  SignedPerm phi;

  std::uint64_t q() const { return base->q(); }
  // exponent M with l_1^M = 1 cutting out the rational points
  std::uint64_t norm_exponent() const;
};

// q = p^bd is given by a field F_q (so-even, so-odd, sp) or F_{q^2} (u).
// Models are built once and cached.
const TorusModel& torus_model(Family f, int np, const FieldCtx& base);
const FieldCtx& torus_base_field(Family f, std::uint64_t q);

/// Decomposition of the characteristic polynomial of a torus element on the
/// stratum space: f = Q^m (times the extra lambda-1 for so-odd).
struct TorusShape {
  bool ok = false;
  std::string reason;     // first violated condition when !ok
  std::optional<Poly> Q;  // absent when f = 1 (or lambda-1 for so-odd with n' = 0)
  int m = 0;
  bool central = false;   // Q = lambda +- 1, i.e. gamma = +-id
};

// Checks the necessary shape conditions for a rational torus point.
TorusShape torus_shape(Family f, int np, const Poly& fgamma);

// Coordinates of a rational torus point with the given shape (central or not).
std::vector<Elem> gamma_coords(const TorusModel& t, const TorusShape& s);
bool torus_point_rational(const TorusModel& t, const std::vector<Elem>& coords);
Poly torus_point_charpoly(const TorusModel& t, const std::vector<Elem>& coords);

// W(gamma): subgroup generated by reflections in roots alpha with alpha(gamma) = 1.
PermSet reflection_stabilizer(const TorusModel& t, const std::vector<Elem>& coords);

struct TorusCount {
  long long value = 0;
  std::size_t wgamma_order = 0;
  std::size_t fixed_elements = 0;  // #{x : x^{-1} F(x) in W(gamma)}
};

// #(W / W(gamma))^{F}; the shape must be admissible for the family and, for
// so-odd, have no eigenvalue -1.
TorusCount torus_T_bruteforce(Family f, int np, const Poly& fgamma);
// Same count at a given rational point of the model.
TorusCount torus_T_at(const TorusModel& t, const std::vector<Elem>& coords);

// (deg Q)/2 for so-even, deg Q otherwise, 1 at central elements.
long long torus_T_closed_form(Family f, const TorusShape& s);

struct ShapeCount {
  Poly f;
  long long points = 0;
  TorusShape shape;
  std::vector<Elem> coords;  // one rational point with this polynomial
};

// All rational points of T_i, grouped by characteristic polynomial (sorted).
std::vector<ShapeCount> torus_rational_points(Family f, int np, std::uint64_t q);

// Every non-central f = Q^m (resp. Q^m (lambda-1)) that the torus must realize:
// Q irreducible self-reciprocal, m deg Q = stratum dimension (m odd except u).
std::vector<Poly> torus_promised_shapes(Family f, int np, std::uint64_t q);

}  // namespace dltrace
