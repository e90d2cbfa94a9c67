#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dltrace/datum.hpp"
#include "dltrace/matrix.hpp"
#include "dltrace/poly.hpp"

namespace dltrace {

enum class SpaceKind { SOminus2n, SO2n1, Sp2n, U2n1 };

Family family_of(SpaceKind k);
SpaceKind kind_of(Family f);
std::string kind_name(SpaceKind k);

/// One of the four standard spaces. Vectors are columns; the form is
/// [x, y] = x^T G y, or x^T G sigma(y) in the Hermitian case (sigma = x -> x^q
/// on F_{q^2}).
///   Sp2n:      G = antidiag(1, ..., 1, -1, ..., -1)
///   SO2n1:     G = antidiag(1, ..., 1), middle entry 1
///   SOminus2n: hyperbolic planes e_j, f_j around a middle block diag(1, -delta),
///              delta the least non-square of F_q
///   U2n1:      G = antidiag(1, ..., 1) over F_{q^2}
struct ClassicalSpace {
  SpaceKind kind;
  int n = 0;
  std::uint64_t q = 0;
  const FieldCtx* F = nullptr;  // F_q, or F_{q^2} for U2n1
  Mat gram;
  int dim = 0;

  bool hermitian() const { return kind == SpaceKind::U2n1; }
  bool orthogonal() const { return kind == SpaceKind::SOminus2n || kind == SpaceKind::SO2n1; }
  // i_max of the attached datum: n for SOminus2n, n+1 otherwise
  int i_max() const;
  // [x, y] for column blocks: returns X^T G sigma(Y)
  Mat form(const Mat& X, const Mat& Y) const;
};

ClassicalSpace standard_space(SpaceKind kind, int n, std::uint64_t q);

bool is_isometry(const Mat& g, const ClassicalSpace& s);
// Product of random reflections (SO, always an even number), transvections (Sp)
// or quasi-reflections and transvections (U). Deterministic in the seed.
Mat random_isometry(const ClassicalSpace& s, std::uint64_t seed);
// Random element of the full orthogonal group (either determinant).
Mat random_orthogonal(const ClassicalSpace& s, std::uint64_t seed);

bool is_gl_regular(const Mat& g);
// Characteristic polynomial, checked self-reciprocal in the right mode when
// g is an isometry.
Poly isometry_char_poly(const Mat& g, const ClassicalSpace& s);

struct FlagWitness {
  int i = 1;          // stratum index; dim of the subspace is i - 1
  Poly U;             // char poly of g on the subspace
  Mat basis;          // columns span ker U(g)
};

// One witness per monic U of degree i-1 with U U* | f_g; each subspace is
// re-checked totally isotropic and g-stable.
std::vector<FlagWitness> invariant_flags(const ClassicalSpace& s, const Mat& g, int i);
// Exhaustive check of invariant_flags: every g-stable subspace of a GL-regular
// g is cyclic, so scan the spans of v, gv, g^2 v, ... over all v in F^N and keep
// the totally isotropic ones of dimension k. Bases come back as column
// matrices in canonical (reduced echelon) form, sorted. nullopt when F^N has
// more than `cap` vectors.
std::optional<std::vector<Mat>> stable_isotropic_scan(const ClassicalSpace& s, const Mat& g, int k,
                                                      std::uint64_t cap = 1000000);
// Canonical column basis of the span of B's columns.
Mat canonical_span(const Mat& B);

// Monic U of degree d with U U* | f, in deterministic order.
std::vector<Poly> uu_star_divisors(const Poly& f, int d, bool conjugate);

struct LeviProjection {
  Poly sub;           // char poly on W
  Poly quotient;      // char poly on W^perp / W
  Mat quotient_action;
  Mat quotient_gram;  // induced form on W^perp / W
};

LeviProjection levi_projection(const FlagWitness& w, const ClassicalSpace& s, const Mat& g);

struct ParityReport {
  int mult_plus = 0;   // multiplicity of lambda - 1
  int mult_minus = 0;  // multiplicity of lambda + 1
  bool ok = false;     // both zero or odd
};

ParityReport eigen_parity_check(const ClassicalSpace& s, const Mat& g);

// Coordinates X with B X = V (B of full column rank); throws if V is not in the span.
Mat solve_in_span(const Mat& B, const Mat& V);

}  // namespace dltrace
