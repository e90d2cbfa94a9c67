#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dltrace/field.hpp"

namespace dltrace {

/// Univariate polynomial over a FieldCtx, coefficients low-degree-first.
/// The coefficient vector never carries trailing zeros.
class Poly {
 public:
  explicit Poly(const FieldCtx& f) : f_(&f) {}
  Poly(const FieldCtx& f, std::vector<Elem> c);

  static Poly constant(const FieldCtx& f, Elem c);
  static Poly x(const FieldCtx& f);
  static Poly monomial(const FieldCtx& f, int deg, Elem c = 1);
  // lambda - r
  static Poly linear(const FieldCtx& f, Elem r);
  // coefficient tuple parsed from small integers (convenience for tests)
  static Poly from_ints(const FieldCtx& f, const std::vector<std::int64_t>& c);

  const FieldCtx& field() const { return *f_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }
  Elem operator[](int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : 0; }
  const std::vector<Elem>& coeffs() const { return c_; }
  Elem lead() const { return c_.empty() ? 0 : c_.back(); }

  Poly monic() const;
  Poly derivative() const;
  Elem eval(Elem x) const;
  Poly scale(Elem s) const;
  // apply x -> x^{q^steps} to every coefficient
  Poly frobenius(int steps) const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator/(const Poly& o) const;
  Poly operator%(const Poly& o) const;
  Poly operator-() const;
  bool operator==(const Poly& o) const { return f_ == o.f_ && c_ == o.c_; }
  bool operator!=(const Poly& o) const { return !(*this == o); }

  std::string to_string() const;
  // human-readable, e.g. "x^2+2x+1"
  std::string pretty() const;

 private:
  void same_field(const Poly& o) const;
  void trim();

  const FieldCtx* f_;
  std::vector<Elem> c_;
};

// Total order: degree first, then (c_0, c_1, ...) lexicographically on packed values.
bool poly_less(const Poly& a, const Poly& b);
struct PolyLess {
  bool operator()(const Poly& a, const Poly& b) const { return poly_less(a, b); }
};

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
Poly gcd(const Poly& a, const Poly& b);
Poly pow(const Poly& a, int k);
Poly powmod(const Poly& a, std::uint64_t k, const Poly& m);
bool divides(const Poly& d, const Poly& f);
// multiplicity of the irreducible q in f
int multiplicity(const Poly& q, const Poly& f);

using Factorization = std::vector<std::pair<Poly, int>>;

Factorization squarefree_decomposition(const Poly& f);
// Monic irreducible factors with multiplicity, sorted by poly_less.
Factorization factor(const Poly& f);
Poly expand(const Factorization& fac, const FieldCtx& f);
bool is_irreducible(const Poly& f);
// product of the distinct irreducible factors, computed from gcds and p-th roots
Poly radical(const Poly& f);

// All monic irreducible polynomials of exact degree d (small fields only).
std::vector<Poly> monic_irreducibles(const FieldCtx& f, int d);

/// Field embedding src -> dst (src.e divides dst.e, same p): the generator of
/// src goes to the least root of src's modulus in dst. Cached per pair.
class Embedding {
 public:
  static const Embedding& get(const FieldCtx& src, const FieldCtx& dst);
  const FieldCtx& src() const { return *src_; }
  const FieldCtx& dst() const { return *dst_; }
  Elem apply(Elem x) const;
  Poly apply(const Poly& f) const;
  // inverse image; throws if x is not in the image
  Elem preimage(Elem x) const;
  Poly preimage(const Poly& f) const;
  bool in_image(Elem x) const;

 private:
  Embedding(const FieldCtx& src, const FieldCtx& dst);
  bool solve(Elem x, Elem* out) const;

  const FieldCtx* src_;
  const FieldCtx* dst_;
  std::vector<Elem> img_;  // image of t^j
};

// Field of degree k over f.field(), with the same Frobenius base.
const FieldCtx& extension(const FieldCtx& f, int k);
// Smallest extension of the base containing all roots of f.
const FieldCtx& splitting_field(const Poly& f);
// Roots (with multiplicity, sorted by packed value) of f inside dst.
std::vector<Elem> roots_in(const Poly& f, const FieldCtx& dst);

// Text format "p^e:c0,c1,...,cd". base_degree 0 means "q = p^e".
Poly parse_poly(std::string_view text, int base_degree = 0);
std::string format_poly(const Poly& f);

}  // namespace dltrace
