#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dltrace/error.hpp"

namespace dltrace {

// Packed field element: sum_i c_i p^i, where (c_0, ..., c_{e-1}) are the
// coordinates in the power basis 1, t, ..., t^{e-1} of F_p[t]/(modulus).
using Elem = std::uint64_t;

/// Finite field F_{p^e}, p odd.
///
/// The modulus is the least monic irreducible of degree e over F_p, comparing
/// coefficient tuples (c_0, c_1, ...) lexicographically. base_degree tags the
/// Frobenius sigma(x) = x^q with q = p^base_degree. Contexts are interned:
/// get() returns the same object for equal (p, e, base_degree), so pointer
/// identity is field identity.
class FieldCtx {
 public:
  static const FieldCtx& get(std::uint64_t p, int e, int base_degree = 1);

  FieldCtx(const FieldCtx&) = delete;
  FieldCtx& operator=(const FieldCtx&) = delete;

  std::uint64_t p() const { return p_; }
  int e() const { return e_; }
  int base_degree() const { return bd_; }
  std::uint64_t q() const { return q_; }
  std::uint64_t order() const { return order_; }
  int id() const { return id_; }
  const std::vector<std::uint64_t>& modulus() const { return modulus_; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem gen() const;
  Elem from_int(std::int64_t v) const;
  bool in_prime_field(Elem a) const { return a < p_; }

  Elem add(Elem a, Elem b) const;
  Elem sub(Elem a, Elem b) const;
  Elem neg(Elem a) const;
  Elem mul(Elem a, Elem b) const;
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::uint64_t k) const;

  // a^{p^k}
  Elem frob_p(Elem a, int k) const;
  // a^{q^steps}; negative steps apply the inverse automorphism.
  Elem frobenius(Elem a, int steps) const;

  bool is_square(Elem a) const;
  Elem primitive_element() const;
  // Multiplicative order of a nonzero element.
  std::uint64_t mult_order(Elem a) const;

  std::vector<std::uint32_t> digits(Elem a) const;
  Elem from_digits(const std::vector<std::uint32_t>& d) const;

  // Base-p digit string c_0 c_1 ... c_{e-1} (digits 0-9a-z, needs p <= 36).
  std::string format(Elem a) const;
  Elem parse(std::string_view s, std::size_t offset = 0) const;

  std::string name() const;

 private:
  FieldCtx(std::uint64_t p, int e, int bd, int id);

  Elem mul_slow(Elem a, Elem b) const;
  void build_tables();

  std::uint64_t p_;
  int e_;
  int bd_;
  std::uint64_t q_;
  std::uint64_t order_;
  int id_;
  std::vector<std::uint64_t> modulus_;
  std::vector<std::uint64_t> pw_;  // p^i
  bool tabled_ = false;
  std::vector<std::uint32_t> log_;
  std::vector<std::uint32_t> exp_;
  // untabled fields: frob_[k][i * e + j] = digit i of (t^j)^{p^k}
  std::vector<std::vector<std::uint64_t>> frob_;
};

bool is_prime_u64(std::uint64_t n);
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

/// Element tagged with its field; mixing fields throws FieldMismatchError.
class FqElem {
 public:
  FqElem(const FieldCtx& f, Elem v) : f_(&f), v_(v) {}

  const FieldCtx& field() const { return *f_; }
  Elem value() const { return v_; }

  FqElem operator+(const FqElem& o) const { return {*f_, f_->add(v_, check(o))}; }
  FqElem operator-(const FqElem& o) const { return {*f_, f_->sub(v_, check(o))}; }
  FqElem operator*(const FqElem& o) const { return {*f_, f_->mul(v_, check(o))}; }
  FqElem operator/(const FqElem& o) const { return {*f_, f_->div(v_, check(o))}; }
  FqElem operator-() const { return {*f_, f_->neg(v_)}; }
  bool operator==(const FqElem& o) const { return f_ == o.f_ && v_ == o.v_; }
  bool operator!=(const FqElem& o) const { return !(*this == o); }

  FqElem inv() const { return {*f_, f_->inv(v_)}; }
  FqElem pow(std::uint64_t k) const { return {*f_, f_->pow(v_, k)}; }
  FqElem frobenius(int steps) const { return {*f_, f_->frobenius(v_, steps)}; }
  std::string str() const { return f_->format(v_); }

 private:
  Elem check(const FqElem& o) const {
    if (o.f_ != f_)
      throw FieldMismatchError("arithmetic between " + f_->name() + " and " + o.f_->name());
    return o.v_;
  }

  const FieldCtx* f_;
  Elem v_;
};

}  // namespace dltrace
