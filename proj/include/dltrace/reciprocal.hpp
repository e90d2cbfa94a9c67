#pragma once

#include <string>
#include <vector>

#include "dltrace/poly.hpp"

namespace dltrace {

// f*(x) = (f(0)^s)^{-1} x^{deg f} f(1/x)^s, with s the identity (conjugate =
// false) or x -> x^q on coefficients (conjugate = true). The result is monic
// and does not depend on scaling f.
Poly reciprocal(const Poly& f, bool conjugate);
bool is_self_reciprocal(const Poly& f, bool conjugate);

struct SrFactor {
  Poly q;
  int mult;
};

struct NsrPair {
  Poly rep;      // the smaller of {Q, Q*} under poly_less
  Poly partner;  // the other one
  int mult;
};

struct SrFactorization {
  bool conjugate = false;
  std::vector<SrFactor> sr;    // sorted by poly_less
  std::vector<NsrPair> pairs;  // sorted by representative

  int mult_of(const Poly& q) const;  // multiplicity of an SR factor, 0 if absent
  std::vector<const SrFactor*> odd_sr() const;
};

SrFactorization sr_classify(const Poly& f, bool conjugate);
// Same partition without requiring f = f*; factors whose partner is missing
// are reported in `unpaired`.
SrFactorization sr_partition(const Poly& f, bool conjugate, std::vector<std::pair<Poly, int>>* unpaired);

long long script_m(const Poly& f, bool conjugate);
long long script_m(const SrFactorization& s);

// All monic U with U U* = f / Q0^m.
std::vector<Poly> enumerate_uu_star(const Poly& f, const Poly& q0, int m, bool conjugate);

enum class EnumMode { kEvenSR, kOddSR2 };

struct AdmissibleEnumerations {
  const FieldCtx* field;                 // splitting field holding the roots
  std::vector<std::vector<Elem>> seqs;   // deg Q sequences of deg Q roots
};

AdmissibleEnumerations admissible_enumerations(const Poly& q, EnumMode mode);

// Radical through gcd(f, f') and p-th roots.
Poly charpoly_semisimple_radical(const Poly& f);

bool is_lambda_pm1(const Poly& q);

}  // namespace dltrace
