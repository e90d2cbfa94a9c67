#include "dltrace/reciprocal.hpp"

#include <algorithm>

namespace dltrace {

Poly reciprocal(const Poly& f, bool conjugate) {
  const FieldCtx& F = f.field();
  if (f.is_zero() || f[0] == 0) throw PreconditionError("reciprocal needs a nonzero constant term");
  const int d = f.degree();
  const int steps = conjugate ? 1 : 0;
  const Elem c0 = F.inv(F.frobenius(f[0], steps));
  std::vector<Elem> v(d + 1);
  for (int k = 0; k <= d; ++k) v[k] = F.mul(F.frobenius(f[d - k], steps), c0);
  return Poly(F, std::move(v));
}

bool is_self_reciprocal(const Poly& f, bool conjugate) {
  if (f.is_zero() || f[0] == 0) return false;
  return reciprocal(f, conjugate) == f.monic();
}

bool is_lambda_pm1(const Poly& q) {
  const FieldCtx& F = q.field();
  return q.degree() == 1 && q.is_monic() && (q[0] == 1 || q[0] == F.neg(1));
}

int SrFactorization::mult_of(const Poly& q) const {
  for (const auto& s : sr)
    if (s.q == q) return s.mult;
  return 0;
}

std::vector<const SrFactor*> SrFactorization::odd_sr() const {
  std::vector<const SrFactor*> out;
  for (const auto& s : sr)
    if (s.mult % 2 == 1) out.push_back(&s);
  return out;
}

SrFactorization sr_partition(const Poly& f, bool conjugate, std::vector<std::pair<Poly, int>>* unpaired) {
  if (f.is_zero() || f[0] == 0) throw PreconditionError("self-reciprocal analysis needs a nonzero constant term");
  SrFactorization out;
  out.conjugate = conjugate;
  Factorization fac = factor(f);
  std::vector<bool> used(fac.size(), false);
  for (std::size_t i = 0; i < fac.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    const Poly qs = reciprocal(fac[i].first, conjugate);
    if (qs == fac[i].first) {
      out.sr.push_back({fac[i].first, fac[i].second});
      continue;
    }
    std::size_t j = i + 1;
    while (j < fac.size() && fac[j].first != qs) ++j;
    if (j < fac.size() && fac[j].second == fac[i].second) {
      used[j] = true;
      // factor() output is sorted, so fac[i] is the smaller one
      out.pairs.push_back({fac[i].first, qs, fac[i].second});
    } else {
      if (unpaired) unpaired->push_back(fac[i]);
      if (j < fac.size()) {
        used[j] = true;
        if (unpaired) unpaired->push_back(fac[j]);
      }
    }
  }
  return out;
}

SrFactorization sr_classify(const Poly& f, bool conjugate) {
  std::vector<std::pair<Poly, int>> unpaired;
  SrFactorization s = sr_partition(f, conjugate, &unpaired);
  if (!unpaired.empty()) throw PreconditionError("polynomial " + f.to_string() + " is not self-reciprocal");
  return s;
}

long long script_m(const SrFactorization& s) {
  long long r = 1;
  for (const auto& pr : s.pairs) r *= 1 + pr.mult;
  return r;
}

long long script_m(const Poly& f, bool conjugate) { return script_m(sr_classify(f, conjugate)); }

std::vector<Poly> enumerate_uu_star(const Poly& f, const Poly& q0, int m, bool conjugate) {
  const FieldCtx& F = f.field();
  const SrFactorization s = sr_classify(f, conjugate);
  const auto odd = s.odd_sr();
  if (odd.size() != 1) throw PreconditionError("f must have exactly one self-reciprocal factor of odd multiplicity");
  if (odd[0]->q != q0.monic()) throw PreconditionError("Q0 is not the odd-multiplicity self-reciprocal factor of f");
  if (m < 1 || m % 2 == 0 || m > odd[0]->mult)
    throw PreconditionError("m must be odd with 1 <= m <= " + std::to_string(odd[0]->mult));

  Poly base = Poly::constant(F, 1);
  for (const auto& sf : s.sr) {
    const int mh = sf.mult - (sf.q == odd[0]->q ? m : 0);
    base = base * pow(sf.q, mh / 2);
  }
  std::vector<Poly> out{base};
  for (const auto& pr : s.pairs) {
    std::vector<Poly> next;
    for (const auto& u : out)
      for (int i = 0; i <= pr.mult; ++i) next.push_back(u * pow(pr.rep, i) * pow(pr.partner, pr.mult - i));
    out = std::move(next);
  }
  std::sort(out.begin(), out.end(), poly_less);
  return out;
}

AdmissibleEnumerations admissible_enumerations(const Poly& q, EnumMode mode) {
  const FieldCtx& F = q.field();
  if (!q.is_monic()) throw PreconditionError("admissible enumerations need a monic polynomial");
  if (!is_irreducible(q)) throw PreconditionError("admissible enumerations need an irreducible polynomial");
  const int d = q.degree();
  const bool conj = mode == EnumMode::kOddSR2;
  if (!conj && F.e() != F.base_degree())
    throw PreconditionError("even mode expects a polynomial over F_q");
  if (conj && F.e() != 2 * F.base_degree())
    throw PreconditionError("odd mode expects a polynomial over F_{q^2}");
  if (!is_self_reciprocal(q, conj)) throw PreconditionError("polynomial is not self-reciprocal in the requested mode");
  if (!conj) {
    if (is_lambda_pm1(q)) throw PreconditionError("even mode excludes lambda +/- 1");
    if (d % 2 != 0) throw PreconditionError("even mode needs even degree");
  } else if (d % 2 == 0) {
    throw PreconditionError("odd mode needs odd degree");
  }

  const FieldCtx& L = extension(F, d);
  const auto rts = roots_in(q, L);
  if (static_cast<int>(rts.size()) != d) throw Error("root count mismatch in splitting field");
  const int step = conj ? 2 : 1;
  std::vector<Elem> seq(d);
  seq[0] = rts.front();
  for (int j = 1; j < d; ++j) seq[j] = L.frobenius(seq[j - 1], step);

  // defining relations
  if (!conj) {
    for (int j = 0; j < d / 2; ++j)
      if (seq[j + d / 2] != L.inv(seq[j])) throw Error("even enumeration relation failed");
  } else {
    for (int j = 0; j < d; ++j)
      if (L.frobenius(L.inv(seq[j]), 1) != seq[(j + (d + 1) / 2) % d]) throw Error("odd enumeration relation failed");
  }

  AdmissibleEnumerations out{&L, {}};
  for (int k = 0; k < d; ++k) {
    std::vector<Elem> s(d);
    for (int j = 0; j < d; ++j) s[j] = seq[(j + k) % d];
    out.seqs.push_back(std::move(s));
  }
  return out;
}

Poly charpoly_semisimple_radical(const Poly& f) { return radical(f); }

}  // namespace dltrace
