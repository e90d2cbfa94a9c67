#include <algorithm>

#include "oracle.hpp"

using namespace dltrace;

namespace oracle {

Poly reciprocal_by_coeffs(const Poly& f, bool conjugate) {
  const FieldCtx& F = f.field();
  const int d = f.degree();
  auto s = [&](Elem x) { return conjugate ? F.frobenius(x, 1) : x; };
  const Elem c0 = F.inv(s(f[0]));
  std::vector<Elem> c(d + 1);
  for (int i = 0; i <= d; ++i) c[i] = F.mul(s(f[d - i]), c0);
  return Poly(F, c);
}

std::vector<Poly> monic_polys(const FieldCtx& F, int d) {
  std::vector<Poly> out;
  std::vector<Elem> c(d + 1, 0);
  c[d] = 1;
  while (true) {
    out.emplace_back(F, c);
    int i = 0;
    while (i < d && ++c[i] == F.order()) c[i++] = 0;
    if (i == d) break;
  }
  return out;
}

bool irreducible_by_trial(const Poly& f) {
  if (f.degree() < 1) return false;
  for (int k = 1; 2 * k <= f.degree(); ++k)
    for (const auto& g : monic_polys(f.field(), k))
      if ((f % g).is_zero()) return false;
  return true;
}

std::vector<Elem> roots_by_scan(const Poly& f, const FieldCtx& L) {
  const Embedding& E = Embedding::get(f.field(), L);
  std::vector<Elem> c;
  for (Elem x : f.coeffs()) c.push_back(E.apply(x));
  std::vector<Elem> out;
  for (Elem r = 0; r < L.order(); ++r) {
    std::vector<Elem> g = c;
    while (g.size() > 1) {
      // synthetic division by (x - r)
      std::vector<Elem> q(g.size() - 1);
      Elem acc = 0;
      for (std::size_t i = g.size(); i-- > 0;) {
        acc = L.add(L.mul(acc, r), g[i]);
        if (i > 0) q[i - 1] = acc;
      }
      if (acc != 0) break;
      out.push_back(r);
      g = q;
    }
  }
  return out;
}

std::vector<Poly> uu_star_bruteforce(const Poly& g, bool conjugate) {
  std::vector<Poly> out;
  if (g.degree() % 2) return out;
  for (const auto& U : monic_polys(g.field(), g.degree() / 2)) {
    if (U[0] == 0) continue;
    if (U * reciprocal_by_coeffs(U, conjugate) == g) out.push_back(U);
  }
  return out;
}

std::vector<std::vector<Elem>> admissible_by_permutation(std::vector<Elem> roots, const FieldCtx& L, bool odd) {
  std::sort(roots.begin(), roots.end());
  const int d = static_cast<int>(roots.size());
  std::vector<std::vector<Elem>> out;
  do {
    bool ok = true;
    if (odd) {
      for (int j = 0; j < d && ok; ++j) ok = L.frobenius(roots[j], 2) == roots[(j + 1) % d];
    } else {
      const int h = d / 2;
      for (int j = 0; j < h && ok; ++j) ok = roots[h + j] == L.inv(roots[j]);
      for (int j = 0; j + 1 < h && ok; ++j) ok = L.frobenius(roots[j], 1) == roots[j + 1];
      ok = ok && L.frobenius(roots[h - 1], 1) == L.inv(roots[0]);
    }
    if (ok) out.push_back(roots);
  } while (std::next_permutation(roots.begin(), roots.end()));
  return out;
}

}  // namespace oracle
