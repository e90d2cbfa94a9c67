#include <map>
#include <set>

#include "oracle.hpp"

namespace oracle {

using dltrace::Elem;

long long rational_translates(const WeylGroup& W, const dltrace::FieldCtx& L, const std::vector<Elem>& c,
                              bool unitary) {
  const int N = static_cast<int>(c.size());
  const int half = (N - 1) / 2;
  // every translate only uses the values c_i^{+-1}; tabulate x^q and x^{-q} for them
  std::map<Elem, std::pair<Elem, Elem>> frob;
  std::vector<Elem> cinv(N);
  for (int i = 0; i < N; ++i) cinv[i] = L.inv(c[i]);
  for (int i = 0; i < N; ++i)
    for (Elem x : {c[i], cinv[i]}) {
      const Elem xq = L.pow(x, L.q());
      frob[x] = {xq, L.inv(xq)};
    }
  std::set<std::vector<Elem>> seen;
  std::vector<Elem> y(N);
  for (const auto& x : W.elements()) {
    for (int i = 0; i < x.dim(); ++i) y[x.target(i)] = x.sign(i) > 0 ? c[i] : cinv[i];
    bool ok = true;
    for (int j = 0; j < N && ok; ++j) {
      Elem want;
      if (unitary) want = frob.at(y[(j + half) % N]).second;  // l_j = (l_{j+n'})^{-q}
      else if (j == 0) want = frob.at(y[N - 1]).second;
      else want = frob.at(y[j - 1]).first;
      ok = want == y[j];
    }
    if (ok) seen.insert(y);
  }
  return static_cast<long long>(seen.size());
}

}  // namespace oracle
