#include "dltrace/torus.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <unordered_map>

#include "dltrace/reciprocal.hpp"

namespace dltrace {

namespace {

CartanType torus_type(Family f) {
  switch (f) {
    case Family::EvenSO: return CartanType::D;
    case Family::OddSO: return CartanType::B;
    case Family::Sp: return CartanType::C;
    case Family::U: return CartanType::A;
  }
  return CartanType::A;
}

int stratum_dim(Family f, int np) { return f == Family::EvenSO || f == Family::Sp ? 2 * np : 2 * np + 1; }

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// coordinates of the rational point with first coordinate l1
std::vector<Elem> orbit_coords(const TorusModel& t, Elem l1) {
  std::vector<Elem> c(t.coords);
  const int step = t.family == Family::U ? 2 : 1;
  for (int j = 0; j < t.coords; ++j) c[j] = t.L->frobenius(l1, step * j);
  return c;
}

}  // namespace

std::uint64_t TorusModel::norm_exponent() const {
  return ipow(q(), family == Family::U ? coords : np) + 1;
}

const FieldCtx& torus_base_field(Family f, std::uint64_t q) {
  const auto pf = prime_factors(q);
  if (pf.size() != 1 || pf[0] == 2) throw PreconditionError("q must be an odd prime power");
  int bd = 0;
  for (std::uint64_t x = q; x > 1; x /= pf[0]) ++bd;
  return FieldCtx::get(pf[0], f == Family::U ? 2 * bd : bd, bd);
}

namespace {

TorusModel build_model(Family f, int np, const FieldCtx& base) {
  if (np < 0) throw PreconditionError("torus rank must be non-negative");
  const bool u = f == Family::U;
  if (base.e() != (u ? 2 : 1) * base.base_degree())
    throw PreconditionError("torus base field must be " + std::string(u ? "F_{q^2}" : "F_q"));
  if (!u && np == 0) throw PreconditionError("the torus of a rank-zero " + family_name(f) + " group is trivial");
  const int coords = u ? 2 * np + 1 : np;
  std::vector<int> img(coords);
  if (u) {
    for (int j = 0; j < coords; ++j) img[(j + np) % coords] = j + 1;
  } else {
    for (int j = 0; j + 1 < np; ++j) img[j] = j + 2;
    img[np - 1] = -1;
  }
  const FieldCtx& L = extension(base, u ? coords : 2 * np);
  TorusModel t{f, np, &base, &L, coords, WeylGroup(torus_type(f), u ? 2 * np : np), SignedPerm::from_images(img)};
  t.W.elements();
  return t;
}

}  // namespace

const TorusModel& torus_model(Family f, int np, const FieldCtx& base) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::unique_ptr<TorusModel>> cache;
  const std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{static_cast<int>(f), np, base.id()}];
  if (!slot) slot = std::make_unique<TorusModel>(build_model(f, np, base));
  return *slot;
}

TorusShape torus_shape(Family f, int np, const Poly& fgamma) {
  TorusShape s;
  const FieldCtx& F = fgamma.field();
  const bool u = f == Family::U;
  if (F.e() != (u ? 2 : 1) * F.base_degree()) {
    s.reason = "polynomial over the wrong field";
    return s;
  }
  if (fgamma.degree() != stratum_dim(f, np) || !fgamma.is_monic()) {
    s.reason = "degree does not match the stratum dimension";
    return s;
  }
  Poly g = fgamma;
  if (f == Family::OddSO) {
    const Poly lm1 = Poly::linear(F, 1);
    if (!divides(lm1, g)) {
      s.reason = "no lambda-1 factor";
      return s;
    }
    g = g / lm1;
  }
  if (g.degree() == 0) {
    s.ok = true;
    s.central = true;
    return s;
  }
  const auto fac = factor(g);
  if (fac.size() != 1) {
    s.reason = "more than one irreducible factor";
    return s;
  }
  s.Q = fac[0].first;
  s.m = fac[0].second;
  if (!is_self_reciprocal(*s.Q, u)) {
    s.reason = "irreducible factor is not self-reciprocal";
    return s;
  }
  s.central = u ? s.Q->degree() == 1 : is_lambda_pm1(*s.Q);
  if (!u && !s.central && s.m % 2 == 0) {
    s.reason = "non-central factor with even multiplicity";
    return s;
  }
  s.ok = true;
  return s;
}

std::vector<Elem> gamma_coords(const TorusModel& t, const TorusShape& s) {
  if (!s.ok) throw PreconditionError("torus shape rejected: " + s.reason);
  if (!s.Q) return std::vector<Elem>(t.coords, 1);
  const auto rts = roots_in(*s.Q, *t.L);
  if (rts.empty()) throw Error("shape polynomial has no root in the torus field");
  auto c = orbit_coords(t, rts.front());
  if (!torus_point_rational(t, c)) throw PreconditionError("shape " + s.Q->pretty() + " is not realized on this torus");
  return c;
}

bool torus_point_rational(const TorusModel& t, const std::vector<Elem>& c) {
  const FieldCtx& L = *t.L;
  const int N = t.coords;
  for (int j = 0; j < N; ++j) {
    Elem img;
    if (t.family == Family::U) img = L.inv(L.frobenius(c[(j + t.np) % N], 1));
    else img = j == 0 ? L.inv(L.frobenius(c[N - 1], 1)) : L.frobenius(c[j - 1], 1);
    if (img != c[j]) return false;
  }
  return true;
}

Poly torus_point_charpoly(const TorusModel& t, const std::vector<Elem>& c) {
  const FieldCtx& L = *t.L;
  Poly f = Poly::constant(L, 1);
  for (Elem l : c) {
    f = f * Poly::linear(L, l);
    if (t.family != Family::U) f = f * Poly::linear(L, L.inv(l));
  }
  if (t.family == Family::OddSO) f = f * Poly::linear(L, 1);
  return Embedding::get(*t.base, L).preimage(f);
}

PermSet reflection_stabilizer(const TorusModel& t, const std::vector<Elem>& c) {
  const FieldCtx& L = *t.L;
  std::vector<SignedPerm> gens;
  for (const auto& r : t.W.positive_roots()) {
    Elem v = 1;
    for (int i = 0; i < t.coords; ++i) {
      if (r[i] > 0) v = L.mul(v, L.pow(c[i], static_cast<std::uint64_t>(r[i])));
      else if (r[i] < 0) v = L.mul(v, L.inv(L.pow(c[i], static_cast<std::uint64_t>(-r[i]))));
    }
    if (v == 1) gens.push_back(t.W.reflection(r));
  }
  return generated_subgroup(gens, t.coords);
}

TorusCount torus_T_bruteforce(Family f, int np, const Poly& fgamma) {
  const TorusShape s = torus_shape(f, np, fgamma);
  if (!s.ok) throw PreconditionError("element shape not realizable on the torus: " + s.reason);
  if (f == Family::OddSO && s.Q && is_lambda_pm1(*s.Q) && s.Q->coeffs()[0] == 1)
    throw PreconditionError("eigenvalue -1 on an odd orthogonal stratum: centralizer need not be connected");
  TorusCount out;
  if (f != Family::U && np == 0) {
    // trivial group at the last stratum
    out.value = 1;
    out.wgamma_order = 1;
    out.fixed_elements = 1;
    return out;
  }
  const TorusModel& t = torus_model(f, np, fgamma.field());
  return torus_T_at(t, gamma_coords(t, s));
}

TorusCount torus_T_at(const TorusModel& t, const std::vector<Elem>& c) {
  if (!torus_point_rational(t, c)) throw PreconditionError("torus point is not rational");
  TorusCount out;
  const PermSet Wg = reflection_stabilizer(t, c);
  const SignedPerm phi_inv = t.phi.inverse();
  for (const auto& x : t.W.elements())
    if (Wg.count(x.inverse() * t.phi * x * phi_inv)) ++out.fixed_elements;
  out.wgamma_order = Wg.size();
  if (out.fixed_elements % Wg.size() != 0) throw Error("fixed-coset count is not a union of cosets");
  out.value = static_cast<long long>(out.fixed_elements / Wg.size());
  return out;
}

long long torus_T_closed_form(Family f, const TorusShape& s) {
  if (!s.ok) throw PreconditionError("torus shape rejected: " + s.reason);
  if (!s.Q || s.central) return 1;
  return f == Family::EvenSO ? s.Q->degree() / 2 : s.Q->degree();
}

std::vector<ShapeCount> torus_rational_points(Family f, int np, std::uint64_t q) {
  const FieldCtx& base = torus_base_field(f, q);
  const TorusModel& t = torus_model(f, np, base);
  const std::uint64_t M = t.norm_exponent();
  if (M > 2000000) throw PreconditionError("torus has too many rational points to enumerate");
  const FieldCtx& L = *t.L;
  const Elem h = L.pow(L.primitive_element(), (L.order() - 1) / M);
  std::map<Poly, std::pair<long long, std::vector<Elem>>, PolyLess> counts;
  // conjugate first coordinates give the same characteristic polynomial
  std::unordered_map<Elem, decltype(counts)::iterator> seen;
  Elem l1 = 1;
  for (std::uint64_t k = 0; k < M; ++k, l1 = L.mul(l1, h)) {
    if (auto it = seen.find(l1); it != seen.end()) {
      ++it->second->second.first;
      continue;
    }
    const auto c = orbit_coords(t, l1);
    if (!torus_point_rational(t, c)) throw Error("enumerated torus point is not rational");
    auto slot = counts.try_emplace(torus_point_charpoly(t, c), 0, c).first;
    ++slot->second.first;
    for (Elem x : c) {
      seen.emplace(x, slot);
      if (f != Family::U) seen.emplace(L.inv(x), slot);
    }
  }
  std::vector<ShapeCount> out;
  for (const auto& [fp, v] : counts) out.push_back({fp, v.first, torus_shape(f, np, fp), v.second});
  return out;
}

std::vector<Poly> torus_promised_shapes(Family f, int np, std::uint64_t q) {
  const FieldCtx& base = torus_base_field(f, q);
  const bool u = f == Family::U;
  const int D = u ? 2 * np + 1 : 2 * np;
  std::vector<Poly> out;
  for (int d = 1; d <= D; ++d) {
    if (D % d != 0) continue;
    const int m = D / d;
    if (m % 2 == 0) continue;
    for (const auto& Q : monic_irreducibles(base, d)) {
      if (!is_self_reciprocal(Q, u)) continue;
      if (!u && is_lambda_pm1(Q)) continue;
      Poly fp = pow(Q, m);
      if (f == Family::OddSO) fp = fp * Poly::linear(base, 1);
      out.push_back(fp);
    }
  }
  std::sort(out.begin(), out.end(), PolyLess{});
  return out;
}

}  // namespace dltrace
