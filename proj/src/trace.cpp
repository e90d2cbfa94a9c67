#include "dltrace/trace.hpp"

#include <map>
#include <mutex>
#include <set>
#include <tuple>

#include "dltrace/reciprocal.hpp"
#include "dltrace/torus.hpp"

namespace dltrace {

namespace {

Poly lin(const FieldCtx& F, int root_sign) { return Poly::linear(F, root_sign > 0 ? 1 : F.neg(1)); }

long long cached_T(Family fam, int np, const Poly& shape) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, std::string>, long long> cache;
  const auto key = std::make_tuple(static_cast<int>(fam), np, format_poly(shape));
  {
    const std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const long long v = torus_T_bruteforce(fam, np, shape).value;
  const std::lock_guard<std::mutex> lock(mu);
  cache[key] = v;
  return v;
}

int space_n(SpaceKind kind, int deg) {
  return (kind == SpaceKind::SO2n1 || kind == SpaceKind::U2n1) ? (deg - 1) / 2 : deg / 2;
}

}  // namespace

ClosedForm trace_closed_form(SpaceKind kind, const Poly& f) {
  const FieldCtx& F = f.field();
  const bool u = kind == SpaceKind::U2n1;
  if (F.e() != (u ? 2 : 1) * F.base_degree())
    throw PreconditionError(std::string("polynomial must be over ") + (u ? "F_{q^2}" : "F_q") + " for " + kind_name(kind));
  const bool odd_dim = kind == SpaceKind::SO2n1 || u;
  if (f.degree() < (odd_dim ? 1 : 2) || (f.degree() % 2 == 1) != odd_dim)
    throw PreconditionError("degree " + std::to_string(f.degree()) + " has the wrong parity for " + kind_name(kind));
  if (!is_self_reciprocal(f, u)) throw PreconditionError("polynomial is not self-reciprocal");
  const SrFactorization sr = sr_classify(f, u);
  ClosedForm c;
  c.script_m = script_m(sr);
  const int mp = u ? 0 : sr.mult_of(lin(F, 1));    // lambda - 1
  const int mm = u ? 0 : sr.mult_of(lin(F, -1));   // lambda + 1
  std::vector<const SrFactor*> odd;
  for (const auto* x : sr.odd_sr())
    if (u || !is_lambda_pm1(x->q)) odd.push_back(x);
  auto unique = [&](long long deg_weight) {
    c.q0 = odd[0]->q;
    c.m_q0 = odd[0]->mult;
    c.clause = "unique-odd-factor";
    c.value = deg_weight * ((c.m_q0 + 1) / 2) * c.script_m;
  };
  switch (kind) {
    case SpaceKind::SOminus2n:
      if (mm > 0) c.clause = "eigenvalue-minus-one";
      else if (mp > 0) c.clause = "eigenvalue-one";
      else if (odd.empty()) c.clause = "no-odd-factor";
      else if (odd.size() > 1) c.clause = "several-odd-factors";
      else unique(odd[0]->q.degree() / 2);
      break;
    case SpaceKind::SO2n1:
      if (mm > 0) c.clause = "eigenvalue-minus-one";
      else if (mp % 2 == 0) c.clause = "even-lambda-minus-one";
      else if (odd.size() > 1) c.clause = "several-odd-factors";
      else if (odd.size() == 1) unique(odd[0]->q.degree());
      else {
        c.clause = "all-even";
        c.value = static_cast<long long>((mp + 1) / 2) * c.script_m;
      }
      break;
    case SpaceKind::Sp2n:
    {
      const std::size_t central_odd = (mp % 2) + (mm % 2);
      if (odd.size() + central_odd > 1) c.clause = "several-odd-factors";
      else if (central_odd == 1) c.clause = "odd-central-factor";
      else if (odd.size() == 1) unique(odd[0]->q.degree());
      else {
        c.clause = "all-even";
        c.value = static_cast<long long>(mp / 2 + 1 + mm / 2) * c.script_m;
      }
      break;
    }
    case SpaceKind::U2n1:
      if (odd.empty()) c.clause = "no-odd-factor";
      else if (odd.size() > 1) c.clause = "several-odd-factors";
      else unique(odd[0]->q.degree());
      break;
  }
  return c;
}

std::string quotient_clause(SpaceKind kind, int np, const Poly& quotient) {
  const Family fam = family_of(kind);
  const TorusShape sh = torus_shape(fam, np, quotient);
  if (!sh.ok) return sh.reason;
  if (kind == SpaceKind::SOminus2n && sh.central) return "central element on an even orthogonal stratum";
  if (kind == SpaceKind::SO2n1 && sh.Q && is_lambda_pm1(*sh.Q) && sh.Q->coeffs()[0] == 1)
    return "eigenvalue -1 on an odd orthogonal stratum";
  return "";
}

int TraceReport::contributing_strata() const {
  std::set<int> s;
  for (const auto& r : rows)
    if (r.product != 0) s.insert(r.i);
  return static_cast<int>(s.size());
}

TraceReport trace_engine(const ClassicalSpace& s, const Mat& g) {
  if (!is_isometry(g, s)) throw PreconditionError("element is not an isometry of " + kind_name(s.kind));
  if (!is_gl_regular(g)) throw PreconditionError("element is not regular in GL(V)");
  const Family fam = family_of(s.kind);
  TraceReport r{s.kind, s.n, s.q, isometry_char_poly(g, s), {}, {}, 0, {}};
  for (int i = 1; i <= s.i_max(); ++i) {
    const int np = s.n + 1 - i;
    const auto flags = invariant_flags(s, g, i);
    std::map<Poly, long long, PolyLess> groups;
    for (const auto& w : flags) {
      const auto lp = levi_projection(w, s, g);
      const std::string clause = quotient_clause(s.kind, np, lp.quotient);
      if (clause.empty()) ++groups[lp.quotient];
      else r.rejected.push_back({i, w.U, lp.quotient, clause});
    }
    if (groups.empty()) {
      r.rows.push_back({i, np, flags.size(), std::nullopt, 0, 0, 0});
      continue;
    }
    for (const auto& [shape, cnt] : groups) {
      const long long T = cached_T(fam, np, shape);
      r.rows.push_back({i, np, flags.size(), shape, cnt, T, cnt * T});
      r.total += cnt * T;
    }
  }
  r.closed = trace_closed_form(s.kind, r.f);
  return r;
}

bool stratum_count_check(const TraceReport& r) {
  if (r.closed.clause != "unique-odd-factor") return true;
  const Poly& q0 = *r.closed.q0;
  std::set<int> ms;
  for (const auto& row : r.rows) {
    if (row.product == 0) continue;
    Poly quot = *row.shape;
    if (r.kind == SpaceKind::SO2n1) quot = quot / Poly::linear(quot.field(), 1);
    ms.insert(multiplicity(q0, quot));
  }
  std::set<int> want;
  for (int m = 1; m <= r.closed.m_q0; m += 2) want.insert(m);
  return r.contributing_strata() == (r.closed.m_q0 + 1) / 2 && ms == want;
}

nlohmann::json closed_form_json(const ClosedForm& c) {
  nlohmann::json j{{"value", c.value}, {"clause", c.clause}, {"script_m", c.script_m}};
  if (c.q0) {
    j["q0"] = format_poly(*c.q0);
    j["m_q0"] = c.m_q0;
  } else {
    j["q0"] = nullptr;
  }
  return j;
}

nlohmann::json report_json(const TraceReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& x : r.rows)
    rows.push_back({{"i", x.i},
                    {"n_prime", x.np},
                    {"witnesses", x.witnesses},
                    {"shape", x.shape ? nlohmann::json(format_poly(*x.shape)) : nlohmann::json("none")},
                    {"count", x.count},
                    {"T", x.T},
                    {"product", x.product}});
  nlohmann::json rej = nlohmann::json::array();
  for (const auto& x : r.rejected)
    rej.push_back({{"i", x.i}, {"U", format_poly(x.U)}, {"quotient", format_poly(x.quotient)}, {"clause", x.clause}});
  return {{"schema", 1},
          {"family", family_name(family_of(r.kind))},
          {"n", r.n},
          {"q", r.q},
          {"f_g", format_poly(r.f)},
          {"stratum_contributions", rows},
          {"rejected", rej},
          {"total", r.total},
          {"closed_form", closed_form_json(r.closed)},
          {"agree", r.agrees()},
          {"contributing_strata", r.contributing_strata()}};
}

}  // namespace dltrace
