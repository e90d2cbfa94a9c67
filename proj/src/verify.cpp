#include "dltrace/verify.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "dltrace/classical.hpp"
#include "dltrace/datum.hpp"
#include "dltrace/padic.hpp"
#include "dltrace/reciprocal.hpp"
#include "dltrace/rng.hpp"
#include "dltrace/torus.hpp"
#include "dltrace/trace.hpp"

namespace dltrace {

namespace {

struct Tally {
  SuiteResult& r;
  void check(bool ok, const std::function<std::string()>& what) {
    ++r.checked;
    if (ok) return;
    if (r.failed++ == 0) r.counterexample = what();
  }
};

const SpaceKind kKinds[] = {SpaceKind::SOminus2n, SpaceKind::SO2n1, SpaceKind::Sp2n, SpaceKind::U2n1};

Poly random_monic(const FieldCtx& F, int deg, Rng& rng) {
  std::vector<Elem> c(deg + 1);
  for (auto& x : c) x = rng.below(F.order());
  c[deg] = 1;
  while (c[0] == 0) c[0] = rng.below(F.order());
  return Poly(F, c);
}

void suite_reciprocal(long long budget, std::uint64_t seed, Tally& t) {
  Rng rng(seed);
  for (long long k = 0; k < budget; ++k) {
    const bool conj = k % 2 == 1;
    const FieldCtx& F = conj ? FieldCtx::get(3, 2, 1) : FieldCtx::get(k % 4 == 0 ? 3 : 5, 1);
    const Poly f = random_monic(F, 1 + static_cast<int>(rng.below(6)), rng);
    const Poly g = random_monic(F, 1 + static_cast<int>(rng.below(6)), rng);
    t.check(reciprocal(reciprocal(f, conj), conj) == f, [&] { return "involution fails for " + format_poly(f); });
    t.check(reciprocal(f * g, conj) == reciprocal(f, conj) * reciprocal(g, conj),
            [&] { return "multiplicativity fails for " + format_poly(f) + " * " + format_poly(g); });
  }
}

struct IrreducibleLists {
  std::vector<Poly> sr, nsr;
};

const IrreducibleLists& irreducible_lists(const FieldCtx& F, bool conj) {
  static std::map<std::pair<int, bool>, IrreducibleLists> cache;
  auto& out = cache[{F.id(), conj}];
  if (out.sr.empty()) {
    for (int d = 1; d <= 4; ++d)
      for (const auto& Q : monic_irreducibles(F, d)) {
        if (Q[0] == 0) continue;
        if (is_self_reciprocal(Q, conj)) out.sr.push_back(Q);
        else if (d <= 2) out.nsr.push_back(Q);
      }
  }
  return out;
}

void suite_mmm(long long budget, std::uint64_t seed, Tally& t) {
  Rng rng(seed);
  for (long long k = 0; k < 2 * budget; ++k) {
    const bool conj = k % 2 == 1;
    const FieldCtx& F = conj ? FieldCtx::get(3, 2, 1) : FieldCtx::get(3, 1);
    const auto& L = irreducible_lists(F, conj);
    const Poly q0 = L.sr[rng.below(L.sr.size())];
    const int m0 = 1 + 2 * static_cast<int>(rng.below(3));
    Poly f = pow(q0, m0);
    for (int j = static_cast<int>(rng.below(3)); j > 0; --j) {
      const Poly Q = L.nsr[rng.below(L.nsr.size())];
      f = f * pow(Q * reciprocal(Q, conj), 1 + static_cast<int>(rng.below(2)));
    }
    if (rng.coin()) {
      const Poly R = L.sr[rng.below(L.sr.size())];
      if (R != q0) f = f * pow(R, 2);
    }
    const long long want = script_m(f, conj);
    std::set<std::size_t> counts;
    for (int m = 1; m <= m0; m += 2) counts.insert(enumerate_uu_star(f, q0, m, conj).size());
    t.check(counts.size() == 1 && static_cast<long long>(*counts.begin()) == want,
            [&] { return "count differs from script M for " + format_poly(f); });
  }
}

void suite_counting_flags(long long budget, std::uint64_t seed, Tally& t) {
  for (SpaceKind k : kKinds)
    for (int n = k == SpaceKind::U2n1 ? 0 : 1; n <= 3; ++n) {
      const auto s = standard_space(k, n, 3);
      if (s.dim > (s.hermitian() ? 5 : 7)) continue;
      std::uint64_t sd = seed;
      for (long long e = 0; e < budget; ++e) {
        Mat g = random_isometry(s, sd++);
        while (!is_gl_regular(g)) g = random_isometry(s, sd++);
        for (int i = 1; i <= s.i_max(); ++i) {
          const auto scan = stable_isotropic_scan(s, g, i - 1);
          if (!scan) continue;
          std::set<std::string> a, b;
          for (const auto& w : invariant_flags(s, g, i)) a.insert(canonical_span(w.basis).format());
          for (const auto& m : *scan) b.insert(m.format());
          t.check(a == b, [&] {
            return kind_name(k) + " n=" + std::to_string(n) + " i=" + std::to_string(i) + ": " +
                   std::to_string(a.size()) + " divisors vs " + std::to_string(b.size()) + " subspaces";
          });
        }
      }
    }
}

void suite_closure(Tally& t) {
  for (Family f : all_families())
    for (int n = 1; n <= 3; ++n) {
      const auto d = family_datum(f, n);
      const auto der = validate_unbranched(d);
      if (der.w.empty()) continue;
      const auto W = datum_weyl(d);
      std::set<SignedPerm> want;
      for (const auto& w : der.w) want.insert(W.from_word(w));
      const auto got = W.closure_set(d.sigma, d.J, W.from_word(der.w[0]));
      t.check(std::set<SignedPerm>(got.begin(), got.end()) == want && got.size() == want.size(),
              [&] { return family_name(f) + " n=" + std::to_string(n); });
    }
}

void suite_torus(Tally& t) {
  for (std::uint64_t q : {3u, 5u})
    for (Family f : all_families())
      for (int np = f == Family::U ? 0 : 1; np <= 3; ++np) {
        const auto& tm = torus_model(f, np, torus_base_field(f, q));
        for (const auto& sc : torus_rational_points(f, np, q)) {
          t.check(sc.shape.ok, [&] { return family_name(f) + " point shape " + format_poly(sc.f) + ": " + sc.shape.reason; });
          if (!sc.shape.ok) continue;
          if (f == Family::OddSO && sc.shape.Q && is_lambda_pm1(*sc.shape.Q) && sc.shape.Q->coeffs()[0] == 1) continue;
          const long long got = torus_T_at(tm, sc.coords).value;
          t.check(got == torus_T_closed_form(f, sc.shape),
                  [&] { return family_name(f) + " n'=" + std::to_string(np) + " " + format_poly(sc.f); });
        }
        if (q == 3 && np <= 2) {
          std::set<Poly, PolyLess> found;
          for (const auto& sc : torus_rational_points(f, np, q)) found.insert(sc.f);
          for (const auto& want : torus_promised_shapes(f, np, q))
            t.check(found.count(want) > 0, [&] { return family_name(f) + " misses " + format_poly(want); });
        }
      }
}

void suite_engine(long long budget, std::uint64_t seed, Tally& t) {
  for (std::uint64_t q : {3u, 5u})
    for (SpaceKind k : kKinds)
      for (int n = 1; n <= ((k == SpaceKind::U2n1 && q == 5) ? 2 : 3); ++n) {
        const auto s = standard_space(k, n, q);
        const Family fam = family_of(k);
        std::uint64_t sd = seed;
        for (long long e = 0; e < budget; ++e) {
          Mat g = random_isometry(s, sd++);
          while (!is_gl_regular(g)) g = random_isometry(s, sd++);
          const auto r = trace_engine(s, g);
          auto where = [&] { return kind_name(k) + " n=" + std::to_string(n) + " q=" + std::to_string(q) + " f=" + format_poly(r.f); };
          t.check(r.agrees(), [&] { return where() + ": engine " + std::to_string(r.total) + " vs " + std::to_string(r.closed.value); });
          t.check(stratum_count_check(r), [&] { return where() + ": contributing strata"; });
          if (r.closed.value == 0) t.check(r.contributing_strata() == 0, [&] { return where() + ": zero diagnosis"; });
          for (const auto& row : r.rows)
            if (row.shape)
              t.check(row.T == torus_T_closed_form(fam, torus_shape(fam, row.np, *row.shape)),
                      [&] { return where() + ": T at i=" + std::to_string(row.i); });
        }
      }
}

void suite_self_reciprocity(long long budget, std::uint64_t seed, Tally& t) {
  for (SpaceKind k : kKinds) {
    for (long long e = 0; e < budget; ++e) {
      const auto s = standard_space(k, 1 + static_cast<int>(e % 3), 3);
      const Poly f = char_poly(random_isometry(s, seed + static_cast<std::uint64_t>(e)));
      t.check(is_self_reciprocal(f, s.hermitian()), [&] { return kind_name(k) + " " + format_poly(f); });
    }
  }
}

void suite_parity(long long budget, std::uint64_t seed, Tally& t) {
  long long done = 0;
  std::uint64_t sd = seed;
  while (done < budget) {
    const SpaceKind k = done % 2 ? SpaceKind::SO2n1 : SpaceKind::SOminus2n;
    const auto s = standard_space(k, 1 + static_cast<int>((done / 2) % 3), (done / 6) % 2 ? 5 : 3);
    const Mat g = random_orthogonal(s, sd++);
    if (!is_gl_regular(g)) continue;
    ++done;
    const auto r = eigen_parity_check(s, g);
    t.check(r.ok, [&] { return kind_name(k) + " " + format_poly(char_poly(g)); });
  }
}

void suite_spinor(long long budget, std::uint64_t seed, Tally& t) {
  for (long long e = 0; e < budget; ++e) {
    const auto c = PadicCtx::make(e % 2 ? 5 : 3, 1, 16);
    const int n = 3 + static_cast<int>(e % 4);
    const int k = 1 + static_cast<int>((e / 4) % n);
    const auto [gram, refl] = random_reflection_product(c, n, k, 6, seed + static_cast<std::uint64_t>(e));
    const auto chk = residual_determinant_check(c, gram, k, refl);
    t.check(chk.parity_ok, [&] { return "n=" + std::to_string(n) + " k=" + std::to_string(k) + " case " + std::to_string(e); });
  }
}

void suite_padic(long long budget, std::uint64_t seed, Tally& t) {
  for (std::uint64_t p : {3u, 5u}) {
    const auto c = PadicCtx::make(p, 2);
    for (long long e = 0; e < budget; ++e) {
      const int k = e % 2 ? 3 : 1;
      const int n = k + static_cast<int>(e % 3);
      const auto inst = synthesize_minuscule(c, k, n, seed + static_cast<std::uint64_t>(e));
      const auto r = afl_pipeline(c, inst.g, inst.u, inst.H);
      auto where = [&] { return "p=" + std::to_string(p) + " case " + std::to_string(e); };
      t.check(r.ok, [&] { return where() + ": " + r.failed_stage + ": " + r.error; });
      if (!r.ok) continue;
      t.check(r.inv == inst.inv, [&] { return where() + ": inv"; });
      t.check(r.closed_form && r.intersection.value_or(0) == *r.closed_form, [&] { return where() + ": Int vs formula"; });
      t.check(r.f_gbar && *r.f_gbar == char_poly(inst.gbar_block), [&] { return where() + ": residue polynomial"; });
    }
  }
}

void suite_smith(long long budget, std::uint64_t seed, Tally& t) {
  const auto c = PadicCtx::make(3, 2, 24);
  Rng rng(seed);
  auto unimodular = [&](int n) {
    PMat m = pmat_zero(c, n, n);
    do {
      for (auto& x : m.v) x = padic_lift(c, rng.below(c.residue->order()));
      for (auto& x : m.v) x = padic_add(c, x, padic_mul(c, padic_int(c, 3), padic_lift(c, rng.below(9))));
    } while (pmat_residue(c, m).det() == 0);
    return m;
  };
  for (long long e = 0; e < budget; ++e) {
    const int n = 2 + static_cast<int>(rng.below(4));
    PMat D = pmat_zero(c, n, n);
    for (int i = 0; i < n; ++i) D.at(i, i) = padic_int(c, std::vector<long>{1, 3, 9, 27}[rng.below(4)]);
    const auto want = smith_invariants(c, D);
    const auto got = smith_invariants(c, pmat_mul(c, pmat_mul(c, unimodular(n), D), unimodular(n)));
    t.check(got == want, [&] { return "case " + std::to_string(e); });
  }
}

}  // namespace

std::vector<std::string> verify_suites() {
  return {"reciprocal",       "lemma-mmm",     "counting-flags",     "closure-sets",   "torus-counts",
          "engine-closed-form", "self-reciprocity", "eigen-parity", "spinor-determinant", "padic-pipeline",
          "smith-invariance"};
}

long long default_budget(const std::string& s) {
  static const std::map<std::string, long long> b{
      {"reciprocal", 500},       {"lemma-mmm", 100},        {"counting-flags", 3},   {"closure-sets", 1},
      {"torus-counts", 1},       {"engine-closed-form", 200}, {"self-reciprocity", 100}, {"eigen-parity", 1000},
      {"spinor-determinant", 500}, {"padic-pipeline", 50},  {"smith-invariance", 50}};
  const auto it = b.find(s);
  if (it == b.end()) throw PreconditionError("unknown verify suite '" + s + "'");
  return it->second;
}

long long small_budget(const std::string& s) {
  const long long d = default_budget(s);
  return std::max(1LL, d / 10);
}

SuiteResult run_suite(const std::string& suite, long long budget, std::uint64_t seed) {
  if (budget <= 0) budget = default_budget(suite);
  else default_budget(suite);  // validates the name
  SuiteResult r;
  r.name = suite;
  Tally t{r};
  const auto t0 = std::chrono::steady_clock::now();
  if (suite == "reciprocal") suite_reciprocal(budget, seed, t);
  else if (suite == "lemma-mmm") suite_mmm(budget, seed, t);
  else if (suite == "counting-flags") suite_counting_flags(budget, seed, t);
  else if (suite == "closure-sets") suite_closure(t);
  else if (suite == "torus-counts") suite_torus(t);
  else if (suite == "engine-closed-form") suite_engine(budget, seed, t);
  else if (suite == "self-reciprocity") suite_self_reciprocity(budget, seed, t);
  else if (suite == "eigen-parity") suite_parity(budget, seed, t);
  else if (suite == "spinor-determinant") suite_spinor(budget, seed, t);
  else if (suite == "padic-pipeline") suite_padic(budget, seed, t);
  else if (suite == "smith-invariance") suite_smith(budget, seed, t);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

nlohmann::json suite_json(const SuiteResult& r) {
  nlohmann::json j{{"suite", r.name}, {"checked", r.checked}, {"failed", r.failed}, {"pass", r.failed == 0}};
  if (r.failed) j["counterexample"] = r.counterexample;
  return j;
}

}  // namespace dltrace
