#include <gtest/gtest.h>

#include <functional>

#include "dltrace/classical.hpp"
#include "dltrace/padic.hpp"
#include "dltrace/reciprocal.hpp"
#include "dltrace/rng.hpp"
#include "dltrace/trace.hpp"

using namespace dltrace;

namespace {

PMat diag(const PadicCtx& c, std::vector<long> d) {
  PMat m = pmat_zero(c, static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m.at(static_cast<int>(i), static_cast<int>(i)) = padic_int(c, d[i]);
  return m;
}

Padic det_laplace(const PadicCtx& c, const PMat& A, std::vector<int> rows, std::vector<int> cols) {
  if (rows.empty()) return padic_int(c, 1);
  Padic s = padic_int(c, 0);
  const int r = rows[0];
  for (std::size_t j = 0; j < cols.size(); ++j) {
    std::vector<int> rr(rows.begin() + 1, rows.end()), cc = cols;
    cc.erase(cc.begin() + static_cast<long>(j));
    const Padic t = padic_mul(c, A(r, cols[j]), det_laplace(c, A, rr, cc));
    s = j % 2 ? padic_sub(c, s, t) : padic_add(c, s, t);
  }
  return s;
}

// Elementary divisor valuations from determinantal divisors: d_k = min val of
// k x k minors, r = d_k - d_{k-1}.
std::vector<int> smith_by_minors(const PadicCtx& c, const PMat& A) {
  const int n = A.rows;
  std::vector<int> d{0};
  for (int k = 1; k <= n; ++k) {
    int best = 1 << 30;
    std::vector<int> rs, cs;
    std::function<void(int, std::vector<int>&, std::vector<std::vector<int>>&)> subsets =
        [&](int from, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
          if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
          }
          for (int i = from; i < n; ++i) {
            cur.push_back(i);
            subsets(i + 1, cur, out);
            cur.pop_back();
          }
        };
    std::vector<std::vector<int>> all;
    std::vector<int> cur;
    subsets(0, cur, all);
    for (const auto& r : all)
      for (const auto& cc : all) {
        const Padic m = det_laplace(c, A, r, cc);
        if (!padic_is_zero(c, m)) best = std::min(best, padic_val(c, m));
      }
    d.push_back(best);
  }
  std::vector<int> r;
  for (int k = 1; k <= n; ++k) r.push_back(d[k] - d[k - 1]);
  std::sort(r.rbegin(), r.rend());
  return r;
}

PMat random_unimodular(const PadicCtx& c, int n, Rng& rng) {
  PMat m = pmat_zero(c, n, n);
  while (true) {
    for (auto& x : m.v) x = padic_add(c, padic_int(c, static_cast<long>(rng.below(1000))),
                                      padic_mul(c, padic_int(c, static_cast<long>(rng.below(1000))),
                                                parse_padic(c, c.e == 2 ? "01@32" : "1@32")));
    if (pmat_residue(c, m).det() != 0) return m;
  }
}

}  // namespace

TEST(Padic, ElementArithmetic) {
  const auto c = PadicCtx::make(3, 2, 16);
  const Padic x = parse_padic(c, "12,01,20@10");  // 1 + 2s + 3s + 2*9
  EXPECT_EQ(format_padic(c, x), "12,01,20@10");
  EXPECT_EQ(x.a, 19);
  EXPECT_EQ(x.b, 5);
  EXPECT_EQ(padic_val(c, x), 0);
  const Padic y = padic_unit_inv(c, x);
  const Padic one = padic_mul(c, x, y);
  EXPECT_TRUE(padic_is_zero(c, padic_sub(c, one, padic_int(c, 1))));
  EXPECT_EQ(padic_val(c, parse_padic(c, "00,00,10@8")), 2);
  EXPECT_TRUE(padic_is_zero(c, parse_padic(c, "00@4")));
  // sqrt(delta)^2 = delta
  const Padic s = parse_padic(c, "01@16");
  EXPECT_EQ(padic_mul(c, s, s).a, c.delta);
  EXPECT_EQ(padic_residue(c, padic_conj(c, s)), c.residue->frobenius(padic_residue(c, s), 1));
  EXPECT_EQ(padic_residue(c, padic_lift(c, c.residue->gen())), c.residue->gen());
  EXPECT_THROW(parse_padic(c, "1,2@4"), ParseError);
  EXPECT_THROW(parse_padic(c, "13@4"), ParseError);
  EXPECT_THROW(parse_padic(c, "10"), ParseError);
  EXPECT_THROW(padic_shift_down(c, parse_padic(c, "00,00@2"), 2), PrecisionError);
}

TEST(Padic, MatrixTextRoundTrip) {
  const auto c = PadicCtx::make(5, 2, 8);
  const PMat m = parse_pmat(c, "5^2 2 2\n10@8 01,30@8\n00@8 44,44@8\n");
  EXPECT_EQ(format_pmat(c, m), "5^2 2 2\n10@8 01,30@8\n00@8 44,44@8\n");
  EXPECT_THROW(parse_pmat(c, "3^2 1 1 10@8"), ParseError);
  EXPECT_THROW(parse_pmat(c, "5^2 1 2 10@8"), ParseError);
}

TEST(Padic, CharPolyDivisionFree) {
  const auto c = PadicCtx::make(3, 1, 20);
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(4));
    PMat A = pmat_zero(c, n, n);
    for (auto& x : A.v) x = padic_int(c, static_cast<long>(rng.below(50)) - 25);
    const auto cp = pmat_charpoly(c, A);
    // Cayley-Hamilton
    PMat acc = pmat_identity(c, n), pw = pmat_identity(c, n);
    for (int k = 0; k < n; ++k) pw = pmat_mul(c, pw, A);
    acc = pw;
    PMat pk = pmat_identity(c, n);
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) acc.at(i, j) = padic_add(c, acc(i, j), padic_mul(c, cp[k], pk(i, j)));
      pk = pmat_mul(c, pk, A);
    }
    EXPECT_TRUE(pmat_is_zero(c, acc));
    // trace and determinant
    Padic tr = padic_int(c, 0);
    for (int i = 0; i < n; ++i) tr = padic_add(c, tr, A(i, i));
    EXPECT_TRUE(padic_is_zero(c, padic_add(c, cp[n - 1], tr)));
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    const Padic det = det_laplace(c, A, idx, idx);
    EXPECT_TRUE(padic_is_zero(c, n % 2 ? padic_add(c, cp[0], det) : padic_sub(c, cp[0], det)));
  }
}

TEST(Padic, SmithInvariants) {
  const auto c = PadicCtx::make(3, 2, 16);
  EXPECT_EQ(smith_invariants(c, diag(c, {3, 1, 1})), (std::vector<int>{1, 0, 0}));
  EXPECT_EQ(smith_invariants(c, diag(c, {9, 1, 1})), (std::vector<int>{2, 0, 0}));
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(3));
    std::vector<long> d;
    for (int i = 0; i < n; ++i) d.push_back(std::vector<long>{1, 3, 9, 2, 6}[rng.below(5)]);
    const PMat D = diag(c, d);
    const PMat A = pmat_mul(c, pmat_mul(c, random_unimodular(c, n, rng), D), random_unimodular(c, n, rng));
    const auto want = smith_invariants(c, D);
    EXPECT_EQ(smith_invariants(c, A), want);
    EXPECT_EQ(smith_by_minors(c, A), want);
  }
  EXPECT_THROW(smith_invariants(c, diag(c, {1, 0})), PrecisionError);
}

TEST(Padic, StandardLatticeFromCompanion) {
  const auto c = PadicCtx::make(3, 2, 16);
  // companion matrix of lambda^3 - 1 with u = e_1: Krylov basis is the identity
  PMat g = pmat_zero(c, 3, 3);
  g.at(1, 0) = padic_int(c, 1);
  g.at(2, 1) = padic_int(c, 1);
  g.at(0, 2) = padic_int(c, 1);
  PMat u = pmat_zero(c, 3, 1);
  u.at(0, 0) = padic_int(c, 1);
  const auto d = lattice_of_g(c, g, u, pmat_identity(c, 3));
  EXPECT_TRUE(pmat_is_zero(c, pmat_sub(c, d.basis, pmat_identity(c, 3))));
  EXPECT_EQ(d.inv, (std::vector<int>{0, 0, 0}));
  EXPECT_FALSE(d.minuscule);
  // g u = p e_2 makes L(g) non-unimodular
  PMat h = pmat_zero(c, 2, 2);
  h.at(1, 0) = padic_int(c, 3);
  h.at(0, 1) = padic_int(c, 1);
  PMat v = pmat_zero(c, 2, 1);
  v.at(0, 0) = padic_int(c, 1);
  const auto e = lattice_of_g(c, h, v, pmat_identity(c, 2));
  EXPECT_EQ(e.inv, (std::vector<int>{2, 0}));
  // dependent Krylov vectors
  EXPECT_THROW(lattice_of_g(c, pmat_identity(c, 2), v, pmat_identity(c, 2)), PreconditionError);
}

TEST(Padic, SynthesizedInstances) {
  for (std::uint64_t p : {3u, 5u}) {
    const auto c = PadicCtx::make(p, 2, 24);
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const int k = 1 + 2 * static_cast<int>(seed % 2);
      const int n = k + static_cast<int>(seed % 3);
      const auto inst = synthesize_minuscule(c, k, n, seed);
      const auto d = lattice_of_g(c, inst.g, inst.u, inst.H);
      EXPECT_EQ(d.inv, inst.inv);
      EXPECT_TRUE(d.minuscule);
      EXPECT_TRUE(d.unitary);
      // L(g) stable: g B = B C with C the companion matrix
      PMat C = pmat_zero(c, n, n);
      for (int i = 1; i < n; ++i) C.at(i, i - 1) = padic_int(c, 1);
      for (int i = 0; i < n; ++i) C.at(i, n - 1) = padic_neg(c, d.charpoly[i]);
      EXPECT_TRUE(pmat_is_zero(c, pmat_sub(c, pmat_mul(c, inst.g, d.basis), pmat_mul(c, d.basis, C))));
      // L(g)^vee stable: C preserves the Gram matrix of L(g)
      EXPECT_TRUE(pmat_is_zero(
          c, pmat_sub(c, pmat_mul(c, pmat_mul(c, pmat_transpose(C), d.gram), pmat_conj(c, C)), d.gram)));
      const auto v = residue_space(c, d);
      EXPECT_EQ(v.dim, k);
      EXPECT_TRUE(is_gl_regular(v.gbar));
      EXPECT_EQ(v.f, char_poly(inst.gbar_block));
      EXPECT_TRUE(is_self_reciprocal(v.f, true));
      const auto r = afl_pipeline(c, inst.g, inst.u, inst.H);
      ASSERT_TRUE(r.ok) << r.failed_stage << ": " << r.error;
      EXPECT_EQ(r.intersection.value_or(0), r.closed_form.value());
    }
  }
}

TEST(Padic, PipelineStages) {
  const auto c = PadicCtx::make(3, 2, 16);
  PMat h = pmat_zero(c, 2, 2);
  h.at(1, 0) = padic_int(c, 3);
  h.at(0, 1) = padic_int(c, 1);
  PMat v = pmat_zero(c, 2, 1);
  v.at(0, 0) = padic_int(c, 1);
  const auto bad = afl_pipeline(c, h, v, pmat_identity(c, 2));
  EXPECT_FALSE(bad.ok);
  EXPECT_EQ(bad.failed_stage, "invariant");
  EXPECT_EQ(bad.exit_code, 3);
  const auto dep = afl_pipeline(c, pmat_identity(c, 2), v, pmat_identity(c, 2));
  EXPECT_EQ(dep.failed_stage, "lattice");
  const auto inst = synthesize_minuscule(c, 0, 2, 1);
  const auto zero = afl_pipeline(c, inst.g, inst.u, inst.H);
  EXPECT_TRUE(zero.ok);
  EXPECT_EQ(zero.dim_v, 0);
  EXPECT_FALSE(zero.flags.empty());
  const auto j = afl_report_json(c, zero);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["dim_V"], 0);
}

TEST(Padic, IntersectionFormulas) {
  const auto& F9 = FieldCtx::get(3, 2, 1);
  Poly cubic = Poly::constant(F9, 1);
  for (const auto& Q : monic_irreducibles(F9, 3))
    if (is_self_reciprocal(Q, true)) {
      cubic = Q;
      break;
    }
  ASSERT_EQ(cubic.degree(), 3);
  EXPECT_EQ(afl_int(cubic), 3);
  const Elem mu = F9.pow(F9.primitive_element(), 2);
  const Elem a = F9.primitive_element();
  const Poly q0 = Poly::linear(F9, mu);
  const Poly pair = Poly::linear(F9, a) * Poly::linear(F9, F9.inv(F9.frobenius(a, 1)));
  EXPECT_EQ(afl_int(q0 * pair), 2);
  EXPECT_EQ(afl_int(q0 * Poly::linear(F9, 1) * Poly::linear(F9, F9.neg(1))), std::nullopt);
  EXPECT_THROW(afl_int(pair), PreconditionError);

  const auto& F3 = FieldCtx::get(3, 1);
  Poly quartic = Poly::constant(F3, 1);
  for (const auto& Q : monic_irreducibles(F3, 4))
    if (is_self_reciprocal(Q, false)) {
      quartic = Q;
      break;
    }
  ASSERT_EQ(quartic.degree(), 4);
  EXPECT_EQ(gspin_int(quartic), 4);
  EXPECT_EQ(gspin_int(quartic * quartic), std::nullopt);
  const Poly c2 = Poly::from_ints(F3, {1, 0, 1});
  const Poly nsr = Poly::from_ints(F3, {2, 1, 1}) * Poly::from_ints(F3, {2, 2, 1});
  EXPECT_EQ(gspin_int(c2 * nsr * nsr), 6);
  EXPECT_THROW(gspin_int(Poly::linear(F3, 1)), PreconditionError);
}

TEST(Padic, ResidualDeterminant) {
  const auto c = PadicCtx::make(3, 1, 16);
  // a unit-norm reflection acts trivially on L^vee / L
  const PMat gram = diag(c, {3, 3, 1, 1});
  PMat v = pmat_zero(c, 4, 1);
  v.at(2, 0) = padic_int(c, 1);
  v.at(0, 0) = padic_int(c, 1);
  const auto one = residual_determinant_check(c, gram, 2, {{v, 0}});
  EXPECT_TRUE(one.ok);
  EXPECT_EQ(one.val_one, 0);
  const PMat R = reflection_matrix(c, gram, {v, 0});
  EXPECT_EQ(pmat_residue(c, R).submatrix({0, 1}, {0, 1}), Mat::identity(*c.residue, 2));
  // two valuation-one reflections
  PMat w1 = pmat_zero(c, 4, 1), w2 = pmat_zero(c, 4, 1);
  w1.at(0, 0) = padic_int(c, 1);
  w2.at(1, 0) = padic_int(c, 1);
  w2.at(0, 0) = padic_int(c, 1);
  const auto two = residual_determinant_check(c, gram, 2, {{w1, 1}, {w2, 1}});
  EXPECT_EQ(two.val_one, 2);
  EXPECT_TRUE(two.ok);
  const auto single = residual_determinant_check(c, gram, 2, {{w1, 1}});
  EXPECT_FALSE(single.ok);
  EXPECT_TRUE(single.parity_ok);
  // valuation 1 vector outside p L^vee does not stabilize L
  PMat bad = pmat_zero(c, 4, 1);
  bad.at(2, 0) = padic_int(c, 1);
  bad.at(3, 0) = padic_int(c, 1);
  EXPECT_THROW(residual_determinant_check(c, diag(c, {3, 3, 1, 2}), 2, {{bad, 1}}), PreconditionError);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto [G, refl] = random_reflection_product(c, 4, 2, 6, seed);
    const auto chk = residual_determinant_check(c, G, 2, refl);
    EXPECT_TRUE(chk.parity_ok);
    EXPECT_EQ(chk.ok, chk.val_one % 2 == 0);
  }
}
