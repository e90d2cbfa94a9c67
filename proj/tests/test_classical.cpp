#include <gtest/gtest.h>

#include <set>

#include "dltrace/classical.hpp"
#include "dltrace/reciprocal.hpp"
#include "oracle.hpp"

using namespace dltrace;

namespace {

const SpaceKind kKinds[] = {SpaceKind::SOminus2n, SpaceKind::SO2n1, SpaceKind::Sp2n, SpaceKind::U2n1};

int min_n(SpaceKind k) { return k == SpaceKind::U2n1 ? 0 : 1; }

// first GL-regular isometry from a seed stream
Mat regular_isometry(const ClassicalSpace& s, std::uint64_t& seed) {
  while (true) {
    Mat g = random_isometry(s, seed++);
    if (is_gl_regular(g)) return g;
  }
}

std::string rref_key(const Mat& B) {
  // columns basis -> canonical row echelon text
  return B.cols() == 0 ? std::string("0") : B.transpose().rref().format();
}

}  // namespace

TEST(Classical, GramMatrices) {
  const auto sp = standard_space(SpaceKind::Sp2n, 1, 3);
  EXPECT_EQ(sp.gram, Mat::from_ints(*sp.F, {{0, 1}, {-1, 0}}));
  const auto so = standard_space(SpaceKind::SO2n1, 1, 3);
  EXPECT_EQ(so.gram, Mat::from_ints(*so.F, {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}}));
  const auto u = standard_space(SpaceKind::U2n1, 1, 3);
  EXPECT_EQ(u.F->order(), 9u);
  EXPECT_EQ(u.dim, 3);
  for (SpaceKind k : kKinds)
    for (int n = min_n(k); n <= 3; ++n) {
      const auto s = standard_space(k, n, 3);
      EXPECT_NE(s.gram.det(), 0u) << kind_name(k) << n;
      if (s.hermitian()) EXPECT_EQ(s.gram.transpose().frobenius(1), s.gram);
      else if (k == SpaceKind::Sp2n) EXPECT_EQ(s.gram.transpose(), s.gram.scale(s.F->neg(1)));
      else EXPECT_EQ(s.gram.transpose(), s.gram);
    }
}

TEST(Classical, WittIndex) {
  // maximal totally isotropic subspaces have dimension n (n-1 for the non-split form)
  for (SpaceKind k : kKinds)
    for (int n = min_n(k); n <= 2; ++n) {
      const auto s = standard_space(k, n, 3);
      const int witt = k == SpaceKind::SOminus2n ? n - 1 : n;
      EXPECT_FALSE(oracle::isotropic_subspaces(s.gram, s.hermitian(), witt, nullptr).empty()) << kind_name(k) << n;
      EXPECT_TRUE(oracle::isotropic_subspaces(s.gram, s.hermitian(), witt + 1, nullptr).empty()) << kind_name(k) << n;
    }
}

TEST(Classical, IsometryChecks) {
  const auto sp = standard_space(SpaceKind::Sp2n, 2, 3);
  EXPECT_TRUE(is_isometry(Mat::identity(*sp.F, 4), sp));
  EXPECT_TRUE(is_isometry(Mat::identity(*sp.F, 4).scale(sp.F->neg(1)), sp));
  EXPECT_FALSE(is_isometry(Mat::from_ints(*sp.F, {{1, 1, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}), sp));
  // swapping e_1, f_1 preserves the split form but has determinant -1
  const auto so = standard_space(SpaceKind::SO2n1, 1, 3);
  const Mat swap = Mat::from_ints(*so.F, {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}});
  EXPECT_EQ(so.form(swap, swap), so.gram);
  EXPECT_FALSE(is_isometry(swap, so));
  EXPECT_TRUE(is_isometry(swap.scale(so.F->neg(1)), so));
}

TEST(Classical, RandomIsometriesAreDeterministic) {
  for (SpaceKind k : kKinds)
    for (std::uint64_t q : {3u, 5u})
      for (int n = min_n(k); n <= 3; ++n) {
        const auto s = standard_space(k, n, q);
        std::set<std::string> seen;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
          const Mat g = random_isometry(s, seed);
          EXPECT_TRUE(is_isometry(g, s));
          EXPECT_EQ(g, random_isometry(s, seed));
          seen.insert(g.format());
        }
        EXPECT_GT(seen.size(), 2u) << kind_name(k) << n << " " << q;
      }
}

TEST(Classical, UnitaryDrawsReachIrreducibleCubics) {
  const auto s = standard_space(SpaceKind::U2n1, 1, 3);
  bool hit = false;
  for (std::uint64_t seed = 0; seed < 2000 && !hit; ++seed) {
    const Poly f = char_poly(random_isometry(s, seed));
    const auto fac = factor(f);
    hit = fac.size() == 1 && fac[0].second == 1 && is_self_reciprocal(f, true);
  }
  EXPECT_TRUE(hit);
}

TEST(Classical, RegularityMatchesEigenspaceOracle) {
  int regular = 0, irregular = 0;
  for (SpaceKind k : kKinds)
    for (int n = min_n(k); n <= 2; ++n) {
      const auto s = standard_space(k, n, 3);
      for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const Mat g = random_isometry(s, seed);
        const bool r = is_gl_regular(g);
        EXPECT_EQ(r, oracle::regular_by_eigenspaces(g)) << kind_name(k) << n << " seed " << seed;
        (r ? regular : irregular)++;
      }
      const Mat id = Mat::identity(*s.F, s.dim);
      EXPECT_EQ(is_gl_regular(id), s.dim <= 1);
    }
  EXPECT_GT(regular, 0);
  EXPECT_GT(irregular, 0);
}

TEST(Classical, CharPolySelfReciprocal) {
  for (SpaceKind k : kKinds) {
    const auto s = standard_space(k, 2, 3);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const Poly f = char_poly(random_isometry(s, seed));
      EXPECT_TRUE(is_self_reciprocal(f, s.hermitian())) << kind_name(k) << " " << f.pretty();
    }
  }
}

TEST(Classical, FlagsMatchSubspaceScan) {
  for (SpaceKind k : kKinds)
    for (int n = min_n(k); n <= 3; ++n) {
      const auto s = standard_space(k, n, 3);
      if (s.dim > (s.hermitian() ? 5 : 7)) continue;
      std::uint64_t seed = 100;
      for (int trial = 0; trial < 3; ++trial) {
        const Mat g = regular_isometry(s, seed);
        for (int i = 1; i <= s.i_max(); ++i) {
          const auto w = invariant_flags(s, g, i);
          const auto scan = oracle::isotropic_subspaces(s.gram, s.hermitian(), i - 1, &g);
          ASSERT_EQ(w.size(), scan.size()) << kind_name(k) << " n=" << n << " i=" << i;
          std::set<std::string> a, b;
          for (const auto& x : w) a.insert(rref_key(x.basis));
          for (const auto& x : scan) b.insert(x.rows() == 0 ? std::string("0") : x.rref().format());
          EXPECT_EQ(a, b);
        }
      }
    }
}

TEST(Classical, DivisorsOfProducts) {
  const auto& F = FieldCtx::get(3, 1);
  const Poly a = Poly::from_ints(F, {1, 1});      // lambda + 1
  const Poly b = Poly::from_ints(F, {2, 1});      // lambda - 1 (= lambda + 2)
  const Poly c = Poly::from_ints(F, {1, 0, 1});   // lambda^2 + 1
  // (lambda-1)^3: U = lambda-1 only for d = 1
  EXPECT_EQ(uu_star_divisors(pow(b, 3), 1, false).size(), 1u);
  EXPECT_TRUE(uu_star_divisors(pow(b, 3), 2, false).empty());
  EXPECT_EQ(uu_star_divisors(c * a * a, 1, false).size(), 1u);
  EXPECT_EQ(uu_star_divisors(c, 0, false).size(), 1u);
  EXPECT_TRUE(uu_star_divisors(c, 1, false).empty());
}

TEST(Classical, LeviQuotient) {
  for (SpaceKind k : kKinds)
    for (int n = min_n(k); n <= 3; ++n) {
      const auto s = standard_space(k, n, 3);
      std::uint64_t seed = 7;
      for (int trial = 0; trial < 5; ++trial) {
        const Mat g = regular_isometry(s, seed);
        const Poly f = char_poly(g);
        for (int i = 1; i <= s.i_max(); ++i)
          for (const auto& w : invariant_flags(s, g, i)) {
            const auto lp = levi_projection(w, s, g);
            EXPECT_EQ(lp.sub, w.U);
            EXPECT_EQ(lp.quotient, f / (w.U * reciprocal(w.U, s.hermitian())));
            EXPECT_EQ(lp.quotient_action.rows(), s.dim - 2 * (i - 1));
            if (lp.quotient_action.rows() > 0) {
              EXPECT_TRUE(is_gl_regular(lp.quotient_action));
              // the induced action preserves the induced form
              const Mat& A = lp.quotient_action;
              const Mat At = A.transpose();
              const Mat lhs = At * lp.quotient_gram * (s.hermitian() ? A.frobenius(1) : A);
              EXPECT_EQ(lhs, lp.quotient_gram);
            }
          }
      }
    }
}

TEST(Classical, EigenvalueParity) {
  int checked = 0;
  for (SpaceKind k : {SpaceKind::SOminus2n, SpaceKind::SO2n1})
    for (int n = 1; n <= 3; ++n) {
      const auto s = standard_space(k, n, 3);
      for (std::uint64_t seed = 0; seed < 80; ++seed) {
        const Mat g = random_orthogonal(s, seed);
        if (!is_gl_regular(g)) continue;
        const auto r = eigen_parity_check(s, g);
        EXPECT_TRUE(r.ok) << kind_name(k) << " seed " << seed;
        if (is_isometry(g, s) && k == SpaceKind::SOminus2n) {
          EXPECT_EQ(r.mult_plus, 0);
          EXPECT_EQ(r.mult_minus, 0);
        }
        if (is_isometry(g, s) && k == SpaceKind::SO2n1) {
          EXPECT_EQ(r.mult_minus, 0);
          EXPECT_EQ(r.mult_plus % 2, 1);
        }
        ++checked;
      }
    }
  EXPECT_GT(checked, 50);
}

TEST(Classical, Preconditions) {
  const auto s = standard_space(SpaceKind::Sp2n, 1, 3);
  EXPECT_THROW(invariant_flags(s, Mat::identity(*s.F, 2), 1), PreconditionError);
  EXPECT_THROW(standard_space(SpaceKind::Sp2n, 0, 3), PreconditionError);
  EXPECT_THROW(standard_space(SpaceKind::Sp2n, 1, 4), PreconditionError);
  const Mat g = random_isometry(s, 3);
  EXPECT_THROW(invariant_flags(s, g, 5), PreconditionError);
}

TEST(Classical, CyclicScanMatchesOracle) {
  for (SpaceKind k : kKinds)
    for (int n = min_n(k); n <= 2; ++n) {
      const auto s = standard_space(k, n, 3);
      std::uint64_t seed = 50;
      const Mat g = regular_isometry(s, seed);
      for (int i = 1; i <= s.i_max(); ++i) {
        const auto scan = stable_isotropic_scan(s, g, i - 1);
        ASSERT_TRUE(scan.has_value());
        EXPECT_EQ(scan->size(), oracle::isotropic_subspaces(s.gram, s.hermitian(), i - 1, &g).size());
        EXPECT_EQ(scan->size(), invariant_flags(s, g, i).size());
      }
    }
  const auto big = standard_space(SpaceKind::U2n1, 3, 5);
  EXPECT_FALSE(stable_isotropic_scan(big, Mat::identity(*big.F, big.dim), 1).has_value());
}
