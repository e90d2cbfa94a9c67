#include <gtest/gtest.h>

#include "dltrace/classical.hpp"
#include "dltrace/reciprocal.hpp"
#include "dltrace/trace.hpp"

using namespace dltrace;

namespace {

const SpaceKind kKinds[] = {SpaceKind::SOminus2n, SpaceKind::SO2n1, SpaceKind::Sp2n, SpaceKind::U2n1};

// first regular isometry whose char poly is irreducible of full degree
Mat irreducible_draw(const ClassicalSpace& s) {
  for (std::uint64_t seed = 0; seed < 20000; ++seed) {
    const Mat g = random_isometry(s, seed);
    if (is_irreducible(char_poly(g))) return g;
  }
  throw std::runtime_error("no irreducible draw");
}

}  // namespace

TEST(Trace, RegularUnipotentSp2) {
  const auto s = standard_space(SpaceKind::Sp2n, 1, 3);
  const Mat g = Mat::from_ints(*s.F, {{1, 1}, {0, 1}});
  const auto r = trace_engine(s, g);
  EXPECT_EQ(r.total, 2);
  ASSERT_EQ(r.rows.size(), 2u);
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.count, 1);
    EXPECT_EQ(row.T, 1);
  }
  EXPECT_EQ(r.closed.value, 2);
  EXPECT_EQ(r.closed.clause, "all-even");
}

TEST(Trace, IrreducibleUnitaryCubic) {
  const auto s = standard_space(SpaceKind::U2n1, 1, 3);
  const auto r = trace_engine(s, irreducible_draw(s));
  EXPECT_EQ(r.total, 3);
  EXPECT_EQ(r.contributing_strata(), 1);
  EXPECT_EQ(r.rows[0].T, 3);
  EXPECT_EQ(r.rows[0].count, 1);
  EXPECT_TRUE(stratum_count_check(r));
}

TEST(Trace, IrreducibleEvenOrthogonalQuartic) {
  const auto s = standard_space(SpaceKind::SOminus2n, 2, 3);
  const auto r = trace_engine(s, irreducible_draw(s));
  EXPECT_EQ(r.total, 2);
  EXPECT_EQ(r.closed.value, 2);
}

TEST(Trace, ClosedFormExamples) {
  const auto& F3 = FieldCtx::get(3, 1);
  const Poly lm1 = Poly::linear(F3, 1);
  const Poly lp1 = Poly::linear(F3, 2);
  EXPECT_EQ(trace_closed_form(SpaceKind::Sp2n, pow(lm1, 2)).value, 2);
  EXPECT_EQ(trace_closed_form(SpaceKind::SO2n1, pow(lm1, 3)).value, 2);
  EXPECT_EQ(trace_closed_form(SpaceKind::SO2n1, pow(lm1, 3)).clause, "all-even");
  EXPECT_EQ(trace_closed_form(SpaceKind::Sp2n, pow(lm1, 2) * pow(lp1, 4)).value, 4);
  // so-even zero cases, each named
  const Poly c = Poly::from_ints(F3, {1, 0, 1});  // lambda^2 + 1, SR
  EXPECT_EQ(trace_closed_form(SpaceKind::SOminus2n, c * lp1 * lp1).clause, "eigenvalue-minus-one");
  EXPECT_EQ(trace_closed_form(SpaceKind::SOminus2n, c * lm1 * lm1).clause, "eigenvalue-one");
  EXPECT_EQ(trace_closed_form(SpaceKind::SOminus2n, c * c).clause, "no-odd-factor");
  EXPECT_EQ(trace_closed_form(SpaceKind::SOminus2n, c).value, 1);
  EXPECT_EQ(trace_closed_form(SpaceKind::SO2n1, c * lm1 * lp1 * lp1).clause, "eigenvalue-minus-one");
  EXPECT_EQ(trace_closed_form(SpaceKind::SO2n1, c * lm1).value, 2);
  EXPECT_EQ(trace_closed_form(SpaceKind::Sp2n, c * lm1 * lp1).clause, "several-odd-factors");

  // unitary: Q0^3 (Q Q*) with deg Q0 = 1
  const auto& F9 = FieldCtx::get(3, 2, 1);
  const Elem h = F9.pow(F9.primitive_element(), 2);  // norm one, order 4
  const Poly q0 = Poly::linear(F9, h);
  Elem a = F9.primitive_element();                   // norm of a is not one
  ASSERT_NE(F9.pow(a, 4), 1u);
  const Poly Q = Poly::linear(F9, a);
  const Poly Qs = Poly::linear(F9, F9.inv(F9.frobenius(a, 1)));
  const auto cf = trace_closed_form(SpaceKind::U2n1, pow(q0, 3) * Q * Qs);
  EXPECT_EQ(cf.value, 4);
  EXPECT_EQ(cf.script_m, 2);
  EXPECT_EQ(cf.m_q0, 3);
  EXPECT_EQ(trace_closed_form(SpaceKind::U2n1, Q * Qs * q0).value, 2);
  EXPECT_EQ(trace_closed_form(SpaceKind::U2n1, q0 * Poly::linear(F9, 1) * Poly::linear(F9, F9.neg(1))).clause,
            "several-odd-factors");
}

TEST(Trace, ClosedFormRejectsBadInput) {
  const auto& F3 = FieldCtx::get(3, 1);
  EXPECT_THROW(trace_closed_form(SpaceKind::Sp2n, Poly::linear(F3, 1)), PreconditionError);
  EXPECT_THROW(trace_closed_form(SpaceKind::SO2n1, pow(Poly::linear(F3, 1), 2)), PreconditionError);
  EXPECT_THROW(trace_closed_form(SpaceKind::U2n1, Poly::linear(F3, 1)), PreconditionError);
  EXPECT_THROW(trace_closed_form(SpaceKind::Sp2n, Poly::from_ints(F3, {2, 1, 1})), PreconditionError);
}

TEST(Trace, EngineMatchesClosedFormSmall) {
  for (SpaceKind k : kKinds)
    for (int n = k == SpaceKind::U2n1 ? 0 : 1; n <= 2; ++n) {
      const auto s = standard_space(k, n, 3);
      int runs = 0, zeros = 0;
      for (std::uint64_t seed = 0; runs < 40; ++seed) {
        const Mat g = random_isometry(s, seed);
        if (!is_gl_regular(g)) continue;
        ++runs;
        const auto r = trace_engine(s, g);
        long long sum = 0;
        for (const auto& row : r.rows) sum += row.product;
        EXPECT_EQ(sum, r.total);
        EXPECT_EQ(r.total, r.closed.value) << kind_name(k) << " n=" << n << " f=" << r.f.pretty();
        EXPECT_TRUE(stratum_count_check(r)) << r.f.pretty();
        if (r.closed.value == 0) {
          ++zeros;
          EXPECT_EQ(r.contributing_strata(), 0);
        }
      }
      (void)zeros;
    }
}

TEST(Trace, EngineRejectsIrregular) {
  const auto s = standard_space(SpaceKind::Sp2n, 2, 3);
  EXPECT_THROW(trace_engine(s, Mat::identity(*s.F, 4)), PreconditionError);
  EXPECT_THROW(trace_engine(s, Mat::from_ints(*s.F, {{1, 1, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}})),
               PreconditionError);
}

TEST(Trace, ReportJson) {
  const auto s = standard_space(SpaceKind::Sp2n, 1, 3);
  const auto j = report_json(trace_engine(s, Mat::from_ints(*s.F, {{1, 1}, {0, 1}})));
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["family"], "sp");
  EXPECT_EQ(j["total"], 2);
  EXPECT_EQ(j["closed_form"]["value"], 2);
  EXPECT_EQ(j["stratum_contributions"].size(), 2u);
  EXPECT_EQ(j["agree"], true);
}
