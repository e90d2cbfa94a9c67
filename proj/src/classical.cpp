#include "dltrace/classical.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "dltrace/reciprocal.hpp"
#include "dltrace/rng.hpp"
#include "dltrace/torus.hpp"

namespace dltrace {

Family family_of(SpaceKind k) {
  switch (k) {
    case SpaceKind::SOminus2n: return Family::EvenSO;
    case SpaceKind::SO2n1: return Family::OddSO;
    case SpaceKind::Sp2n: return Family::Sp;
    case SpaceKind::U2n1: return Family::U;
  }
  return Family::Sp;
}

SpaceKind kind_of(Family f) {
  switch (f) {
    case Family::EvenSO: return SpaceKind::SOminus2n;
    case Family::OddSO: return SpaceKind::SO2n1;
    case Family::Sp: return SpaceKind::Sp2n;
    case Family::U: return SpaceKind::U2n1;
  }
  return SpaceKind::Sp2n;
}

std::string kind_name(SpaceKind k) {
  switch (k) {
    case SpaceKind::SOminus2n: return "SO-(2n)";
    case SpaceKind::SO2n1: return "SO(2n+1)";
    case SpaceKind::Sp2n: return "Sp(2n)";
    case SpaceKind::U2n1: return "U(2n+1)";
  }
  return "?";
}

int ClassicalSpace::i_max() const { return family_i_max(family_of(kind), n); }

Mat ClassicalSpace::form(const Mat& X, const Mat& Y) const {
  return X.transpose() * gram * (hermitian() ? Y.frobenius(1) : Y);
}

ClassicalSpace standard_space(SpaceKind kind, int n, std::uint64_t q) {
  const bool u = kind == SpaceKind::U2n1;
  if (n < (u ? 0 : 1)) throw PreconditionError("rank parameter n out of range for " + kind_name(kind));
  const FieldCtx& F = torus_base_field(family_of(kind), q);
  const int N = (kind == SpaceKind::SO2n1 || u) ? 2 * n + 1 : 2 * n;
  Mat G(F, N, N);
  switch (kind) {
    case SpaceKind::Sp2n:
      for (int i = 0; i < N; ++i) G.at(i, N - 1 - i) = i < n ? 1 : F.neg(1);
      break;
    case SpaceKind::SO2n1:
    case SpaceKind::U2n1:
      for (int i = 0; i < N; ++i) G.at(i, N - 1 - i) = 1;
      break;
    case SpaceKind::SOminus2n: {
      Elem delta = 2;
      while (F.is_square(delta)) ++delta;
      for (int i = 0; i + 1 < n; ++i) {
        G.at(i, N - 1 - i) = 1;
        G.at(N - 1 - i, i) = 1;
      }
      G.at(n - 1, n - 1) = 1;
      G.at(n, n) = F.neg(delta);
      break;
    }
  }
  return ClassicalSpace{kind, n, q, &F, G, N};
}

bool is_isometry(const Mat& g, const ClassicalSpace& s) {
  if (&g.field() != s.F || g.rows() != s.dim || g.cols() != s.dim) return false;
  if (s.form(g, g) != s.gram) return false;
  if (s.orthogonal() && g.det() != 1) return false;
  return true;
}

namespace {

std::vector<Elem> random_vector(const FieldCtx& F, int n, Rng& rng) {
  std::vector<Elem> v(n);
  for (auto& x : v) x = rng.below(F.order());
  return v;
}

// x -> x - c [x, v] v
Mat rank_one_update(const ClassicalSpace& s, const Mat& v, Elem c) {
  const FieldCtx& F = *s.F;
  const Mat w = s.gram * (s.hermitian() ? v.frobenius(1) : v);
  return Mat::identity(F, s.dim) - (v * w.transpose()).scale(c);
}

Elem form_value(const ClassicalSpace& s, const Mat& v) { return s.form(v, v)(0, 0); }

Mat random_reflection(const ClassicalSpace& s, Rng& rng) {
  const FieldCtx& F = *s.F;
  while (true) {
    const Mat v = Mat::column(F, random_vector(F, s.dim, rng));
    const Elem nv = form_value(s, v);
    if (nv != 0) return rank_one_update(s, v, F.div(2, nv));
  }
}

Mat random_transvection(const ClassicalSpace& s, Rng& rng) {
  const FieldCtx& F = *s.F;
  while (true) {
    const Mat v = Mat::column(F, random_vector(F, s.dim, rng));
    if (v.is_zero()) continue;
    const Elem a = 1 + rng.below(F.order() - 1);
    return rank_one_update(s, v, F.neg(a));
  }
}

Mat random_quasi_reflection(const ClassicalSpace& s, Rng& rng) {
  const FieldCtx& F = *s.F;
  // norm-one alpha: alpha^{q+1} = 1
  const Elem h = F.pow(F.primitive_element(), s.q - 1);
  const Elem alpha = F.pow(h, rng.below(s.q + 1));
  while (true) {
    const Mat v = Mat::column(F, random_vector(F, s.dim, rng));
    const Elem nv = form_value(s, v);
    if (nv != 0) return rank_one_update(s, v, F.div(F.sub(1, alpha), nv));
  }
}

Mat random_product(const ClassicalSpace& s, std::uint64_t seed, bool any_det) {
  Rng rng(mix64(mix64(seed, static_cast<std::uint64_t>(s.kind)), s.n * 1000003ULL + s.q));
  const FieldCtx& F = *s.F;
  Mat g = Mat::identity(F, s.dim);
  int k = 2 * s.dim + 2;
  if (any_det) k += rng.coin() ? 1 : 0;
  for (int j = 0; j < k; ++j) {
    switch (s.kind) {
      case SpaceKind::Sp2n: g = g * random_transvection(s, rng); break;
      case SpaceKind::SO2n1:
      case SpaceKind::SOminus2n: g = g * random_reflection(s, rng); break;
      case SpaceKind::U2n1: g = g * random_quasi_reflection(s, rng); break;
    }
  }
  return g;
}

}  // namespace

Mat random_isometry(const ClassicalSpace& s, std::uint64_t seed) {
  Mat g = random_product(s, seed, false);
  if (!is_isometry(g, s)) throw Error("random isometry generator produced a non-isometry");
  return g;
}

Mat random_orthogonal(const ClassicalSpace& s, std::uint64_t seed) {
  if (!s.orthogonal()) throw PreconditionError("random_orthogonal needs an orthogonal space");
  Mat g = random_product(s, seed, true);
  if (s.form(g, g) != s.gram) throw Error("random orthogonal generator produced a non-isometry");
  return g;
}

bool is_gl_regular(const Mat& g) { return min_poly(g) == char_poly(g); }

Poly isometry_char_poly(const Mat& g, const ClassicalSpace& s) {
  Poly f = char_poly(g);
  if (!is_self_reciprocal(f, s.hermitian()))
    throw Error("characteristic polynomial of an isometry is not self-reciprocal");
  return f;
}

std::vector<Poly> uu_star_divisors(const Poly& f, int d, bool conjugate) {
  const FieldCtx& F = f.field();
  if (f[0] == 0) throw PreconditionError("polynomial with zero constant term");
  const auto fac = factor(f);
  std::vector<Poly> out;
  std::vector<int> a(fac.size(), 0);
  // odometer over exponent vectors
  std::function<void(std::size_t, int, const Poly&)> rec = [&](std::size_t k, int deg, const Poly& U) {
    if (deg > d) return;
    if (k == fac.size()) {
      if (deg == d && divides(U * reciprocal(U, conjugate), f)) out.push_back(U);
      return;
    }
    Poly cur = U;
    for (int e = 0; e <= fac[k].second; ++e) {
      rec(k + 1, deg + e * fac[k].first.degree(), cur);
      cur = cur * fac[k].first;
    }
  };
  rec(0, 0, Poly::constant(F, 1));
  std::sort(out.begin(), out.end(), PolyLess{});
  return out;
}

std::vector<FlagWitness> invariant_flags(const ClassicalSpace& s, const Mat& g, int i) {
  if (i < 1 || i > s.i_max()) throw PreconditionError("stratum index out of range");
  if (!is_isometry(g, s)) throw PreconditionError("element is not an isometry of the space");
  if (!is_gl_regular(g)) throw PreconditionError("element is not regular in GL(V)");
  const Poly f = isometry_char_poly(g, s);
  std::vector<FlagWitness> out;
  for (const auto& U : uu_star_divisors(f, i - 1, s.hermitian())) {
    Mat K = U.degree() == 0 ? Mat(*s.F, s.dim, 0) : eval_poly(U, g).nullspace();
    if (K.cols() != U.degree()) throw Error("kernel dimension differs from divisor degree");
    if (K.cols() > 0) {
      if (!s.form(K, K).is_zero()) throw Error("flag witness is not totally isotropic");
      if (!col_span_contains(K, g * K)) throw Error("flag witness is not g-stable");
    }
    out.push_back(FlagWitness{i, U, K});
  }
  return out;
}

Mat canonical_span(const Mat& B) {
  if (B.cols() == 0) return B;
  const Mat R = B.transpose().rref();
  const int r = B.rank();
  std::vector<int> rows(r), cols(B.rows());
  for (int i = 0; i < r; ++i) rows[i] = i;
  for (int j = 0; j < B.rows(); ++j) cols[j] = j;
  return R.submatrix(rows, cols).transpose();
}

std::optional<std::vector<Mat>> stable_isotropic_scan(const ClassicalSpace& s, const Mat& g, int k,
                                                      std::uint64_t cap) {
  const FieldCtx& F = *s.F;
  std::uint64_t total = 1;
  for (int i = 0; i < s.dim; ++i) {
    if (total > cap / F.order()) return std::nullopt;
    total *= F.order();
  }
  std::map<std::string, Mat> found;
  std::vector<Elem> v(s.dim, 0);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t t = idx;
    for (int i = 0; i < s.dim; ++i, t /= F.order()) v[i] = t % F.order();
    // cyclic span of v
    Mat Z = Mat::column(F, v);
    if (Z.is_zero()) {
      if (k == 0) found.emplace("0", Mat(F, s.dim, 0));
      continue;
    }
    Mat x = Z;
    int r = 1;
    while (r <= k) {
      x = g * x;
      Mat cand = Z.hcat(x);
      if (cand.rank() == r) break;
      Z = cand;
      ++r;
    }
    if (r != k) continue;
    if (!s.form(Z, Z).is_zero()) continue;
    const Mat C = canonical_span(Z);
    found.emplace(C.format(), C);
  }
  std::vector<Mat> out;
  for (auto& [key, m] : found) out.push_back(m);
  return out;
}

Mat solve_in_span(const Mat& B, const Mat& V) {
  const int k = B.cols();
  if (k == 0) {
    if (!V.is_zero()) throw PreconditionError("vector not in the span");
    return Mat(V.field(), 0, V.cols());
  }
  std::vector<int> piv;
  const Mat R = B.hcat(V).rref(&piv);
  if (static_cast<int>(piv.size()) != k) throw PreconditionError("basis is rank deficient or vector not in span");
  for (int j = 0; j < k; ++j)
    if (piv[j] != j) throw PreconditionError("basis is rank deficient");
  Mat X(V.field(), k, V.cols());
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < V.cols(); ++c) X.at(r, c) = R(r, k + c);
  return X;
}

LeviProjection levi_projection(const FlagWitness& w, const ClassicalSpace& s, const Mat& g) {
  const FieldCtx& F = *s.F;
  const Mat& B = w.basis;
  const int k = B.cols();
  LeviProjection out{Poly::constant(F, 1), Poly::constant(F, 1), Mat(F, 0, 0), Mat(F, 0, 0)};
  if (k > 0) out.sub = char_poly(solve_in_span(B, g * B));
  Mat P = k == 0 ? Mat::identity(F, s.dim)
                 : (s.gram * (s.hermitian() ? B.frobenius(1) : B)).transpose().nullspace();
  // complete B to a basis of W^perp
  Mat basis = B;
  std::vector<int> extra;
  int r = k;
  for (int j = 0; j < P.cols(); ++j) {
    Mat cand = basis.cols() == 0 ? P.col(j) : basis.hcat(P.col(j));
    if (cand.rank() > r) {
      basis = cand;
      ++r;
      extra.push_back(j);
    }
  }
  const int m = static_cast<int>(extra.size());
  if (m != s.dim - 2 * k) throw Error("perp of the witness has the wrong dimension");
  if (m == 0) return out;
  Mat Q(F, s.dim, m);
  for (int j = 0; j < m; ++j)
    for (int row = 0; row < s.dim; ++row) Q.at(row, j) = P(row, extra[j]);
  const Mat X = solve_in_span(basis, g * Q);
  Mat A(F, m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) A.at(a, b) = X(k + a, b);
  out.quotient_action = A;
  out.quotient_gram = s.form(Q, Q);
  if (out.quotient_gram.det() == 0) throw Error("degenerate induced form on the quotient");
  out.quotient = char_poly(A);
  return out;
}

ParityReport eigen_parity_check(const ClassicalSpace& s, const Mat& g) {
  if (!s.orthogonal()) throw PreconditionError("eigenvalue parity applies to orthogonal spaces");
  if (!is_gl_regular(g)) throw PreconditionError("element is not regular in GL(V)");
  const Poly f = char_poly(g);
  const FieldCtx& F = *s.F;
  ParityReport r;
  r.mult_plus = multiplicity(Poly::linear(F, 1), f);
  r.mult_minus = multiplicity(Poly::linear(F, F.neg(1)), f);
  r.ok = (r.mult_plus == 0 || r.mult_plus % 2 == 1) && (r.mult_minus == 0 || r.mult_minus % 2 == 1);
  return r;
}

}  // namespace dltrace
