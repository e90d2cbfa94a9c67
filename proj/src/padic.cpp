#include "dltrace/padic.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

#include "dltrace/classical.hpp"
#include "dltrace/reciprocal.hpp"
#include "dltrace/rng.hpp"
#include "dltrace/trace.hpp"

namespace dltrace {

// ---------------------------------------------------------------- context

int PadicCtx::default_precision() {
  if (const char* s = std::getenv("DLTRACE_PRECISION")) {
    char* end = nullptr;
    const long v = std::strtol(s, &end, 10);
    if (end != s && *end == '\0' && v >= 2 && v <= 4096) return static_cast<int>(v);
    throw PreconditionError("DLTRACE_PRECISION must be an integer in [2, 4096]");
  }
  return 32;
}

PadicCtx PadicCtx::make(std::uint64_t p, int e, int N) {
  if (e != 1 && e != 2) throw PreconditionError("p-adic rings of degree 1 or 2 only");
  PadicCtx c;
  c.p = p;
  c.e = e;
  c.N = N > 0 ? N : default_precision();
  const FieldCtx& Fp = FieldCtx::get(p, 1);  // validates p
  std::uint64_t d = 2;
  while (Fp.is_square(d)) ++d;
  c.delta = d;
  c.residue = &FieldCtx::get(p, e, 1);
  if (e == 2) {
    const Poly x2 = Poly::from_ints(*c.residue, {-static_cast<long long>(d), 0, 1});
    c.sqrt_delta = roots_in(x2, *c.residue).front();
  }
  return c;
}

mpz_class PadicCtx::ppow(int k) const {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), p, static_cast<unsigned long>(std::max(k, 0)));
  return r;
}

// ---------------------------------------------------------------- elements

namespace {

void reduce(const PadicCtx& c, Padic& x) {
  if (x.prec > c.N) x.prec = c.N;
  if (x.prec <= 0) throw PrecisionError("p-adic precision exhausted");
  const mpz_class m = c.ppow(x.prec);
  mpz_fdiv_r(x.a.get_mpz_t(), x.a.get_mpz_t(), m.get_mpz_t());
  mpz_fdiv_r(x.b.get_mpz_t(), x.b.get_mpz_t(), m.get_mpz_t());
}

int vp(const PadicCtx& c, const mpz_class& v, int cap) {
  if (v == 0) return cap;
  mpz_class t = v;
  int k = 0;
  while (k < cap && mpz_divisible_ui_p(t.get_mpz_t(), c.p)) {
    mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), c.p);
    ++k;
  }
  return k;
}

Padic make(const PadicCtx& c, mpz_class a, mpz_class b, int prec) {
  Padic x{std::move(a), std::move(b), prec};
  reduce(c, x);
  return x;
}

}  // namespace

Padic padic_int(const PadicCtx& c, long v) { return make(c, v, 0, c.N); }

Padic padic_add(const PadicCtx& c, const Padic& x, const Padic& y) {
  return make(c, x.a + y.a, x.b + y.b, std::min(x.prec, y.prec));
}

Padic padic_sub(const PadicCtx& c, const Padic& x, const Padic& y) {
  return make(c, x.a - y.a, x.b - y.b, std::min(x.prec, y.prec));
}

Padic padic_neg(const PadicCtx& c, const Padic& x) { return make(c, -x.a, -x.b, x.prec); }

Padic padic_mul(const PadicCtx& c, const Padic& x, const Padic& y) {
  // both operands integral: the product is known to the smaller precision
  mpz_class a = x.a * y.a;
  if (c.e == 2) a += c.delta * (x.b * y.b);
  mpz_class b = c.e == 2 ? mpz_class(x.a * y.b + x.b * y.a) : mpz_class(0);
  return make(c, std::move(a), std::move(b), std::min(x.prec, y.prec));
}

Padic padic_conj(const PadicCtx& c, const Padic& x) { return make(c, x.a, -x.b, x.prec); }

int padic_val(const PadicCtx& c, const Padic& x) {
  return std::min(vp(c, x.a, x.prec), vp(c, x.b, x.prec));
}

bool padic_is_zero(const PadicCtx& c, const Padic& x) { return padic_val(c, x) >= x.prec; }

Padic padic_unit_inv(const PadicCtx& c, const Padic& x) {
  const mpz_class m = c.ppow(x.prec);
  mpz_class nrm = x.a * x.a - c.delta * (x.b * x.b);
  mpz_fdiv_r(nrm.get_mpz_t(), nrm.get_mpz_t(), m.get_mpz_t());
  mpz_class ni;
  if (mpz_invert(ni.get_mpz_t(), nrm.get_mpz_t(), m.get_mpz_t()) == 0)
    throw PreconditionError("inverting a non-unit p-adic element");
  return make(c, x.a * ni, -x.b * ni, x.prec);
}

Padic padic_shift_down(const PadicCtx& c, const Padic& x, int k) {
  if (k == 0) return x;
  if (padic_val(c, x) < k) throw Error("p-adic element not divisible by p^" + std::to_string(k));
  if (x.prec - k <= 0) throw PrecisionError("p-adic precision exhausted while dividing by p");
  const mpz_class m = c.ppow(k);
  mpz_class a, b;
  mpz_divexact(a.get_mpz_t(), x.a.get_mpz_t(), m.get_mpz_t());
  mpz_divexact(b.get_mpz_t(), x.b.get_mpz_t(), m.get_mpz_t());
  return make(c, a, b, x.prec - k);
}

Elem padic_residue(const PadicCtx& c, const Padic& x) {
  if (x.prec < 1) throw PrecisionError("no residue digit known");
  const FieldCtx& F = *c.residue;
  const auto a = static_cast<std::int64_t>(mpz_fdiv_ui(x.a.get_mpz_t(), c.p));
  if (c.e == 1) return F.from_int(a);
  const auto b = static_cast<std::int64_t>(mpz_fdiv_ui(x.b.get_mpz_t(), c.p));
  return F.add(F.from_int(a), F.mul(F.from_int(b), c.sqrt_delta));
}

Padic padic_lift(const PadicCtx& c, Elem r) {
  const FieldCtx& F = *c.residue;
  if (c.e == 1) return make(c, static_cast<unsigned long>(r), 0, c.N);
  const auto rd = F.digits(r);
  const auto sd = F.digits(c.sqrt_delta);
  const Elem b = F.div(rd[1], sd[1]);
  const Elem a = F.sub(rd[0], F.mul(b, sd[0]));
  return make(c, static_cast<unsigned long>(a), static_cast<unsigned long>(b), c.N);
}

namespace {

int digit_value(char ch) {
  if (ch >= '0' && ch <= '9') return ch - '0';
  if (ch >= 'a' && ch <= 'z') return ch - 'a' + 10;
  return -1;
}

char digit_char(unsigned long d) { return static_cast<char>(d < 10 ? '0' + d : 'a' + (d - 10)); }

}  // namespace

Padic parse_padic(const PadicCtx& c, std::string_view s, std::size_t offset) {
  const auto at = s.find('@');
  if (at == std::string_view::npos) throw ParseError("p-adic element needs a precision marker '@N'", offset + s.size());
  int prec = 0;
  const std::string_view ps = s.substr(at + 1);
  if (ps.empty()) throw ParseError("missing precision after '@'", offset + at + 1);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(ps[i]))) throw ParseError("bad precision", offset + at + 1 + i);
    prec = prec * 10 + (ps[i] - '0');
    if (prec > 100000) throw ParseError("precision too large", offset + at + 1);
  }
  if (prec < 1) throw ParseError("precision must be positive", offset + at + 1);
  mpz_class a = 0, b = 0, pk = 1;
  std::size_t pos = 0;
  int k = 0;
  const std::string_view body = s.substr(0, at);
  while (true) {
    const auto comma = body.find(',', pos);
    const std::string_view tok = body.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    if (static_cast<int>(tok.size()) != c.e)
      throw ParseError("each p-adic digit has " + std::to_string(c.e) + " base-p characters", offset + pos);
    for (int j = 0; j < c.e; ++j) {
      const int d = digit_value(tok[j]);
      if (d < 0 || static_cast<std::uint64_t>(d) >= c.p) throw ParseError("digit out of range", offset + pos + j);
      (j == 0 ? a : b) += pk * d;
    }
    ++k;
    pk *= static_cast<unsigned long>(c.p);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (k > prec) throw ParseError("more digits than the stated precision", offset);
  return make(c, a, b, std::min(prec, c.N));
}

std::string format_padic(const PadicCtx& c, const Padic& x) {
  std::vector<std::string> digits;
  mpz_class a = x.a, b = x.b;
  for (int k = 0; k < x.prec; ++k) {
    std::string d(1, digit_char(mpz_fdiv_q_ui(a.get_mpz_t(), a.get_mpz_t(), c.p)));
    if (c.e == 2) d += digit_char(mpz_fdiv_q_ui(b.get_mpz_t(), b.get_mpz_t(), c.p));
    digits.push_back(d);
  }
  while (digits.size() > 1 && digits.back().find_first_not_of('0') == std::string::npos) digits.pop_back();
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) out += (i ? "," : "") + digits[i];
  return out + "@" + std::to_string(x.prec);
}

// ---------------------------------------------------------------- matrices

PMat pmat_zero(const PadicCtx& c, int r, int k) {
  return PMat{r, k, std::vector<Padic>(static_cast<std::size_t>(r) * k, padic_int(c, 0))};
}

PMat pmat_identity(const PadicCtx& c, int n) {
  PMat m = pmat_zero(c, n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = padic_int(c, 1);
  return m;
}

PMat pmat_mul(const PadicCtx& c, const PMat& A, const PMat& B) {
  if (A.cols != B.rows) throw PreconditionError("p-adic matrix shapes do not match");
  PMat m = pmat_zero(c, A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < B.cols; ++j) {
      Padic s = padic_int(c, 0);
      for (int k = 0; k < A.cols; ++k) s = padic_add(c, s, padic_mul(c, A(i, k), B(k, j)));
      m.at(i, j) = s;
    }
  return m;
}

PMat pmat_sub(const PadicCtx& c, const PMat& A, const PMat& B) {
  if (A.rows != B.rows || A.cols != B.cols) throw PreconditionError("p-adic matrix shapes do not match");
  PMat m = A;
  for (std::size_t i = 0; i < m.v.size(); ++i) m.v[i] = padic_sub(c, A.v[i], B.v[i]);
  return m;
}

PMat pmat_transpose(const PMat& A) {
  PMat m{A.cols, A.rows, A.v};
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) m.at(j, i) = A(i, j);
  return m;
}

PMat pmat_conj(const PadicCtx& c, const PMat& A) {
  PMat m = A;
  for (auto& x : m.v) x = padic_conj(c, x);
  return m;
}

bool pmat_is_zero(const PadicCtx& c, const PMat& A) {
  return std::all_of(A.v.begin(), A.v.end(), [&](const Padic& x) { return padic_is_zero(c, x); });
}

Mat pmat_residue(const PadicCtx& c, const PMat& A) {
  Mat m(*c.residue, A.rows, A.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) m.at(i, j) = padic_residue(c, A(i, j));
  return m;
}

PMat parse_pmat(const PadicCtx& c, std::string_view text) {
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size()) {
      if (std::isspace(static_cast<unsigned char>(text[i]))) ++i;
      else if (text[i] == '#')
        while (i < text.size() && text[i] != '\n') ++i;
      else break;
    }
  };
  auto token = [&](const char* what) {
    skip();
    const std::size_t s = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (s == i) throw ParseError(std::string("expected ") + what, s);
    return std::make_pair(text.substr(s, i - s), s);
  };
  const auto [hdr, hpos] = token("header p^e");
  const std::string want = std::to_string(c.p) + "^" + std::to_string(c.e);
  if (hdr != want) throw ParseError("p-adic matrix header must be " + want, hpos);
  auto dim = [&](const char* what) {
    const auto [t, pos] = token(what);
    int v = 0;
    for (char ch : t) {
      if (!std::isdigit(static_cast<unsigned char>(ch))) throw ParseError(std::string("bad ") + what, pos);
      v = v * 10 + (ch - '0');
      if (v > 64) throw ParseError(std::string(what) + " too large", pos);
    }
    return v;
  };
  const int r = dim("row count");
  const int k = dim("column count");
  PMat m = pmat_zero(c, r, k);
  for (auto& x : m.v) {
    const auto [t, pos] = token("p-adic entry");
    x = parse_padic(c, t, pos);
  }
  skip();
  if (i != text.size()) throw ParseError("trailing input after matrix", i);
  return m;
}

std::string format_pmat(const PadicCtx& c, const PMat& A) {
  std::string out = std::to_string(c.p) + "^" + std::to_string(c.e) + " " + std::to_string(A.rows) + " " +
                    std::to_string(A.cols) + "\n";
  for (int i = 0; i < A.rows; ++i) {
    for (int j = 0; j < A.cols; ++j) out += (j ? " " : "") + format_padic(c, A(i, j));
    out += "\n";
  }
  return out;
}

std::vector<Padic> pmat_charpoly(const PadicCtx& c, const PMat& A) {
  // Berkowitz: fold in one leading principal block at a time
  const int n = A.rows;
  if (A.cols != n) throw PreconditionError("characteristic polynomial of a non-square matrix");
  std::vector<Padic> p{padic_int(c, 1)};  // high to low
  for (int k = 1; k <= n; ++k) {
    const int m = k - 1;
    std::vector<Padic> q{padic_int(c, 1), padic_neg(c, A(m, m))};
    // powers M^j c for the leading m x m block M and column c = A[0..m, m]
    std::vector<Padic> vec(m);
    for (int i = 0; i < m; ++i) vec[i] = A(i, m);
    for (int j = 2; j <= k; ++j) {
      Padic s = padic_int(c, 0);
      for (int i = 0; i < m; ++i) s = padic_add(c, s, padic_mul(c, A(m, i), vec[i]));
      q.push_back(padic_neg(c, s));
      std::vector<Padic> nv(m, padic_int(c, 0));
      for (int i = 0; i < m; ++i)
        for (int l = 0; l < m; ++l) nv[i] = padic_add(c, nv[i], padic_mul(c, A(i, l), vec[l]));
      vec = std::move(nv);
    }
    std::vector<Padic> np(k + 1, padic_int(c, 0));
    for (int i = 0; i <= k; ++i)
      for (int j = 0; j < k && j <= i; ++j) np[i] = padic_add(c, np[i], padic_mul(c, q[i - j], p[j]));
    p = std::move(np);
  }
  std::vector<Padic> low(n);
  for (int i = 0; i < n; ++i) low[i] = p[n - i];
  return low;
}

SmithForm smith_form(const PadicCtx& c, const PMat& A0) {
  PMat A = A0;
  const int n = std::min(A.rows, A.cols);
  SmithForm out{std::vector<int>(n, 0), pmat_identity(c, A.cols)};
  PMat& V = out.V;
  auto swap_cols = [](PMat& M, int a, int b) {
    for (int i = 0; i < M.rows; ++i) std::swap(M.at(i, a), M.at(i, b));
  };
  for (int t = 0; t < n; ++t) {
    int bi = -1, bj = -1, bv = 0;
    for (int i = t; i < A.rows; ++i)
      for (int j = t; j < A.cols; ++j) {
        if (padic_is_zero(c, A(i, j))) continue;
        const int v = padic_val(c, A(i, j));
        if (bi < 0 || v < bv) {
          bi = i;
          bj = j;
          bv = v;
        }
      }
    if (bi < 0) throw PrecisionError("matrix is singular to the carried precision");
    for (int j = 0; j < A.cols; ++j) std::swap(A.at(t, j), A.at(bi, j));
    swap_cols(A, t, bj);
    swap_cols(V, t, bj);
    const Padic uinv = padic_unit_inv(c, padic_shift_down(c, A(t, t), bv));
    for (int i = t + 1; i < A.rows; ++i) {
      if (padic_is_zero(c, A(i, t))) continue;
      const Padic f = padic_mul(c, padic_shift_down(c, A(i, t), bv), uinv);
      for (int j = t; j < A.cols; ++j) A.at(i, j) = padic_sub(c, A(i, j), padic_mul(c, f, A(t, j)));
    }
    for (int j = t + 1; j < A.cols; ++j) {
      if (padic_is_zero(c, A(t, j))) continue;
      const Padic f = padic_mul(c, padic_shift_down(c, A(t, j), bv), uinv);
      for (int i = 0; i < A.rows; ++i) A.at(i, j) = padic_sub(c, A(i, j), padic_mul(c, f, A(i, t)));
      for (int i = 0; i < V.rows; ++i) V.at(i, j) = padic_sub(c, V(i, j), padic_mul(c, f, V(i, t)));
    }
    out.val[t] = bv;
  }
  return out;
}

std::vector<int> smith_invariants(const PadicCtx& c, const PMat& A) {
  auto v = smith_form(c, A).val;
  std::sort(v.rbegin(), v.rend());
  return v;
}

// ---------------------------------------------------------------- lattices

LatticeData lattice_of_g(const PadicCtx& c, const PMat& g, const PMat& u, const PMat& H) {
  if (c.e != 2) throw PreconditionError("Hermitian lattices live over the quadratic extension");
  const int n = g.rows;
  if (n < 1 || g.cols != n || u.rows != n || u.cols != 1 || H.rows != n || H.cols != n)
    throw PreconditionError("lattice input shapes must be n x n, n x 1, n x n");
  LatticeData d;
  d.basis = pmat_zero(c, n, n);
  PMat x = u;
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) d.basis.at(i, k) = x(i, 0);
    x = pmat_mul(c, g, x);
  }
  try {
    smith_form(c, d.basis);
  } catch (const PrecisionError&) {
    throw PreconditionError("u, gu, ..., g^{n-1}u are dependent to precision " + std::to_string(c.N) +
                            ": g is not regular semisimple or u is not cyclic");
  }
  d.unitary = pmat_is_zero(c, pmat_sub(c, pmat_mul(c, pmat_mul(c, pmat_transpose(g), H), pmat_conj(c, g)), H));
  d.gram = pmat_mul(c, pmat_mul(c, pmat_transpose(d.basis), H), pmat_conj(c, d.basis));
  const SmithForm sf = smith_form(c, d.gram);
  d.dual = pmat_conj(c, sf.V);
  d.r_by_column = sf.val;
  d.inv = sf.val;
  std::sort(d.inv.rbegin(), d.inv.rend());
  d.minuscule = d.inv.front() == 1 && d.inv.back() >= 0;
  d.charpoly = pmat_charpoly(c, g);
  return d;
}

std::pair<std::vector<int>, bool> invariant_and_minuscule(const LatticeData& d) { return {d.inv, d.minuscule}; }

ResidueSpace residue_space(const PadicCtx& c, const LatticeData& d) {
  if (!d.minuscule) throw PreconditionError("residue space needs a minuscule lattice");
  if (!d.unitary) throw PreconditionError("g does not preserve the Hermitian form, so L(g)^vee need not be g-stable");
  const int n = d.basis.rows;
  const FieldCtx& F = *c.residue;
  std::vector<int> cols;
  for (int j = 0; j < n; ++j)
    if (d.r_by_column[j] == 1) cols.push_back(j);
  ResidueSpace out{static_cast<int>(cols.size()), Mat(F, 0, 0), Mat(F, 0, 0), Poly::constant(F, 1)};
  PMat X = pmat_zero(c, n, out.dim);
  for (int a = 0; a < out.dim; ++a)
    for (int i = 0; i < n; ++i) X.at(i, a) = d.dual(i, cols[a]);
  const PMat G = pmat_mul(c, pmat_mul(c, pmat_transpose(X), d.gram), pmat_conj(c, X));
  out.gram = Mat(F, out.dim, out.dim);
  for (int a = 0; a < out.dim; ++a)
    for (int b = 0; b < out.dim; ++b) out.gram.at(a, b) = padic_residue(c, padic_shift_down(c, G(a, b), 1));
  if (out.dim > 0 && out.gram.det() == 0) throw Error("degenerate induced form on L^vee/L");
  std::vector<Elem> fc;
  for (const auto& x : d.charpoly) fc.push_back(padic_residue(c, x));
  fc.push_back(1);
  const Mat C = companion(Poly(F, fc));
  const Mat W = pmat_residue(c, X);
  out.gbar = out.dim == 0 ? Mat(F, 0, 0) : solve_in_span(W, C * W);
  out.f = out.dim == 0 ? Poly::constant(F, 1) : char_poly(out.gbar);
  if (out.dim > 0) {
    const Mat lhs = out.gbar.transpose() * out.gram * out.gbar.frobenius(1);
    if (lhs != out.gram) throw Error("residue action is not an isometry of the induced form");
  }
  return out;
}

// ---------------------------------------------------------------- intersections

namespace {

std::optional<long long> unique_odd_formula(const Poly& f, bool conjugate) {
  const SrFactorization sr = sr_classify(f, conjugate);
  const auto odd = sr.odd_sr();
  if (odd.size() != 1) return std::nullopt;
  return static_cast<long long>(odd[0]->q.degree()) * ((odd[0]->mult + 1) / 2) * script_m(sr);
}

}  // namespace

std::optional<long long> afl_int(const Poly& f) {
  const FieldCtx& F = f.field();
  if (F.e() != 2 * F.base_degree()) throw PreconditionError("AFL polynomial must be over F_{q^2}");
  if (f.degree() % 2 != 1) throw PreconditionError("AFL polynomial must have odd degree");
  if (f[0] == 0) throw PreconditionError("AFL polynomial must have nonzero constant term");
  if (!is_self_reciprocal(f, true)) throw PreconditionError("AFL polynomial must be conjugate self-reciprocal");
  return unique_odd_formula(f, true);
}

std::optional<long long> gspin_int(const Poly& f) {
  const FieldCtx& F = f.field();
  if (F.e() != 1) throw PreconditionError("GSpin polynomial must be over F_p");
  if (f.degree() < 2 || f.degree() % 2 != 0) throw PreconditionError("GSpin polynomial must have even degree >= 2");
  if (f[0] == 0) throw PreconditionError("GSpin polynomial must have nonzero constant term");
  if (!is_self_reciprocal(f, false)) throw PreconditionError("GSpin polynomial must be self-reciprocal");
  return unique_odd_formula(f, false);
}

namespace {

int exit_code_of(const std::exception& ex) {
  if (dynamic_cast<const ParseError*>(&ex)) return 2;
  if (dynamic_cast<const PreconditionError*>(&ex)) return 3;
  if (dynamic_cast<const PrecisionError*>(&ex)) return 4;
  return 1;
}

}  // namespace

AflReport afl_pipeline(const PadicCtx& c, const PMat& g, const PMat& u, const PMat& H) {
  AflReport r;
  std::string stage = "lattice";
  try {
    const LatticeData d = lattice_of_g(c, g, u, H);
    stage = "invariant";
    r.inv = d.inv;
    r.minuscule = d.minuscule;
    if (d.inv.front() == 0) {
      r.dim_v = 0;
      r.flags.push_back("dim V = 0: L(g) is self-dual, empty residue space, no intersection formula applies");
      r.ok = true;
      return r;
    }
    if (!d.minuscule) throw PreconditionError("g is not minuscule: inv = " + std::to_string(d.inv.front()) + " ...");
    stage = "residue";
    const ResidueSpace v = residue_space(c, d);
    r.dim_v = v.dim;
    r.f_gbar = v.f;
    if (!is_gl_regular(v.gbar)) throw Error("residue action is not regular");
    if (!is_self_reciprocal(v.f, true)) throw Error("residue characteristic polynomial is not self-reciprocal");
    stage = "intersection";
    if (v.dim % 2 == 0) {
      r.flags.push_back("even dim V: outside the unitary formula");
      r.ok = true;
      return r;
    }
    if (v.dim == 1) r.flags.push_back("dim V = 1: linear Q0, smallest-case convention");
    r.intersection = afl_int(v.f);
    r.closed_form = trace_closed_form(SpaceKind::U2n1, v.f).value;
    if (r.intersection.value_or(0) != *r.closed_form) throw Error("intersection number disagrees with the trace formula");
    r.ok = true;
  } catch (const std::exception& ex) {
    r.ok = false;
    r.failed_stage = stage;
    r.error = ex.what();
    r.exit_code = exit_code_of(ex);
  }
  return r;
}

nlohmann::json afl_report_json(const PadicCtx& c, const AflReport& r) {
  nlohmann::json j{{"schema", 1}, {"p", c.p}, {"precision", c.N}, {"ok", r.ok}};
  if (!r.ok) {
    j["failed_stage"] = r.failed_stage;
    j["error"] = r.error;
  }
  j["inv"] = r.inv;
  j["minuscule"] = r.minuscule;
  j["dim_V"] = r.dim_v;
  j["f_gbar"] = r.f_gbar ? nlohmann::json(format_poly(*r.f_gbar)) : nlohmann::json(nullptr);
  if (r.intersection) j["intersection"] = *r.intersection;
  else j["intersection"] = r.ok && r.dim_v > 0 && r.dim_v % 2 == 1 ? nlohmann::json("empty") : nlohmann::json(nullptr);
  j["closed_form"] = r.closed_form ? nlohmann::json(*r.closed_form) : nlohmann::json(nullptr);
  j["flags"] = r.flags;
  return j;
}

// ---------------------------------------------------------------- synthesis

namespace {

Padic random_padic(const PadicCtx& c, Rng& rng, bool unit) {
  while (true) {
    mpz_class a = 0, b = 0, pk = 1;
    for (int k = 0; k < c.N; ++k) {
      a += pk * static_cast<unsigned long>(rng.below(c.p));
      if (c.e == 2) b += pk * static_cast<unsigned long>(rng.below(c.p));
      pk *= static_cast<unsigned long>(c.p);
    }
    Padic x = make(c, a, b, c.N);
    if (!unit || padic_val(c, x) == 0) return x;
  }
}

// x -> x - (1 - alpha) [x, v] / [v, v] v for the standard form sum x_i sigma(y_i)
PMat random_quasi_reflection(const PadicCtx& c, int m, Rng& rng) {
  while (true) {
    PMat v = pmat_zero(c, m, 1);
    for (auto& x : v.v) x = random_padic(c, rng, false);
    const Padic nv = pmat_mul(c, pmat_transpose(v), pmat_conj(c, v))(0, 0);
    if (padic_val(c, nv) != 0) continue;
    const Padic beta = random_padic(c, rng, true);
    const Padic alpha = padic_mul(c, beta, padic_unit_inv(c, padic_conj(c, beta)));
    const Padic coef = padic_mul(c, padic_sub(c, padic_int(c, 1), alpha), padic_unit_inv(c, nv));
    PMat R = pmat_mul(c, v, pmat_transpose(pmat_conj(c, v)));
    for (auto& x : R.v) x = padic_mul(c, x, coef);
    return pmat_sub(c, pmat_identity(c, m), R);
  }
}

PMat random_unitary(const PadicCtx& c, int m, Rng& rng) {
  PMat g = pmat_identity(c, m);
  if (m == 0) return g;
  for (int j = 0; j < 2 * m + 2; ++j) g = pmat_mul(c, g, random_quasi_reflection(c, m, rng));
  return g;
}

PMat unitriangular_inverse_lower(const PadicCtx& c, const PMat& L) {
  const int n = L.rows;
  PMat X = pmat_identity(c, n);
  for (int j = 0; j < n; ++j)
    for (int i = j + 1; i < n; ++i) {
      Padic s = padic_int(c, 0);
      for (int k = j; k < i; ++k) s = padic_add(c, s, padic_mul(c, L(i, k), X(k, j)));
      X.at(i, j) = padic_neg(c, s);
    }
  return X;
}

}  // namespace

AflInstance synthesize_minuscule(const PadicCtx& c, int k, int n, std::uint64_t seed) {
  if (c.e != 2) throw PreconditionError("AFL instances live over the quadratic extension");
  if (k < 0 || n < std::max(k, 1)) throw PreconditionError("need 0 <= k <= n and n >= 1");
  Rng rng(mix64(mix64(seed, c.p), static_cast<std::uint64_t>(k * 64 + n)));
  const FieldCtx& F = *c.residue;
  PMat g1, g0;
  Mat r1(F, 0, 0);
  for (int attempt = 0;; ++attempt) {
    if (attempt > 2000) throw Error("could not find a regular residue block");
    g1 = random_unitary(c, k, rng);
    g0 = random_unitary(c, n - k, rng);
    r1 = pmat_residue(c, g1);
    const Mat r0 = pmat_residue(c, g0);
    if (k > 0 && !is_gl_regular(r1)) continue;
    if (n - k > 0 && !is_gl_regular(r0)) continue;
    if (k > 0 && n - k > 0 && gcd(char_poly(r1), char_poly(r0)).degree() > 0) continue;
    break;
  }
  PMat g = pmat_zero(c, n, n), H = pmat_zero(c, n, n);
  for (int i = 0; i < n; ++i) H.at(i, i) = padic_int(c, i < k ? static_cast<long>(c.p) : 1);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) g.at(i, j) = g1(i, j);
  for (int i = 0; i < n - k; ++i)
    for (int j = 0; j < n - k; ++j) g.at(k + i, k + j) = g0(i, j);
  const Mat gres = pmat_residue(c, g);
  PMat u = pmat_zero(c, n, 1);
  while (true) {
    for (auto& x : u.v) x = random_padic(c, rng, false);
    const Mat ur = pmat_residue(c, u);
    Mat K(F, n, n);
    Mat x = ur;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) K.at(i, j) = x(i, 0);
      x = gres * x;
    }
    if (K.rank() == n) break;
  }
  // random unimodular change of basis S = Lo Up
  PMat Lo = pmat_identity(c, n), Up = pmat_identity(c, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) {
      Lo.at(i, j) = random_padic(c, rng, false);
      Up.at(j, i) = random_padic(c, rng, false);
    }
  const PMat S = pmat_mul(c, Lo, Up);
  const PMat Sinv =
      pmat_mul(c, pmat_transpose(unitriangular_inverse_lower(c, pmat_transpose(Up))), unitriangular_inverse_lower(c, Lo));
  AflInstance inst{{}, {}, {}, {}, r1};
  inst.g = pmat_mul(c, pmat_mul(c, Sinv, g), S);
  inst.u = pmat_mul(c, Sinv, u);
  inst.H = pmat_mul(c, pmat_mul(c, pmat_transpose(S), H), pmat_conj(c, S));
  inst.inv.assign(n, 0);
  for (int i = 0; i < k; ++i) inst.inv[i] = 1;
  return inst;
}

// ---------------------------------------------------------------- spinor determinant

PMat reflection_matrix(const PadicCtx& c, const PMat& gram, const LatticeReflection& r) {
  const int n = gram.rows;
  const PMat Gv = pmat_mul(c, gram, r.v);
  const Padic nv = pmat_mul(c, pmat_transpose(r.v), Gv)(0, 0);
  const int val = padic_val(c, nv);
  if (val >= nv.prec) throw PrecisionError("reflection vector is isotropic to the carried precision");
  if (val != r.val) throw PreconditionError("recorded valuation of [v, v] does not match");
  if (val >= 2) throw PreconditionError("reflection with [v, v] of valuation >= 2 is not admissible here");
  // 2 [x, v] / [v, v] must be integral on L: G v divisible by p^val
  PMat w = Gv;
  for (auto& x : w.v) {
    if (padic_val(c, x) < val) throw PreconditionError("reflection does not stabilize the lattice");
    x = padic_shift_down(c, x, val);
  }
  const Padic coef = padic_mul(c, padic_int(c, 2), padic_unit_inv(c, padic_shift_down(c, nv, val)));
  PMat R = pmat_mul(c, r.v, pmat_transpose(w));
  for (auto& x : R.v) x = padic_mul(c, x, coef);
  return pmat_sub(c, pmat_identity(c, n), R);
}

DeterminantCheck residual_determinant_check(const PadicCtx& c, const PMat& gram, int k,
                                            const std::vector<LatticeReflection>& refl) {
  if (c.e != 1) throw PreconditionError("the determinant check works over Z_p");
  const int n = gram.rows;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int v = padic_val(c, gram(i, j));
      if (i != j ? !padic_is_zero(c, gram(i, j)) : v != (i < k ? 1 : 0))
        throw PreconditionError("Gram matrix must be diag(p d_1, ..., p d_k, d_{k+1}, ...) with unit d_i");
    }
  PMat h = pmat_identity(c, n);
  DeterminantCheck out;
  for (const auto& r : refl) {
    h = pmat_mul(c, h, reflection_matrix(c, gram, r));
    out.val_one += r.val;
  }
  const FieldCtx& F = *c.residue;
  Mat hb(F, k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) hb.at(i, j) = padic_residue(c, h(i, j));
  out.det = k == 0 ? 1 : hb.det();
  out.parity_ok = out.det == (out.val_one % 2 == 0 ? F.one() : F.neg(1));
  out.ok = out.det == 1;
  return out;
}

std::pair<PMat, std::vector<LatticeReflection>> random_reflection_product(const PadicCtx& c, int n, int k,
                                                                           int count, std::uint64_t seed) {
  if (c.e != 1) throw PreconditionError("reflection products live over Z_p");
  if (k < 0 || k > n || n < 1) throw PreconditionError("need 0 <= k <= n, n >= 1");
  Rng rng(mix64(mix64(seed, c.p), static_cast<std::uint64_t>(n * 64 + k)));
  PMat gram = pmat_zero(c, n, n);
  for (int i = 0; i < n; ++i) {
    Padic d = random_padic(c, rng, true);
    gram.at(i, i) = i < k ? padic_mul(c, d, padic_int(c, static_cast<long>(c.p))) : d;
  }
  std::vector<LatticeReflection> out;
  while (static_cast<int>(out.size()) < count) {
    const bool one = k > 0 && rng.coin();
    PMat v = pmat_zero(c, n, 1);
    for (int i = 0; i < n; ++i) {
      Padic x = random_padic(c, rng, false);
      if (one && i >= k) x = padic_mul(c, x, padic_int(c, static_cast<long>(c.p)));
      v.at(i, 0) = x;
    }
    const Padic nv = pmat_mul(c, pmat_transpose(v), pmat_mul(c, gram, v))(0, 0);
    if (padic_val(c, nv) != (one ? 1 : 0)) continue;
    out.push_back({v, one ? 1 : 0});
  }
  return {gram, out};
}

}  // namespace dltrace
