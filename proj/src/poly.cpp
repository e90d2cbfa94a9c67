#include "dltrace/poly.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

#include "dltrace/rng.hpp"

namespace dltrace {

Poly::Poly(const FieldCtx& f, std::vector<Elem> c) : f_(&f), c_(std::move(c)) { trim(); }

Poly Poly::constant(const FieldCtx& f, Elem c) { return Poly(f, {c}); }
Poly Poly::x(const FieldCtx& f) { return Poly(f, {0, 1}); }

Poly Poly::monomial(const FieldCtx& f, int deg, Elem c) {
  std::vector<Elem> v(deg + 1, 0);
  v[deg] = c;
  return Poly(f, std::move(v));
}

Poly Poly::linear(const FieldCtx& f, Elem r) { return Poly(f, {f.neg(r), 1}); }

Poly Poly::from_ints(const FieldCtx& f, const std::vector<std::int64_t>& c) {
  std::vector<Elem> v;
  v.reserve(c.size());
  for (auto x : c) v.push_back(f.from_int(x));
  return Poly(f, std::move(v));
}

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

void Poly::same_field(const Poly& o) const {
  if (f_ != o.f_) throw FieldMismatchError("polynomials over " + f_->name() + " and " + o.f_->name());
}

Poly Poly::monic() const {
  if (c_.empty() || c_.back() == 1) return *this;
  return scale(f_->inv(c_.back()));
}

Poly Poly::derivative() const {
  std::vector<Elem> d;
  for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(f_->mul(c_[i], f_->from_int(static_cast<std::int64_t>(i % f_->p()))));
  return Poly(*f_, std::move(d));
}

Elem Poly::eval(Elem x) const {
  Elem r = 0;
  for (std::size_t i = c_.size(); i-- > 0;) r = f_->add(f_->mul(r, x), c_[i]);
  return r;
}

Poly Poly::scale(Elem s) const {
  std::vector<Elem> v(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) v[i] = f_->mul(c_[i], s);
  return Poly(*f_, std::move(v));
}

Poly Poly::frobenius(int steps) const {
  std::vector<Elem> v(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) v[i] = f_->frobenius(c_[i], steps);
  return Poly(*f_, std::move(v));
}

Poly Poly::operator+(const Poly& o) const {
  same_field(o);
  std::vector<Elem> v(std::max(c_.size(), o.c_.size()), 0);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f_->add((*this)[static_cast<int>(i)], o[static_cast<int>(i)]);
  return Poly(*f_, std::move(v));
}

Poly Poly::operator-(const Poly& o) const {
  same_field(o);
  std::vector<Elem> v(std::max(c_.size(), o.c_.size()), 0);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f_->sub((*this)[static_cast<int>(i)], o[static_cast<int>(i)]);
  return Poly(*f_, std::move(v));
}

Poly Poly::operator-() const {
  std::vector<Elem> v(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) v[i] = f_->neg(c_[i]);
  return Poly(*f_, std::move(v));
}

Poly Poly::operator*(const Poly& o) const {
  same_field(o);
  if (c_.empty() || o.c_.empty()) return Poly(*f_);
  std::vector<Elem> v(c_.size() + o.c_.size() - 1, 0);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j) v[i + j] = f_->add(v[i + j], f_->mul(c_[i], o.c_[j]));
  }
  return Poly(*f_, std::move(v));
}

Poly Poly::operator/(const Poly& o) const { return divmod(*this, o).first; }
Poly Poly::operator%(const Poly& o) const { return divmod(*this, o).second; }

std::string Poly::to_string() const { return format_poly(*this); }

std::string Poly::pretty() const {
  if (c_.empty()) return "0";
  std::string s;
  for (int i = degree(); i >= 0; --i) {
    const Elem c = c_[i];
    if (c == 0) continue;
    if (!s.empty()) s += "+";
    const bool show = (c != 1 || i == 0);
    if (show) {
      std::string cs = f_->e() == 1 ? std::to_string(c) : "[" + f_->format(c) + "]";
      s += cs;
    }
    if (i >= 1) s += "x";
    if (i >= 2) s += "^" + std::to_string(i);
  }
  return s;
}

bool poly_less(const Poly& a, const Poly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  return std::lexicographical_compare(a.coeffs().begin(), a.coeffs().end(), b.coeffs().begin(), b.coeffs().end());
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  const FieldCtx& f = a.field();
  if (&f != &b.field()) throw FieldMismatchError("divmod across fields");
  if (b.is_zero()) throw PreconditionError("polynomial division by zero");
  if (a.degree() < b.degree()) return {Poly(f), a};
  std::vector<Elem> r = a.coeffs();
  const int db = b.degree();
  std::vector<Elem> qc(a.degree() - db + 1, 0);
  const Elem il = f.inv(b.lead());
  for (int k = a.degree(); k >= db; --k) {
    const Elem c = f.mul(r[k], il);
    if (c == 0) continue;
    qc[k - db] = c;
    for (int j = 0; j <= db; ++j) r[k - db + j] = f.sub(r[k - db + j], f.mul(c, b[j]));
  }
  r.resize(db);
  return {Poly(f, std::move(qc)), Poly(f, std::move(r))};
}

Poly gcd(const Poly& a, const Poly& b) {
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = x % y;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

Poly pow(const Poly& a, int k) {
  Poly r = Poly::constant(a.field(), 1), b = a;
  while (k > 0) {
    if (k & 1) r = r * b;
    k >>= 1;
    if (k) b = b * b;
  }
  return r;
}

Poly powmod(const Poly& a, std::uint64_t k, const Poly& m) {
  Poly r = Poly::constant(a.field(), 1) % m, b = a % m;
  while (k) {
    if (k & 1) r = (r * b) % m;
    k >>= 1;
    if (k) b = (b * b) % m;
  }
  return r;
}

bool divides(const Poly& d, const Poly& f) { return (f % d).is_zero(); }

int multiplicity(const Poly& q, const Poly& f) {
  if (f.is_zero()) throw PreconditionError("multiplicity in the zero polynomial");
  int m = 0;
  Poly g = f;
  while (true) {
    auto [quo, rem] = divmod(g, q);
    if (!rem.is_zero()) break;
    g = std::move(quo);
    ++m;
  }
  return m;
}

namespace {

// p-th root of a polynomial whose exponents are all divisible by p.
Poly pth_root(const Poly& f) {
  const FieldCtx& F = f.field();
  const int p = static_cast<int>(F.p());
  std::vector<Elem> v;
  for (int i = 0; i <= f.degree(); i += p) v.push_back(F.frob_p(f[i], F.e() - 1));
  return Poly(F, std::move(v));
}

void sff(const Poly& f, int scale, Factorization& out) {
  const FieldCtx& F = f.field();
  Poly c = gcd(f, f.derivative());
  Poly w = f / c;
  int i = 1;
  while (!w.is_one()) {
    Poly y = gcd(w, c);
    Poly fac = w / y;
    if (!fac.is_one()) out.emplace_back(fac.monic(), i * scale);
    w = y;
    c = c / y;
    ++i;
  }
  if (!c.is_one()) sff(pth_root(c.monic()), scale * static_cast<int>(F.p()), out);
}

std::uint64_t poly_seed(const Poly& f) {
  std::uint64_t h = 0x6a09e667f3bcc908ULL ^ static_cast<std::uint64_t>(f.field().order());
  for (Elem c : f.coeffs()) h = mix64(h, c);
  return h;
}

Factorization ddf(const Poly& f) {
  const FieldCtx& F = f.field();
  Factorization out;
  Poly fs = f;
  const Poly x = Poly::x(F);
  Poly h = x % fs;
  int i = 0;
  while (fs.degree() >= 2 * (i + 1)) {
    ++i;
    h = powmod(h, F.order(), fs);
    Poly g = gcd(h - x, fs);
    if (!g.is_one()) {
      out.emplace_back(g, i);
      fs = fs / g;
      h = h % fs;
    }
  }
  if (fs.degree() > 0) out.emplace_back(fs.monic(), fs.degree());
  return out;
}

void edf(const Poly& g, int d, Rng& rng, std::vector<Poly>& out) {
  if (g.degree() == d) {
    out.push_back(g.monic());
    return;
  }
  const FieldCtx& F = g.field();
  const std::uint64_t Q = F.order();
  while (true) {
    std::vector<Elem> ac(g.degree());
    for (auto& c : ac) c = rng.below(Q);
    Poly a(F, std::move(ac));
    if (a.degree() < 1) continue;
    Poly t = a, acc = a;
    for (int j = 1; j < d; ++j) {
      t = powmod(t, Q, g);
      acc = (acc * t) % g;
    }
    Poly b = powmod(acc, (Q - 1) / 2, g) - Poly::constant(F, 1);
    Poly u = gcd(b, g);
    if (u.degree() > 0 && u.degree() < g.degree()) {
      edf(u, d, rng, out);
      edf(g / u, d, rng, out);
      return;
    }
  }
}

}  // namespace

Factorization squarefree_decomposition(const Poly& f) {
  if (f.is_zero()) throw PreconditionError("squarefree decomposition of zero");
  Factorization out;
  if (f.degree() == 0) return out;
  sff(f.monic(), 1, out);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
  return out;
}

Factorization factor(const Poly& f) {
  if (f.is_zero()) throw PreconditionError("factor of the zero polynomial");
  std::map<Poly, int, PolyLess> acc;
  Rng rng(poly_seed(f));
  for (const auto& [s, m] : squarefree_decomposition(f)) {
    for (const auto& [g, d] : ddf(s)) {
      std::vector<Poly> parts;
      edf(g, d, rng, parts);
      for (auto& pp : parts) acc[pp] += m;
    }
  }
  return Factorization(acc.begin(), acc.end());
}

Poly expand(const Factorization& fac, const FieldCtx& f) {
  Poly r = Poly::constant(f, 1);
  for (const auto& [q, m] : fac) r = r * pow(q, m);
  return r;
}

bool is_irreducible(const Poly& f) {
  if (f.degree() < 1) return false;
  if (f.degree() == 1) return true;
  const FieldCtx& F = f.field();
  const Poly g = f.monic();
  const int n = g.degree();
  const Poly x = Poly::x(F);
  std::vector<Poly> xq(n + 1, Poly(F));
  xq[0] = x % g;
  for (int k = 1; k <= n; ++k) xq[k] = powmod(xq[k - 1], F.order(), g);
  if (!(xq[n] - x % g).is_zero()) return false;
  for (std::uint64_t r : prime_factors(static_cast<std::uint64_t>(n))) {
    if (!gcd(xq[n / r] - x, g).is_one()) return false;
  }
  return true;
}

Poly radical(const Poly& f) {
  if (f.is_zero()) throw PreconditionError("radical of zero");
  Poly g = f.monic();
  if (g.degree() == 0) return Poly::constant(f.field(), 1);
  Poly d = g.derivative();
  if (d.is_zero()) return radical(pth_root(g));
  Poly c = gcd(g, d);
  Poly w = g / c;  // product of irreducibles whose multiplicity is prime to p
  // strip from c everything already accounted for by w
  Poly rest = c;
  while (true) {
    Poly y = gcd(rest, w);
    if (y.is_one()) break;
    rest = rest / y;
  }
  if (rest.degree() == 0) return w.monic();
  return (w * radical(rest)).monic();
}

std::vector<Poly> monic_irreducibles(const FieldCtx& f, int d) {
  const std::uint64_t Q = f.order();
  long double total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<long double>(Q);
  if (total > 2.0e7L) throw PreconditionError("too many candidates for irreducible enumeration");
  const std::uint64_t n = static_cast<std::uint64_t>(total);
  std::vector<Poly> out;
  for (std::uint64_t k = 0; k < n; ++k) {
    std::vector<Elem> c(d + 1);
    std::uint64_t m = k;
    for (int j = 0; j < d; ++j) {
      c[j] = m % Q;
      m /= Q;
    }
    c[d] = 1;
    if (d > 1 && c[0] == 0) continue;
    Poly p(f, std::move(c));
    if (is_irreducible(p)) out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end(), poly_less);
  return out;
}

// ---- embeddings and splitting fields ------------------------------------

const Embedding& Embedding::get(const FieldCtx& src, const FieldCtx& dst) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<Embedding>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({src.id(), dst.id()});
    if (it != cache.end()) return *it->second;
  }
  auto emb = std::unique_ptr<Embedding>(new Embedding(src, dst));
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.emplace(std::make_pair(src.id(), dst.id()), std::move(emb));
  return *it->second;
}

Embedding::Embedding(const FieldCtx& src, const FieldCtx& dst) : src_(&src), dst_(&dst) {
  if (src.p() != dst.p() || dst.e() % src.e() != 0)
    throw PreconditionError("no embedding " + src.name() + " -> " + dst.name());
  Elem r;
  if (src.e() == 1) {
    r = 0;
  } else {
    Poly m(dst, std::vector<Elem>(src.modulus().begin(), src.modulus().end()));
    std::vector<Elem> rts;
    for (const auto& [fac, mult] : factor(m))
      if (fac.degree() == 1) rts.push_back(dst.neg(fac[0]));
    if (rts.empty()) throw Error("modulus has no root in " + dst.name());
    r = *std::min_element(rts.begin(), rts.end());
  }
  img_.resize(src.e());
  Elem x = 1;
  for (int j = 0; j < src.e(); ++j) {
    img_[j] = x;
    x = dst.mul(x, r);
  }
}

Elem Embedding::apply(Elem x) const {
  if (src_ == dst_) return x;
  const auto d = src_->digits(x);
  Elem r = 0;
  for (int j = 0; j < src_->e(); ++j)
    if (d[j]) r = dst_->add(r, dst_->mul(img_[j], d[j]));
  return r;
}

Poly Embedding::apply(const Poly& f) const {
  if (&f.field() != src_) throw FieldMismatchError("embedding applied to polynomial over " + f.field().name());
  std::vector<Elem> v;
  v.reserve(f.coeffs().size());
  for (Elem c : f.coeffs()) v.push_back(apply(c));
  return Poly(*dst_, std::move(v));
}

bool Embedding::solve(Elem x, Elem* out) const {
  if (src_ == dst_) {
    *out = x;
    return true;
  }
  const int rows = dst_->e(), cols = src_->e();
  const std::uint64_t p = dst_->p();
  std::vector<std::vector<std::uint64_t>> a(rows, std::vector<std::uint64_t>(cols + 1));
  for (int j = 0; j < cols; ++j) {
    auto d = dst_->digits(img_[j]);
    for (int i = 0; i < rows; ++i) a[i][j] = d[i];
  }
  auto dx = dst_->digits(x);
  for (int i = 0; i < rows; ++i) a[i][cols] = dx[i];
  auto inv_mod = [p](std::uint64_t v) {
    std::uint64_t r = 1, b = v % p, k = p - 2;
    while (k) {
      if (k & 1) r = r * b % p;
      b = b * b % p;
      k >>= 1;
    }
    return r;
  };
  std::vector<int> piv;
  int row = 0;
  for (int c = 0; c < cols && row < rows; ++c) {
    int s = -1;
    for (int i = row; i < rows; ++i)
      if (a[i][c]) {
        s = i;
        break;
      }
    if (s < 0) continue;
    std::swap(a[s], a[row]);
    const std::uint64_t iv = inv_mod(a[row][c]);
    for (auto& v : a[row]) v = v * iv % p;
    for (int i = 0; i < rows; ++i) {
      if (i == row || !a[i][c]) continue;
      const std::uint64_t m = a[i][c];
      for (int k = 0; k <= cols; ++k) a[i][k] = (a[i][k] + (p - m) * a[row][k]) % p;
    }
    piv.push_back(c);
    ++row;
  }
  for (int i = row; i < rows; ++i)
    if (a[i][cols]) return false;
  std::vector<std::uint32_t> d(cols, 0);
  for (int i = 0; i < row; ++i) d[piv[i]] = static_cast<std::uint32_t>(a[i][cols]);
  *out = src_->from_digits(d);
  return true;
}

Elem Embedding::preimage(Elem x) const {
  Elem r;
  if (!solve(x, &r)) throw PreconditionError("element of " + dst_->name() + " is not in the image of " + src_->name());
  return r;
}

bool Embedding::in_image(Elem x) const {
  Elem r;
  return solve(x, &r);
}

Poly Embedding::preimage(const Poly& f) const {
  std::vector<Elem> v;
  for (Elem c : f.coeffs()) v.push_back(preimage(c));
  return Poly(*src_, std::move(v));
}

const FieldCtx& extension(const FieldCtx& f, int k) {
  return FieldCtx::get(f.p(), f.e() * k, f.base_degree());
}

const FieldCtx& splitting_field(const Poly& f) {
  int k = 1;
  for (const auto& [q, m] : factor(f)) k = std::lcm(k, q.degree());
  if (f.field().e() * k > 16)
    throw PreconditionError("splitting field of degree " + std::to_string(f.field().e() * k) + " over F_p exceeds 16");
  return extension(f.field(), k);
}

std::vector<Elem> roots_in(const Poly& f, const FieldCtx& dst) {
  const Poly g = Embedding::get(f.field(), dst).apply(f);
  std::vector<Elem> out;
  for (const auto& [fac, m] : factor(g))
    if (fac.degree() == 1)
      for (int i = 0; i < m; ++i) out.push_back(dst.neg(fac[0]));
  std::sort(out.begin(), out.end());
  return out;
}

// ---- text format ----------------------------------------------------------

namespace {

struct Cursor {
  std::string_view s;
  std::size_t i = 0;
  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  std::uint64_t number(const char* what) {
    skip_ws();
    const std::size_t start = i;
    std::uint64_t v = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      v = v * 10 + static_cast<std::uint64_t>(s[i] - '0');
      if (v > (1ULL << 40)) throw ParseError(std::string(what) + " too large", start);
      ++i;
    }
    if (i == start) throw ParseError(std::string("expected ") + what, start);
    return v;
  }
  void expect(char c) {
    skip_ws();
    if (i >= s.size() || s[i] != c) throw ParseError(std::string("expected '") + c + "'", i);
    ++i;
  }
};

}  // namespace

Poly parse_poly(std::string_view text, int base_degree) {
  Cursor cur{text};
  const std::uint64_t p = cur.number("characteristic");
  cur.expect('^');
  const std::uint64_t e = cur.number("extension degree");
  cur.expect(':');
  const FieldCtx* fp;
  try {
    fp = &FieldCtx::get(p, static_cast<int>(e), base_degree == 0 ? static_cast<int>(e) : base_degree);
  } catch (const PreconditionError& ex) {
    throw ParseError(ex.what(), 0);
  }
  const FieldCtx& F = *fp;
  std::vector<Elem> coeffs;
  while (true) {
    cur.skip_ws();
    const std::size_t start = cur.i;
    while (cur.i < text.size() && std::isalnum(static_cast<unsigned char>(text[cur.i]))) ++cur.i;
    if (cur.i == start) throw ParseError("expected coefficient", start);
    coeffs.push_back(F.parse(text.substr(start, cur.i - start), start));
    cur.skip_ws();
    if (cur.i >= text.size()) break;
    if (text[cur.i] != ',') throw ParseError("expected ',' or end of input", cur.i);
    ++cur.i;
  }
  return Poly(F, std::move(coeffs));
}

std::string format_poly(const Poly& f) {
  const FieldCtx& F = f.field();
  std::string s = std::to_string(F.p()) + "^" + std::to_string(F.e()) + ":";
  if (f.is_zero()) return s + F.format(0);
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
    if (i) s += ",";
    s += F.format(f.coeffs()[i]);
  }
  return s;
}

}  // namespace dltrace
