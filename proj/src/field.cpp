#include "dltrace/field.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <tuple>

namespace dltrace {

namespace {

using PolyP = std::vector<std::uint64_t>;  // low-first coefficients mod p

void trim(PolyP& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

PolyP mod_p(PolyP a, const PolyP& f, std::uint64_t p) {
  trim(a);
  const std::size_t df = f.size() - 1;
  const std::uint64_t inv_lead = [&] {
    std::uint64_t r = 1, b = f.back(), k = p - 2;
    while (k) {
      if (k & 1) r = r * b % p;
      b = b * b % p;
      k >>= 1;
    }
    return r;
  }();
  while (a.size() > df) {
    const std::uint64_t c = a.back() * inv_lead % p;
    const std::size_t shift = a.size() - 1 - df;
    for (std::size_t j = 0; j <= df; ++j) a[shift + j] = (a[shift + j] + (p - c) * f[j]) % p;
    trim(a);
  }
  return a;
}

PolyP mulmod_p(const PolyP& a, const PolyP& b, const PolyP& f, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  PolyP r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  return mod_p(std::move(r), f, p);
}

PolyP powmod_p(PolyP b, std::uint64_t k, const PolyP& f, std::uint64_t p) {
  PolyP r{1};
  b = mod_p(b, f, p);
  while (k) {
    if (k & 1) r = mulmod_p(r, b, f, p);
    b = mulmod_p(b, b, f, p);
    k >>= 1;
  }
  return r;
}

PolyP gcd_p(PolyP a, PolyP b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    PolyP r = mod_p(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

bool irreducible_p(const PolyP& f, std::uint64_t p) {
  const int e = static_cast<int>(f.size()) - 1;
  if (e == 1) return true;
  // x^{p^k} mod f for k = 0..e
  std::vector<PolyP> xp(e + 1);
  xp[0] = mod_p(PolyP{0, 1}, f, p);
  for (int k = 1; k <= e; ++k) xp[k] = powmod_p(xp[k - 1], p, f, p);
  auto minus_x = [&](PolyP h) {
    if (h.size() < 2) h.resize(2, 0);
    h[1] = (h[1] + p - 1) % p;
    trim(h);
    return h;
  };
  if (!minus_x(xp[e]).empty()) return false;
  for (std::uint64_t r : prime_factors(static_cast<std::uint64_t>(e))) {
    PolyP g = gcd_p(minus_x(xp[e / r]), f, p);
    if (g.size() != 1) return false;
  }
  return true;
}

std::uint64_t powmod_u64(std::uint64_t b, std::uint64_t k, std::uint64_t m) {
  unsigned __int128 r = 1, x = b % m;
  while (k) {
    if (k & 1) r = r * x % m;
    x = x * x % m;
    k >>= 1;
  }
  return static_cast<std::uint64_t>(r);
}

constexpr std::uint64_t kTableLimit = 1u << 20;

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t s : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % s == 0) return n == s;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool comp = true;
    for (int i = 1; i < r && comp; ++i) {
      x = static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * x % n);
      if (x == n - 1) comp = false;
    }
    if (comp) return false;
  }
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
    if (d > 50000000ULL) throw PreconditionError("integer too large to factor by trial division");
  }
  if (n > 1) out.push_back(n);
  return out;
}

const FieldCtx& FieldCtx::get(std::uint64_t p, int e, int base_degree) {
  static std::mutex mu;
  static std::map<std::tuple<std::uint64_t, int, int>, std::unique_ptr<FieldCtx>> registry;
  if (p < 3 || p % 2 == 0) throw PreconditionError("field characteristic must be an odd prime, got " + std::to_string(p));
  if (!is_prime_u64(p)) throw PreconditionError("field characteristic " + std::to_string(p) + " is not prime");
  if (p >= (1ULL << 31)) throw PreconditionError("field characteristic too large");
  if (e < 1 || e > 16) throw PreconditionError("extension degree must lie in [1,16], got " + std::to_string(e));
  if (base_degree < 1 || e % base_degree != 0)
    throw PreconditionError("base degree " + std::to_string(base_degree) + " does not divide " + std::to_string(e));
  long double est = 1;
  for (int i = 0; i < e; ++i) est *= static_cast<long double>(p);
  if (est > 4.0e18L) throw PreconditionError("field order exceeds 64-bit packing");

  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(p, e, base_degree);
  auto it = registry.find(key);
  if (it != registry.end()) return *it->second;
  auto ctx = std::unique_ptr<FieldCtx>(new FieldCtx(p, e, base_degree, static_cast<int>(registry.size())));
  const FieldCtx& ref = *ctx;
  registry.emplace(key, std::move(ctx));
  return ref;
}

FieldCtx::FieldCtx(std::uint64_t p, int e, int bd, int id) : p_(p), e_(e), bd_(bd), id_(id) {
  pw_.resize(e + 1);
  pw_[0] = 1;
  for (int i = 1; i <= e; ++i) pw_[i] = pw_[i - 1] * p;
  order_ = pw_[e];
  q_ = pw_[bd];

  // Least monic irreducible: (c_0, ..., c_{e-1}) in lexicographic order, c_0 most significant.
  // c_0 = 0 is divisible by lambda, so start at c_0 = 1 when e > 1
  for (std::uint64_t n = e > 1 ? pw_[e - 1] : 0; n < order_; ++n) {
    PolyP f(e + 1, 0);
    f[e] = 1;
    std::uint64_t m = n;
    for (int j = e - 1; j >= 0; --j) {
      f[j] = m % p;
      m /= p;
    }
    if (irreducible_p(f, p)) {
      modulus_ = f;
      break;
    }
  }
  if (order_ <= kTableLimit) {
    build_tables();
    return;
  }
  frob_.assign(e, std::vector<std::uint64_t>(static_cast<std::size_t>(e) * e, 0));
  for (int j = 0; j < e; ++j) {
    Elem x = pw_[j];
    for (int k = 0; k < e; ++k) {
      Elem y = x;
      for (int i = 0; i < e; ++i) {
        frob_[k][static_cast<std::size_t>(i) * e + j] = y % p;
        y /= p;
      }
      // next p-th power by repeated multiplication
      Elem z = 1;
      for (std::uint64_t r = 0; r < p; ++r) z = mul_slow(z, x);
      x = z;
    }
  }
}

void FieldCtx::build_tables() {
  const std::uint64_t n = order_ - 1;
  Elem g = primitive_element();
  exp_.assign(2 * n, 0);
  log_.assign(order_, 0);
  Elem x = 1;
  for (std::uint64_t k = 0; k < n; ++k) {
    exp_[k] = static_cast<std::uint32_t>(x);
    exp_[k + n] = static_cast<std::uint32_t>(x);
    log_[x] = static_cast<std::uint32_t>(k);
    x = mul_slow(x, g);
  }
  tabled_ = true;
}

Elem FieldCtx::gen() const {
  if (e_ == 1) return (p_ - modulus_[0]) % p_;
  return p_;
}

Elem FieldCtx::from_int(std::int64_t v) const {
  std::int64_t r = v % static_cast<std::int64_t>(p_);
  if (r < 0) r += static_cast<std::int64_t>(p_);
  return static_cast<Elem>(r);
}

Elem FieldCtx::add(Elem a, Elem b) const {
  if (e_ == 1) {
    Elem s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Elem r = 0;
  for (int i = 0; i < e_; ++i) {
    Elem da = a % p_, db = b % p_;
    a /= p_;
    b /= p_;
    Elem s = da + db;
    if (s >= p_) s -= p_;
    r += s * pw_[i];
  }
  return r;
}

Elem FieldCtx::neg(Elem a) const {
  if (e_ == 1) return a == 0 ? 0 : p_ - a;
  Elem r = 0;
  for (int i = 0; i < e_; ++i) {
    Elem da = a % p_;
    a /= p_;
    r += (da == 0 ? 0 : p_ - da) * pw_[i];
  }
  return r;
}

Elem FieldCtx::sub(Elem a, Elem b) const { return add(a, neg(b)); }

Elem FieldCtx::mul_slow(Elem a, Elem b) const {
  if (e_ == 1) return static_cast<Elem>(static_cast<unsigned __int128>(a) * b % p_);
  std::uint64_t da[16], db[16], pr[32] = {0};
  for (int i = 0; i < e_; ++i) {
    da[i] = a % p_;
    a /= p_;
    db[i] = b % p_;
    b /= p_;
  }
  if (p_ < (1u << 20)) {
    // at most 2e products below p^2 accumulate before a reduction
    for (int i = 0; i < e_; ++i) {
      if (!da[i]) continue;
      for (int j = 0; j < e_; ++j) pr[i + j] += da[i] * db[j];
    }
    for (int k = 2 * e_ - 2; k >= e_; --k) {
      const std::uint64_t c = pr[k] % p_;
      pr[k] = 0;
      if (!c) continue;
      for (int j = 0; j < e_; ++j) pr[k - e_ + j] += (p_ - c) * modulus_[j];
    }
    for (int i = 0; i < e_; ++i) pr[i] %= p_;
  } else {
    for (int i = 0; i < e_; ++i) {
      if (!da[i]) continue;
      for (int j = 0; j < e_; ++j) pr[i + j] = (pr[i + j] + da[i] * db[j]) % p_;
    }
    for (int k = 2 * e_ - 2; k >= e_; --k) {
      const std::uint64_t c = pr[k];
      if (!c) continue;
      pr[k] = 0;
      for (int j = 0; j < e_; ++j) pr[k - e_ + j] = (pr[k - e_ + j] + (p_ - c) * modulus_[j]) % p_;
    }
  }
  Elem r = 0;
  for (int i = 0; i < e_; ++i) r += pr[i] * pw_[i];
  return r;
}

Elem FieldCtx::mul(Elem a, Elem b) const {
  if (a == 0 || b == 0) return 0;
  if (tabled_) return exp_[log_[a] + log_[b]];
  return mul_slow(a, b);
}

Elem FieldCtx::pow(Elem a, std::uint64_t k) const {
  if (k == 0) return 1;
  if (a == 0) return 0;
  if (tabled_) {
    const std::uint64_t n = order_ - 1;
    return exp_[static_cast<std::uint64_t>(static_cast<unsigned __int128>(log_[a]) * (k % n) % n)];
  }
  Elem r = 1;
  while (k) {
    if (k & 1) r = mul(r, a);
    a = mul(a, a);
    k >>= 1;
  }
  return r;
}

Elem FieldCtx::inv(Elem a) const {
  if (a == 0) throw PreconditionError("inverse of zero in " + name());
  if (tabled_) {
    const std::uint64_t n = order_ - 1;
    return exp_[(n - log_[a]) % n];
  }
  return pow(a, order_ - 2);
}

Elem FieldCtx::frob_p(Elem a, int k) const {
  k %= e_;
  if (k < 0) k += e_;
  if (k == 0 || a < p_) return a;
  if (tabled_) {
    const std::uint64_t n = order_ - 1;
    return exp_[static_cast<std::uint64_t>(static_cast<unsigned __int128>(log_[a]) * (pw_[k] % n) % n)];
  }
  const auto& M = frob_[k];
  std::uint64_t d[16];
  for (int j = 0; j < e_; ++j) {
    d[j] = a % p_;
    a /= p_;
  }
  Elem r = 0;
  for (int i = 0; i < e_; ++i) {
    unsigned __int128 acc = 0;
    for (int j = 0; j < e_; ++j) acc += static_cast<unsigned __int128>(M[static_cast<std::size_t>(i) * e_ + j]) * d[j];
    r += static_cast<Elem>(acc % p_) * pw_[i];
  }
  return r;
}

Elem FieldCtx::frobenius(Elem a, int steps) const {
  const long long k = static_cast<long long>(bd_) * steps;
  return frob_p(a, static_cast<int>(((k % e_) + e_) % e_));
}

bool FieldCtx::is_square(Elem a) const {
  if (a == 0) return true;
  return pow(a, (order_ - 1) / 2) == 1;
}

std::uint64_t FieldCtx::mult_order(Elem a) const {
  if (a == 0) throw PreconditionError("order of zero");
  std::uint64_t n = order_ - 1;
  for (std::uint64_t r : prime_factors(order_ - 1)) {
    while (n % r == 0 && pow(a, n / r) == 1) n /= r;
  }
  return n;
}

Elem FieldCtx::primitive_element() const {
  if (tabled_) return exp_[1];
  const std::uint64_t n = order_ - 1;
  const auto primes = prime_factors(n);
  for (Elem g = 1; g < order_; ++g) {
    bool ok = true;
    for (std::uint64_t r : primes) {
      if (pow(g, n / r) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw Error("no primitive element found");
}

std::vector<std::uint32_t> FieldCtx::digits(Elem a) const {
  std::vector<std::uint32_t> d(e_);
  for (int i = 0; i < e_; ++i) {
    d[i] = static_cast<std::uint32_t>(a % p_);
    a /= p_;
  }
  return d;
}

Elem FieldCtx::from_digits(const std::vector<std::uint32_t>& d) const {
  Elem r = 0;
  for (int i = 0; i < e_ && i < static_cast<int>(d.size()); ++i) r += (d[i] % p_) * pw_[i];
  return r;
}

std::string FieldCtx::format(Elem a) const {
  if (p_ > 36) throw PreconditionError("text format needs p <= 36");
  std::string s;
  for (std::uint32_t d : digits(a)) s.push_back(static_cast<char>(d < 10 ? '0' + d : 'a' + (d - 10)));
  return s;
}

Elem FieldCtx::parse(std::string_view s, std::size_t offset) const {
  if (p_ > 36) throw ParseError("text format needs p <= 36", offset);
  if (static_cast<int>(s.size()) != e_)
    throw ParseError("element of " + name() + " needs exactly " + std::to_string(e_) + " digits, got '" +
                         std::string(s) + "'",
                     offset);
  Elem r = 0;
  for (int i = 0; i < e_; ++i) {
    const char c = s[i];
    std::uint32_t d;
    if (c >= '0' && c <= '9')
      d = static_cast<std::uint32_t>(c - '0');
    else if (c >= 'a' && c <= 'z')
      d = static_cast<std::uint32_t>(c - 'a' + 10);
    else
      throw ParseError(std::string("invalid digit '") + c + "'", offset + i);
    if (d >= p_) throw ParseError(std::string("digit '") + c + "' out of range for p=" + std::to_string(p_), offset + i);
    r += d * pw_[i];
  }
  return r;
}

std::string FieldCtx::name() const {
  std::string s = "GF(" + std::to_string(p_) + "^" + std::to_string(e_) + ")";
  if (bd_ != 1) s += "[q=" + std::to_string(p_) + "^" + std::to_string(bd_) + "]";
  return s;
}

}  // namespace dltrace
