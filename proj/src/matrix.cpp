#include "dltrace/matrix.hpp"

#include <cctype>
#include <sstream>

namespace dltrace {

Mat Mat::identity(const FieldCtx& f, int n) {
  Mat m(f, n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Mat Mat::from_ints(const FieldCtx& f, const std::vector<std::vector<std::int64_t>>& rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r ? static_cast<int>(rows[0].size()) : 0;
  Mat m(f, r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m.at(i, j) = f.from_int(rows[i][j]);
  return m;
}

Mat Mat::column(const FieldCtx& f, const std::vector<Elem>& v) {
  Mat m(f, static_cast<int>(v.size()), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m.at(static_cast<int>(i), 0) = v[i];
  return m;
}

void Mat::check(const Mat& o, const char* op) const {
  if (f_ != o.f_) throw FieldMismatchError(std::string("matrix ") + op + " across fields");
}

Mat Mat::operator+(const Mat& o) const {
  check(o, "+");
  if (r_ != o.r_ || c_ != o.c_) throw PreconditionError("matrix + shape mismatch");
  Mat m(*f_, r_, c_);
  for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = f_->add(a_[k], o.a_[k]);
  return m;
}

Mat Mat::operator-(const Mat& o) const {
  check(o, "-");
  if (r_ != o.r_ || c_ != o.c_) throw PreconditionError("matrix - shape mismatch");
  Mat m(*f_, r_, c_);
  for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = f_->sub(a_[k], o.a_[k]);
  return m;
}

Mat Mat::operator*(const Mat& o) const {
  check(o, "*");
  if (c_ != o.r_) throw PreconditionError("matrix * shape mismatch");
  Mat m(*f_, r_, o.c_);
  for (int i = 0; i < r_; ++i)
    for (int k = 0; k < c_; ++k) {
      const Elem a = (*this)(i, k);
      if (a == 0) continue;
      for (int j = 0; j < o.c_; ++j) {
        const Elem b = o(k, j);
        if (b) m.at(i, j) = f_->add(m(i, j), f_->mul(a, b));
      }
    }
  return m;
}

Mat Mat::scale(Elem s) const {
  Mat m = *this;
  for (auto& v : m.a_) v = f_->mul(v, s);
  return m;
}

Mat Mat::transpose() const {
  Mat m(*f_, c_, r_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) m.at(j, i) = (*this)(i, j);
  return m;
}

Mat Mat::frobenius(int steps) const {
  Mat m = *this;
  for (auto& v : m.a_) v = f_->frobenius(v, steps);
  return m;
}

Mat Mat::col(int j) const { return cols_range(j, j + 1); }

Mat Mat::cols_range(int j0, int j1) const {
  Mat m(*f_, r_, j1 - j0);
  for (int i = 0; i < r_; ++i)
    for (int j = j0; j < j1; ++j) m.at(i, j - j0) = (*this)(i, j);
  return m;
}

Mat Mat::hcat(const Mat& o) const {
  check(o, "hcat");
  if (r_ != o.r_) throw PreconditionError("hcat row mismatch");
  Mat m(*f_, r_, c_ + o.c_);
  for (int i = 0; i < r_; ++i) {
    for (int j = 0; j < c_; ++j) m.at(i, j) = (*this)(i, j);
    for (int j = 0; j < o.c_; ++j) m.at(i, c_ + j) = o(i, j);
  }
  return m;
}

Mat Mat::submatrix(const std::vector<int>& rows, const std::vector<int>& cols) const {
  Mat m(*f_, static_cast<int>(rows.size()), static_cast<int>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) m.at(static_cast<int>(i), static_cast<int>(j)) = (*this)(rows[i], cols[j]);
  return m;
}

std::vector<Elem> Mat::column_vec(int j) const {
  std::vector<Elem> v(r_);
  for (int i = 0; i < r_; ++i) v[i] = (*this)(i, j);
  return v;
}

bool Mat::is_zero() const {
  for (Elem v : a_)
    if (v) return false;
  return true;
}

Mat Mat::rref(std::vector<int>* pivots) const {
  Mat m = *this;
  std::vector<int> piv;
  int row = 0;
  for (int c = 0; c < c_ && row < r_; ++c) {
    int s = -1;
    for (int i = row; i < r_; ++i)
      if (m(i, c)) {
        s = i;
        break;
      }
    if (s < 0) continue;
    if (s != row)
      for (int j = 0; j < c_; ++j) std::swap(m.at(s, j), m.at(row, j));
    const Elem iv = f_->inv(m(row, c));
    for (int j = c; j < c_; ++j) m.at(row, j) = f_->mul(m(row, j), iv);
    for (int i = 0; i < r_; ++i) {
      if (i == row) continue;
      const Elem x = m(i, c);
      if (!x) continue;
      for (int j = c; j < c_; ++j) m.at(i, j) = f_->sub(m(i, j), f_->mul(x, m(row, j)));
    }
    piv.push_back(c);
    ++row;
  }
  if (pivots) *pivots = std::move(piv);
  return m;
}

int Mat::rank() const {
  std::vector<int> piv;
  rref(&piv);
  return static_cast<int>(piv.size());
}

Mat Mat::nullspace() const {
  std::vector<int> piv;
  Mat m = rref(&piv);
  std::vector<bool> is_piv(c_, false);
  for (int c : piv) is_piv[c] = true;
  std::vector<int> free;
  for (int c = 0; c < c_; ++c)
    if (!is_piv[c]) free.push_back(c);
  Mat out(*f_, c_, static_cast<int>(free.size()));
  for (std::size_t k = 0; k < free.size(); ++k) {
    out.at(free[k], static_cast<int>(k)) = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) out.at(piv[i], static_cast<int>(k)) = f_->neg(m(static_cast<int>(i), free[k]));
  }
  return out;
}

Elem Mat::det() const {
  if (r_ != c_) throw PreconditionError("determinant of a non-square matrix");
  Mat m = *this;
  Elem d = 1;
  for (int c = 0; c < c_; ++c) {
    int s = -1;
    for (int i = c; i < r_; ++i)
      if (m(i, c)) {
        s = i;
        break;
      }
    if (s < 0) return 0;
    if (s != c) {
      for (int j = 0; j < c_; ++j) std::swap(m.at(s, j), m.at(c, j));
      d = f_->neg(d);
    }
    d = f_->mul(d, m(c, c));
    const Elem iv = f_->inv(m(c, c));
    for (int i = c + 1; i < r_; ++i) {
      const Elem x = f_->mul(m(i, c), iv);
      if (!x) continue;
      for (int j = c; j < c_; ++j) m.at(i, j) = f_->sub(m(i, j), f_->mul(x, m(c, j)));
    }
  }
  return d;
}

Mat Mat::inverse() const {
  if (r_ != c_) throw PreconditionError("inverse of a non-square matrix");
  std::vector<int> piv;
  Mat m = hcat(identity(*f_, r_)).rref(&piv);
  if (static_cast<int>(piv.size()) < r_ || piv[r_ - 1] >= r_) throw PreconditionError("matrix is singular");
  return m.cols_range(r_, 2 * r_);
}

std::string Mat::format() const { return format_matrix(*this); }

Mat companion(const Poly& f) {
  const FieldCtx& F = f.field();
  const Poly g = f.monic();
  const int n = g.degree();
  Mat m(F, n, n);
  for (int i = 1; i < n; ++i) m.at(i, i - 1) = 1;
  for (int i = 0; i < n; ++i) m.at(i, n - 1) = F.neg(g[i]);
  return m;
}

Mat eval_poly(const Poly& p, const Mat& a) {
  const FieldCtx& F = a.field();
  Mat r(F, a.rows(), a.cols());
  for (int i = p.degree(); i >= 0; --i) {
    r = r * a;
    for (int k = 0; k < a.rows(); ++k) r.at(k, k) = F.add(r(k, k), p[i]);
  }
  return r;
}

Poly char_poly(const Mat& a0) {
  const FieldCtx& F = a0.field();
  const int n = a0.rows();
  if (n != a0.cols()) throw PreconditionError("characteristic polynomial of a non-square matrix");
  Mat h = a0;
  // reduce to upper Hessenberg form by similarity
  for (int k = 0; k + 2 < n; ++k) {
    int s = -1;
    for (int i = k + 1; i < n; ++i)
      if (h(i, k)) {
        s = i;
        break;
      }
    if (s < 0) continue;
    if (s != k + 1) {
      for (int j = 0; j < n; ++j) std::swap(h.at(s, j), h.at(k + 1, j));
      for (int i = 0; i < n; ++i) std::swap(h.at(i, s), h.at(i, k + 1));
    }
    const Elem iv = F.inv(h(k + 1, k));
    for (int i = k + 2; i < n; ++i) {
      const Elem u = F.mul(h(i, k), iv);
      if (!u) continue;
      for (int j = 0; j < n; ++j) h.at(i, j) = F.sub(h(i, j), F.mul(u, h(k + 1, j)));
      for (int r = 0; r < n; ++r) h.at(r, k + 1) = F.add(h(r, k + 1), F.mul(u, h(r, i)));
    }
  }
  std::vector<Poly> pk;
  pk.reserve(n + 1);
  pk.push_back(Poly::constant(F, 1));
  const Poly x = Poly::x(F);
  for (int m = 1; m <= n; ++m) {
    Poly cur = (x - Poly::constant(F, h(m - 1, m - 1))) * pk[m - 1];
    Elem prod = 1;
    for (int i = m - 1; i >= 1; --i) {
      prod = F.mul(prod, h(i, i - 1));
      if (!prod) break;
      const Elem coef = F.mul(h(i - 1, m - 1), prod);
      if (coef) cur = cur - pk[i - 1].scale(coef);
    }
    pk.push_back(std::move(cur));
  }
  return pk[n];
}

Poly min_poly(const Mat& a) {
  const FieldCtx& F = a.field();
  const int n = a.rows();
  const int nn = n * n;
  struct Row {
    std::vector<Elem> v;
    std::vector<Elem> coef;
    int piv;
  };
  std::vector<Row> basis;
  Mat pw = Mat::identity(F, n);
  for (int k = 0; k <= n; ++k) {
    std::vector<Elem> v(nn);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) v[i * n + j] = pw(i, j);
    std::vector<Elem> coef(n + 1, 0);
    coef[k] = 1;
    for (const auto& r : basis) {
      const Elem x = v[r.piv];
      if (!x) continue;
      for (int t = 0; t < nn; ++t) v[t] = F.sub(v[t], F.mul(x, r.v[t]));
      for (int t = 0; t <= n; ++t) coef[t] = F.sub(coef[t], F.mul(x, r.coef[t]));
    }
    int piv = -1;
    for (int t = 0; t < nn; ++t)
      if (v[t]) {
        piv = t;
        break;
      }
    if (piv < 0) return Poly(F, coef).monic();
    const Elem iv = F.inv(v[piv]);
    for (auto& x : v) x = F.mul(x, iv);
    for (auto& x : coef) x = F.mul(x, iv);
    basis.push_back({std::move(v), std::move(coef), piv});
    pw = pw * a;
  }
  throw Error("minimal polynomial search exceeded the dimension");
}

Mat block_diag(const Mat& a, const Mat& b) {
  Mat m(a.field(), a.rows() + b.rows(), a.cols() + b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m.at(i, j) = a(i, j);
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) m.at(a.rows() + i, a.cols() + j) = b(i, j);
  return m;
}

bool col_span_contains(const Mat& space, const Mat& sub) {
  return space.hcat(sub).rank() == space.rank();
}

Mat parse_matrix(std::string_view text, int base_degree) {
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size()) {
      if (std::isspace(static_cast<unsigned char>(text[i]))) {
        ++i;
      } else if (text[i] == '#') {
        while (i < text.size() && text[i] != '\n') ++i;
      } else {
        break;
      }
    }
  };
  auto token = [&](const char* what) {
    skip();
    const std::size_t s = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (s == i) throw ParseError(std::string("expected ") + what, s);
    return std::make_pair(std::string(text.substr(s, i - s)), s);
  };
  auto [hdr, hpos] = token("field header p^e");
  const auto caret = hdr.find('^');
  if (caret == std::string::npos) throw ParseError("field header must look like p^e", hpos);
  std::uint64_t p = 0;
  int e = 0;
  try {
    p = std::stoull(hdr.substr(0, caret));
    e = std::stoi(hdr.substr(caret + 1));
  } catch (const std::exception&) {
    throw ParseError("bad field header '" + hdr + "'", hpos);
  }
  const FieldCtx* fp;
  try {
    fp = &FieldCtx::get(p, e, base_degree == 0 ? e : base_degree);
  } catch (const PreconditionError& ex) {
    throw ParseError(ex.what(), hpos);
  }
  auto dim = [&](const char* what) {
    auto [t, pos] = token(what);
    try {
      const int v = std::stoi(t);
      if (v < 0 || v > 64) throw std::out_of_range("dim");
      return v;
    } catch (const std::exception&) {
      throw ParseError(std::string("bad ") + what + " '" + t + "'", pos);
    }
  };
  const int r = dim("row count");
  const int c = dim("column count");
  Mat m(*fp, r, c);
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < c; ++b) {
      auto [t, pos] = token("matrix entry");
      m.at(a, b) = fp->parse(t, pos);
    }
  skip();
  if (i != text.size()) throw ParseError("trailing input after matrix", i);
  return m;
}

std::string format_matrix(const Mat& m) {
  const FieldCtx& F = m.field();
  std::ostringstream os;
  os << F.p() << "^" << F.e() << " " << m.rows() << " " << m.cols() << "\n";
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) os << (j ? " " : "") << F.format(m(i, j));
    os << "\n";
  }
  return os.str();
}

}  // namespace dltrace
