#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dltrace/poly.hpp"

namespace dltrace {

/// Dense matrix over a finite field, row-major.
class Mat {
 public:
  Mat(const FieldCtx& f, int rows, int cols) : f_(&f), r_(rows), c_(cols), a_(static_cast<std::size_t>(rows) * cols, 0) {}

  static Mat identity(const FieldCtx& f, int n);
  static Mat from_ints(const FieldCtx& f, const std::vector<std::vector<std::int64_t>>& rows);
  static Mat column(const FieldCtx& f, const std::vector<Elem>& v);

  const FieldCtx& field() const { return *f_; }
  int rows() const { return r_; }
  int cols() const { return c_; }
  Elem& at(int i, int j) { return a_[static_cast<std::size_t>(i) * c_ + j]; }
  Elem operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * c_ + j]; }

  Mat operator+(const Mat& o) const;
  Mat operator-(const Mat& o) const;
  Mat operator*(const Mat& o) const;
  bool operator==(const Mat& o) const { return f_ == o.f_ && r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }
  bool operator!=(const Mat& o) const { return !(*this == o); }

  Mat scale(Elem s) const;
  Mat transpose() const;
  Mat frobenius(int steps) const;
  Mat col(int j) const;
  Mat cols_range(int j0, int j1) const;
  Mat hcat(const Mat& o) const;
  Mat submatrix(const std::vector<int>& rows, const std::vector<int>& cols) const;
  std::vector<Elem> column_vec(int j) const;

  // Reduced row echelon form; pivots receives pivot columns.
  Mat rref(std::vector<int>* pivots = nullptr) const;
  int rank() const;
  // Basis of {x : A x = 0} as the columns of the result (cols() == nullity).
  Mat nullspace() const;
  Elem det() const;
  Mat inverse() const;
  bool is_zero() const;

  std::string format() const;

 private:
  void check(const Mat& o, const char* op) const;

  const FieldCtx* f_;
  int r_, c_;
  std::vector<Elem> a_;
};

Mat companion(const Poly& f);
Mat eval_poly(const Poly& p, const Mat& a);
Poly char_poly(const Mat& a);
Poly min_poly(const Mat& a);
// Block diagonal sum.
Mat block_diag(const Mat& a, const Mat& b);
// Column span of `sub` is contained in column span of `space`.
bool col_span_contains(const Mat& space, const Mat& sub);

// Text format: header "p^e r c" then r*c element tokens, row-major.
Mat parse_matrix(std::string_view text, int base_degree = 0);
std::string format_matrix(const Mat& m);

}  // namespace dltrace
