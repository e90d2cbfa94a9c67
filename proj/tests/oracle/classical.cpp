#include <algorithm>
#include <stdexcept>

#include "oracle.hpp"

namespace oracle {

using dltrace::Elem;
using dltrace::FieldCtx;
using dltrace::Mat;

namespace {

struct Scan {
  const FieldCtx& F;
  const Mat& G;
  bool herm;
  int N, k;
  const Mat* g;
  std::size_t cap;
  std::size_t visited = 0;
  std::vector<int> piv;
  std::vector<std::vector<Elem>> rows;
  std::vector<Mat> out;

  Elem form(const std::vector<Elem>& x, const std::vector<Elem>& y) const {
    Elem s = 0;
    for (int i = 0; i < N; ++i) {
      if (!x[i]) continue;
      for (int j = 0; j < N; ++j) {
        if (!y[j] || !G(i, j)) continue;
        const Elem yj = herm ? F.frobenius(y[j], 1) : y[j];
        s = F.add(s, F.mul(x[i], F.mul(G(i, j), yj)));
      }
    }
    return s;
  }

  bool is_pivot(int c) const {
    for (int p : piv)
      if (p == c) return true;
    return false;
  }

  void leaf() {
    Mat B(F, k, N);
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < N; ++c) B.at(r, c) = rows[r][c];
    if (g && k > 0) {
      // g acts on columns: need g b in the row space for every row b
      const Mat images = (*g * B.transpose()).transpose();
      Mat both(F, 2 * k, N);
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < N; ++c) {
          both.at(r, c) = B(r, c);
          both.at(k + r, c) = images(r, c);
        }
      if (both.rank() != k) return;
    }
    out.push_back(B);
  }

  // fill free entries of row r from column c on
  void fill(int r, int c) {
    if (++visited > cap) throw std::runtime_error("isotropic subspace scan exceeded its cap");
    if (c == N) {
      for (int j = 0; j <= r; ++j)
        if (form(rows[r], rows[j]) != 0) return;
      if (r + 1 == k) leaf();
      else fill(r + 1, piv[r + 1] + 1);
      return;
    }
    if (is_pivot(c)) {
      fill(r, c + 1);
      return;
    }
    for (Elem v = 0; v < F.order(); ++v) {
      rows[r][c] = v;
      fill(r, c + 1);
    }
    rows[r][c] = 0;
  }

  void choose(int r, int from) {
    if (r == k) {
      rows.assign(k, std::vector<Elem>(N, 0));
      for (int j = 0; j < k; ++j) rows[j][piv[j]] = 1;
      if (k == 0) leaf();
      else fill(0, piv[0] + 1);
      return;
    }
    for (int c = from; c <= N - (k - r); ++c) {
      piv.push_back(c);
      choose(r + 1, c + 1);
      piv.pop_back();
    }
  }
};

}  // namespace

std::vector<Mat> isotropic_subspaces(const Mat& gram, bool hermitian, int k, const Mat* g, std::size_t cap) {
  Scan s{gram.field(), gram, hermitian, gram.rows(), k, g, cap};
  s.choose(0, 0);
  return std::move(s.out);
}

bool regular_by_eigenspaces(const Mat& g) {
  const dltrace::Poly f = dltrace::char_poly(g);
  const FieldCtx& L = dltrace::splitting_field(f);
  const auto& emb = dltrace::Embedding::get(g.field(), L);
  Mat gl(L, g.rows(), g.cols());
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j) gl.at(i, j) = emb.apply(g(i, j));
  auto roots = dltrace::roots_in(f, L);
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  for (Elem r : roots) {
    Mat h = gl;
    for (int i = 0; i < g.rows(); ++i) h.at(i, i) = L.sub(h(i, i), r);
    if (g.rows() - h.rank() != 1) return false;
  }
  return true;
}

}  // namespace oracle
