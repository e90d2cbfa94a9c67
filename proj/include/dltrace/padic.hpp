#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "dltrace/field.hpp"
#include "dltrace/matrix.hpp"
#include "dltrace/poly.hpp"

namespace dltrace {

/// Z_p (e = 1) or the unramified quadratic O_E = Z_p[sqrt(delta)] (e = 2),
/// delta the least non-square mod p. Uniformizer p, residue field F_p or F_{p^2}.
/// Elements are carried modulo p^N; every element records how many digits are
/// known, and results that cannot be certified raise PrecisionError.
struct PadicCtx {
  std::uint64_t p = 3;
  int e = 2;
  int N = 32;
  std::uint64_t delta = 0;
  const FieldCtx* residue = nullptr;
  Elem sqrt_delta = 0;  // image of sqrt(delta) in the residue field

  // Precision defaults to DLTRACE_PRECISION when set, else 32.
  static PadicCtx make(std::uint64_t p, int e, int N = 0);
  static int default_precision();
  mpz_class ppow(int k) const;
};

struct Padic {
  mpz_class a, b;  // a + b sqrt(delta), both reduced mod p^prec
  int prec = 0;
};

Padic padic_int(const PadicCtx& c, long v);
Padic padic_add(const PadicCtx& c, const Padic& x, const Padic& y);
Padic padic_sub(const PadicCtx& c, const Padic& x, const Padic& y);
Padic padic_neg(const PadicCtx& c, const Padic& x);
Padic padic_mul(const PadicCtx& c, const Padic& x, const Padic& y);
Padic padic_conj(const PadicCtx& c, const Padic& x);
// Valuation; returns x.prec when x vanishes to its known precision.
int padic_val(const PadicCtx& c, const Padic& x);
bool padic_is_zero(const PadicCtx& c, const Padic& x);
Padic padic_unit_inv(const PadicCtx& c, const Padic& x);
// x / p^k for x divisible by p^k; precision drops by k.
Padic padic_shift_down(const PadicCtx& c, const Padic& x, int k);
Elem padic_residue(const PadicCtx& c, const Padic& x);
Padic padic_lift(const PadicCtx& c, Elem r);

// Text: base-p digits low-first, each digit e characters (the residue-field
// element format), comma separated, then "@prec". Example for e = 2:
// "10,01@8" = 1 + sqrt(delta) p.
Padic parse_padic(const PadicCtx& c, std::string_view s, std::size_t offset = 0);
std::string format_padic(const PadicCtx& c, const Padic& x);

struct PMat {
  int rows = 0, cols = 0;
  std::vector<Padic> v;
  Padic& at(int i, int j) { return v[static_cast<std::size_t>(i) * cols + j]; }
  const Padic& operator()(int i, int j) const { return v[static_cast<std::size_t>(i) * cols + j]; }
};

PMat pmat_zero(const PadicCtx& c, int r, int k);
PMat pmat_identity(const PadicCtx& c, int n);
PMat pmat_mul(const PadicCtx& c, const PMat& A, const PMat& B);
PMat pmat_sub(const PadicCtx& c, const PMat& A, const PMat& B);
PMat pmat_transpose(const PMat& A);
PMat pmat_conj(const PadicCtx& c, const PMat& A);
bool pmat_is_zero(const PadicCtx& c, const PMat& A);
Mat pmat_residue(const PadicCtx& c, const PMat& A);
// Header "p^e r c" then r*c padic tokens, row-major.
PMat parse_pmat(const PadicCtx& c, std::string_view text);
std::string format_pmat(const PadicCtx& c, const PMat& A);
// Coefficients c_0..c_{n-1}, 1 of det(lambda - A), division free.
std::vector<Padic> pmat_charpoly(const PadicCtx& c, const PMat& A);

struct SmithForm {
  std::vector<int> val;  // valuation of the i-th diagonal entry
  PMat V;                // unimodular column transform: U A V diagonal
};
SmithForm smith_form(const PadicCtx& c, const PMat& A);
// Valuations of the elementary divisors, sorted descending.
std::vector<int> smith_invariants(const PadicCtx& c, const PMat& A);

/// L(g) = span of u, g u, ..., g^{n-1} u with its Hermitian Gram matrix.
/// Coordinates in the Krylov basis: g acts by the companion matrix of its
/// characteristic polynomial, and L^vee = sigma(V) diag(p^{-r_i}) with V from
/// the Smith form of the Gram matrix.
struct LatticeData {
  PMat basis;                   // columns g^k u
  PMat gram;                    // basis^T H sigma(basis)
  PMat dual;                    // sigma(V); column i scaled by p^{-r_i} spans L^vee
  std::vector<int> r_by_column; // r for each column of dual
  std::vector<int> inv;         // r_1 >= ... >= r_n
  bool minuscule = false;       // r_1 = 1 and r_n >= 0
  std::vector<Padic> charpoly;  // of g, low-first without the leading 1
  bool unitary = false;
};

LatticeData lattice_of_g(const PadicCtx& c, const PMat& g, const PMat& u, const PMat& H);
std::pair<std::vector<int>, bool> invariant_and_minuscule(const LatticeData& d);

struct ResidueSpace {
  int dim = 0;
  Mat gram;   // induced Hermitian form p [x, y] mod p
  Mat gbar;
  Poly f;     // char poly of gbar
};

ResidueSpace residue_space(const PadicCtx& c, const LatticeData& d);

// Intersection numbers; nullopt is the empty intersection.
std::optional<long long> afl_int(const Poly& f);
std::optional<long long> gspin_int(const Poly& f);

struct AflReport {
  bool ok = false;
  std::string failed_stage;  // lattice, invariant, residue, intersection
  std::string error;
  int exit_code = 0;
  std::vector<int> inv;
  bool minuscule = false;
  int dim_v = -1;
  std::optional<Poly> f_gbar;
  std::optional<long long> intersection;
  std::optional<long long> closed_form;
  std::vector<std::string> flags;  // degenerate conventions applied
};

AflReport afl_pipeline(const PadicCtx& c, const PMat& g, const PMat& u, const PMat& H);
nlohmann::json afl_report_json(const PadicCtx& c, const AflReport& r);

/// Minuscule test instance: a unitary g on E^n with a Hermitian form whose
/// Krylov lattice has inv = (1^k, 0^{n-k}), built as a block lift of random
/// residue isometries followed by a random unimodular change of basis.
struct AflInstance {
  PMat g, u, H;
  std::vector<int> inv;
  Mat gbar_block;  // residue of the k-dimensional block
};

AflInstance synthesize_minuscule(const PadicCtx& c, int k, int n, std::uint64_t seed);

/// Reflection tau_v(x) = x - 2 [x, v] / [v, v] v on Z_p^n with the diagonal
/// Gram diag(p d_1, ..., p d_k, d_{k+1}, ..., d_n) (d_i units), so that
/// p L^vee is contained in L. val is the valuation of [v, v] (0 or 1).
struct LatticeReflection {
  PMat v;
  int val = 0;
};

struct DeterminantCheck {
  Elem det = 0;       // det of h on L^vee / L
  int val_one = 0;    // reflections with val [v, v] = 1
  bool parity_ok = false;
  bool ok = false;    // det = 1
};

PMat reflection_matrix(const PadicCtx& c, const PMat& gram, const LatticeReflection& r);
DeterminantCheck residual_determinant_check(const PadicCtx& c, const PMat& gram, int k,
                                            const std::vector<LatticeReflection>& refl);
// Gram matrix and a random product of `count` lattice-stabilizing reflections.
std::pair<PMat, std::vector<LatticeReflection>> random_reflection_product(const PadicCtx& c, int n, int k,
                                                                           int count, std::uint64_t seed);

}  // namespace dltrace
