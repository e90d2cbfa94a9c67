#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "dltrace/error.hpp"

namespace dltrace {

inline constexpr int kMaxWeylDim = 8;

/// Signed permutation of {±e_1, ..., ±e_n}: e_i -> sign * e_{|img[i]|-1}.
class SignedPerm {
 public:
  SignedPerm() = default;
  static SignedPerm identity(int n);
  // images given as ±(j+1)
  static SignedPerm from_images(const std::vector<int>& img);

  int dim() const { return n_; }
  // ±(j+1): e_i goes to sign * e_j
  int image(int i) const { return img_[i]; }
  int target(int i) const { return (img_[i] > 0 ? img_[i] : -img_[i]) - 1; }
  int sign(int i) const { return img_[i] > 0 ? 1 : -1; }

  SignedPerm operator*(const SignedPerm& o) const;  // (a*b)(v) = a(b(v))
  SignedPerm inverse() const;
  bool operator==(const SignedPerm& o) const { return key() == o.key(); }
  bool operator!=(const SignedPerm& o) const { return key() != o.key(); }
  bool operator<(const SignedPerm& o) const { return key() < o.key(); }

  std::vector<int> apply(const std::vector<int>& v) const;
  bool is_identity() const;
  int negative_count() const;
  // cycles of the underlying permutation with the product of signs along each,
  // sorted; e.g. "-3" for a negative 3-cycle
  std::vector<int> signed_cycle_type() const;
  std::string str() const;

  std::uint64_t key() const;

 private:
  std::array<std::int8_t, kMaxWeylDim> img_{};
  std::uint8_t n_ = 0;
};

struct SignedPermHash {
  std::size_t operator()(const SignedPerm& w) const { return std::hash<std::uint64_t>{}(w.key()); }
};
using PermSet = std::unordered_set<SignedPerm, SignedPermHash>;

enum class CartanType { A, B, C, D };
char cartan_letter(CartanType t);
CartanType parse_cartan(char c);

using Root = std::vector<int>;

/// Finite Weyl group of classical type in its signed-permutation model, with
/// Bourbaki numbering of the simple reflections (index 0 is s_1).
///   A_n: permutations of n+1 coordinates, alpha_i = e_i - e_{i+1}
///   B_n: alpha_n = e_n;  C_n: alpha_n = 2e_n;  D_n: alpha_n = e_{n-1} + e_n
class WeylGroup {
 public:
  static constexpr std::uint64_t kMaxOrder = 5040;

  WeylGroup(CartanType t, int rank);

  CartanType type() const { return type_; }
  int rank() const { return rank_; }
  int dim() const { return dim_; }
  std::string name() const;
  std::uint64_t order() const;

  const SignedPerm& simple(int i) const { return simple_[i]; }
  const Root& simple_root(int i) const { return simple_roots_[i]; }
  const std::vector<Root>& positive_roots() const { return positive_roots_; }
  int cartan(int i, int j) const;

  bool contains(const SignedPerm& w) const;
  static bool is_positive(const Root& r);
  SignedPerm reflection(const Root& r) const;

  int length(const SignedPerm& w) const;
  bool is_right_descent(const SignedPerm& w, int s) const;
  bool is_left_descent(const SignedPerm& w, int s) const;
  // lexicographically least reduced word, as simple-reflection indices
  std::vector<int> reduced_word(const SignedPerm& w) const;
  SignedPerm from_word(const std::vector<int>& word) const;
  std::string word_string(const SignedPerm& w) const;

  // all elements, sorted by (length, reduced word); throws above kMaxOrder
  const std::vector<SignedPerm>& elements() const;
  std::vector<SignedPerm> parabolic(const std::vector<int>& J) const;
  // {w : no left descent in J}
  std::vector<SignedPerm> min_coset_reps(const std::vector<int>& J) const;
  bool bruhat_leq(const SignedPerm& u, const SignedPerm& w) const;

  // Diagram automorphism applied through reduced words: s_i -> s_{perm[i]}.
  SignedPerm twist(const SignedPerm& w, const std::vector<int>& perm) const;
  // {w in ^J W : u w sigma(u)^{-1} <= w1 for some u in W_J}
  std::vector<SignedPerm> closure_set(const std::vector<int>& sigma, const std::vector<int>& J,
                                      const SignedPerm& w1) const;

  std::vector<SignedPerm> sort_by_length(std::vector<SignedPerm> v) const;

 private:
  void require_small(const char* what) const;

  CartanType type_;
  int rank_;
  int dim_;
  std::vector<Root> simple_roots_;
  std::vector<SignedPerm> simple_;
  std::vector<Root> positive_roots_;
  mutable std::vector<SignedPerm> elements_;
};

// Subgroup generated by the given elements (BFS closure).
PermSet generated_subgroup(const std::vector<SignedPerm>& gens, int dim);

}  // namespace dltrace
