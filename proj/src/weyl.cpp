#include "dltrace/weyl.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace dltrace {

SignedPerm SignedPerm::identity(int n) {
  if (n < 0 || n > kMaxWeylDim) throw PreconditionError("signed permutation dimension out of range");
  SignedPerm w;
  w.n_ = static_cast<std::uint8_t>(n);
  for (int i = 0; i < n; ++i) w.img_[i] = static_cast<std::int8_t>(i + 1);
  return w;
}

SignedPerm SignedPerm::from_images(const std::vector<int>& img) {
  const int n = static_cast<int>(img.size());
  SignedPerm w = identity(n);
  std::vector<bool> seen(n, false);
  for (int i = 0; i < n; ++i) {
    const int a = img[i] > 0 ? img[i] : -img[i];
    if (a < 1 || a > n || seen[a - 1]) throw PreconditionError("not a signed permutation");
    seen[a - 1] = true;
    w.img_[i] = static_cast<std::int8_t>(img[i]);
  }
  return w;
}

SignedPerm SignedPerm::operator*(const SignedPerm& o) const {
  SignedPerm r;
  r.n_ = n_;
  for (int i = 0; i < n_; ++i) {
    const int j = o.target(i);
    r.img_[i] = static_cast<std::int8_t>(o.sign(i) * img_[j]);
  }
  return r;
}

SignedPerm SignedPerm::inverse() const {
  SignedPerm r;
  r.n_ = n_;
  for (int i = 0; i < n_; ++i) r.img_[target(i)] = static_cast<std::int8_t>(sign(i) * (i + 1));
  return r;
}

std::vector<int> SignedPerm::apply(const std::vector<int>& v) const {
  std::vector<int> r(n_, 0);
  for (int i = 0; i < n_; ++i) r[target(i)] = sign(i) * v[i];
  return r;
}

bool SignedPerm::is_identity() const {
  for (int i = 0; i < n_; ++i)
    if (img_[i] != i + 1) return false;
  return true;
}

int SignedPerm::negative_count() const {
  int c = 0;
  for (int i = 0; i < n_; ++i) c += img_[i] < 0;
  return c;
}

std::vector<int> SignedPerm::signed_cycle_type() const {
  std::vector<bool> seen(n_, false);
  std::vector<int> out;
  for (int i = 0; i < n_; ++i) {
    if (seen[i]) continue;
    int len = 0, sg = 1, j = i;
    while (!seen[j]) {
      seen[j] = true;
      sg *= sign(j);
      j = target(j);
      ++len;
    }
    out.push_back(sg * len);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string SignedPerm::str() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < n_; ++i) os << (i ? " " : "") << static_cast<int>(img_[i]);
  os << "]";
  return os.str();
}

std::uint64_t SignedPerm::key() const {
  std::uint64_t k = n_;
  for (int i = 0; i < n_; ++i) k = (k << 5) | static_cast<std::uint64_t>(img_[i] + 16);
  return k;
}

char cartan_letter(CartanType t) {
  switch (t) {
    case CartanType::A: return 'A';
    case CartanType::B: return 'B';
    case CartanType::C: return 'C';
    case CartanType::D: return 'D';
  }
  return '?';
}

CartanType parse_cartan(char c) {
  switch (c) {
    case 'A': return CartanType::A;
    case 'B': return CartanType::B;
    case 'C': return CartanType::C;
    case 'D': return CartanType::D;
    default: throw PreconditionError(std::string("unknown Cartan type '") + c + "'");
  }
}

namespace {

int dot(const Root& a, const Root& b) {
  int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Root unit(int dim, int i, int c = 1) {
  Root r(dim, 0);
  r[i] = c;
  return r;
}

Root diff(int dim, int i, int j, int sj) {
  Root r(dim, 0);
  r[i] = 1;
  r[j] = sj;
  return r;
}

}  // namespace

WeylGroup::WeylGroup(CartanType t, int rank) : type_(t), rank_(rank) {
  if (rank < 1 && !(t == CartanType::A && rank == 0)) throw PreconditionError("Weyl group rank must be positive");
  dim_ = t == CartanType::A ? rank + 1 : rank;
  if (dim_ > kMaxWeylDim) throw PreconditionError("Weyl group rank too large for the signed-permutation model");
  const int chain = t == CartanType::A ? rank : rank - 1;
  for (int i = 0; i < chain; ++i) simple_roots_.push_back(diff(dim_, i, i + 1, -1));
  if (t == CartanType::B) simple_roots_.push_back(unit(dim_, rank - 1));
  if (t == CartanType::C) simple_roots_.push_back(unit(dim_, rank - 1, 2));
  // D_1 has no roots: the trivial group on one coordinate
  if (t == CartanType::D && rank >= 2) simple_roots_.push_back(diff(dim_, rank - 2, rank - 1, 1));
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j) {
      positive_roots_.push_back(diff(dim_, i, j, -1));
      if (t != CartanType::A) positive_roots_.push_back(diff(dim_, i, j, 1));
    }
  if (t == CartanType::B)
    for (int i = 0; i < dim_; ++i) positive_roots_.push_back(unit(dim_, i));
  if (t == CartanType::C)
    for (int i = 0; i < dim_; ++i) positive_roots_.push_back(unit(dim_, i, 2));
  for (const auto& r : simple_roots_) simple_.push_back(reflection(r));
  rank_ = static_cast<int>(simple_roots_.size());
}

std::string WeylGroup::name() const {
  return std::string(1, cartan_letter(type_)) + std::to_string(type_ == CartanType::A ? rank_ : dim_);
}

std::uint64_t WeylGroup::order() const {
  std::uint64_t f = 1;
  for (int i = 2; i <= dim_; ++i) f *= static_cast<std::uint64_t>(i);
  switch (type_) {
    case CartanType::A: return f;
    case CartanType::B:
    case CartanType::C: return f << dim_;
    case CartanType::D: return dim_ == 1 ? 1 : f << (dim_ - 1);
  }
  return f;
}

int WeylGroup::cartan(int i, int j) const {
  return 2 * dot(simple_roots_[i], simple_roots_[j]) / dot(simple_roots_[i], simple_roots_[i]);
}

bool WeylGroup::contains(const SignedPerm& w) const {
  if (w.dim() != dim_) return false;
  if (type_ == CartanType::A) return w.negative_count() == 0;
  if (type_ == CartanType::D) return w.negative_count() % 2 == 0 && (dim_ > 1 || w.is_identity());
  return true;
}

bool WeylGroup::is_positive(const Root& r) {
  for (int v : r)
    if (v != 0) return v > 0;
  return false;
}

SignedPerm WeylGroup::reflection(const Root& r) const {
  const int rr = dot(r, r);
  std::vector<int> img(dim_);
  for (int i = 0; i < dim_; ++i) {
    Root v = unit(dim_, i);
    const int c = 2 * dot(r, v);
    if (c % rr != 0) throw PreconditionError("not a root of this group");
    for (int k = 0; k < dim_; ++k) v[k] -= c / rr * r[k];
    int tgt = -1;
    for (int k = 0; k < dim_; ++k)
      if (v[k] != 0) {
        if (tgt >= 0 || (v[k] != 1 && v[k] != -1)) throw PreconditionError("reflection is not a signed permutation");
        tgt = k;
      }
    img[i] = v[tgt] * (tgt + 1);
  }
  return SignedPerm::from_images(img);
}

int WeylGroup::length(const SignedPerm& w) const {
  int l = 0;
  for (const auto& r : positive_roots_)
    if (!is_positive(w.apply(r))) ++l;
  return l;
}

bool WeylGroup::is_right_descent(const SignedPerm& w, int s) const { return !is_positive(w.apply(simple_roots_[s])); }

bool WeylGroup::is_left_descent(const SignedPerm& w, int s) const {
  return !is_positive(w.inverse().apply(simple_roots_[s]));
}

std::vector<int> WeylGroup::reduced_word(const SignedPerm& w0) const {
  std::vector<int> word;
  SignedPerm w = w0;
  while (!w.is_identity()) {
    const SignedPerm wi = w.inverse();
    int s = 0;
    while (s < rank_ && is_positive(wi.apply(simple_roots_[s]))) ++s;
    if (s == rank_) throw Error("element outside the Weyl group: " + w0.str());
    word.push_back(s);
    w = simple_[s] * w;
  }
  return word;
}

SignedPerm WeylGroup::from_word(const std::vector<int>& word) const {
  SignedPerm w = SignedPerm::identity(dim_);
  for (int s : word) {
    if (s < 0 || s >= rank_) throw PreconditionError("simple reflection index out of range");
    w = w * simple_[s];
  }
  return w;
}

std::string WeylGroup::word_string(const SignedPerm& w) const {
  const auto word = reduced_word(w);
  if (word.empty()) return "1";
  std::string s;
  for (int i : word) s += "s" + std::to_string(i + 1);
  return s;
}

void WeylGroup::require_small(const char* what) const {
  if (order() > kMaxOrder)
    throw PreconditionError(std::string(what) + ": group " + name() + " exceeds the exhaustive size cap of " +
                            std::to_string(kMaxOrder));
}

std::vector<SignedPerm> WeylGroup::sort_by_length(std::vector<SignedPerm> v) const {
  std::vector<std::pair<std::pair<int, std::vector<int>>, SignedPerm>> tagged;
  tagged.reserve(v.size());
  for (auto& w : v) {
    auto word = reduced_word(w);
    const int l = static_cast<int>(word.size());
    tagged.push_back({{l, std::move(word)}, w});
  }
  std::sort(tagged.begin(), tagged.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<SignedPerm> out;
  out.reserve(tagged.size());
  for (auto& t : tagged) out.push_back(t.second);
  return out;
}

const std::vector<SignedPerm>& WeylGroup::elements() const {
  if (elements_.empty()) {
    require_small("element enumeration");
    PermSet all = generated_subgroup(simple_, dim_);
    elements_ = sort_by_length(std::vector<SignedPerm>(all.begin(), all.end()));
  }
  return elements_;
}

std::vector<SignedPerm> WeylGroup::parabolic(const std::vector<int>& J) const {
  require_small("parabolic subgroup");
  std::vector<SignedPerm> gens;
  for (int s : J) gens.push_back(simple_.at(s));
  PermSet all = generated_subgroup(gens, dim_);
  return sort_by_length(std::vector<SignedPerm>(all.begin(), all.end()));
}

std::vector<SignedPerm> WeylGroup::min_coset_reps(const std::vector<int>& J) const {
  std::vector<SignedPerm> out;
  for (const auto& w : elements()) {
    bool ok = true;
    for (int s : J)
      if (is_left_descent(w, s)) {
        ok = false;
        break;
      }
    if (ok) out.push_back(w);
  }
  return out;
}

bool WeylGroup::bruhat_leq(const SignedPerm& u0, const SignedPerm& w0) const {
  if (u0.dim() != dim_ || w0.dim() != dim_ || !contains(u0) || !contains(w0))
    throw PreconditionError("Bruhat comparison needs two elements of " + name());
  SignedPerm u = u0, w = w0;
  while (!w.is_identity()) {
    int s = 0;
    while (!is_right_descent(w, s)) ++s;
    if (is_right_descent(u, s)) u = u * simple_[s];
    w = w * simple_[s];
  }
  return u.is_identity();
}

SignedPerm WeylGroup::twist(const SignedPerm& w, const std::vector<int>& perm) const {
  auto word = reduced_word(w);
  for (int& s : word) s = perm.at(s);
  return from_word(word);
}

std::vector<SignedPerm> WeylGroup::closure_set(const std::vector<int>& sigma, const std::vector<int>& J,
                                               const SignedPerm& w1) const {
  const auto WJ = parabolic(J);
  std::vector<std::pair<SignedPerm, SignedPerm>> conj;
  conj.reserve(WJ.size());
  for (const auto& u : WJ) conj.push_back({u, twist(u, sigma).inverse()});
  std::vector<SignedPerm> out;
  for (const auto& w : min_coset_reps(J)) {
    for (const auto& [u, su_inv] : conj) {
      if (bruhat_leq(u * w * su_inv, w1)) {
        out.push_back(w);
        break;
      }
    }
  }
  return out;
}

PermSet generated_subgroup(const std::vector<SignedPerm>& gens, int dim) {
  PermSet seen;
  std::deque<SignedPerm> todo;
  const SignedPerm e = SignedPerm::identity(dim);
  seen.insert(e);
  todo.push_back(e);
  while (!todo.empty()) {
    const SignedPerm x = todo.front();
    todo.pop_front();
    for (const auto& g : gens) {
      SignedPerm y = x * g;
      if (seen.insert(y).second) todo.push_back(y);
    }
  }
  return seen;
}

}  // namespace dltrace
