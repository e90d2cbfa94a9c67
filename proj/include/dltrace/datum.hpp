#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dltrace/weyl.hpp"

namespace dltrace {

/// The four executable families.
enum class Family { EvenSO, OddSO, Sp, U };

std::string family_name(Family f);  // so-even, so-odd, sp, u
Family parse_family(std::string_view s);
std::vector<Family> all_families();

struct DynkinEdge {
  int a = 0, b = 0;
  int lines = 1;      // 1 single, 2 double
  int arrow_to = -1;  // short node of a double edge
};

/// Dynkin diagram with a diagram automorphism, J and the ordered chain L.
/// When `type` is set, node i is the simple reflection s_{i+1} of that
/// Weyl group and the sigma action on W is available.
struct SigmaDatum {
  std::string label;
  std::vector<std::string> nodes;
  std::vector<DynkinEdge> edges;
  std::vector<int> sigma;
  std::vector<int> J;
  std::vector<int> L;
  std::optional<std::pair<CartanType, int>> type;

  int node_index(std::string_view name) const;
  bool adjacent(int a, int b) const;
  std::vector<int> orbit(int node) const;
  std::string node_list(const std::vector<int>& v) const;

  static SigmaDatum parse(std::string_view text);
  std::string format() const;
};

/// Raised when one of the unbranched-datum axioms fails; axiom() names it:
/// well-formed, sigma-preserves-diagram, complement-one-orbit,
/// L-connected-unbranched, L-orbit-representatives, end-node, disconnection.
class DatumAxiomError : public PreconditionError {
 public:
  DatumAxiomError(std::string axiom, const std::string& msg)
      : PreconditionError("axiom '" + axiom + "' violated: " + msg), axiom_(std::move(axiom)) {}
  const std::string& axiom() const { return axiom_; }

 private:
  std::string axiom_;
};

struct DatumDerived {
  std::vector<int> L;  // r_1 .. r_a with r_a outside J
  int a = 0;
  int i_max = 1;
  // w[i-1] = r_a r_{a-1} ... r_i as node indices; w[i_max-1] is empty
  std::vector<std::vector<int>> w;
  // per i (index i-1): flat, middle and sharp sets, sorted node indices
  std::vector<std::vector<int>> flat, mid, sharp;
  bool degenerate = false;  // empty diagram
};

DatumDerived validate_unbranched(const SigmaDatum& d);

// Concrete helpers for data with an attached Weyl group.
WeylGroup datum_weyl(const SigmaDatum& d);
SignedPerm datum_word(const SigmaDatum& d, const WeylGroup& W, const std::vector<int>& nodes);

std::string datum_json(const SigmaDatum& d, const DatumDerived& der);

struct TableRow {
  std::string tits;    // enhanced Tits datum column
  std::string group;   // group column, e.g. "2D_n"
  bool starred = false;
  bool degenerate = false;
  int min_rank = 0;    // smallest group rank instantiated
  int max_rank = 0;    // largest group rank instantiated by tests (fixed rows: min = max)
  std::function<SigmaDatum(int)> make;
};

const std::vector<TableRow>& table_one();

SigmaDatum dynkin(CartanType t, int rank);
SigmaDatum family_datum(Family f, int n);
int family_i_max(Family f, int n);

}  // namespace dltrace
