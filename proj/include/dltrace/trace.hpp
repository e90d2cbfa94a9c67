#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dltrace/classical.hpp"
#include "dltrace/poly.hpp"

namespace dltrace {

/// Closed-form value of the trace for a characteristic polynomial, with the
/// case that decided it.
///
/// clause is one of
///   unique-odd-factor    a unique odd-multiplicity SR factor Q0 (not lambda+-1)
///   all-even             so-odd / sp formula without such a factor
///   no-odd-factor        so-even / u: nothing of odd multiplicity -> 0
///   several-odd-factors  two or more odd SR factors -> 0
///   eigenvalue-minus-one so-even / so-odd with lambda+1 | f -> 0
///   eigenvalue-one       so-even with lambda-1 | f -> 0
///   even-lambda-minus-one so-odd with m(lambda-1) even -> 0
///   odd-central-factor   sp with the unique odd factor lambda+-1 -> 0
struct ClosedForm {
  long long value = 0;
  std::string clause;
  std::optional<Poly> q0;
  int m_q0 = 0;
  long long script_m = 1;
};

ClosedForm trace_closed_form(SpaceKind kind, const Poly& f);

// One contributing torus class at a stratum, or a stratum with none.
struct TraceRow {
  int i = 1;
  int np = 0;                   // n' = n + 1 - i
  std::size_t witnesses = 0;    // all invariant flags at this stratum
  std::optional<Poly> shape;    // char poly of gamma on the Levi quotient
  long long count = 0;          // flags whose quotient has this shape
  long long T = 0;
  long long product = 0;
};

struct Rejection {
  int i = 1;
  Poly U;
  Poly quotient;
  std::string clause;
};

struct TraceReport {
  SpaceKind kind;
  int n = 0;
  std::uint64_t q = 0;
  Poly f;
  std::vector<TraceRow> rows;
  std::vector<Rejection> rejected;
  long long total = 0;
  ClosedForm closed;

  int contributing_strata() const;
  bool agrees() const { return total == closed.value; }
};

// Sum over strata and invariant flags of the torus counts.
TraceReport trace_engine(const ClassicalSpace& s, const Mat& g);

// In unique-Q0 runs the contributing strata number (m_Q0 + 1) / 2 and their
// quotient multiplicities are 1, 3, ..., m_Q0. True when not applicable.
bool stratum_count_check(const TraceReport& r);

// Shape filter for a Levi quotient; empty string when accepted.
std::string quotient_clause(SpaceKind kind, int np, const Poly& quotient);

nlohmann::json closed_form_json(const ClosedForm& c);
nlohmann::json report_json(const TraceReport& r);

}  // namespace dltrace
