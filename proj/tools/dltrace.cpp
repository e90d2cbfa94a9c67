#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "dltrace/classical.hpp"
#include "dltrace/datum.hpp"
#include "dltrace/error.hpp"
#include "dltrace/padic.hpp"
#include "dltrace/reciprocal.hpp"
#include "dltrace/rng.hpp"
#include "dltrace/torus.hpp"
#include "dltrace/trace.hpp"
#include "dltrace/verify.hpp"

using namespace dltrace;
using nlohmann::json;

namespace {

constexpr int kExitZero = 5;  // zero trace or empty intersection

std::string fmt = "json";

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_text(const json& j, const std::string& indent) {
  for (const auto& [k, v] : j.items()) {
    if (v.is_object()) {
      std::cout << indent << k << ":\n";
      print_text(v, indent + "  ");
    } else if (v.is_array() && !v.empty() && v.front().is_object()) {
      std::cout << indent << k << ":\n";
      for (const auto& e : v) {
        std::cout << indent << "  -\n";
        print_text(e, indent + "    ");
      }
    } else {
      std::cout << indent << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    }
  }
}

void emit(json j) {
  if (!j.contains("schema")) j["schema"] = 1;
  if (fmt == "text") print_text(j, "");
  else std::cout << j.dump(2) << "\n";
}

int log_p(std::uint64_t q, std::uint64_t* p_out) {
  const auto pf = prime_factors(q);
  if (pf.size() != 1 || pf[0] == 2) throw PreconditionError("q must be an odd prime power");
  int bd = 0;
  for (std::uint64_t x = q; x > 1; x /= pf[0]) ++bd;
  if (p_out) *p_out = pf[0];
  return bd;
}

// Polynomial for a space over F_q (or F_{q^2} when conjugate), normalized to monic.
Poly read_space_poly(const std::string& spec, std::uint64_t q, bool conjugate) {
  std::uint64_t p = 0;
  const int bd = log_p(q, &p);
  const Poly f = parse_poly(spec, conjugate ? bd : 0);
  const FieldCtx& F = f.field();
  if (F.p() != p || F.e() != (conjugate ? 2 : 1) * bd)
    throw PreconditionError("polynomial is over F_" + std::to_string(F.q()) + ", expected F_" +
                            std::to_string(conjugate ? q * q : q));
  if (f.degree() < 0) throw PreconditionError("zero polynomial");
  return f.monic();
}

// ------------------------------------------------------------------ factor

int run_factor(const std::string& spec, const std::string& mode) {
  const bool conj = mode == "conjugate";
  Poly f = parse_poly(spec);
  if (conj) {
    if (f.field().e() % 2) throw PreconditionError("conjugate mode needs a field F_{q^2} of even degree");
    f = parse_poly(spec, f.field().e() / 2);
  }
  if (f.degree() < 1) throw PreconditionError("polynomial must have positive degree");
  if (f[0] == 0) throw PreconditionError("reciprocal needs a nonzero constant term");
  f = f.monic();
  std::vector<std::pair<Poly, int>> unpaired;
  const auto s = sr_partition(f, conj, &unpaired);
  json j{{"command", "factor"}, {"mode", mode}, {"poly", format_poly(f)}, {"pretty", f.pretty()},
         {"self_reciprocal", unpaired.empty()}};
  json sr = json::array();
  for (const auto& x : s.sr) sr.push_back({{"poly", format_poly(x.q)}, {"mult", x.mult}});
  json pairs = json::array();
  for (const auto& x : s.pairs)
    pairs.push_back({{"poly", format_poly(x.rep)}, {"partner", format_poly(x.partner)}, {"mult", x.mult}});
  j["sr"] = sr;
  j["nsr_pairs"] = pairs;
  if (!unpaired.empty()) {
    json u = json::array();
    for (const auto& [q, m] : unpaired)
      u.push_back({{"poly", format_poly(q)}, {"partner", format_poly(reciprocal(q, conj).monic())}, {"mult", m}});
    j["unpaired"] = u;
  }
  j["script_m"] = unpaired.empty() ? json(script_m(s)) : json(nullptr);
  emit(j);
  return 0;
}

// ------------------------------------------------------------------- trace

struct TraceArgs {
  std::string kind;
  int n = 0;
  std::uint64_t q = 0;
  std::string matrix, charpoly;
  bool random = false, oracle = false;
  std::optional<std::uint64_t> seed;
};

int run_trace(const TraceArgs& a) {
  const Family fam = parse_family(a.kind);
  const SpaceKind kind = kind_of(fam);
  const int sources = !a.matrix.empty() + !a.charpoly.empty() + a.random;
  if (sources != 1) throw CLI::ValidationError("trace", "give exactly one of --matrix, --random, --charpoly");
  json head{{"command", "trace"}, {"family", family_name(fam)}, {"n", a.n}, {"q", a.q}};
  if (!a.charpoly.empty()) {
    if (a.oracle) throw PreconditionError("--oracle needs an explicit element (--matrix or --random)");
    const Poly f = read_space_poly(a.charpoly, a.q, fam == Family::U);
    const int dim = (fam == Family::EvenSO || fam == Family::Sp) ? 2 * a.n : 2 * a.n + 1;
    if (f.degree() != dim)
      throw PreconditionError("degree " + std::to_string(f.degree()) + " does not match the space dimension " +
                              std::to_string(dim));
    const ClosedForm c = trace_closed_form(kind, f);
    head["source"] = "charpoly";
    head["f_g"] = format_poly(f);
    head["closed_form"] = closed_form_json(c);
    head["trace"] = c.value;
    emit(head);
    return c.value == 0 ? kExitZero : 0;
  }
  const ClassicalSpace s = standard_space(kind, a.n, a.q);
  std::optional<Mat> g;
  if (a.random) {
    if (!a.seed) throw CLI::ValidationError("--random", "requires --seed");
    for (std::uint64_t k = 0; k < 10000 && !g; ++k) {
      Mat cand = random_isometry(s, mix64(*a.seed, k));
      if (is_gl_regular(cand)) {
        g = cand;
        head["source"] = "random";
        head["seed"] = *a.seed;
        head["draw"] = k;
      }
    }
    if (!g) throw PreconditionError("no regular element among the first 10000 draws");
  } else {
    std::uint64_t p = 0;
    const int bd = log_p(a.q, &p);
    g = parse_matrix(read_file(a.matrix), bd);
    if (&g->field() != s.F) throw PreconditionError("matrix is not over the field of the space");
    if (g->rows() != s.dim || g->cols() != s.dim) throw PreconditionError("matrix size does not match the space");
    if (!is_isometry(*g, s)) throw PreconditionError("matrix is not an isometry of the standard form");
    head["source"] = "matrix";
  }
  const TraceReport r = trace_engine(s, *g);
  json j = report_json(r);
  for (const auto& [k, v] : head.items()) j[k] = v;
  j["element"] = format_matrix(*g);
  j["trace"] = r.total;
  emit(j);
  if (!r.agrees() || (a.oracle && !stratum_count_check(r))) {
    std::cerr << "engine and closed form disagree\n";
    return 1;
  }
  return r.total == 0 ? kExitZero : 0;
}

// ----------------------------------------------------------------- int-afl

struct AflArgs {
  std::string charpoly, gfile, ufile, formfile;
  bool synth = false;
  std::uint64_t seed = 0, p = 3;
  int dim_v = 1, n = 0, precision = 0;
};

int run_afl(const AflArgs& a) {
  if (!a.charpoly.empty()) {
    Poly f = parse_poly(a.charpoly);
    if (f.field().e() != 2) throw PreconditionError("the residue polynomial must be over F_{p^2}");
    f = parse_poly(a.charpoly, 1).monic();
    const auto v = afl_int(f);
    json j{{"command", "int-afl"}, {"source", "charpoly"}, {"f_gbar", format_poly(f)},
           {"intersection", v ? json(*v) : json("empty")},
           {"closed_form", closed_form_json(trace_closed_form(SpaceKind::U2n1, f))}};
    emit(j);
    return v ? 0 : kExitZero;
  }
  const PadicCtx c = PadicCtx::make(a.p, 2, a.precision);
  json j;
  AflReport r;
  if (a.synth) {
    const int n = a.n > 0 ? a.n : a.dim_v;
    if (a.dim_v < 1 || a.dim_v > n) throw PreconditionError("need 1 <= dim-v <= n");
    const AflInstance inst = synthesize_minuscule(c, a.dim_v, n, a.seed);
    r = afl_pipeline(c, inst.g, inst.u, inst.H);
    j = afl_report_json(c, r);
    j["source"] = "synth";
    j["seed"] = a.seed;
    j["g"] = format_pmat(c, inst.g);
    j["u"] = format_pmat(c, inst.u);
    j["form"] = format_pmat(c, inst.H);
  } else {
    if (a.gfile.empty() || a.ufile.empty() || a.formfile.empty())
      throw CLI::ValidationError("int-afl", "give --charpoly, --synth, or all of --g, --u, --form");
    r = afl_pipeline(c, parse_pmat(c, read_file(a.gfile)), parse_pmat(c, read_file(a.ufile)),
                     parse_pmat(c, read_file(a.formfile)));
    j = afl_report_json(c, r);
    j["source"] = "files";
  }
  j["command"] = "int-afl";
  emit(j);
  if (!r.ok) {
    std::cerr << r.failed_stage << ": " << r.error << "\n";
    return r.exit_code;
  }
  return j["intersection"] == "empty" ? kExitZero : 0;
}

// --------------------------------------------------------------- int-gspin

int run_gspin(const std::string& spec, int det_checks, std::uint64_t seed) {
  const Poly f = parse_poly(spec).monic();
  const auto v = gspin_int(f);
  json j{{"command", "int-gspin"}, {"f_gbar", format_poly(f)}, {"intersection", v ? json(*v) : json("empty")}};
  int bad = 0;
  if (det_checks > 0) {
    const PadicCtx c = PadicCtx::make(f.field().p(), 1);
    const int n = f.degree();
    int ones = 0;
    for (int t = 0; t < det_checks; ++t) {
      const int k = 1 + t % n;
      const auto [gram, refl] = random_reflection_product(c, n, k, 6, mix64(seed, static_cast<std::uint64_t>(t)));
      const auto chk = residual_determinant_check(c, gram, k, refl);
      bad += !chk.parity_ok;
      ones += chk.ok;
    }
    j["determinant_check"] = {{"cases", det_checks}, {"parity_violations", bad}, {"det_one", ones}};
  }
  emit(j);
  if (bad) return 1;
  return v ? 0 : kExitZero;
}

// ----------------------------------------------------------------- coxeter

json closure_json(const SigmaDatum& d, const DatumDerived& der) {
  if (!d.type || der.w.empty()) return nullptr;
  const WeylGroup W = datum_weyl(d);
  const auto got = W.sort_by_length(W.closure_set(d.sigma, d.J, W.from_word(der.w[0])));
  std::vector<SignedPerm> want;
  for (const auto& w : der.w) want.push_back(W.from_word(w));
  want = W.sort_by_length(want);
  json words = json::array();
  for (const auto& w : got) words.push_back(W.word_string(w));
  return {{"closure_of_w1", words}, {"equals_w_set", got == want}};
}

int run_coxeter(const std::string& family, int n, bool table, const std::string& datum_file) {
  if (table) {
    json rows = json::array();
    for (const auto& row : table_one()) {
      json r{{"tits", row.tits}, {"group", row.group}, {"starred", row.starred}, {"rank", row.min_rank}};
      try {
        const SigmaDatum d = row.make(row.min_rank);
        const auto der = validate_unbranched(d);
        r["accepted"] = true;
        r["i_max"] = der.i_max;
        r["degenerate"] = der.degenerate;
      } catch (const PreconditionError& ex) {
        r["accepted"] = false;
        r["error"] = ex.what();
      }
      rows.push_back(r);
    }
    emit({{"command", "coxeter"}, {"table", rows}});
    return 0;
  }
  SigmaDatum d = datum_file.empty() ? family_datum(parse_family(family), n) : SigmaDatum::parse(read_file(datum_file));
  const auto der = validate_unbranched(d);
  json j = json::parse(datum_json(d, der));
  j["command"] = "coxeter";
  const json cl = closure_json(d, der);
  if (!cl.is_null()) j["closure"] = cl;
  emit(j);
  return cl.is_null() || cl["equals_w_set"].get<bool>() ? 0 : 1;
}

// ------------------------------------------------------------------ verify

int run_verify(const std::string& suite, const std::string& budget, std::uint64_t seed) {
  const auto names = suite == "all" ? verify_suites() : std::vector<std::string>{suite};
  json out = json::array();
  bool ok = true;
  for (const auto& name : names) {
    long long b = 0;
    if (budget == "small") b = small_budget(name);
    else if (!budget.empty()) {
      try {
        b = std::stoll(budget);
      } catch (const std::exception&) {
        throw CLI::ValidationError("--budget", "expected 'small' or a positive integer");
      }
      if (b <= 0) throw CLI::ValidationError("--budget", "expected 'small' or a positive integer");
    } else default_budget(name);
    const SuiteResult r = run_suite(name, b, seed);
    std::cerr << name << ": " << r.checked - r.failed << "/" << r.checked << " in " << r.seconds << " s\n";
    ok = ok && r.failed == 0;
    out.push_back(suite_json(r));
  }
  emit({{"command", "verify"}, {"seed", seed}, {"suites", out}, {"pass", ok}});
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deligne-Lusztig trace and intersection calculator"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", fmt, "output format")->check(CLI::IsMember({"json", "text"}));

  std::string poly, mode = "plain";
  auto* factor = app.add_subcommand("factor", "self-reciprocal factorization of a polynomial");
  factor->add_option("poly", poly, "p^e:c0,c1,...,cd (low degree first)")->required();
  factor->add_option("--mode", mode)->check(CLI::IsMember({"plain", "conjugate"}));

  TraceArgs ta;
  auto* trace = app.add_subcommand("trace", "trace of Frobenius on the fine Deligne-Lusztig cohomology");
  trace->add_option("kind", ta.kind, "so-even | so-odd | sp | u")->required();
  trace->add_option("n", ta.n)->required()->check(CLI::Range(0, 8));
  trace->add_option("q", ta.q)->required();
  trace->add_option("--matrix", ta.matrix, "matrix file");
  trace->add_flag("--random", ta.random);
  trace->add_option("--seed", ta.seed);
  trace->add_option("--charpoly", ta.charpoly, "closed form from the characteristic polynomial");
  trace->add_flag("--oracle", ta.oracle, "check the engine against the closed form");

  AflArgs aa;
  auto* afl = app.add_subcommand("int-afl", "unitary intersection number");
  afl->add_option("--charpoly", aa.charpoly, "residue polynomial over F_{p^2}");
  afl->add_flag("--synth", aa.synth, "synthesize a minuscule instance");
  afl->add_option("--seed", aa.seed);
  afl->add_option("--dim-v", aa.dim_v);
  afl->add_option("--n", aa.n);
  afl->add_option("--p", aa.p);
  afl->add_option("--g", aa.gfile);
  afl->add_option("--u", aa.ufile);
  afl->add_option("--form", aa.formfile);
  afl->add_option("--precision", aa.precision)->check(CLI::Range(2, 4096));

  std::string gpoly;
  int det_checks = 0;
  std::uint64_t gseed = 1;
  auto* gspin = app.add_subcommand("int-gspin", "orthogonal intersection number");
  gspin->add_option("poly", gpoly)->required();
  gspin->add_option("--det-check", det_checks, "random reflection products to test")->check(CLI::Range(0, 100000));
  gspin->add_option("--seed", gseed);

  std::string family, datum_file;
  int cn = 1;
  bool table = false;
  auto* cox = app.add_subcommand("coxeter", "unbranched datum, elements w_i and closure set");
  cox->add_option("family", family);
  cox->add_option("n", cn)->check(CLI::Range(1, 5));
  cox->add_flag("--table", table);
  cox->add_option("--datum", datum_file);

  std::string suite, budget;
  std::uint64_t vseed = 1;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite)->required();
  verify->add_option("--budget", budget, "'small' or a case count");
  verify->add_option("--seed", vseed);

  try {
    app.parse(argc, argv);
    if (fmt != "json" && fmt != "text") fmt = "json";
    if (*factor) return run_factor(poly, mode);
    if (*trace) return run_trace(ta);
    if (*afl) return run_afl(aa);
    if (*gspin) return run_gspin(gpoly, det_checks, gseed);
    if (*cox) {
      if (!table && datum_file.empty() && family.empty()) throw CLI::ValidationError("coxeter", "give a family, --table or --datum");
      return run_coxeter(family, cn, table, datum_file);
    }
    if (*verify) return run_verify(suite, budget, vseed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return 3;
  } catch (const PrecisionError& e) {
    std::cerr << "precision exhausted: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
