#include "dltrace/datum.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "json.hpp"

namespace dltrace {

std::string family_name(Family f) {
  switch (f) {
    case Family::EvenSO: return "so-even";
    case Family::OddSO: return "so-odd";
    case Family::Sp: return "sp";
    case Family::U: return "u";
  }
  return "?";
}

Family parse_family(std::string_view s) {
  for (Family f : all_families())
    if (family_name(f) == s) return f;
  throw PreconditionError("unknown kind '" + std::string(s) + "' (expected so-even, so-odd, sp or u)");
}

std::vector<Family> all_families() { return {Family::EvenSO, Family::OddSO, Family::Sp, Family::U}; }

int SigmaDatum::node_index(std::string_view name) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i] == name) return static_cast<int>(i);
  return -1;
}

bool SigmaDatum::adjacent(int a, int b) const {
  for (const auto& e : edges)
    if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) return true;
  return false;
}

std::vector<int> SigmaDatum::orbit(int node) const {
  std::vector<int> out{node};
  for (int x = sigma[node]; x != node; x = sigma[x]) out.push_back(x);
  std::sort(out.begin(), out.end());
  return out;
}

std::string SigmaDatum::node_list(const std::vector<int>& v) const {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + nodes[v[i]];
  return s;
}

namespace {

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t b = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (b < i) out.emplace_back(s.substr(b, i - b));
  }
  return out;
}

}  // namespace

SigmaDatum SigmaDatum::parse(std::string_view text) {
  SigmaDatum d;
  struct Pending {
    std::string key;
    std::string rest;
    std::size_t offset;
  };
  std::vector<Pending> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    std::size_t k = 0;
    while (k < line.size() && std::isspace(static_cast<unsigned char>(line[k]))) ++k;
    if (k < line.size()) {
      std::size_t ke = k;
      while (ke < line.size() && !std::isspace(static_cast<unsigned char>(line[ke]))) ++ke;
      lines.push_back({std::string(line.substr(k, ke - k)), std::string(line.substr(ke)), pos + k});
    }
    pos = end + 1;
  }
  bool have_nodes = false;
  for (const auto& ln : lines)
    if (ln.key == "nodes") {
      if (have_nodes) throw ParseError("duplicate 'nodes' line", ln.offset);
      d.nodes = split_ws(ln.rest);
      have_nodes = true;
      std::set<std::string> uniq(d.nodes.begin(), d.nodes.end());
      if (uniq.size() != d.nodes.size()) throw ParseError("duplicate node name", ln.offset);
    }
  if (!have_nodes) throw ParseError("missing 'nodes' line", 0);
  d.sigma.resize(d.nodes.size());
  for (std::size_t i = 0; i < d.nodes.size(); ++i) d.sigma[i] = static_cast<int>(i);

  auto node = [&](const std::string& name, std::size_t off) {
    const int i = d.node_index(name);
    if (i < 0) throw ParseError("unknown node '" + name + "'", off);
    return i;
  };
  for (const auto& ln : lines) {
    if (ln.key == "nodes") continue;
    if (ln.key == "label") {
      auto t = ln.rest;
      const auto b = t.find_first_not_of(" \t\r");
      d.label = b == std::string::npos ? "" : t.substr(b);
      while (!d.label.empty() && std::isspace(static_cast<unsigned char>(d.label.back()))) d.label.pop_back();
    } else if (ln.key == "edges") {
      for (const auto& tok : split_ws(ln.rest)) {
        DynkinEdge e;
        std::size_t at;
        std::string a, b;
        if ((at = tok.find("=>")) != std::string::npos) {
          a = tok.substr(0, at);
          b = tok.substr(at + 2);
          e.lines = 2;
        } else if ((at = tok.find("<=")) != std::string::npos) {
          a = tok.substr(0, at);
          b = tok.substr(at + 2);
          e.lines = 2;
        } else if ((at = tok.find('-')) != std::string::npos) {
          a = tok.substr(0, at);
          b = tok.substr(at + 1);
        } else {
          throw ParseError("bad edge '" + tok + "'", ln.offset);
        }
        e.a = node(a, ln.offset);
        e.b = node(b, ln.offset);
        if (e.lines == 2) e.arrow_to = tok.find("=>") != std::string::npos ? e.b : e.a;
        d.edges.push_back(e);
      }
    } else if (ln.key == "sigma") {
      std::string body = ln.rest;
      std::size_t i = 0;
      while (i < body.size()) {
        if (std::isspace(static_cast<unsigned char>(body[i]))) {
          ++i;
          continue;
        }
        if (body.compare(i, 2, "id") == 0) {
          i += 2;
          continue;
        }
        if (body[i] != '(') throw ParseError("sigma must be written as cycles like (s1 s3)", ln.offset + i);
        const auto close = body.find(')', i);
        if (close == std::string::npos) throw ParseError("unclosed cycle", ln.offset + i);
        const auto names = split_ws(body.substr(i + 1, close - i - 1));
        for (std::size_t k = 0; k < names.size(); ++k)
          d.sigma[node(names[k], ln.offset)] = node(names[(k + 1) % names.size()], ln.offset);
        i = close + 1;
      }
    } else if (ln.key == "J") {
      for (const auto& t : split_ws(ln.rest))
        if (t != "-") d.J.push_back(node(t, ln.offset));
      std::sort(d.J.begin(), d.J.end());
    } else if (ln.key == "L") {
      for (const auto& t : split_ws(ln.rest))
        if (t != "-") d.L.push_back(node(t, ln.offset));
    } else if (ln.key == "type") {
      const auto t = split_ws(ln.rest);
      if (t.size() != 2 || t[0].size() != 1) throw ParseError("type line must look like 'type B 3'", ln.offset);
      try {
        d.type = std::make_pair(parse_cartan(t[0][0]), std::stoi(t[1]));
      } catch (const std::exception&) {
        throw ParseError("bad type line", ln.offset);
      }
    } else {
      throw ParseError("unknown keyword '" + ln.key + "'", ln.offset);
    }
  }
  return d;
}

std::string SigmaDatum::format() const {
  std::ostringstream os;
  if (!label.empty()) os << "label " << label << "\n";
  os << "nodes";
  for (const auto& n : nodes) os << " " << n;
  os << "\nedges";
  for (const auto& e : edges) {
    os << " " << nodes[e.a];
    if (e.lines == 1) os << "-";
    else os << (e.arrow_to == e.b ? "=>" : "<=");
    os << nodes[e.b];
  }
  os << "\nsigma";
  std::vector<bool> seen(nodes.size(), false);
  bool any = false;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (seen[i] || sigma[i] == static_cast<int>(i)) continue;
    os << " (";
    int x = static_cast<int>(i);
    bool first = true;
    while (!seen[x]) {
      seen[x] = true;
      os << (first ? "" : " ") << nodes[x];
      first = false;
      x = sigma[x];
    }
    os << ")";
    any = true;
  }
  if (!any) os << " id";
  os << "\nJ";
  for (int j : J) os << " " << nodes[j];
  os << "\nL";
  for (int l : L) os << " " << nodes[l];
  os << "\n";
  if (type) os << "type " << cartan_letter(type->first) << " " << type->second << "\n";
  return os.str();
}

namespace {

[[noreturn]] void fail(const std::string& axiom, const std::string& msg) { throw DatumAxiomError(axiom, msg); }

}  // namespace

DatumDerived validate_unbranched(const SigmaDatum& d) {
  const int n = static_cast<int>(d.nodes.size());
  // well-formedness
  if (static_cast<int>(d.sigma.size()) != n) fail("well-formed", "sigma has the wrong size");
  {
    std::vector<bool> hit(n, false);
    for (int x : d.sigma) {
      if (x < 0 || x >= n || hit[x]) fail("well-formed", "sigma is not a permutation of the nodes");
      hit[x] = true;
    }
  }
  for (const auto& e : d.edges) {
    if (e.a < 0 || e.a >= n || e.b < 0 || e.b >= n || e.a == e.b) fail("well-formed", "bad edge");
    if (e.lines < 1 || e.lines > 2) fail("well-formed", "edges must be single or double");
    if (e.lines == 2 && e.arrow_to != e.a && e.arrow_to != e.b) fail("well-formed", "double edge without arrow");
  }
  for (std::size_t i = 0; i < d.edges.size(); ++i)
    for (std::size_t j = i + 1; j < d.edges.size(); ++j) {
      const auto &x = d.edges[i], &y = d.edges[j];
      if ((x.a == y.a && x.b == y.b) || (x.a == y.b && x.b == y.a)) fail("well-formed", "duplicate edge");
    }
  for (int j : d.J)
    if (j < 0 || j >= n) fail("well-formed", "J contains an unknown node");
  {
    std::set<int> s(d.L.begin(), d.L.end());
    if (s.size() != d.L.size()) fail("well-formed", "L repeats a node");
    for (int l : d.L)
      if (l < 0 || l >= n) fail("well-formed", "L contains an unknown node");
  }

  DatumDerived out;
  if (n == 0) {
    if (!d.L.empty() || !d.J.empty()) fail("well-formed", "empty diagram with nonempty J or L");
    out.degenerate = true;
    out.a = 0;
    out.i_max = 1;
    out.w = {{}};
    out.flat = out.mid = out.sharp = {{}};
    return out;
  }

  // sigma preserves the diagram, including arrows
  for (const auto& e : d.edges) {
    const int sa = d.sigma[e.a], sb = d.sigma[e.b];
    bool found = false;
    for (const auto& f : d.edges) {
      if (!((f.a == sa && f.b == sb) || (f.a == sb && f.b == sa))) continue;
      found = f.lines == e.lines && (e.lines == 1 || f.arrow_to == d.sigma[e.arrow_to]);
    }
    if (!found)
      fail("sigma-preserves-diagram", "edge " + d.nodes[e.a] + "-" + d.nodes[e.b] + " is not mapped to an edge of the same kind");
  }

  std::vector<bool> inJ(n, false);
  for (int j : d.J) inJ[j] = true;
  std::vector<int> outside;
  for (int i = 0; i < n; ++i)
    if (!inJ[i]) outside.push_back(i);
  if (!outside.empty()) {
    const auto orb = d.orbit(outside[0]);
    for (int x : outside)
      if (!std::binary_search(orb.begin(), orb.end(), x))
        fail("complement-one-orbit", "S - J = {" + d.node_list(outside) + "} meets several sigma-orbits");
  }

  const int a = static_cast<int>(d.L.size());
  if (a == 0) fail("L-orbit-representatives", "L is empty");
  for (int k = 0; k + 1 < a; ++k)
    if (!d.adjacent(d.L[k], d.L[k + 1]))
      fail("L-connected-unbranched", "consecutive nodes " + d.nodes[d.L[k]] + ", " + d.nodes[d.L[k + 1]] + " are not joined");
  for (int k = 0; k < a; ++k)
    for (int m = k + 2; m < a; ++m)
      if (d.adjacent(d.L[k], d.L[m])) fail("L-connected-unbranched", "L is not a simple chain");

  std::vector<int> orbit_id(n, -1);
  int norb = 0;
  for (int i = 0; i < n; ++i) {
    if (orbit_id[i] >= 0) continue;
    for (int x : d.orbit(i)) orbit_id[x] = norb;
    ++norb;
  }
  {
    std::vector<int> cnt(norb, 0);
    for (int l : d.L) ++cnt[orbit_id[l]];
    for (int o = 0; o < norb; ++o)
      if (cnt[o] != 1) fail("L-orbit-representatives", "L does not meet every sigma-orbit exactly once");
  }

  std::vector<int> L = d.L;
  const bool first_out = !inJ[L.front()], last_out = !inJ[L.back()];
  if (a == 1) {
    if (!first_out) fail("end-node", "the single node of L lies in J");
  } else {
    if (!first_out && !last_out) fail("end-node", "no end-node of L lies outside J");
    if (first_out && last_out) fail("end-node", "both end-nodes of L lie outside J");
    if (first_out) std::reverse(L.begin(), L.end());
  }
  for (int k = 0; k + 1 < a; ++k)
    if (!inJ[L[k]]) fail("end-node", "an interior node of L lies outside J");

  out.L = L;
  out.a = a;
  out.i_max = a + 1;

  // r_1 .. r_a are L[0] .. L[a-1]; check the disconnection claims explicitly
  for (int i = 3; i <= a; ++i) {
    for (int l = 1; l <= i - 2; ++l) {
      int x = L[l - 1];
      do {
        for (int j = i; j <= a; ++j)
          if (d.adjacent(x, L[j - 1]))
            fail("disconnection", "a sigma-translate of " + d.nodes[L[l - 1]] + " touches " + d.nodes[L[j - 1]]);
        x = d.sigma[x];
      } while (x != L[l - 1]);
    }
  }

  for (int i = 1; i <= out.i_max; ++i) {
    std::vector<int> word;
    for (int j = a; j >= i; --j) word.push_back(L[j - 1]);
    out.w.push_back(word);
    std::vector<bool> fl(n, false), md(n, false);
    for (int j = i; j <= a; ++j)
      for (int x : d.orbit(L[j - 1])) fl[x] = true;
    if (i >= 2)
      for (int x : d.orbit(L[i - 2])) md[x] = true;
    std::vector<int> F, M, S;
    for (int x = 0; x < n; ++x) {
      if (fl[x] && md[x]) throw Error("sigma sets overlap");
      if (fl[x]) F.push_back(x);
      else if (md[x]) M.push_back(x);
      else S.push_back(x);
    }
    for (int x : F)
      for (int y : S)
        if (d.adjacent(x, y)) fail("disconnection", "flat and sharp sets touch at " + d.nodes[x] + ", " + d.nodes[y]);
    out.flat.push_back(F);
    out.mid.push_back(M);
    out.sharp.push_back(S);
  }
  return out;
}

WeylGroup datum_weyl(const SigmaDatum& d) {
  if (!d.type) throw PreconditionError("datum has no attached Weyl group");
  WeylGroup W(d.type->first, d.type->second);
  if (W.rank() != static_cast<int>(d.nodes.size()))
    throw PreconditionError("attached Weyl group rank does not match the diagram");
  return W;
}

SignedPerm datum_word(const SigmaDatum&, const WeylGroup& W, const std::vector<int>& nodes) {
  return W.from_word(nodes);
}

std::string datum_json(const SigmaDatum& d, const DatumDerived& der) {
  using nlohmann::json;
  auto names = [&](const std::vector<int>& v) {
    json a = json::array();
    for (int x : v) a.push_back(d.nodes[x]);
    return a;
  };
  json j;
  j["schema"] = 1;
  if (!d.label.empty()) j["label"] = d.label;
  j["nodes"] = d.nodes;
  json edges = json::array();
  for (const auto& e : d.edges) {
    json je = {{"a", d.nodes[e.a]}, {"b", d.nodes[e.b]}, {"lines", e.lines}};
    if (e.lines == 2) je["short"] = d.nodes[e.arrow_to];
    edges.push_back(je);
  }
  j["edges"] = edges;
  json sig = json::object();
  for (std::size_t i = 0; i < d.nodes.size(); ++i) sig[d.nodes[i]] = d.nodes[d.sigma[i]];
  j["sigma"] = sig;
  j["J"] = names(d.J);
  j["L"] = names(der.L);
  j["a"] = der.a;
  j["i_max"] = der.i_max;
  j["degenerate"] = der.degenerate;
  std::optional<WeylGroup> W;
  if (d.type) W.emplace(datum_weyl(d));
  json rows = json::array();
  for (int i = 1; i <= der.i_max; ++i) {
    json r;
    r["i"] = i;
    std::string word;
    for (int x : der.w[i - 1]) word += d.nodes[x];
    r["w"] = word.empty() ? "1" : word;
    if (W) r["w_reduced"] = W->word_string(W->from_word(der.w[i - 1]));
    r["flat"] = names(der.flat[i - 1]);
    r["mid"] = names(der.mid[i - 1]);
    r["sharp"] = names(der.sharp[i - 1]);
    rows.push_back(r);
  }
  j["strata"] = rows;
  return j.dump(2);
}

SigmaDatum dynkin(CartanType t, int rank) {
  SigmaDatum d;
  for (int i = 1; i <= rank; ++i) d.nodes.push_back("s" + std::to_string(i));
  d.sigma.resize(rank);
  for (int i = 0; i < rank; ++i) d.sigma[i] = i;
  auto single = [&](int a, int b) { d.edges.push_back({a, b, 1, -1}); };
  switch (t) {
    case CartanType::A:
      for (int i = 0; i + 1 < rank; ++i) single(i, i + 1);
      break;
    case CartanType::B:
      for (int i = 0; i + 2 < rank; ++i) single(i, i + 1);
      if (rank >= 2) d.edges.push_back({rank - 2, rank - 1, 2, rank - 1});
      break;
    case CartanType::C:
      for (int i = 0; i + 2 < rank; ++i) single(i, i + 1);
      if (rank >= 2) d.edges.push_back({rank - 2, rank - 1, 2, rank - 2});
      break;
    case CartanType::D:
      for (int i = 0; i + 2 < rank; ++i) single(i, i + 1);
      if (rank >= 3) single(rank - 3, rank - 1);
      break;
  }
  d.type = std::make_pair(t, rank);
  return d;
}

namespace {

SigmaDatum with_jl(SigmaDatum d, std::vector<int> J, std::vector<int> L, std::string label) {
  std::sort(J.begin(), J.end());
  d.J = std::move(J);
  d.L = std::move(L);
  d.label = std::move(label);
  return d;
}

std::vector<int> all_but(int n, int skip) {
  std::vector<int> v;
  for (int i = 0; i < n; ++i)
    if (i != skip) v.push_back(i);
  return v;
}

std::vector<int> chain(int upto) {
  std::vector<int> v;
  for (int i = 0; i < upto; ++i) v.push_back(i);
  return v;
}

// 2D_n with J = S - {s_{n-1}}, L = (s_1, ..., s_{n-1})
SigmaDatum twisted_d(int n) {
  if (n == 1) {
    SigmaDatum d;
    d.label = "2D_1";
    d.type = std::make_pair(CartanType::D, 1);
    return d;
  }
  SigmaDatum d = dynkin(CartanType::D, n);
  std::swap(d.sigma[n - 2], d.sigma[n - 1]);
  return with_jl(d, all_but(n, n - 2), chain(n - 1), "2D_" + std::to_string(n));
}

SigmaDatum last_node_datum(CartanType t, int n) {
  return with_jl(dynkin(t, n), all_but(n, n - 1), chain(n), std::string(1, cartan_letter(t)) + "_" + std::to_string(n));
}

// 2A_{2m} with J = S - {s_m}, L = (s_1, ..., s_m)
SigmaDatum twisted_a_even(int m) {
  if (m == 0) {
    SigmaDatum d;
    d.label = "2A_0";
    return d;
  }
  SigmaDatum d = dynkin(CartanType::A, 2 * m);
  for (int i = 0; i < 2 * m; ++i) d.sigma[i] = 2 * m - 1 - i;
  return with_jl(d, all_but(2 * m, m - 1), chain(m), "2A_" + std::to_string(2 * m));
}

SigmaDatum twisted_a1a1() {
  SigmaDatum d = dynkin(CartanType::D, 2);
  std::swap(d.sigma[0], d.sigma[1]);
  return with_jl(d, {0}, {1}, "2(A1xA1)");
}

}  // namespace

const std::vector<TableRow>& table_one() {
  static const std::vector<TableRow> rows = [] {
    std::vector<TableRow> r;
    auto add = [&](std::string tits, std::string group, bool star, int lo, int hi, std::function<SigmaDatum(int)> mk) {
      TableRow t;
      t.tits = std::move(tits);
      t.group = std::move(group);
      t.starred = star;
      t.min_rank = lo;
      t.max_rank = hi;
      t.make = std::move(mk);
      r.push_back(std::move(t));
    };
    add("(A_n, w1, S)", "trivial", false, 0, 0, [](int) {
      SigmaDatum d;
      d.label = "trivial";
      return d;
    });
    r.back().degenerate = true;
    add("(B_n, w1, S)", "2D_n", false, 2, 4, twisted_d);
    add("(B_n, w1, S~-{n})", "B_{n-1}", false, 2, 4, [](int k) { return last_node_datum(CartanType::B, k); });
    add("(B-C_n, w1, S)", "2D_n", false, 2, 4, twisted_d);
    add("(B-C_n, w1, S~-{n})", "B_{n-1}", false, 2, 4, [](int k) { return last_node_datum(CartanType::B, k); });
    add("(C-B_n, w1, S)", "B_n", false, 2, 4, [](int k) { return last_node_datum(CartanType::B, k); });
    add("(C-BC_n, w1, S)", "B_n", false, 2, 4, [](int k) { return last_node_datum(CartanType::B, k); });
    add("(C-BC_n, w1, S~-{n})", "C_n", false, 2, 4, [](int k) { return last_node_datum(CartanType::C, k); });
    add("(D_n, w1, S)", "2D_{n-1}", false, 2, 4, twisted_d);
    add("(2A'_n, w1, S)", "2A_{2m}", false, 1, 2, twisted_a_even);
    add("(2B_n, w1, S~-{n})", "B_n", false, 2, 4, [](int k) { return last_node_datum(CartanType::B, k); });
    add("(2B-C_n, w1, S~-{n})", "C_n", false, 2, 4, [](int k) { return last_node_datum(CartanType::C, k); });
    add("(2D_n, w1, S)", "2D_n", false, 2, 4, twisted_d);
    add("(A_3, w2, S)", "2(A1xA1)", true, 2, 2, [](int) { return twisted_a1a1(); });
    add("(2A'_3, w2, S)", "2A_3", true, 3, 3, [](int) {
      SigmaDatum d = dynkin(CartanType::A, 3);
      d.sigma = {2, 1, 0};
      return with_jl(d, {1, 2}, {1, 0}, "2A_3");
    });
    add("(C_2, w2, S)", "2(A1xA1)", true, 2, 2, [](int) { return twisted_a1a1(); });
    add("(C_2, w2, S~-{1})", "A_1", false, 1, 1, [](int) { return with_jl(dynkin(CartanType::A, 1), {}, {0}, "A_1"); });
    add("(2C_2, w2, S~-{1})", "B_2", false, 2, 2, [](int) { return with_jl(dynkin(CartanType::B, 2), {0}, {0, 1}, "B_2"); });
    add("(2C-B_2, w1, S~-{1})", "B_2", true, 2, 2, [](int) { return with_jl(dynkin(CartanType::B, 2), {1}, {1, 0}, "B_2"); });
    return r;
  }();
  return rows;
}

SigmaDatum family_datum(Family f, int n) {
  switch (f) {
    case Family::EvenSO:
      if (n < 1) throw PreconditionError("so-even needs n >= 1");
      return twisted_d(n);
    case Family::OddSO:
      if (n < 1) throw PreconditionError("so-odd needs n >= 1");
      return last_node_datum(CartanType::B, n);
    case Family::Sp:
      if (n < 1) throw PreconditionError("sp needs n >= 1");
      return last_node_datum(CartanType::C, n);
    case Family::U:
      if (n < 0) throw PreconditionError("u needs n >= 0");
      return twisted_a_even(n);
  }
  throw PreconditionError("unknown family");
}

int family_i_max(Family f, int n) { return f == Family::EvenSO ? n : n + 1; }

}  // namespace dltrace
