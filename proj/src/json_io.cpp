#include "diffgal/json_io.hpp"

#include <fstream>
#include <sstream>

#include "diffgal/errors.hpp"
#include "diffgal/expr.hpp"

namespace diffgal {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
  throw ParseError(where + ": " + msg, where);
}

const json& member(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail(path.empty() ? "/" : path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path + "/" + key, "missing field");
  return *it;
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  auto v = j.get<long long>();
  if (v < -1000000 || v > 1000000) fail(path, "integer out of range");
  return static_cast<int>(v);
}

const json& as_array(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

std::vector<int> int_list(const json& j, const std::string& path) {
  std::vector<int> out;
  const auto& a = as_array(j, path);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(as_int(a[i], path + "/" + std::to_string(i)));
  return out;
}

RationalFunction expr_at(const json& j, const std::set<std::string>& symbols, const std::string& path) {
  std::string text;
  if (j.is_string())
    text = j.get<std::string>();
  else if (j.is_number_integer())
    text = std::to_string(j.get<long long>());
  else
    fail(path, "expected an expression string");
  try {
    return parse_expr(text, symbols);
  } catch (const ParseError& e) {
    fail(path, e.what());
  } catch (const DomainError& e) {
    fail(path, e.what());
  }
}

std::string sort_name(Sort s) {
  switch (s) {
    case Sort::Q: return "Q";
    case Sort::X: return "X";
    default: return "C";
  }
}

}  // namespace

FiniteInternality structure_from_json(const json& j) {
  int nQ = as_int(member(j, "nQ", ""), "/nQ");
  int nD = as_int(member(j, "nD", ""), "/nD");
  if (nQ < 1) fail("/nQ", "must be positive");
  if (nD < 1) fail("/nD", "must be positive");
  auto piX = int_list(member(j, "piX", ""), "/piX");
  const auto& fj = as_array(member(j, "f", ""), "/f");
  std::vector<std::vector<int>> f;
  for (std::size_t x = 0; x < fj.size(); ++x) f.push_back(int_list(fj[x], "/f/" + std::to_string(x)));
  if (f.size() != piX.size()) fail("/f", "expected one row per element of X (" + std::to_string(piX.size()) + ")");
  for (std::size_t x = 0; x < f.size(); ++x)
    if (static_cast<int>(f[x].size()) != nQ) fail("/f/" + std::to_string(x), "expected nQ entries");
  return FiniteInternality::make(nQ, nD, std::move(piX), std::move(f));
}

json structure_to_json(const FiniteInternality& s) {
  return json{{"nQ", s.nQ}, {"nD", s.nD}, {"piX", s.piX}, {"f", s.f}};
}

DeltaRelation delta_from_json(const json& j, const FiniteInternality& s, const std::string& path) {
  DeltaRelation r;
  const auto& sorts = as_array(member(j, "sorts", path), path + "/sorts");
  for (std::size_t i = 0; i < sorts.size(); ++i) {
    std::string p = path + "/sorts/" + std::to_string(i);
    if (!sorts[i].is_string()) fail(p, "expected \"Q\", \"X\" or \"C\"");
    auto v = sorts[i].get<std::string>();
    if (v == "Q")
      r.sorts.push_back(Sort::Q);
    else if (v == "X")
      r.sorts.push_back(Sort::X);
    else if (v == "C")
      r.sorts.push_back(Sort::C);
    else
      fail(p, "unknown sort '" + v + "'");
  }
  const auto& tuples = as_array(member(j, "tuples", path), path + "/tuples");
  for (std::size_t i = 0; i < tuples.size(); ++i)
    r.tuples.push_back(int_list(tuples[i], path + "/tuples/" + std::to_string(i)));
  try {
    return normalized(s, std::move(r));
  } catch (const DomainError& e) {
    fail(path + "/tuples", e.what());
  }
}

json delta_to_json(const DeltaRelation& r) {
  json sorts = json::array();
  for (auto s : r.sorts) sorts.push_back(sort_name(s));
  return json{{"sorts", sorts}, {"tuples", r.tuples}};
}

std::vector<DeltaRelation> deltas_from_json(const json& j, const FiniteInternality& s, const std::string& path) {
  std::vector<DeltaRelation> out;
  const auto& a = as_array(j, path);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(delta_from_json(a[i], s, path + "/" + std::to_string(i)));
  return out;
}

json autpairs_to_json(std::vector<AutPair> g) {
  std::sort(g.begin(), g.end());
  json out = json::array();
  for (const auto& p : g) out.push_back(json{{"Q", p.tauQ}, {"X", p.tauX}});
  return out;
}

LinearDifferenceSystem system_from_json(const json& j) {
  const auto& field = member(j, "field", "");
  SigmaOperator sigma;
  {
    const auto& s = member(field, "sigma", "/field");
    std::string text;
    if (s.is_string()) {
      text = s.get<std::string>();
    } else if (s.is_object()) {
      const auto& kind = member(s, "kind", "/field/sigma");
      if (!kind.is_string()) fail("/field/sigma/kind", "expected a string");
      text = kind.get<std::string>();
      if (s.contains("c")) {
        const auto& c = s["c"];
        if (c.is_string())
          text += ":" + c.get<std::string>();
        else if (c.is_number_integer())
          text += ":" + std::to_string(c.get<long long>());
        else
          fail("/field/sigma/c", "expected a rational string");
      }
    } else {
      fail("/field/sigma", "expected a string or {\"kind\",\"c\"}");
    }
    try {
      sigma = SigmaOperator::parse(text);
    } catch (const std::exception& e) {
      fail("/field/sigma", e.what());
    }
  }
  std::vector<std::string> params;
  if (field.contains("parameters")) {
    const auto& ps = as_array(field["parameters"], "/field/parameters");
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (!ps[i].is_string()) fail("/field/parameters/" + std::to_string(i), "expected a string");
      params.push_back(ps[i].get<std::string>());
    }
  }
  DifferenceFieldSpec spec;
  try {
    spec = DifferenceFieldSpec(sigma, params);
  } catch (const DomainError& e) {
    fail("/field/parameters", e.what());
  }
  auto syms = spec.symbols();
  const auto& Aj = member(j, "A", "");
  MatrixRF A;
  if (Aj.is_string()) {
    try {
      A = parse_matrix(Aj.get<std::string>(), syms);
    } catch (const std::exception& e) {
      fail("/A", e.what());
    }
  } else {
    const auto& rows = as_array(Aj, "/A");
    if (rows.empty()) fail("/A", "empty matrix");
    std::size_t n = rows.size();
    A = MatrixRF(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      std::string rp = "/A/" + std::to_string(i);
      const auto& row = as_array(rows[i], rp);
      if (row.size() != n) fail(rp, "expected " + std::to_string(n) + " entries");
      for (std::size_t k = 0; k < n; ++k) A(i, k) = expr_at(row[k], syms, rp + "/" + std::to_string(k));
    }
  }
  std::vector<std::string> entries;
  if (j.contains("entries")) {
    const auto& es = as_array(j["entries"], "/entries");
    for (std::size_t i = 0; i < es.size(); ++i) {
      if (!es[i].is_string()) fail("/entries/" + std::to_string(i), "expected a string");
      entries.push_back(es[i].get<std::string>());
    }
  }
  try {
    return LinearDifferenceSystem(spec, std::move(A), std::move(entries));
  } catch (const DomainError& e) {
    fail("/A", e.what());
  }
}

json system_to_json(const LinearDifferenceSystem& sys) {
  json rows = json::array();
  for (std::size_t i = 0; i < sys.n(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < sys.n(); ++k) row.push_back(sys.A()(i, k).str());
    rows.push_back(row);
  }
  const auto& sg = sys.field().sigma();
  json sigma{{"kind", sg.kind == SigmaOperator::Kind::identity ? "identity"
                      : sg.kind == SigmaOperator::Kind::shift  ? "shift"
                                                               : "dilation"}};
  if (sg.kind != SigmaOperator::Kind::identity) sigma["c"] = to_string(sg.c);
  json out{{"field", {{"sigma", sigma}, {"parameters", sys.field().parameters()}}},
           {"A", rows}};
  if (sys.entries() != LinearDifferenceSystem::default_entries(sys.n())) out["entries"] = sys.entries();
  return out;
}

std::vector<Invariant> invariants_from_json(const json& j, const LinearDifferenceSystem& sys,
                                            const std::string& path) {
  std::vector<Invariant> out;
  const auto& a = as_array(j, path);
  auto syms = sys.symbols();
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::string ip = path + "/" + std::to_string(i);
    auto p = expr_at(member(a[i], "p", ip), syms, ip + "/p");
    if (!p.is_polynomial()) fail(ip + "/p", "expected a polynomial");
    int k = 0;
    if (a[i].contains("k")) k = as_int(a[i]["k"], ip + "/k");
    if (k < 0) fail(ip + "/k", "must be nonnegative");
    out.push_back({p.as_polynomial(), static_cast<unsigned>(k)});
  }
  return out;
}

json invariant_to_json(const Invariant& inv) {
  return json{{"p", inv.p.str()}, {"k", inv.k}, {"h", inv.str()}};
}

std::vector<RationalFunction> constants_from_json(const json& j, const std::set<std::string>& symbols,
                                                  const std::string& path) {
  std::vector<RationalFunction> out;
  const auto& a = as_array(j, path);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(expr_at(a[i], symbols, path + "/" + std::to_string(i)));
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what(), path);
  }
}

}  // namespace diffgal
