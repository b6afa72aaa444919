#include "diffgal/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "diffgal/errors.hpp"
#include "diffgal/expr.hpp"
#include "diffgal/json_io.hpp"

namespace diffgal {

namespace {

struct Options {
  std::string file;
  bool json_out = false;
  std::uint64_t seed = 0;
  std::string sigma = "shift:1";
  std::string params;
  std::string a;
  unsigned max_order = 12;
  std::string bounds = "d=4,k=2,m=4";
  int count = 100;
  std::string g;
  unsigned samples = 20;
  int brute_max = 6;
};

struct Report {
  std::string status = "ok";
  json payload = json::object();
};

json load(const Options& o) {
  if (o.file.empty()) throw ParseError("--file is required for this subcommand", "--file");
  return read_json_file(o.file);
}

SearchBounds parse_bounds(const std::string& text) {
  SearchBounds b;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("bounds item '" + item + "' must look like d=4", "--bounds");
    std::string key = item.substr(0, eq), val = item.substr(eq + 1);
    unsigned v = 0;
    try {
      std::size_t used = 0;
      long x = std::stol(val, &used);
      if (used != val.size() || x < 0) throw std::invalid_argument(val);
      v = static_cast<unsigned>(x);
    } catch (const std::exception&) {
      throw ParseError("bounds value '" + val + "' is not a nonnegative integer", "--bounds");
    }
    if (key == "d")
      b.d = v;
    else if (key == "k")
      b.k_max = v;
    else if (key == "m")
      b.m = v;
    else
      throw ParseError("unknown bounds key '" + key + "'", "--bounds");
  }
  return b;
}

std::vector<std::string> split_params(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// Structure from the file, with validation failures reported as violations.
std::optional<FiniteInternality> load_structure(const json& j, Report& r) {
  auto s = structure_from_json(j);
  auto v = validate(s);
  if (v.ok) return s;
  r.status = "violation";
  r.payload["valid"] = false;
  r.payload["violation"] = json{{"kind", v.kind}, {"message", v.message}, {"witness", v.witness}};
  return std::nullopt;
}

std::vector<DeltaRelation> load_delta(const json& j, const FiniteInternality& s) {
  if (!j.contains("delta")) return {};
  return deltas_from_json(j["delta"], s);
}

bool groups_agree(const FiniteInternality& s, int brute_max) {
  auto d = derive(s);
  auto brute = brute_force_group(s, brute_max);
  std::set<AutPair> b(brute.begin(), brute.end());
  auto g1 = group_intdef1(s, d), g2 = group_intdef2(s, d);
  auto gh = group_horrible(s).group;
  return std::set<AutPair>(g1.begin(), g1.end()) == b && std::set<AutPair>(g2.begin(), g2.end()) == b &&
         std::set<AutPair>(gh.begin(), gh.end()) == b;
}

Report internality_check(const Options& o) {
  Report r;
  if (load_structure(load(o), r)) r.payload["valid"] = true;
  return r;
}

Report internality_group(const Options& o) {
  Report r;
  auto s = load_structure(load(o), r);
  if (!s) return r;
  check_formula_guard(*s);
  auto d = derive(*s);
  auto g1 = group_intdef1(*s, d), g2 = group_intdef2(*s, d);
  auto gh = group_horrible(*s);
  std::set<AutPair> s1(g1.begin(), g1.end());
  bool agree = s1 == std::set<AutPair>(g2.begin(), g2.end()) &&
               s1 == std::set<AutPair>(gh.group.begin(), gh.group.end());
  json methods{{"intdef1", g1.size()}, {"intdef2", g2.size()}, {"horrible", gh.group.size()}};
  if (s->nQ <= o.brute_max && s->nX <= o.brute_max) {
    auto b = brute_force_group(*s, o.brute_max);
    agree = agree && s1 == std::set<AutPair>(b.begin(), b.end());
    methods["brute_force"] = b.size();
  } else {
    methods["brute_force"] = "skipped";
  }
  r.payload["order"] = g1.size();
  r.payload["group"] = autpairs_to_json(g1);
  r.payload["methods"] = methods;
  r.payload["agree"] = agree;
  r.payload["F"] = d.F.size();
  r.payload["H"] = d.H.size();
  if (!agree) r.status = "violation";
  return r;
}

Report internality_delta(const Options& o) {
  Report r;
  auto j = load(o);
  auto s = load_structure(j, r);
  if (!s) return r;
  check_formula_guard(*s);
  auto delta = load_delta(j, *s);
  auto d = derive(*s);
  auto g = group_delta(*s, d, delta);
  auto o2 = orbits_and_groupoid(*s, d, delta);
  auto classes = delta_type_classes(*s, d, delta);
  bool agree = o2.E == classes;
  r.payload["order"] = g.size();
  r.payload["group"] = autpairs_to_json(g);
  r.payload["orbits"] = o2.E;
  r.payload["type_classes"] = classes;
  if (s->nQ <= o.brute_max && s->nX <= o.brute_max) {
    auto b = brute_force_delta_group(*s, delta, o.brute_max);
    bool same = std::set<AutPair>(g.begin(), g.end()) == std::set<AutPair>(b.begin(), b.end());
    r.payload["brute_force"] = b.size();
    agree = agree && same;
  } else {
    r.payload["brute_force"] = "skipped";
  }
  r.payload["agree"] = agree;
  if (!agree) r.status = "violation";
  return r;
}

Report internality_groupoid(const Options& o) {
  Report r;
  auto j = load(o);
  auto s = load_structure(j, r);
  if (!s) return r;
  check_formula_guard(*s);
  auto delta = load_delta(j, *s);
  auto d = derive(*s);
  auto og = orbits_and_groupoid(*s, d, delta);
  json sizes = json::array();
  for (const auto& row : og.He) {
    json line = json::array();
    for (const auto& h : row) line.push_back(h.size());
    sizes.push_back(line);
  }
  auto rep = groupoid_torsor_check(*s, d, og);
  r.payload["order"] = og.group.size();
  r.payload["orbits"] = og.E;
  r.payload["H_sizes"] = sizes;
  r.payload["torsor"] = rep.ok;
  if (!rep.ok) {
    r.payload["counterexample"] = rep.message;
    r.status = "violation";
  }
  return r;
}

Report internality_fuzz(const Options& o) {
  Report r;
  if (o.count < 0) throw ParseError("--count must be nonnegative", "--count");
  std::mt19937_64 rng(o.seed);
  int agreements = 0;
  json failures = json::array();
  for (int i = 0; i < o.count; ++i) {
    auto b = random_bounds(rng, 4, 2, 5);
    b.symmetric = i % 2 == 0;
    auto s = random_structure(rng(), b);
    if (groups_agree(s, o.brute_max))
      ++agreements;
    else
      failures.push_back(structure_to_json(s));
  }
  r.payload["structures"] = o.count;
  r.payload["agreements"] = agreements;
  if (!failures.empty()) {
    r.payload["failures"] = failures;
    r.status = "violation";
  }
  return r;
}

Report galois_order1(const Options& o) {
  Report r;
  DifferenceFieldSpec field(SigmaOperator::parse(o.sigma), split_params(o.params));
  if (o.a.empty()) throw ParseError("--a is required", "--a");
  auto a = parse_expr(o.a, field.symbols());
  auto g = order1_group(field, a, o.max_order);
  r.payload["group"] = g.label();
  r.payload["bound"] = g.bound;
  if (g.certificate) {
    r.payload["certificate"] = json{{"r", g.certificate->r().str()}, {"m", g.certificate->m()}};
    RationalFunction h = RationalFunction(Polynomial::var("x", g.certificate->m())) / g.certificate->r();
    r.payload["invariant"] = h.str();
  }
  return r;
}

Report galois_ga(const Options& o) {
  Report r;
  auto sys = system_from_json(load(o));
  auto g = ga_group(sys);
  json eig = json::array(), P = json::array(), lattice = json::array(), cent = json::array();
  for (const auto& e : g.eigenvalues) eig.push_back(to_string(e));
  for (std::size_t i = 0; i < g.P.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < g.P.cols(); ++k) row.push_back(to_string(g.P(i, k)));
    P.push_back(row);
  }
  for (const auto& v : g.lattice.vectors()) {
    json vec = json::array();
    for (const auto& x : v) vec.push_back(x.get_si());
    lattice.push_back(vec);
  }
  for (const auto& c : g.centralizer) cent.push_back(c.str() + " = 0");
  r.payload["eigenvalues"] = eig;
  r.payload["P"] = P;
  r.payload["lattice"] = lattice;
  r.payload["centralizer"] = cent;
  r.payload["equality"] = g.equality;
  return r;
}

json search_payload(const InvariantSearchResult& res) {
  json invs = json::array();
  for (const auto& inv : res.invariants) invs.push_back(invariant_to_json(inv));
  return json{{"bounds", {{"d", res.bounds.d}, {"k", res.bounds.k_max}, {"m", res.bounds.m}}},
              {"invariants", invs}};
}

Report galois_invariants(const Options& o) {
  Report r;
  auto sys = system_from_json(load(o));
  r.payload = search_payload(invariant_search(sys, parse_bounds(o.bounds)));
  return r;
}

Report galois_group(const Options& o) {
  Report r;
  auto j = load(o);
  auto sys = system_from_json(j);
  std::vector<Invariant> invs;
  if (j.contains("invariants")) {
    invs = invariants_from_json(j["invariants"], sys);
    for (std::size_t i = 0; i < invs.size(); ++i)
      if (!verify_invariant(sys, invs[i]))
        throw DomainError("/invariants/" + std::to_string(i) + ": " + invs[i].str() + " is not invariant");
  } else {
    auto res = invariant_search(sys, parse_bounds(o.bounds));
    invs = res.invariants;
    r.payload["bounds"] = search_payload(res)["bounds"];
  }
  auto pres = emit_group_equations(sys, invs);
  json invj = json::array(), eqs = json::array();
  for (const auto& inv : invs) invj.push_back(invariant_to_json(inv));
  for (const auto& e : pres.equations) eqs.push_back(e.str() + " = 0");
  r.payload["sigma_equations"] = pres.sigma_equations;
  r.payload["equations"] = eqs;
  r.payload["invariants"] = invj;
  if (pres.lattice) {
    json lattice = json::array();
    for (const auto& v : pres.lattice->vectors()) {
      json vec = json::array();
      for (const auto& x : v) vec.push_back(x.get_si());
      lattice.push_back(vec);
    }
    r.payload["lattice"] = lattice;
  }
  // G_A when it is computable; powers of A outside the invariant-cut group show G != G_A
  try {
    auto ga = ga_group(sys);
    json lattice = json::array();
    for (const auto& v : ga.lattice.vectors()) {
      json vec = json::array();
      for (const auto& x : v) vec.push_back(x.get_si());
      lattice.push_back(vec);
    }
    json outside = json::array();
    for (long k = 1; k <= 4; ++k)
      if (!satisfies(pres, matrix_pow(sys.A(), k))) outside.push_back(k);
    r.payload["ga"] = json{{"lattice", lattice},
                           {"equality", ga.equality},
                           {"powers_outside", outside},
                           {"agree", outside.empty()}};
  } catch (const Unsupported& e) {
    r.payload["ga"] = json{{"unsupported", e.what()}};
  }
  return r;
}

Report galois_torsor(const Options& o) {
  Report r;
  auto j = load(o);
  auto sys = system_from_json(j);
  if (!j.contains("invariants")) throw ParseError("/invariants: missing field", "/invariants");
  auto invs = invariants_from_json(j["invariants"], sys);
  if (!j.contains("e")) throw ParseError("/e: missing field", "/e");
  auto e = constants_from_json(j["e"], sys.field().symbols(), "/e");
  std::string gtext = o.g;
  if (gtext.empty() && j.contains("g")) {
    if (!j["g"].is_string()) throw ParseError("/g: expected a matrix string", "/g");
    gtext = j["g"].get<std::string>();
  }
  if (gtext.empty()) throw ParseError("--g is required", "--g");
  auto g = parse_matrix(gtext, sys.field().symbols());
  std::mt19937_64 rng(o.seed);
  auto m = torsor_family_membership(sys, invs, e, g, rng, o.samples);
  r.payload["member"] = m.member;
  r.payload["method"] = m.method;
  r.payload["samples"] = m.samples;
  r.payload["disagreements"] = m.disagreements;
  if (m.disagreements) r.status = "violation";
  return r;
}

Report pv_check(const Options& o) {
  Report r;
  auto j = load(o);
  auto sys = system_from_json(j);
  if (!j.contains("invariants")) throw ParseError("/invariants: missing field", "/invariants");
  auto invs = invariants_from_json(j["invariants"], sys);
  if (!j.contains("constants")) throw ParseError("/constants: missing field", "/constants");
  auto c = constants_from_json(j["constants"], sys.field().symbols(), "/constants");
  auto rep = difference_ideal_stability(sys, invs, c);
  json gens = json::array(), imgs = json::array();
  for (const auto& p : rep.generators) gens.push_back(p.str());
  for (const auto& p : rep.images) imgs.push_back(p.str());
  r.payload["stable"] = rep.ok;
  r.payload["generators"] = gens;
  r.payload["images"] = imgs;
  if (!rep.ok) {
    r.status = "violation";
    r.payload["failing"] = rep.failing;
    r.payload["witness"] = rep.witness;
  }
  return r;
}

void render(const Report& r, const Options& o, std::ostream& out) {
  json j = r.payload;
  j["status"] = r.status;
  j["seed"] = o.seed;
  if (o.json_out) {
    out << j.dump() << "\n";
    return;
  }
  out << "status: " << r.status << "\n";
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() == "status") continue;
    out << it.key() << ": " << (it->is_string() ? it->get<std::string>() : it->dump()) << "\n";
  }
}

int exit_code(const std::string& status) {
  if (status == "ok") return 0;
  if (status == "violation") return 1;
  return 2;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact difference Galois groups and finite internality structures", "diffgal"};
  app.require_subcommand(1);
  Options o;
  std::function<Report(const Options&)> action;

  auto common = [&](CLI::App* sub) {
    sub->add_flag("--json", o.json_out, "Machine-readable output");
    sub->add_option("--seed", o.seed, "Seed for randomized checks");
  };
  auto with_file = [&](CLI::App* sub) {
    common(sub);
    sub->add_option("--file", o.file, "Input JSON file")->required();
  };
  auto add = [&](const char* name, const char* help, Report (*fn)(const Options&)) {
    auto* sub = app.add_subcommand(name, help);
    sub->callback([&action, fn] { action = fn; });
    return sub;
  };

  auto* check = add("internality-check", "Validate a finite internality structure", internality_check);
  with_file(check);
  auto* grp = add("internality-group", "Automorphism group by every formula and brute force", internality_group);
  with_file(grp);
  grp->add_option("--brute-max", o.brute_max, "Size guard for the brute-force oracle");
  auto* del = add("internality-delta", "Group preserving the relations in \"delta\"", internality_delta);
  with_file(del);
  del->add_option("--brute-max", o.brute_max, "Size guard for the brute-force oracle");
  auto* gpd = add("internality-groupoid", "Orbits, opposite groupoid and torsor checks", internality_groupoid);
  with_file(gpd);
  auto* fuzz = add("internality-fuzz", "Random structures against the brute-force oracle", internality_fuzz);
  common(fuzz);
  fuzz->add_option("--count", o.count, "Number of structures");
  auto* ord = add("galois-order1", "Order-one equation sigma(y) = a y", galois_order1);
  common(ord);
  ord->add_option("--sigma", o.sigma, "identity, shift:<c> or dilation:<q>");
  ord->add_option("--params", o.params, "Comma-separated parameter names");
  ord->add_option("--a", o.a, "The coefficient a")->required();
  ord->add_option("--max-order", o.max_order, "Largest certificate exponent");
  auto* ga = add("galois-ga", "G_A for a diagonalizable rational matrix", galois_ga);
  with_file(ga);
  auto* inv = add("galois-invariants", "Search for invariant functions", galois_invariants);
  with_file(inv);
  inv->add_option("--bounds", o.bounds, "d=<degree>,k=<det exponent>,m=<t-degree>");
  auto* gg = add("galois-group", "Group equations cut out by invariants", galois_group);
  with_file(gg);
  gg->add_option("--bounds", o.bounds, "Search bounds when the file lists no invariants");
  auto* tor = add("galois-torsor", "Membership of g in the group of the fiber F = e", galois_torsor);
  with_file(tor);
  tor->add_option("--g", o.g, "Matrix such as [[1,0],[0,-1]]");
  tor->add_option("--samples", o.samples, "Fiber points checked directly");
  auto* pv = add("pv-check", "Sigma-stability of the ideal generated by h_i - c_i", pv_check);
  with_file(pv);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  Report r;
  try {
    r = action(o);
  } catch (const ParseError& e) {
    r.status = "error";
    r.payload = json{{"message", e.what()}};
  } catch (const Unsupported& e) {
    r.status = "unsupported";
    r.payload = json{{"message", e.what()}};
  } catch (const GuardExceeded& e) {
    r.status = "unsupported";
    r.payload = json{{"message", e.what()}};
  } catch (const DomainError& e) {
    r.status = "error";
    r.payload = json{{"message", e.what()}};
  }
  if (r.payload.contains("message")) err << r.payload["message"].get<std::string>() << "\n";
  render(r, o, out);
  return exit_code(r.status);
}

}  // namespace diffgal
