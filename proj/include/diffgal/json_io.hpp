#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "diffgal/galois_linear.hpp"
#include "diffgal/internality.hpp"

namespace diffgal {

using json = nlohmann::json;

// Schema errors throw ParseError whose `where` is a JSON pointer.

// {"nQ":3,"nD":1,"piX":[0,0,0],"f":[[...],...]} with f[x][q]. Not validated.
FiniteInternality structure_from_json(const json& j);
json structure_to_json(const FiniteInternality& s);

// {"sorts":["Q","X"],"tuples":[[0,1],...]}; normalized against s.
DeltaRelation delta_from_json(const json& j, const FiniteInternality& s, const std::string& path = "");
json delta_to_json(const DeltaRelation& r);
std::vector<DeltaRelation> deltas_from_json(const json& j, const FiniteInternality& s,
                                            const std::string& path = "/delta");

json autpairs_to_json(std::vector<AutPair> g);  // sorted

// {"field":{"sigma":{"kind":"shift","c":"1"},"parameters":["a","b"]},"A":[["-1","a"],["0","b"]],
//  "entries":[...]} with optional entries. sigma may also be written "shift:1".
LinearDifferenceSystem system_from_json(const json& j);
json system_to_json(const LinearDifferenceSystem& sys);

// [{"p":"z^2","k":2},...]
std::vector<Invariant> invariants_from_json(const json& j, const LinearDifferenceSystem& sys,
                                            const std::string& path = "/invariants");
json invariant_to_json(const Invariant& inv);

// Array of expressions (strings or integers) over the field symbols.
std::vector<RationalFunction> constants_from_json(const json& j, const std::set<std::string>& symbols,
                                                  const std::string& path);

json read_json_file(const std::string& path);

}  // namespace diffgal
