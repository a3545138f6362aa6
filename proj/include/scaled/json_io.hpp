#pragma once

#include <string>

#include <json.hpp>

#include "scaled/decoration.hpp"
#include "scaled/enumerate.hpp"

namespace scaled {

using json = nlohmann::json;

inline constexpr const char* kSchema = "scaled-toolkit/1";

json ref_to_json(const FiniteSimplicialSet& x, Simplex s);
Simplex ref_from_json(const FiniteSimplicialSet& x, const json& j);

json complex_to_json(const FiniteSimplicialSet& x);
ComplexPtr complex_from_json(const json& j);

json decoration_to_json(const Decorated& d);
Decorated decoration_from_json(const json& j);
// Accepts either a decoration document or a bare complex (read as plain).
Decorated decorated_from_any(const json& j);

json assignment_to_json(const FiniteSimplicialSet& source, const FiniteSimplicialSet& target, const Assignment& a);
Assignment assignment_from_json(const FiniteSimplicialSet& source, const FiniteSimplicialSet& target, const json& j);

json map_to_json(const DecoratedMap& f);
DecoratedMap map_from_json(const json& j);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace scaled
