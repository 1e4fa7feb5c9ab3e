// JSON (format tag "polyflex/1") and OBJ serialization.
#pragma once

#include <string>

#include "json.hpp"
#include "polyflex/constructions.hpp"
#include "polyflex/flex.hpp"
#include "polyflex/mesh.hpp"

namespace polyflex {

using Json = nlohmann::json;

inline constexpr const char* kFormatTag = "polyflex/1";

/// Malformed input; what() names the location (line/column or JSON path).
class ParseError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// Parses text, reporting syntax errors with line and column of `source`.
Json parse_json(const std::string& text, const std::string& source = "input");
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

Json mesh_to_json(const Realization& r);
Realization mesh_from_json(const Json& j);

Json params_to_json(const DodecParams& p);
/// Lengths are checked for being positive finite numbers.
DodecParams params_from_json(const Json& j);

Json sample_to_json(const FlexSample& s);
FlexSample sample_from_json(const Json& j);
Json trajectory_to_json(const FlexTrajectory& t);
FlexTrajectory trajectory_from_json(const Json& j);

FoldSign fold_sign_from_string(const std::string& s);

std::string export_obj(const Realization& r);

/// Validation, embeddedness, volume and flex dimension of a realization.
/// Never throws for geometric problems; they end up in "problems".
Json check_report(const Realization& r, const Tolerance& tol = {});
/// check_report of the dodecahedron plus the build's own quantities.
Json build_report(const DodecBuild& b, const Tolerance& tol = {});

}  // namespace polyflex
