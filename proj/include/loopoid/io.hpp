#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "loopoid/core.hpp"
#include "loopoid/discrete_mechanics.hpp"
#include "loopoid/finite_structures.hpp"
#include "loopoid/loopoid.hpp"
#include "loopoid/octonion.hpp"
#include "loopoid/polynomial.hpp"
#include "loopoid/skew_algebroid.hpp"
#include "loopoid/smooth_loop.hpp"

namespace loopoid::io {

using json = nlohmann::json;

struct StructureSpec {
  std::string kind;  // finite | octonion | loop | loopoid | algebroid | system
  json body;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

/// Parses and validates. Throws SchemaError whose message starts with the
/// JSON path of the offending value, e.g. "$.body.dim: ...".
StructureSpec parse_spec(const std::string& text);
json to_json(const StructureSpec& spec);

/// Sorted keys, two-space indent, doubles as %.17g, trailing newline.
std::string canonical_dump(const json& j);
std::string format_double(double x);

// Builders. `path` is the JSON path of `j`, used in error messages.
CayleyTable table_from_json(const json& j, const std::string& path);
Polynomial polynomial_from_json(const json& j, const std::string& path);
BiPolynomialMap bipolynomial_from_json(const json& j, const std::string& path);
StructureTensor tensor_from_json(const json& j, int dim, const std::string& path);
Vec vec_from_json(const json& j, const std::string& path, int expected_size = -1);
SmoothLoopChart loop_from_json(const json& j, const std::string& path);
ChartedQuasiloopoid loopoid_from_json(const json& j, const std::string& path);
FibrationChart fibration_from_json(const json& j, const std::string& path);
SkewAlgebroidChart algebroid_from_json(const json& j, const std::string& path);
DiscreteLagrangianSystem system_from_json(const json& j, const std::string& path);

json to_json(const Vec& v);
json to_json(const Mat& m);
json to_json(const StructureTensor& c);

/// Header row, ',' separator, LF endings, %.17g numbers.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);
  std::string str() const { return out_; }

 private:
  std::size_t width_;
  std::string out_;
};

}  // namespace loopoid::io
