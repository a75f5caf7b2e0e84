#pragma once

#include "ncmodel/ideal.hpp"
#include "ncmodel/linalg.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace ncmodel {

using Json = nlohmann::json;

// Malformed input; where() is a JSON path such as $.tasks[1].points.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

Json complex_to_json(cplx z);  // [re, im]
// Accepts [re, im], a number, or a literal string such as "0.3-0.4i".
cplx complex_from_json(const Json& j, const std::string& where);
cplx parse_complex(const std::string& text);  // throws std::invalid_argument

// {"shape": [r, c], "data": [[re, im], ...]} in row-major order.
Json matrix_to_json(const Mat& m);
// Also accepts a bare complex value as a 1x1 matrix.
Mat matrix_from_json(const Json& j, const std::string& where);

Json vector_to_json(const Vec& v);
Json tuple_to_json(const Tuple& t);
Tuple tuple_from_json(const Json& j, const std::string& where);

// [{"word": [1, 2], "re": 1.0, "im": 0.0}, ...]
Json polynomial_to_json(const NcPolynomial& p);
NcPolynomial polynomial_from_json(const Json& j, const std::string& where);

// "free", "commutative", "q-commutative(q)", "truncated(m)"; or an object
// {"type": ..., "q": complex or n x n matrix, "m": int}.
std::vector<NcPolynomial> ideal_from_json(const Json& j, int n, const std::string& where);
std::vector<NcPolynomial> ideal_from_shorthand(const std::string& text, int n);

}  // namespace ncmodel
