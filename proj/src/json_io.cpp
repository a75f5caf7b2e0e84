#include "ncmodel/json_io.hpp"

#include "ncmodel/error.hpp"

#include <charconv>
#include <regex>

namespace ncmodel {

namespace {

double parse_real(const std::string& s) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  if (!s.empty() && *b == '+') ++b;
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e || b == e) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

int int_from_json(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ParseError(where, "expected an integer");
  return j.get<int>();
}

}  // namespace

cplx parse_complex(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw std::invalid_argument("empty complex literal");
  if (s.back() != 'i' && s.back() != 'j') return parse_real(s);
  s.pop_back();
  // split at the last sign that is not a leading sign or part of an exponent
  std::size_t cut = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;)
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      cut = k;
      break;
    }
  auto imag = [](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_real(t);
  };
  if (cut == std::string::npos) return cplx(0.0, imag(s));
  return cplx(parse_real(s.substr(0, cut)), imag(s.substr(cut)));
}

Json complex_to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

cplx complex_from_json(const Json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return cplx(j[0].get<double>(), j[1].get<double>());
  if (j.is_string()) {
    try {
      return parse_complex(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ParseError(where, e.what());
    }
  }
  throw ParseError(where, "expected a complex number [re, im]");
}

Json matrix_to_json(const Mat& m) {
  Json data = Json::array();
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) data.push_back(complex_to_json(m(r, c)));
  return Json{{"shape", {m.rows(), m.cols()}}, {"data", data}};
}

Mat matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) return Mat::Constant(1, 1, complex_from_json(j, where));
  if (!j.contains("shape") || !j.contains("data")) throw ParseError(where, "matrix needs shape and data");
  const Json& shape = j["shape"];
  if (!shape.is_array() || shape.size() != 2 || !shape[0].is_number_integer() ||
      !shape[1].is_number_integer() || shape[0].get<long>() < 0 || shape[1].get<long>() < 0)
    throw ParseError(where + ".shape", "expected [rows, cols]");
  const Index r = shape[0].get<Index>(), c = shape[1].get<Index>();
  const Json& data = j["data"];
  if (!data.is_array() || static_cast<Index>(data.size()) != r * c)
    throw ParseError(where + ".data", "expected " + std::to_string(r * c) + " entries");
  Mat m(r, c);
  for (Index k = 0; k < r * c; ++k)
    m(k / c, k % c) = complex_from_json(data[k], where + ".data[" + std::to_string(k) + "]");
  return m;
}

Json vector_to_json(const Vec& v) {
  Json out = Json::array();
  for (Index k = 0; k < v.size(); ++k) out.push_back(complex_to_json(v(k)));
  return out;
}

Json tuple_to_json(const Tuple& t) {
  Json out = Json::array();
  for (const auto& m : t) out.push_back(matrix_to_json(m));
  return out;
}

Tuple tuple_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ParseError(where, "expected a non-empty list of matrices");
  Tuple t;
  for (std::size_t k = 0; k < j.size(); ++k)
    t.push_back(matrix_from_json(j[k], where + "[" + std::to_string(k) + "]"));
  for (std::size_t k = 0; k < t.size(); ++k)
    if (t[k].rows() != t[k].cols() || t[k].rows() != t[0].rows())
      throw ParseError(where + "[" + std::to_string(k) + "]", "matrices must be square of one size");
  return t;
}

Json polynomial_to_json(const NcPolynomial& p) {
  Json out = Json::array();
  for (const auto& [w, c] : p.terms())
    out.push_back(Json{{"word", w.letters()}, {"re", c.real()}, {"im", c.imag()}});
  return out;
}

NcPolynomial polynomial_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where, "polynomial must be a list of terms");
  NcPolynomial p;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string at = where + "[" + std::to_string(k) + "]";
    const Json& t = j[k];
    if (!t.is_object() || !t.contains("word")) throw ParseError(at, "term needs a word");
    std::vector<int> letters;
    for (const auto& l : t["word"]) {
      if (!l.is_number_integer() || l.get<int>() < 1) throw ParseError(at + ".word", "letters are positive integers");
      letters.push_back(l.get<int>());
    }
    double re = t.value("re", 0.0), im = t.value("im", 0.0);
    p.add_term(Word(letters), cplx(re, im));
  }
  return p;
}

std::vector<NcPolynomial> ideal_from_shorthand(const std::string& text, int n) {
  static const std::regex q_re(R"(\s*q-commutative\s*\(\s*([^)]+)\)\s*)");
  static const std::regex t_re(R"(\s*truncated\s*\(\s*(\d+)\s*\)\s*)");
  std::smatch m;
  if (text == "free") return {};
  if (text == "commutative") return commutator_generators(n);
  if (std::regex_match(text, m, q_re)) {
    cplx q = parse_complex(m[1].str());
    Mat qm = Mat::Constant(n, n, q);
    return q_commutator_generators(n, qm);
  }
  if (std::regex_match(text, m, t_re)) return truncation_generators(n, std::stoi(m[1].str()));
  throw std::invalid_argument("unknown ideal '" + text + "'");
}

std::vector<NcPolynomial> ideal_from_json(const Json& j, int n, const std::string& where) {
  try {
    if (j.is_string()) return ideal_from_shorthand(j.get<std::string>(), n);
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
      throw ParseError(where, "ideal must be a shorthand string or an object with a type");
    const std::string type = j["type"].get<std::string>();
    if (type == "q-commutative") {
      if (!j.contains("q")) throw ParseError(where, "q-commutative ideal needs q");
      Mat q = j["q"].is_object() ? matrix_from_json(j["q"], where + ".q")
                                 : Mat::Constant(n, n, complex_from_json(j["q"], where + ".q"));
      if (q.rows() != n || q.cols() != n) throw ParseError(where + ".q", "q must be n x n");
      return q_commutator_generators(n, q);
    }
    if (type == "truncated") {
      if (!j.contains("m")) throw ParseError(where, "truncated ideal needs m");
      return truncation_generators(n, int_from_json(j["m"], where + ".m"));
    }
    return ideal_from_shorthand(type, n);
  } catch (const std::invalid_argument& e) {
    throw ParseError(where, e.what());
  } catch (const Error& e) {
    throw ParseError(where, e.what());
  }
}

}  // namespace ncmodel
