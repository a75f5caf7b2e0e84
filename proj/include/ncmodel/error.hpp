#pragma once

#include <stdexcept>
#include <string>

namespace ncmodel {

enum class ErrorKind {
  invalid_parameter,
  not_row_contraction,
  precondition,
  rejected_input,
  degenerate_input,
  out_of_ball,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Carries ||sum T_i T_i^*|| - 1.
class NotRowContraction : public Error {
 public:
  explicit NotRowContraction(double excess);
  double excess() const { return excess_; }

 private:
  double excess_;
};

}  // namespace ncmodel
