#include "ncmodel/error.hpp"

#include <sstream>

namespace ncmodel {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::not_row_contraction: return "not-a-row-contraction";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::rejected_input: return "rejected-input";
    case ErrorKind::degenerate_input: return "degenerate-input";
    case ErrorKind::out_of_ball: return "out-of-ball";
  }
  return "unknown";
}

static std::string excess_message(double excess) {
  std::ostringstream os;
  os << "sum T_i T_i^* exceeds the identity by " << excess;
  return os.str();
}

NotRowContraction::NotRowContraction(double excess)
    : Error(ErrorKind::not_row_contraction, excess_message(excess)), excess_(excess) {}

}  // namespace ncmodel
