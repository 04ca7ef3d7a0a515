#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "h2cem/lp/linear_program.hpp"

namespace h2cem::lp {

enum class FileFormat { Mps, LpText };

const char* to_string(FileFormat f);

/// A name the chosen format cannot carry.
class NameFormatError : public std::invalid_argument {
 public:
  NameFormatError(std::string name, const std::string& why)
      : std::invalid_argument("invalid name '" + name + "': " + why), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kMaxNameLength = 255;

/// Names that `format` cannot represent, each with the reason.
std::vector<std::string> check_names(const LinearProgramd& lp, FileFormat format);

/// Free-format MPS or CPLEX-style LP text. Rows and columns keep model order,
/// zero coefficients are dropped and numbers print with 17 significant digits.
/// Throws NameFormatError naming the first offending name.
std::string emit_lp_file(const LinearProgramd& lp, FileFormat format);

/// Inverse of emit_lp_file for the subset it writes.
LinearProgramd parse_lp_file(std::string_view text, FileFormat format);

}  // namespace h2cem::lp
