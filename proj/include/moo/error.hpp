#pragma once

#include <stdexcept>
#include <string>

namespace moo {

enum class ErrorCode {
  invalid_argument,
  dimension_mismatch,
  nan_input,
  empty_input,
  empty_grid,
  all_infeasible,
  lambda_max_too_small,
  over_constrained,
  not_found,
  unsupported,
  io,
  cancelled,
  internal,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace moo
