#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chanrad {

enum class Errc {
  unsupported_shape,
  index_out_of_range,
  degenerate_well,
  invalid_harmonic,
  insufficient_data,
  dimension_mismatch,
  empty_population,
  invalid_input,
  validation,
  io,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), message_(what) {}

  Errc code() const noexcept { return code_; }
  // The reason without the error-kind prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  Errc code_;
  std::string message_;
};

}  // namespace chanrad
