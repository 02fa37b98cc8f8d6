#pragma once

#include <stdexcept>
#include <string>

namespace mctail {

// Machine-readable failure categories. The CLI prints them as
// "error:<name>: <message>" on stderr, one line per failure.
enum class errc {
  invalid_parameter,
  capacity,
  parse_error,
  non_stochastic_row,
  not_reversible,
  reducible_chain,
  dimension_mismatch,
  non_centered,
  invalid_gap,
  wrong_method,
  missing_parameter,
  unattainable,
  numerical_failure,
  step_out_of_range,
  precondition,
  empty_grid,
  io_error,
};

inline const char* errc_name(errc code) noexcept {
  switch (code) {
    case errc::invalid_parameter: return "invalid-parameter";
    case errc::capacity: return "capacity";
    case errc::parse_error: return "parse-error";
    case errc::non_stochastic_row: return "non-stochastic-row";
    case errc::not_reversible: return "not-reversible";
    case errc::reducible_chain: return "reducible-chain";
    case errc::dimension_mismatch: return "dimension-mismatch";
    case errc::non_centered: return "non-centered";
    case errc::invalid_gap: return "invalid-gap";
    case errc::wrong_method: return "wrong-method";
    case errc::missing_parameter: return "missing-parameter";
    case errc::unattainable: return "unattainable";
    case errc::numerical_failure: return "numerical-failure";
    case errc::step_out_of_range: return "step-out-of-range";
    case errc::precondition: return "precondition";
    case errc::empty_grid: return "empty-grid";
    case errc::io_error: return "io-error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  errc code() const noexcept { return code_; }
  const char* code_name() const noexcept { return errc_name(code_); }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

}  // namespace mctail
