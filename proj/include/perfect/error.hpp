#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace perfect {

enum class Errc {
  invalid_argument,
  dimension_mismatch,
  not_verified,
  singular,
  defective,
  no_convergence,
  not_invariant,
  rank_deficient,
  chaining_mismatch,
  no_closed_form,
  not_regular,
  not_connected,
  consolidation_failed,
  excluded_eigenvalue,
  zero_contraction,
  hypothesis_unmet,
  numerical_failure,
  parse,
  io,
};

std::string_view to_string(Errc code);

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code mapping) can branch on the category.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace perfect
