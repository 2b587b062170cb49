#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace birkhoff {

enum class Errc {
  zero_vector,
  degenerate_plane,
  not_unit,
  no_convergence,
  singular_system,
  inadmissible_norm,
  insufficient_samples,
  collinear_samples,
  orientation_ambiguity,
  out_of_domain,
  degenerate_chart,
  fd_step_underflow,
  near_tangent_normal,
  defective_differential,
  rank_zero,
  asymptotic_input,
  trace_stall,
  plane_degenerate,
  umbilic_start,
  definite_region,
  umbilic_point,
  open_surface,
  parse_error,
  validation_error,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace birkhoff
