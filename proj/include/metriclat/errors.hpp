#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace metriclat {

enum class error_kind {
  not_hermitian,
  not_positive_definite,
  dimension_mismatch,
  ill_conditioned_metric,
  not_quasi_self_adjoint,
  not_quasi_hermitian,
  intertwining_failed,
  lambda_in_spectrum,
  precondition_failed,
  not_normal,
  singular_t,
  length_mismatch,
  not_symmetric_form,
  probe_in_spectrum,
  grid_too_coarse,
  parameter_domain,
  unsupported,
  parse_error,
};

constexpr std::string_view to_string(error_kind k) {
  switch (k) {
    case error_kind::not_hermitian: return "NotHermitian";
    case error_kind::not_positive_definite: return "NotPositiveDefinite";
    case error_kind::dimension_mismatch: return "DimensionMismatch";
    case error_kind::ill_conditioned_metric: return "IllConditionedMetric";
    case error_kind::not_quasi_self_adjoint: return "NotQuasiSelfAdjoint";
    case error_kind::not_quasi_hermitian: return "NotQuasiHermitian";
    case error_kind::intertwining_failed: return "IntertwiningFailed";
    case error_kind::lambda_in_spectrum: return "LambdaInSpectrum";
    case error_kind::precondition_failed: return "PreconditionFailed";
    case error_kind::not_normal: return "NotNormal";
    case error_kind::singular_t: return "SingularT";
    case error_kind::length_mismatch: return "LengthMismatch";
    case error_kind::not_symmetric_form: return "NotSymmetricForm";
    case error_kind::probe_in_spectrum: return "ProbeInSpectrum";
    case error_kind::grid_too_coarse: return "GridTooCoarse";
    case error_kind::parameter_domain: return "ParameterDomain";
    case error_kind::unsupported: return "Unsupported";
    case error_kind::parse_error: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so
/// callers (and the CLI exit-code mapping) can dispatch without parsing text.
class error : public std::runtime_error {
 public:
  error(error_kind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  error_kind kind() const noexcept { return kind_; }

 private:
  error_kind kind_;
};

inline void require_same_dim(long a, long b, const char* where) {
  if (a != b)
    throw error(error_kind::dimension_mismatch,
                std::string(where) + ": " + std::to_string(a) + " vs " + std::to_string(b));
}

}  // namespace metriclat
