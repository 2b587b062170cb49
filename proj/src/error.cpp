#include "birkhoff/error.hpp"

namespace birkhoff {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::zero_vector: return "ZeroVector";
    case Errc::degenerate_plane: return "DegeneratePlane";
    case Errc::not_unit: return "NotUnit";
    case Errc::no_convergence: return "NoConvergence";
    case Errc::singular_system: return "SingularSystem";
    case Errc::inadmissible_norm: return "InadmissibleNorm";
    case Errc::insufficient_samples: return "InsufficientSamples";
    case Errc::collinear_samples: return "CollinearSamples";
    case Errc::orientation_ambiguity: return "OrientationAmbiguity";
    case Errc::out_of_domain: return "OutOfDomain";
    case Errc::degenerate_chart: return "DegenerateChart";
    case Errc::fd_step_underflow: return "FdStepUnderflow";
    case Errc::near_tangent_normal: return "NearTangentNormal";
    case Errc::defective_differential: return "DefectiveDifferential";
    case Errc::rank_zero: return "RankZero";
    case Errc::asymptotic_input: return "AsymptoticInput";
    case Errc::trace_stall: return "TraceStall";
    case Errc::plane_degenerate: return "PlaneDegenerate";
    case Errc::umbilic_start: return "UmbilicStart";
    case Errc::definite_region: return "DefiniteRegion";
    case Errc::umbilic_point: return "UmbilicPoint";
    case Errc::open_surface: return "OpenSurface";
    case Errc::parse_error: return "ParseError";
    case Errc::validation_error: return "ValidationError";
  }
  return "Unknown";
}

}  // namespace birkhoff
