#pragma once

#include <stdexcept>
#include <string>

namespace szego {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A denominator root lies in (or numerically on) the closed unit disc.
struct PoleOnDiscError : Error { using Error::Error; };
// Coefficient tail exceeds the requested resolution threshold.
struct UnresolvedStateError : Error { using Error::Error; };
// Output truncation / grid too small for the requested product.
struct AliasingError : Error { using Error::Error; };
// Two eigenvalue clusters are too close to separate at the given tolerance.
struct AmbiguousClusterError : Error { using Error::Error; };
// A fitted rational ratio is not a Blaschke product of the expected degree.
struct DegreeMismatchError : Error { using Error::Error; };
// 1/x too close to an eigenvalue of H_u^2 or K_u^2 for a resolvent solve.
struct NearResonanceError : Error { using Error::Error; };
// Requested spectral quantity is not defined this close to a crossing.
struct CrossingProximityError : Error { using Error::Error; };
// Singular values straddle the rank threshold.
struct ThresholdAmbiguityError : Error { using Error::Error; };
// Adaptive stepper cannot reach the requested tolerance.
struct StepFailureError : Error { using Error::Error; };
// Builtin datum failed its assembly verification.
struct AssemblyCheckError : Error { using Error::Error; };

}  // namespace szego
