#pragma once

#include <stdexcept>
#include <string>

namespace blockcg {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A vector, matrix or partition does not have the advertised shape.
struct DimensionMismatch : Error { using Error::Error; };

/// An input point lies outside the feasible set of its block.
struct InfeasibleInput : Error { using Error::Error; };

/// A block subsolver returned an infeasible point, an inconsistent
/// objective, or a negative gap beyond floating-point noise.
struct SubsolverFailure : Error { using Error::Error; };

/// Step length outside (0, 1].
struct StepOutOfRange : Error { using Error::Error; };

/// Backtracking exceeded the exponent budget; the gradient and value
/// oracles are inconsistent with each other.
struct StepsizeUnderflow : Error { using Error::Error; };

/// The convex-case stepsize rule was requested on a problem whose
/// smooth part is not declared convex.
struct NotDeclaredConvex : Error { using Error::Error; };

/// Inverse demand is not strictly decreasing on [0, gamma].
struct NonMonotoneDemand : Error { using Error::Error; };

/// An origin/destination pair has an empty path set.
struct DisconnectedPair : Error { using Error::Error; };

/// Malformed input file.
struct ParseError : Error { using Error::Error; };

/// Solver configuration violates a documented range or requirement.
struct InvalidConfig : Error { using Error::Error; };

} // namespace blockcg
