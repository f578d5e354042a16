#pragma once

#include <stdexcept>
#include <string>

namespace bvm {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Iterative routine failed to reach its tolerance.
struct NonConvergence : Error {
    NonConvergence(const std::string& what, int iterations, double last_residual)
        : Error(what + " (iterations=" + std::to_string(iterations) +
                ", residual=" + std::to_string(last_residual) + ")"),
          iterations(iterations), last_residual(last_residual) {}
    int iterations;
    double last_residual;
};

// A matrix required to be SPD has an eigenvalue at or below the threshold.
// Signals an assumption (A4)/(A4') failure upstream.
struct NotPositiveDefinite : Error {
    explicit NotPositiveDefinite(double lambda_min)
        : Error("matrix not positive definite (lambda_min=" +
                std::to_string(lambda_min) + ")"),
          lambda_min(lambda_min) {}
    double lambda_min;
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

struct EmptyData : Error {
    EmptyData() : Error("empty data sequence") {}
};

struct ObservationOutOfSupport : Error {
    ObservationOutOfSupport(std::size_t index, const std::string& model)
        : Error("observation " + std::to_string(index) +
                " outside the support of model " + model),
          index(index) {}
    std::size_t index;
};

// A derivative beyond the prior's declared smoothness class was requested.
struct SmoothnessViolation : Error {
    explicit SmoothnessViolation(const std::string& msg) : Error(msg) {}
};

// Newton iterate escaped the parameter space and no feasible step exists.
struct LeftSupport : Error {
    explicit LeftSupport(const std::string& msg) : Error(msg) {}
};

struct AssumptionFailure : Error {
    explicit AssumptionFailure(const std::string& msg) : Error(msg) {}
};

// No samples / quadrature nodes fell inside the requested region.
struct EmptyRegion : Error {
    explicit EmptyRegion(const std::string& msg) : Error(msg) {}
};

// An integrand or sampled function value was not finite.
struct NonFinite : Error {
    NonFinite(const std::string& where, double location)
        : Error("non-finite value in " + where + " near " +
                std::to_string(location)),
          location(location) {}
    double location;
};

struct PreconditionFail : Error {
    explicit PreconditionFail(const std::string& msg) : Error(msg) {}
};

// Quadrature window misses more probability mass than allowed.
struct WindowTooSmall : Error {
    explicit WindowTooSmall(double missing_mass)
        : Error("quadrature window misses mass " + std::to_string(missing_mass)),
          missing_mass(missing_mass) {}
    double missing_mass;
};

// Assignment problem too large for the exact solver.
struct AssignmentOverflow : Error {
    explicit AssignmentOverflow(std::size_t m)
        : Error("assignment batch size " + std::to_string(m) +
                " exceeds the exact-solver limit") {}
};

struct ShapeTooSmall : Error {
    explicit ShapeTooSmall(double alpha)
        : Error("gamma shape must exceed 1, got " + std::to_string(alpha)) {}
};

struct HyperparameterOutOfRange : Error {
    explicit HyperparameterOutOfRange(const std::string& msg) : Error(msg) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace bvm
