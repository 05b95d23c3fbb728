#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace beamvi {

/// Raised by a Cholesky factorization that meets a non-positive pivot.
class NotPositiveDefinite : public std::runtime_error {
public:
    explicit NotPositiveDefinite(std::size_t pivot)
        : std::runtime_error("matrix is not positive definite (pivot " +
                             std::to_string(pivot) + ")"),
          pivot_(pivot) {}

    std::size_t pivot() const noexcept { return pivot_; }

private:
    std::size_t pivot_;
};

/// An iterative method ran out of iterations.
class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, double residual)
        : std::runtime_error(what + " (last residual " + std::to_string(residual) + ")"),
          residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// A time loop aborted; carries the step at which the solver failed.
class SolverFailure : public std::runtime_error {
public:
    SolverFailure(long step, const std::string& cause)
        : std::runtime_error("step " + std::to_string(step) + ": " + cause), step_(step) {}

    long step() const noexcept { return step_; }

private:
    long step_;
};

/// A computed contact state violates the complementarity conditions.
class DiagnosticFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace beamvi
