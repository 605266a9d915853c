#pragma once

// Error taxonomy for the M/M/inf absorption toolkit.  The CLI maps these to
// process exit codes: parameter_error -> 2, domain/convergence errors -> 3,
// statistics_error -> 4.

#include <stdexcept>
#include <string>

namespace mminf {

/// Invalid user-supplied parameter (rates, sizes, tolerances, CLI flags).
class parameter_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input is outside the mathematical domain of an operation (pole proximity,
/// unsupported argument range, theta at or beyond the survival rate).
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An iterative scheme failed to reach its tolerance within its budget.
class convergence_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A root bracket could not be established or maintained.
class bracket_error : public convergence_error {
public:
    using convergence_error::convergence_error;
};

/// theta passed to the stationarity recurrence exceeds the survival rate;
/// detected when a probability entry turns negative.  Carries the first
/// offending index so callers can report where positivity failed.
class invalid_theta_error : public domain_error {
public:
    invalid_theta_error(const std::string& what, long index)
        : domain_error(what), index_(index) {}

    long index() const noexcept { return index_; }

private:
    long index_;
};

/// Evaluation was requested too close to the simple pole of the absorption
/// transform; the result would be dominated by cancellation.
class near_singularity_error : public domain_error {
public:
    using domain_error::domain_error;
};

/// Not enough data to form the requested estimate (too few survivors,
/// empty fit window).
class statistics_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A simulated trajectory exceeded the event budget.  Carries the
/// trajectory index for reproducibility reports.
class runaway_trajectory_error : public std::runtime_error {
public:
    runaway_trajectory_error(const std::string& what, long trajectory)
        : std::runtime_error(what), trajectory_(trajectory) {}

    long trajectory() const noexcept { return trajectory_; }

private:
    long trajectory_;
};

}  // namespace mminf
