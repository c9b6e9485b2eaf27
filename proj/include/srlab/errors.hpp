#pragma once

#include <stdexcept>
#include <string>

namespace srlab {

// Thrown by the integrators when a state sample leaves the domain box.
// Carries the time of the first offending node.
class escape_error : public std::runtime_error {
public:
    escape_error(double exit_time, const std::string& what)
        : std::runtime_error(what), exit_time_(exit_time) {}
    double exit_time() const { return exit_time_; }

private:
    double exit_time_;
};

// Thrown when an estimator has too few usable data points to fit anything.
class insufficient_data : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace srlab
