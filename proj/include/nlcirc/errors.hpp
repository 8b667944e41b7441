#pragma once

#include <stdexcept>
#include <string>

namespace nlcirc {

/// Runtime failure inside a solver or model evaluation (non-convergence,
/// violated modeling assumption, singular system). Distinct from
/// std::invalid_argument, which is reserved for precondition violations
/// on inputs; the CLI maps the two to exit codes 2 and 1.
class SimulationError : public std::runtime_error {
public:
    explicit SimulationError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace nlcirc
