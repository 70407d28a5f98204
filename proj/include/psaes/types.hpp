#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace psaes
{
    using Vector = Eigen::VectorXd;
    using Matrix = Eigen::MatrixXd;

    /// Bad input from a caller: out-of-range parameter, unknown name, malformed config.
    struct InvalidArgument : std::invalid_argument
    {
        using std::invalid_argument::invalid_argument;
    };

    /// The distribution state can no longer be factorized (C lost definiteness,
    /// a non-finite value crept in). Not recoverable within a run.
    struct StateCorruption : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    /// The objective returned a non-finite value or threw.
    struct ObjectiveFailure : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    struct IoFailure : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };
}
