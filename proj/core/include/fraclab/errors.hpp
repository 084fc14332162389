#pragma once

#include <stdexcept>
#include <string>

namespace fraclab {

// Bad user input: malformed config files, out-of-range parameters,
// incompatible run directories handed to compare.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A coefficient field failed the uniform ellipticity certification.
class EllipticityError : public std::runtime_error {
public:
    explicit EllipticityError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical machinery broke down: eigensolver did not converge, linear
// solver stalled, non-finite values appeared.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// A quadrature or iteration could not reach its accuracy target within
// its resource cap (node doubling limit, size cap).
class AccuracyError : public std::runtime_error {
public:
    explicit AccuracyError(const std::string& msg) : std::runtime_error(msg) {}
};

// A run-time structural guarantee of the scheme was violated (positivity
// floor, mass balance identity, maximum principle, energy slack).
class PropertyViolation : public std::runtime_error {
public:
    explicit PropertyViolation(const std::string& msg) : std::runtime_error(msg) {}
};

// compare/continuation inputs that cannot be compared (mismatched grids).
class ComparisonError : public std::runtime_error {
public:
    explicit ComparisonError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace fraclab
