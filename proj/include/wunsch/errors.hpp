// errors.hpp — exception types shared across the library.
//
// Numerical *results* (blowup, horizon caps) are reported through status
// codes on the relevant report structs, never as exceptions.  Exceptions
// are reserved for contract violations: mismatched grids, invalid
// diffeomorphisms, degenerate inertia operators fed data outside their
// domain, and malformed configuration.

#pragma once

#include <stdexcept>
#include <string>

namespace wunsch {

struct GridMismatch : std::invalid_argument {
    explicit GridMismatch(const std::string& what) : std::invalid_argument(what) {}
};

// A degenerate inertia operator (zero symbol at n = 0) was asked to invert
// a field with non-negligible mean.
struct DegenerateMeanError : std::domain_error {
    explicit DegenerateMeanError(const std::string& what) : std::domain_error(what) {}
};

// Operation defined only for non-degenerate inertia operators.
struct DegenerateKindError : std::domain_error {
    explicit DegenerateKindError(const std::string& what) : std::domain_error(what) {}
};

struct NotADiffeo : std::domain_error {
    explicit NotADiffeo(const std::string& what) : std::domain_error(what) {}
};

struct MeanNotZero : std::domain_error {
    explicit MeanNotZero(const std::string& what) : std::domain_error(what) {}
};

struct ConstantField : std::domain_error {
    explicit ConstantField(const std::string& what) : std::domain_error(what) {}
};

struct NotMonotone : std::domain_error {
    explicit NotMonotone(const std::string& what) : std::domain_error(what) {}
};

struct EndpointNotZero : std::domain_error {
    explicit EndpointNotZero(const std::string& what) : std::domain_error(what) {}
};

struct SupportOverflow : std::domain_error {
    explicit SupportOverflow(const std::string& what) : std::domain_error(what) {}
};

struct OrderViolation : std::domain_error {
    explicit OrderViolation(const std::string& what) : std::domain_error(what) {}
};

struct DependentPlane : std::domain_error {
    explicit DependentPlane(const std::string& what) : std::domain_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace wunsch
