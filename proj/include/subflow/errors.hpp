#pragma once

#include <stdexcept>
#include <string>

namespace subflow {

/// A parameter or input outside its documented domain. The message names the offender.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Gamma-type pole: a non-positive integer argument reached a Gamma evaluation.
class PoleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An adaptive quadrature gave up before reaching the requested tolerance.
class ToleranceError : public std::runtime_error {
public:
    ToleranceError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}
    /// Error estimate actually reached.
    double achieved() const { return achieved_; }

private:
    double achieved_;
};

/// Zero (or numerically zero) pivot in the tridiagonal elimination.
class SingularPivotError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A compact-support profile was required (delta < 0) but no support end was given.
class MissingSupportError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The numerical wetting front ran into the far boundary of the grid.
class FrontReachedBoundaryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Scheme self-check failed (e.g. clamped negative mass above budget).
class SchemeQualityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file; line() is the 1-based offending line.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Fit could not be carried out (degenerate data and similar).
class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace subflow
