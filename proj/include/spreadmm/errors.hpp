#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace spreadmm {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Raised when a truncated MGF or a moment table is asked for a moment it does not hold.
class MomentsUnavailable : public Error {
public:
    using Error::Error;
};

struct MgfArgument {
    std::string label;
    double value;
};

class MgfDomainError : public Error {
public:
    MgfDomainError(std::vector<MgfArgument> offending, double bound);

    const std::vector<MgfArgument>& offending() const { return offending_; }
    double bound() const { return bound_; }

private:
    std::vector<MgfArgument> offending_;
    double bound_;
};

class NoSolution : public Error {
public:
    NoSolution(const std::string& what, double best_residual)
        : Error(what), best_residual_(best_residual) {}
    double best_residual() const { return best_residual_; }

private:
    double best_residual_;
};

class SeriesDivergence : public Error {
public:
    using Error::Error;
};

class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, double estimate, double error)
        : Error(what), estimate_(estimate), error_(error) {}
    double estimate() const { return estimate_; }
    double error() const { return error_; }

private:
    double estimate_;
    double error_;
};

class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what)
        : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

} // namespace spreadmm
