#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace lspde {

// Base for conditions the CLI reports as domain failures (exit code 1).
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input: bad parameter ranges, inconsistent shapes (exit code 2 at the CLI).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DivergentIntegral : public DomainError {
public:
    using DomainError::DomainError;
};

class ZeroOnAxis : public DomainError {
public:
    ZeroOnAxis(std::vector<double> xi, double modulus);
    const std::vector<double>& frequency() const { return xi_; }
    double modulus() const { return modulus_; }

private:
    std::vector<double> xi_;
    double modulus_;
};

class NotAContraction : public DomainError {
public:
    explicit NotAContraction(double ratio);
    double ratio() const { return ratio_; }

private:
    double ratio_;
};

class MaxIterExceeded : public DomainError {
public:
    MaxIterExceeded(int iterations, double last_increment, double observed_ratio);
    int iterations() const { return iterations_; }
    double last_increment() const { return last_increment_; }
    double observed_ratio() const { return observed_ratio_; }

private:
    int iterations_;
    double last_increment_;
    double observed_ratio_;
};

// Observed Picard increment ratio exceeded the certified bound.
class ContractionViolated : public DomainError {
public:
    ContractionViolated(int iteration, double observed, double certified);
    int iteration() const { return iteration_; }
    double observed() const { return observed_; }

private:
    int iteration_;
    double observed_;
};

class Unbounded : public DomainError {
public:
    using DomainError::DomainError;
};

class FitFailed : public DomainError {
public:
    using DomainError::DomainError;
};

class DimensionMismatch : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class DomainTagMismatch : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class InvalidDelta : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class InvalidR : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class PreconditionViolated : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class MalformedHeader : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ShapeMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace lspde
