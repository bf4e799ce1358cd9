#pragma once

#include <stdexcept>
#include <string>

namespace pqlab {

/// Base class for all numerical failures (series, quadrature, tails).
/// Input/contract violations use validation_error instead.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

class divergence_detected : public numeric_error {
public:
    using numeric_error::numeric_error;
};

class truncation_budget_exceeded : public numeric_error {
public:
    using numeric_error::numeric_error;
};

class node_budget_exceeded : public numeric_error {
public:
    using numeric_error::numeric_error;
};

class divergent_tail : public numeric_error {
public:
    using numeric_error::numeric_error;
};

class tail_not_converged : public numeric_error {
public:
    using numeric_error::numeric_error;
};

/// Function evaluated outside its domain; carries the offending argument.
class domain_error : public numeric_error {
public:
    domain_error(const std::string& what, double t)
        : numeric_error(what + " at t=" + std::to_string(t)), t_(t) {}
    double where() const noexcept { return t_; }

private:
    double t_;
};

/// Invalid parameters / configuration (precondition violations).
class validation_error : public std::invalid_argument {
public:
    explicit validation_error(const std::string& what) : std::invalid_argument(what) {}
};

class scheme_invalid : public validation_error {
public:
    using validation_error::validation_error;
};

}  // namespace pqlab
