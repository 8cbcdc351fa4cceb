#pragma once

#include <stdexcept>
#include <string>

#include "amicable/natural.hpp"

namespace amicable {

// Input outside an operation's mathematical domain (n = 0, m >= n, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ShapeMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class InsufficientData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A - (phi(A) + phi(B)) (or the B analogue) not divisible by 2^n.
class DivisibilityViolation : public std::runtime_error {
public:
    DivisibilityViolation(char side, Natural remainder)
        : std::runtime_error(std::string("divisibility violation on side ") + side +
                             ": remainder " + remainder.get_str()),
          side_(side), remainder_(std::move(remainder))
    {
    }

    char side() const noexcept { return side_; }
    const Natural& remainder() const noexcept { return remainder_; }

private:
    char side_;
    Natural remainder_;
};

class CatalogError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace amicable
