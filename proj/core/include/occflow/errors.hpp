#pragma once

#include <stdexcept>
#include <string>

namespace occflow {

// Bad user-facing configuration (flags, config keys, grid specs). CLI exit code 2.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid argument to a numeric operation (negative weight, bad corridor, ...).
class domain_error : public std::runtime_error {
public:
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// Mismatched sizes or grids between operands.
class dimension_error : public std::runtime_error {
public:
    explicit dimension_error(const std::string& what) : std::runtime_error(what) {}
};

// Query on an occupation measure that has accumulated nothing.
class empty_support_error : public std::runtime_error {
public:
    explicit empty_support_error(const std::string& what) : std::runtime_error(what) {}
};

// Numeric failure mid-computation (non-finite volatility, no implied vol root, ...).
// CLI exit code 3.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace occflow
