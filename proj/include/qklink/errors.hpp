#ifndef QKLINK_ERRORS_HPP
#define QKLINK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qklink {

// Base class for all library errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file (CSV / JSON); message carries file and line context.
class parse_error : public error {
public:
    explicit parse_error(const std::string& what) : error(what) {}
};

// Structurally valid input that violates a documented invariant.
class validation_error : public error {
public:
    explicit validation_error(const std::string& what) : error(what) {}
};

// Parameters outside the mathematical domain of a model formula.
class model_domain_error : public error {
public:
    explicit model_domain_error(const std::string& what) : error(what) {}
};

}  // namespace qklink

#endif
