#pragma once

#include <stdexcept>
#include <string>

namespace dendro {

// Precondition on an argument violated (point off the dendrite, N = 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Parameters are individually valid but inconsistent with each other.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numeric experiment could not establish what it set out to check
// (orbit never entered a slot, ambiguous recognizability, ...).
class DiagnosticError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Construction produced an object that fails its own invariants.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace dendro
