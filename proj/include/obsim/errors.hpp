#pragma once

#include <stdexcept>
#include <string>

namespace obsim {

// Malformed or inconsistent configuration (bad JSON document, empty world, ...).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A caller broke an operation's precondition.
class ContractViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace obsim
