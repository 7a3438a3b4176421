#pragma once

#include <stdexcept>
#include <string>

namespace fowin {

/// Malformed textual input (formulas, structures, circuits, bundles).
class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// An operation was called outside its domain or a configured size guard was hit.
class DomainError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Two routes that must agree did not.
class ConsistencyError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace fowin
