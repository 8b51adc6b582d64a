#pragma once

#include <stdexcept>
#include <string>

namespace qha {

/// Incompatible operands: functions on different groups, operators of different
/// dimension, malformed containers.
class structural_error : public std::invalid_argument {
 public:
  explicit structural_error(const std::string& what) : std::invalid_argument(what) {}
};

/// A documented precondition of an operation does not hold.
class precondition_error : public std::domain_error {
 public:
  explicit precondition_error(const std::string& what) : std::domain_error(what) {}
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw precondition_error(what);
}

inline void require_same(bool ok, const std::string& what) {
  if (!ok) throw structural_error(what);
}

}  // namespace detail
}  // namespace qha
