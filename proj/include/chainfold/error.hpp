#ifndef CHAINFOLD_ERROR_HPP
#define CHAINFOLD_ERROR_HPP

#include <stdexcept>
#include <string>

namespace chainfold {

/// A resource cap (ground-set size, enumeration limit) was exceeded.
class CapExceeded : public std::length_error {
 public:
  explicit CapExceeded(const std::string& what) : std::length_error(what) {}
};

/// Malformed input file or construction spec.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Normalized quantities are undefined over the empty ground set.
class EmptyGroundSet : public std::domain_error {
 public:
  EmptyGroundSet() : std::domain_error("empty ground set: normalization requires n >= 1") {}
};

/// A family of set systems fails to support every permutation.
class CoverageError : public std::runtime_error {
 public:
  explicit CoverageError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

inline void require_cap(bool ok, const std::string& what) {
  if (!ok) throw CapExceeded(what);
}

}  // namespace detail
}  // namespace chainfold

#endif  // CHAINFOLD_ERROR_HPP
