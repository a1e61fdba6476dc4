#pragma once

#include <stdexcept>
#include <string>

namespace mde {

/// Malformed or unusable input data: unreadable files, bad numeric fields,
/// datasets too small or degenerate to work with, incomplete manifests.
class data_error : public std::runtime_error {
 public:
  explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

/// A computation that cannot proceed numerically: singular linear systems,
/// non-finite intermediates, empty quadrature support.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mde
