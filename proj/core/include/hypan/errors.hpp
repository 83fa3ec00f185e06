#pragma once

#include <stdexcept>
#include <string>

namespace hypan {

/// Base class for all library errors.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad input: wrong dimensions, unparseable files, inconsistent options.
struct config_error : error {
  using error::error;
};

/// A mathematical precondition failed (non-characteristic point,
/// semisimplicity violation, dependent chart gradients, ...).
struct assumption_error : error {
  using error::error;
};

/// An iterative or dense solver did not deliver a usable answer.
struct numerical_error : error {
  using error::error;
};

/// Grid too coarse for the requested frequency content.
struct resolution_error : error {
  using error::error;
};

}  // namespace hypan
