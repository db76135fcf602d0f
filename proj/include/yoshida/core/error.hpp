#pragma once

#include <stdexcept>
#include <string>

namespace yoshida {

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A caller violated a precondition (mismatched algebras, wrong prime, ...).
struct UsageError : Error {
  using Error::Error;
};

/// A lattice basis or Gram matrix is degenerate / not positive definite.
struct DegenerateError : Error {
  using Error::Error;
};

/// An operation needed Fourier coefficients beyond the stored bound.
struct TruncationError : Error {
  using Error::Error;
};

/// Coefficient ratios disagree, or there is nothing to compare.
struct NotEigenformError : Error {
  using Error::Error;
};

/// Malformed or inconsistent input document.
struct FormatError : Error {
  using Error::Error;
};

}  // namespace yoshida
