#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace quasim {

/// Base of every error thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied value violates a precondition (bad index, bad config,
/// malformed file). The CLI maps this to exit code 2, the service to 400.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A well-formed request that exceeds a resource cap (qubits, ancillas).
/// The CLI maps this to exit code 3, the service to 422.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: Cholesky breakdown, eigensolver non-convergence,
/// unstable time step, diverging training.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A graph contains vertices whose degree has no trained submodel.
class UnsupportedDegree : public Error {
 public:
  UnsupportedDegree(std::string what, std::vector<std::size_t> vertices)
      : Error(std::move(what)), vertices_(std::move(vertices)) {}

  const std::vector<std::size_t>& vertices() const noexcept { return vertices_; }

 private:
  std::vector<std::size_t> vertices_;
};

}  // namespace quasim
