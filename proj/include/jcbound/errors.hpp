#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jcbound {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent list lengths or matrix shapes.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A state violating positivity or the population sign constraints.
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

/// Bad scalar parameters (negative rates, out-of-range y, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Operation needs a PPT input and did not get one.
class NotPptError : public Error {
 public:
  using Error::Error;
};

/// A dense matrix has weight outside the excitation-number pattern.
class SuperselectionError : public Error {
 public:
  SuperselectionError(std::size_t row, std::size_t col, double magnitude)
      : Error("superselection violation at (" + std::to_string(row) + ", " +
              std::to_string(col) + "), |entry| = " + std::to_string(magnitude)),
        row_(row),
        col_(col),
        magnitude_(magnitude) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }
  double magnitude() const noexcept { return magnitude_; }

 private:
  std::size_t row_;
  std::size_t col_;
  double magnitude_;
};

}  // namespace jcbound
