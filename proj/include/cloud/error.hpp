#pragma once

#include <stdexcept>
#include <string>

namespace cloud {

// Bad arguments, unreadable files, malformed inputs. The CLI maps these to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public InputError {
 public:
  using InputError::InputError;
};

class FormatError : public InputError {
 public:
  using InputError::InputError;
};

// Data that is well-formed but numerically unusable. The CLI maps these to exit code 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FitError : public NumericError {
 public:
  using NumericError::NumericError;
};

class DegeneratePixelError : public NumericError {
 public:
  DegeneratePixelError(int row, int col)
      : NumericError("zero-variance pixel at (" + std::to_string(row) + ", " +
                     std::to_string(col) + ")"),
        row_(row),
        col_(col) {}

  int row() const noexcept { return row_; }
  int col() const noexcept { return col_; }

 private:
  int row_;
  int col_;
};

}  // namespace cloud
