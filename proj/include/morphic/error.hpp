#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace morphic {

/// Bad input or a violated precondition.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SaturationKind { none, end_of_input, index_depth };

/// A δ query could not be answered exactly: the longest prefix in the
/// language reached the end of the available word or the certified depth.
class Saturation : public Error {
 public:
  Saturation(const std::string& what, SaturationKind kind, std::size_t position)
      : Error(what), kind_(kind), position_(position) {}
  SaturationKind kind() const noexcept { return kind_; }
  std::size_t position() const noexcept { return position_; }

 private:
  SaturationKind kind_;
  std::size_t position_;
};

/// An expansion or enumeration would exceed its configured cap.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// The computation finished but could not reach a verdict.
class Inconclusive : public Error {
 public:
  using Error::Error;
};

}  // namespace morphic
