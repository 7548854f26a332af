// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nilbridge {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on shapes, index sets or tolerances was not met.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Brute-force or small-matrix routine asked to work beyond its cap.
class UnsupportedSize : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  SingularMatrix(const std::string& what, std::size_t rank)
      : Error(what), rank_(rank) {}
  std::size_t rank() const noexcept { return rank_; }

 private:
  std::size_t rank_;
};

/// Lower frame bound is zero: the vectors do not span the space.
class NotAFrame : public Error {
 public:
  using Error::Error;
};

/// Erasure and bridge sets overlap or are otherwise unusable.
class InvalidSpec : public Error {
 public:
  using Error::Error;
};

class NoRobustBridge : public Error {
 public:
  NoRobustBridge(const std::string& what, bool minimal_redundancy)
      : Error(what), minimal_redundancy_(minimal_redundancy) {}
  /// Whether the erasure set satisfied minimal redundancy for the analysis frame.
  bool minimal_redundancy() const noexcept { return minimal_redundancy_; }

 private:
  bool minimal_redundancy_;
};

/// The partial reconstruction operator has no inverse.
class NotInvertible : public Error {
 public:
  using Error::Error;
};

}  // namespace nilbridge
