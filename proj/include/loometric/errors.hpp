#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace loometric {

enum class Errc {
  // metric validation
  Shape,
  DuplicateLabel,
  NegativeEntry,
  NonzeroDiagonal,
  Asymmetric,
  ZeroOffDiagonal,
  TriangleViolation,
  // preconditions
  EmptyThresholds,
  NonDecreasingThresholds,
  NonPositiveRadius,
  TooSmall,
  NotInjective,
  GenericityExhausted,
  DimMismatch,
  EpsTooLarge,
  NotAPartition,
  NotACover,
  EmptySubset,
  InvalidArgument,
};

std::string_view errc_name(Errc code);

/// Structured failure: a code plus the point indices that witness it
/// (e.g. TriangleViolation(i, j, k) means d(i,j) > d(i,k) + d(k,j)).
class Error : public std::runtime_error {
public:
  Error(Errc code, std::vector<std::size_t> witness, const std::string& what)
      : std::runtime_error(what), code_(code), witness_(std::move(witness)) {}
  Error(Errc code, const std::string& what) : Error(code, {}, what) {}

  Errc code() const noexcept { return code_; }
  const std::vector<std::size_t>& witness() const noexcept { return witness_; }

private:
  Errc code_;
  std::vector<std::size_t> witness_;
};

} // namespace loometric
