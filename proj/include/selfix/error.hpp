#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace selfix {

enum class ErrorCode {
  InvalidArgument,
  DegenerateTriangle,
  DegenerateFace,
  NotClosed,
  NotInjective,
  PreconditionViolated,
  NonOrientable,
  NotASurface,
  NegativeDeficit,
  Exhausted,
  NonTriangularCell,
  StillIntersecting,
  NotOrthogonal,
  NotInvariant,
  NotAGroup,
  MissingRep,
  OpenBoundary,
  IsolatedNonManifoldEdge,
  NewIntersectionIntroduced,
  ParseError,
  IOError,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure in the library is reported through this type. `items` carries
// the offending id pairs (edges, face pairs, matrix/vertex) when there are any.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::vector<std::array<std::uint32_t, 2>> items = {})
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        items_(std::move(items)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::vector<std::array<std::uint32_t, 2>>& items() const noexcept {
    return items_;
  }

 private:
  ErrorCode code_;
  std::vector<std::array<std::uint32_t, 2>> items_;
};

}  // namespace selfix
