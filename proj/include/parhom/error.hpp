#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace parhom {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed diagram strings, markings, or out-of-range node ids.
class ParseError : public Error {
public:
  using Error::Error;
};

/// A Weyl enumeration or product would exceed the configured element limit.
class GuardLimitError : public Error {
public:
  GuardLimitError(std::uint64_t estimated, std::uint64_t limit)
      : Error("Weyl group guard limit exceeded: estimated order " +
              std::to_string(estimated) + " > limit " + std::to_string(limit)),
        estimated_(estimated), limit_(limit) {}

  std::uint64_t estimated() const noexcept { return estimated_; }
  std::uint64_t limit() const noexcept { return limit_; }

private:
  std::uint64_t estimated_;
  std::uint64_t limit_;
};

/// Two independent computations of the same quantity disagree.
class ConsistencyError : public Error {
public:
  using Error::Error;
};

} // namespace parhom
