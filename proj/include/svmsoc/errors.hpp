#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace svmsoc {

// Base class for every recoverable error raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct NonFiniteValue : Error {
  using Error::Error;
};

struct EmptyModel : Error {
  using Error::Error;
};

struct EmptyDataset : Error {
  using Error::Error;
};

// Raised by the text and binary readers. `line` is 1-based for text input;
// byte-stream readers leave it 0 and put the offset in the message.
struct ParseError : Error {
  explicit ParseError(const std::string& msg, std::size_t line_no = 0)
      : Error(line_no ? "line " + std::to_string(line_no) + ": " + msg : msg),
        line(line_no) {}

  std::size_t line = 0;
};

struct UnsupportedKernel : ParseError {
  using ParseError::ParseError;
};

struct BramOverflow : Error {
  BramOverflow(std::size_t required, std::size_t available)
      : Error("bram overflow: " + std::to_string(required) +
              " blocks required, " + std::to_string(available) + " available"),
        required_blocks(required),
        available_blocks(available) {}

  std::size_t required_blocks = 0;
  std::size_t available_blocks = 0;
};

struct UnderdeterminedFit : Error {
  using Error::Error;
};

struct SingularSystem : Error {
  using Error::Error;
};

}  // namespace svmsoc
