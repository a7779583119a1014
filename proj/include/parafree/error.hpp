#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace parafree {

enum class ErrorCode {
  InvalidLetter,
  InvalidName,
  EmptyWord,
  WordSyntax,
  Shape,
  DisconnectedGraph,
  TrivialEdgeWord,
  MissingEdgeWord,
  UnexpectedEdgeWord,
  DuplicateId,
  UnknownVertexRef,
  UnknownEdge,
  EdgeNotCyclic,
  UnknownGenerator,
  IncompatibleTargets,
  InvalidBounds,
  Precondition,
  Json,
  Io,
  Internal,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. The code identifies the contract
/// that was violated; the message carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// Input errors are the caller's fault; Internal means an invariant broke.
  bool is_input_error() const noexcept { return code_ != ErrorCode::Internal; }

 private:
  ErrorCode code_;
};

/// A malformed word literal. `position()` is the byte offset into the text.
class WordSyntaxError : public Error {
 public:
  WordSyntaxError(std::size_t position, const std::string& message)
      : Error(ErrorCode::WordSyntax, message), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace parafree
