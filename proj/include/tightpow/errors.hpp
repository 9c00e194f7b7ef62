#ifndef TIGHTPOW_ERRORS_HPP
#define TIGHTPOW_ERRORS_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tightpow {

// Precondition violations on public operations.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parameters outside the regime an operation is defined for (e.g. absorbers with r = 1).
class Unsupported : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Exhaustive routines refuse inputs beyond their size guard.
class TooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A tight-path extension hit a (k-1)-suffix with no admissible completion.
class ExtensionFailed : public std::runtime_error {
 public:
  ExtensionFailed(std::size_t progress, const std::string& what)
      : std::runtime_error(what), progress_(progress) {}

  // Number of vertices appended before the dead end.
  std::size_t progress() const noexcept { return progress_; }

 private:
  std::size_t progress_;
};

// Tasks left unembedded after the final phase of a greedy embedding.
class EmbeddingIncomplete : public std::runtime_error {
 public:
  EmbeddingIncomplete(std::vector<std::size_t> survivors, const std::string& what)
      : std::runtime_error(what), survivors_(std::move(survivors)) {}

  const std::vector<std::size_t>& survivors() const noexcept { return survivors_; }

 private:
  std::vector<std::size_t> survivors_;
};

// Two consecutive paths could not be joined; pair_index is the position of the first one.
class ConnectionFailed : public std::runtime_error {
 public:
  ConnectionFailed(std::size_t pair_index, const std::string& what)
      : std::runtime_error(what), pair_index_(pair_index) {}

  std::size_t pair_index() const noexcept { return pair_index_; }

 private:
  std::size_t pair_index_;
};

// Some vertices that were meant to be absorbable got no absorber.
class AbsorberShortfall : public std::runtime_error {
 public:
  AbsorberShortfall(std::vector<std::uint32_t> missing, const std::string& what)
      : std::runtime_error(what), missing_(std::move(missing)) {}

  const std::vector<std::uint32_t>& missing() const noexcept { return missing_; }

 private:
  std::vector<std::uint32_t> missing_;
};

}  // namespace tightpow

#endif  // TIGHTPOW_ERRORS_HPP
