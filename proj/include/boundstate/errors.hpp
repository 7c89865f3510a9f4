#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace boundstate {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& message)
      : Error("syntax error at position " + std::to_string(position) + ": " + message),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class UnknownIdentifier : public Error {
 public:
  UnknownIdentifier(std::size_t position, const std::string& name)
      : Error("unknown identifier '" + name + "' at position " + std::to_string(position)),
        name_(name) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class DerivativeUndefined : public Error {
 public:
  using Error::Error;
};

class NotNormalizable : public Error {
 public:
  using Error::Error;
};

class UnknownName : public Error {
 public:
  using Error::Error;
};

class NodeInDomain : public Error {
 public:
  NodeInDomain(double location, const std::string& message)
      : Error(message), location_(location) {}

  double location() const noexcept { return location_; }

 private:
  double location_;
};

class BracketError : public Error {
 public:
  BracketError(int nodes_low, int nodes_high, const std::string& message)
      : Error(message), nodes_low_(nodes_low), nodes_high_(nodes_high) {}

  int nodes_low() const noexcept { return nodes_low_; }
  int nodes_high() const noexcept { return nodes_high_; }

 private:
  int nodes_low_;
  int nodes_high_;
};

class BoxTooSmall : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

// Carries every problem found in one validation pass.
class ManifestError : public Error {
 public:
  explicit ManifestError(std::vector<std::string> problems)
      : Error(join(problems)), problems_(std::move(problems)) {}

  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& p) {
    std::string s = "invalid manifest (" + std::to_string(p.size()) + " problem" + (p.size() == 1 ? "" : "s") + ")";
    for (const auto& line : p) s += "\n  " + line;
    return s;
  }

  std::vector<std::string> problems_;
};

}  // namespace boundstate
