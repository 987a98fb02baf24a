#pragma once

#include <stdexcept>
#include <string>

namespace adbn {

class EngineError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Observed evidence has probability zero under the network. Carries the node
/// at which the contradiction surfaced.
class ZeroEvidenceError : public EngineError {
  public:
    explicit ZeroEvidenceError(std::string node)
        : EngineError("contradictory evidence (zero probability) at node '" + node + "'"),
          node_(std::move(node)) {}

    const std::string& node() const { return node_; }

  private:
    std::string node_;
};

/// A size cap (gate expansion, joint enumeration) was exceeded.
class CapExceededError : public EngineError {
  public:
    using EngineError::EngineError;
};

/// A network with validation errors was handed to a downstream operation.
class InvalidNetworkError : public EngineError {
  public:
    using EngineError::EngineError;
};

class IoError : public EngineError {
  public:
    using EngineError::EngineError;
};

}  // namespace adbn
