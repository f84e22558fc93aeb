#pragma once

#include <stdexcept>
#include <string>

namespace fpgames {

// Loss of numerical validity (division by a vanished weight, non-finite
// utilities, badly conditioned inputs). Always indicates the computation
// cannot continue, never a recoverable condition.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Failure inside a negotiation or experiment run; message carries the step or
// replication index where the underlying error fired.
struct RunError : std::runtime_error {
  explicit RunError(const std::string& what) : std::runtime_error(what) {}
};

// A config file that parses but does not fit the selected subcommand:
// unknown key, wrong type, or invalid JSON.
struct SchemaError : std::runtime_error {
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

// Unreadable input or unwritable output.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fpgames
