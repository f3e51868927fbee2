#pragma once

#include <stdexcept>
#include <string>

namespace swsyk {

// Process exit codes double as C API status codes.
enum class ErrorCode : int {
  ok = 0,
  internal = 1,
  validation = 2,
  capability = 3,
  non_convergence = 4,
  io = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct ValidationError : Error {
  explicit ValidationError(const std::string& what) : Error(ErrorCode::validation, what) {}
};

// Requested size or mode exceeds what the chosen method supports.
struct CapabilityError : Error {
  explicit CapabilityError(const std::string& what) : Error(ErrorCode::capability, what) {}
};

struct ConvergenceError : Error {
  explicit ConvergenceError(const std::string& what) : Error(ErrorCode::non_convergence, what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorCode::io, what) {}
};

}  // namespace swsyk
