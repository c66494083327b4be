#pragma once

#include <stdexcept>
#include <string>

namespace llmrs {

// Coarse failure classes. The CLI maps each to a distinct exit code.
enum class ErrorKind {
  kInternal,
  kMissingStore,   // store directory or a required artifact is absent
  kProvider,       // provider misconfigured or unreachable
  kValidation,     // bad input: malformed file, out-of-range value, bad request
  kIo,             // unreadable or unwritable file
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error validation_error(const std::string& what) { return Error(ErrorKind::kValidation, what); }
inline Error provider_error(const std::string& what) { return Error(ErrorKind::kProvider, what); }
inline Error io_error(const std::string& what) { return Error(ErrorKind::kIo, what); }
inline Error missing_store_error(const std::string& what) { return Error(ErrorKind::kMissingStore, what); }

}  // namespace llmrs
