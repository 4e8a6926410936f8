#pragma once

#include <stdexcept>
#include <string>

namespace rtt {

// Malformed input file (embedding, TSV, JSONL). Carries the 1-based line.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what),
        message_(what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string message_;
  std::size_t line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Token position outside the sentence.
class PositionError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Caller passed inconsistent data (mismatched ids, empty originals, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Everything a model backend can fail with derives from BackendError, so the
// engine can isolate a failing example without swallowing programming errors.
class BackendError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Requested operation (e.g. a language pair) not supported by the backend.
class CapabilityError : public BackendError {
 public:
  using BackendError::BackendError;
};

class TimeoutError : public BackendError {
 public:
  using BackendError::BackendError;
};

class ConnectionError : public BackendError {
 public:
  using BackendError::BackendError;
};

// Response body did not match the wire schema.
class SchemaError : public BackendError {
 public:
  using BackendError::BackendError;
};

// Non-200 reply. body() is the server's error text.
class StatusError : public BackendError {
 public:
  StatusError(int status, std::string body)
      : BackendError("backend returned HTTP " + std::to_string(status) + ": " + body),
        status_(status),
        body_(std::move(body)) {}
  int status() const noexcept { return status_; }
  const std::string& body() const noexcept { return body_; }

 private:
  int status_;
  std::string body_;
};

// Rethrows the in-flight BackendError as the same type with `context`
// prepended to the message. Call only from inside a catch block.
[[noreturn]] inline void rethrow_backend_error(const std::string& context) {
  try {
    throw;
  } catch (const StatusError& e) {
    throw StatusError(e.status(), context + ": " + e.body());
  } catch (const CapabilityError& e) {
    throw CapabilityError(context + ": " + e.what());
  } catch (const TimeoutError& e) {
    throw TimeoutError(context + ": " + e.what());
  } catch (const ConnectionError& e) {
    throw ConnectionError(context + ": " + e.what());
  } catch (const SchemaError& e) {
    throw SchemaError(context + ": " + e.what());
  } catch (const BackendError& e) {
    throw BackendError(context + ": " + e.what());
  }
}

}  // namespace rtt
