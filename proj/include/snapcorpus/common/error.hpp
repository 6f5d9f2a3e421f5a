#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace snapcorpus {

/// Input data that cannot be interpreted (malformed rows, bad files).
class DataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A DataError tied to a specific line of a text file.
class LineError : public DataError {
  public:
    LineError(std::size_t line, const std::string& what)
        : DataError("line " + std::to_string(line) + ": " + what), m_line(line)
    {}

    std::size_t line() const noexcept { return m_line; }

  private:
    std::size_t m_line;
};

/// Retries exhausted against a remote service.
class NetworkError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace snapcorpus
