#ifndef RATECODE_ERRORS_HPP_
#define RATECODE_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ratecode {

/// Base class of all library errors. `code()` is a stable machine-readable
/// identifier; `what()` carries the human-readable detail.
class Error : public std::runtime_error {
  public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

  private:
    std::string code_;
};

struct InvalidInput : Error {
    explicit InvalidInput(const std::string& msg) : Error("InvalidInput", msg) {}
};

struct InvalidDistortion : Error {
    explicit InvalidDistortion(const std::string& msg) : Error("InvalidDistortion", msg) {}
};

struct NotPositiveSemidefinite : Error {
    explicit NotPositiveSemidefinite(const std::string& msg)
        : Error("NotPositiveSemidefinite", msg) {}
};

struct InvalidPartition : Error {
    explicit InvalidPartition(const std::string& msg) : Error("InvalidPartition", msg) {}
};

struct InvalidGroup : Error {
    explicit InvalidGroup(const std::string& msg) : Error("InvalidGroup", msg) {}
};

struct TooManySamples : Error {
    explicit TooManySamples(const std::string& msg) : Error("TooManySamples", msg) {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& msg) : Error("DimensionMismatch", msg) {}
};

struct HardLabelsRequired : Error {
    explicit HardLabelsRequired(const std::string& msg) : Error("HardLabelsRequired", msg) {}
};

struct InvalidSpec : Error {
    explicit InvalidSpec(const std::string& msg) : Error("InvalidSpec", msg) {}
};

/// CSV / config parse failure. Row and column are 1-based file positions
/// (0 when not applicable).
class ParseError : public Error {
  public:
    ParseError(const std::string& msg, std::size_t row = 0, std::size_t column = 0)
        : Error("ParseError", msg), row_(row), column_(column) {}
    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

  private:
    std::size_t row_;
    std::size_t column_;
};

}  // namespace ratecode

#endif  // RATECODE_ERRORS_HPP_
