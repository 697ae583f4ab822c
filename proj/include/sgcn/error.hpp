#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sgcn {

/// Malformed input file. Carries the offending file and 1-based line (0 when
/// the problem is not tied to a single line).
class ParseError : public std::runtime_error {
public:
    ParseError(std::string file, std::size_t line, const std::string& what)
        : std::runtime_error(file + (line ? ":" + std::to_string(line) : std::string{}) + ": " + what),
          file_(std::move(file)),
          line_(line) {}

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string file_;
    std::size_t line_;
};

/// A forward pass or loss produced a non-finite value.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(std::size_t epoch, std::size_t layer, const std::string& what)
        : std::runtime_error("diverged at epoch " + std::to_string(epoch) + ", layer " +
                             std::to_string(layer) + ": " + what),
          epoch_(epoch),
          layer_(layer),
          detail_(what) {}

    std::size_t epoch() const noexcept { return epoch_; }
    std::size_t layer() const noexcept { return layer_; }
    /// The message without the epoch/layer prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    std::size_t epoch_;
    std::size_t layer_;
    std::string detail_;
};

} // namespace sgcn
