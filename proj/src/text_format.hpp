#pragma once

// Line-oriented text parsing shared by the file readers.

#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "sgcn/error.hpp"

namespace sgcn::detail {

inline std::string read_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ParseError(file.string(), 0, "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& file, const std::string& content) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(file.string() + ": cannot open for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error(file.string() + ": write failed");
}

/// Walks the lines of a text file, skipping blank ones, keeping 1-based line numbers.
class LineReader {
public:
    explicit LineReader(const std::filesystem::path& file) : name_(file.string()), text_(read_file(file)) {}

    /// Next non-blank line split on whitespace; false at end of file.
    bool next(std::vector<std::string_view>& tokens) {
        tokens.clear();
        while (pos_ < text_.size()) {
            std::size_t end = text_.find('\n', pos_);
            if (end == std::string::npos) end = text_.size();
            std::string_view line(text_.data() + pos_, end - pos_);
            pos_ = end + 1;
            ++line_;
            split(line, tokens);
            if (!tokens.empty()) return true;
        }
        return false;
    }

    std::size_t line() const noexcept { return line_; }
    const std::string& name() const noexcept { return name_; }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(name_, line_, what); }

    template <typename T>
    T parse(std::string_view token) const {
        T value{};
        auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (ec != std::errc{} || end != token.data() + token.size()) fail("cannot parse '" + std::string(token) + "'");
        return value;
    }

private:
    static void split(std::string_view line, std::vector<std::string_view>& tokens) {
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
            std::size_t j = i;
            while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
            if (j > i) tokens.push_back(line.substr(i, j - i));
            i = j;
        }
    }

    std::string name_;
    std::string text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 0;
};

/// Shortest decimal text that parses back to the same double.
inline void append_number(std::string& out, double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, end);
}

} // namespace sgcn::detail
