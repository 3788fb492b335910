#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pam {

/// Malformed binary data (weight files). Carries the byte offset at which the
/// problem was detected.
class FormatError : public std::runtime_error {
public:
    FormatError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " (offset " + std::to_string(offset) + ")"),
          offset_(offset) {}

    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Malformed text input (SDR literals, FASTA files). Line/column are 1-based;
/// column 0 means "whole line".
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line, int column = 0)
        : std::runtime_error(what + " at line " + std::to_string(line) +
                             (column > 0 ? ", column " + std::to_string(column) : "")),
          line_(line),
          column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

} // namespace pam
