#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mmt {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parse/validation failure in a line-oriented input file. `line` is 1-based.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line)
        : Error(message + " (line " + std::to_string(line) + ")"), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// POS sidecar does not line up with the corpus. `sentence` is 0-based.
class AlignmentError : public Error {
public:
    AlignmentError(const std::string& message, std::size_t sentence)
        : Error(message + " (sentence " + std::to_string(sentence) + ")"), sentence_(sentence) {}

    std::size_t sentence() const { return sentence_; }

private:
    std::size_t sentence_;
};

// Translator child process violated the line protocol or failed.
class ProtocolError : public Error {
public:
    using Error::Error;
};

}  // namespace mmt
