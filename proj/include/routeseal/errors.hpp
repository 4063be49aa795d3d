#pragma once

#include <stdexcept>
#include <string>

namespace routeseal {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Source text cannot be tokenized (corrupt or unsupported input).
struct LexError : Error {
    LexError(std::string file, std::size_t line, std::size_t col, const std::string& msg)
        : Error(file + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
          file_id(std::move(file)), line(line), col(col) {}
    std::string file_id;
    std::size_t line;
    std::size_t col;
};

struct ParseError : Error {
    ParseError(std::string file, std::size_t line, std::size_t col, const std::string& msg)
        : Error(file + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
          file_id(std::move(file)), line(line), col(col) {}
    std::string file_id;
    std::size_t line = 0;
    std::size_t col = 0;
};

struct ResolveError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct ManifestError : Error {
    using Error::Error;
};

struct CycleError : Error {
    using Error::Error;
};

struct MissingHashError : Error {
    using Error::Error;
};

struct NoCallersError : Error {
    using Error::Error;
};

struct SelectionError : Error {
    using Error::Error;
};

struct EntropyError : Error {
    using Error::Error;
};

}  // namespace routeseal
