#pragma once

#include <stdexcept>
#include <string>

namespace semcom {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct CapacityError : std::runtime_error {
    explicit CapacityError(const std::string& msg) : std::runtime_error(msg) {}
};

struct CodingError : std::runtime_error {
    explicit CodingError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when encoder/decoder knowledge bases disagree (version drift or an
// attribute outside the shared vocabulary). The workflow reacts with a
// knowledge-sharing round and one retry.
struct KnowledgeMismatchError : std::runtime_error {
    explicit KnowledgeMismatchError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace semcom
