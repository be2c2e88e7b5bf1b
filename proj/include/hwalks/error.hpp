#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace hwalks {

/// Base class for every error raised by the library. Parse errors carry the
/// 1-based line number of the offending input line.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what, std::optional<std::size_t> line = std::nullopt)
        : std::runtime_error(line ? "line " + std::to_string(*line) + ": " + what : what), line_(line)
    {
    }

    std::optional<std::size_t> line() const noexcept { return line_; }

private:
    std::optional<std::size_t> line_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line) : Error(what, line) {}
};

class LoopForbidden : public Error {
public:
    explicit LoopForbidden(std::string vertex, std::optional<std::size_t> line = std::nullopt)
        : Error("loop on '" + vertex + "' is not allowed in this role", line), vertex_(std::move(vertex))
    {
    }
    const std::string& vertex() const noexcept { return vertex_; }

private:
    std::string vertex_;
};

class UnknownVertex : public Error {
public:
    explicit UnknownVertex(const std::string& vertex, std::optional<std::size_t> line = std::nullopt)
        : Error("unknown vertex '" + vertex + "'", line)
    {
    }
};

class DuplicateVertex : public Error {
public:
    explicit DuplicateVertex(const std::string& vertex, std::optional<std::size_t> line = std::nullopt)
        : Error("duplicate vertex '" + vertex + "'", line)
    {
    }
};

class DuplicateArc : public Error {
public:
    DuplicateArc(const std::string& tail, const std::string& head, std::optional<std::size_t> line = std::nullopt)
        : Error("duplicate arc (" + tail + ", " + head + ")", line)
    {
    }
};

class UnknownColor : public Error {
public:
    explicit UnknownColor(const std::string& color, std::optional<std::size_t> line = std::nullopt)
        : Error("unknown color '" + color + "'", line)
    {
    }
};

class MissingColor : public Error {
public:
    explicit MissingColor(const std::string& arc, std::optional<std::size_t> line = std::nullopt)
        : Error("arc " + arc + " has no color", line)
    {
    }
};

/// An input exceeds the size an exhaustive routine is willing to handle.
class SizeLimitExceeded : public Error {
public:
    using Error::Error;
};

/// A documented precondition of a construction does not hold.
class PreconditionViolated : public Error {
public:
    using Error::Error;
};

/// A certificate handed to a translation step contradicts the structure it
/// is supposed to certify.
class CertificateCorrupt : public Error {
public:
    using Error::Error;
};

} // namespace hwalks
