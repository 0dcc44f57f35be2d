#pragma once

#include <stdexcept>
#include <string>

namespace spdcm {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed config document. line() is 1-based, 0 when unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Out-of-range or inconsistent parameter; field() names the offending key.
class ValidationError : public Error {
public:
    ValidationError(const std::string& field, const std::string& msg)
        : Error(field + ": " + msg), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

class DomainError : public Error {
public:
    using Error::Error;
};

/// Quadrature or iteration that failed to reach its tolerance.
class NumericError : public Error {
public:
    NumericError(const std::string& msg, double achieved) : Error(msg), achieved_(achieved) {}
    double achieved() const { return achieved_; }

private:
    double achieved_;
};

class IoError : public Error {
public:
    IoError(const std::string& path, const std::string& msg) : Error(path + ": " + msg), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

}  // namespace spdcm
