#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace epinet {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Missing or inconsistent model configuration (e.g. SIRD without a death rate).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// Raised by the fixed-step integrators. Carries the simulation time at which
/// the problem was detected.
class IntegrationError : public Error {
public:
    IntegrationError(const std::string &what, double time)
        : Error(what), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Text input that does not follow the expected grammar. Line and column are
/// 1-based; zero means unknown.
class ParseError : public Error {
public:
    ParseError(const std::string &what, int line, int column)
        : Error(format(what, line, column)), line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    static std::string format(const std::string &what, int line, int column)
    {
        if (line <= 0)
            return what;
        return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what;
    }

    int line_;
    int column_;
};

/// Semantically invalid input. Holds every violation found, not only the first.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> problems)
        : Error(join(problems)), problems_(std::move(problems)) {}

    const std::vector<std::string> &problems() const noexcept { return problems_; }

private:
    static std::string join(const std::vector<std::string> &problems)
    {
        std::string out;
        for (const auto &p : problems) {
            if (!out.empty())
                out += "; ";
            out += p;
        }
        return out;
    }

    std::vector<std::string> problems_;
};

} // namespace epinet
