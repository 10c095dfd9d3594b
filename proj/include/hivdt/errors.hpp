#ifndef HIVDT_ERRORS_HPP
#define HIVDT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hivdt {

/// Base class of every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// tau/h does not reduce to an integer number of delay steps.
struct NonIntegerDelayRatio : Error {
    using Error::Error;
};

/// A model rate that must be positive is zero or negative (or not finite).
struct NonPositiveParameter : Error {
    explicit NonPositiveParameter(const std::string& field_name)
        : Error("parameter must be positive and finite: " + field_name), field_(field_name)
    {
    }
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// A function was evaluated outside its mathematical domain (e.g. log of a
/// nonpositive number).
struct DomainError : Error {
    using Error::Error;
};

/// The requested quantity is undefined under the current parameter regime.
struct NotApplicable : Error {
    using Error::Error;
};

/// Convergence window longer than the recorded trajectory.
struct WindowTooLarge : Error {
    using Error::Error;
};

/// A bounds report was requested on a trajectory recorded without monitors.
struct MonitorsAbsent : Error {
    using Error::Error;
};

/// Summary requested for an empty cell list.
struct EmptySweep : Error {
    using Error::Error;
};

/// Malformed configuration document; message carries line (and column) info.
struct ParseError : Error {
    ParseError(const std::string& what, int line, int column)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line),
          column_(column)
    {
    }
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// A well-formed document violates a constraint; message names the field.
struct ValidationError : Error {
    explicit ValidationError(const std::string& what, std::string field_name = "")
        : Error(what), field_(std::move(field_name))
    {
    }
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// Writing to an output sink failed.
struct SinkError : Error {
    using Error::Error;
};

} // namespace hivdt

#endif
