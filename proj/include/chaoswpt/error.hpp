#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace chaoswpt {

// Base of every error raised by the library. Catch this to handle any
// numeric or configuration failure uniformly.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A parameter or argument violates its documented domain.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// A trajectory left the configured magnitude bound or became non-finite.
class DivergenceError : public Error {
public:
    DivergenceError(std::size_t step, double bound)
        : Error("trajectory diverged at step " + std::to_string(step) +
                " (|state| > " + std::to_string(bound) + " or non-finite)"),
          step_(step) {}

    [[nodiscard]] std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

// A closed form was requested outside the region where it holds.
class UnstableRegimeError : public Error {
public:
    using Error::Error;
};

// The Henon fixed-point discriminant is negative.
class ComplexFixedPointError : public Error {
public:
    using Error::Error;
};

// Fourth moment smaller than the squared second moment.
class MomentInconsistencyError : public Error {
public:
    using Error::Error;
};

// Signal power too small to form a peak-to-average ratio.
class DegenerateSignalError : public Error {
public:
    using Error::Error;
};

// sigma <= beta + 1: the upper end of the stable r interval does not exist.
class UndefinedIntervalError : public Error {
public:
    using Error::Error;
};

// Swept parameter is not applicable to the configured system.
class InvalidSweepError : public Error {
public:
    using Error::Error;
};

// Configuration parse or validation failure. Carries every violation found.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<std::string> problems)
        : Error(join(problems)), problems_(std::move(problems)) {}

    [[nodiscard]] const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    static std::string join(const std::vector<std::string>& items) {
        std::string out = "invalid configuration:";
        for (const auto& item : items) {
            out += "\n  - ";
            out += item;
        }
        return out;
    }

    std::vector<std::string> problems_;
};

}  // namespace chaoswpt
