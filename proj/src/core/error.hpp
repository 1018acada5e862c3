#pragma once

#include <stdexcept>
#include <string>

namespace symqfi {

// Precondition or configuration violations (bad N, k > N, unknown config key, ...).
class InvalidArgument : public std::invalid_argument {
public:
    explicit InvalidArgument(const std::string &what) : std::invalid_argument(what) {}
};

// Configuration-file problems carry the offending key path, e.g. "generator.theta".
class ConfigError : public InvalidArgument {
public:
    ConfigError(std::string key_path, const std::string &what)
        : InvalidArgument(key_path.empty() ? what : key_path + ": " + what), key_path_(std::move(key_path)) {}

    [[nodiscard]] const std::string &key_path() const noexcept { return key_path_; }

private:
    std::string key_path_;
};

// Numerical breakdowns: flat spectra, rank deficiency, non-unitary input.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string &what) : std::runtime_error(what) {}
};

// File-system failures while writing outputs.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string &what) : std::runtime_error(what) {}
};

} // namespace symqfi
