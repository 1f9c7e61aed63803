#pragma once

#include <stdexcept>
#include <string>

namespace trigger {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

//! Invalid model input. Carries the config section and key it maps to.
class ValidationError : public Error {
public:
    ValidationError(std::string section, std::string key, const std::string& message)
        : Error(section + "." + key + ": " + message), section_(std::move(section)), key_(std::move(key)) {}

    const std::string& section() const noexcept { return section_; }
    const std::string& key() const noexcept { return key_; }

private:
    std::string section_;
    std::string key_;
};

//! Parameters at which a closed form is undefined (b = 1/i, colliding ordered rates).
class DegenerateParameterError : public Error {
public:
    using Error::Error;
};

//! Result not representable in double precision.
class NumericRangeError : public Error {
public:
    using Error::Error;
};

} // namespace trigger
