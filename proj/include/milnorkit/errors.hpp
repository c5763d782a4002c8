#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace milnorkit
{

// Base of every exception thrown by the library.
class error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Operands live over different variable contexts.
class context_mismatch : public error
{
public:
    using error::error;
};

// An operation's precondition does not hold for the given input.
class precondition_error : public error
{
public:
    using error::error;
};

// A question could not be decided because the truncation order is too low.
// Callers map this to an "undetermined" verdict.
class truncation_error : public error
{
public:
    using error::error;
};

// An exponent or degree exceeded the configured cap.
class overflow_error : public error
{
public:
    using error::error;
};

// The Nakayama saturation was not reached within the degree cap.
class certificate_error : public error
{
public:
    using error::error;
};

class parse_error : public error
{
public:
    parse_error(std::size_t position, const std::string &message)
        : error("at position " + std::to_string(position) + ": " + message), position_(position)
    {
    }

    std::size_t position() const noexcept
    {
        return position_;
    }

private:
    std::size_t position_;
};

} // namespace milnorkit
