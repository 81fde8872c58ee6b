#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace probound {

// Malformed user input: syntax errors, undeclared names, bad numbers.
// Carries the offset into the offending text when one is known.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& msg, std::size_t pos = npos)
        : std::runtime_error(msg), pos_(pos) {}
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t pos() const { return pos_; }

private:
    std::size_t pos_;
};

// A resource guard tripped (variable counts, row explosion, LP size).
class GuardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace probound
