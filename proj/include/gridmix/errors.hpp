#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace gridmix {

// Raised for bad user-supplied data: malformed files, missing paths,
// out-of-range parameters. The CLI maps this to exit code 1.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when an internal invariant is violated. Maps to exit code 2.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

namespace detail {

template <typename... Args>
std::string concat(const Args&... args)
{
    std::ostringstream os;
    (os << ... << args);
    return os.str();
}

} // namespace detail

template <typename... Args>
[[noreturn]] void fail_input(const Args&... args)
{
    throw InputError(detail::concat(args...));
}

template <typename... Args>
void require(bool condition, const Args&... args)
{
    if (!condition) {
        throw InternalError(detail::concat(args...));
    }
}

} // namespace gridmix
