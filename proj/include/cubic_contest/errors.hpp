#pragma once

#include <stdexcept>
#include <string>

namespace cubic {

// Bad parameters or a precondition violated by the caller.
struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A numerical routine failed to bracket or converge.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg)
{
    if (!cond) throw InvalidInput(msg);
}

}  // namespace cubic
