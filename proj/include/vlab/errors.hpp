#pragma once

#include <stdexcept>
#include <string>

namespace vlab {

// Violated precondition on an argument (bad modulus, non-squarefree v, ...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Argument lies outside a precomputed table.
class OutOfRange : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// 128-bit exact arithmetic overflowed.
class RationalOverflow : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

// Command-line or config-file misuse; the message names the violated condition.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace vlab
