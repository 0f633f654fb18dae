#pragma once

#include <stdexcept>
#include <string>

namespace hforge {

/// Raised when a node/pair/evaluation budget runs out. Operations that can
/// report a partial answer throw a subclass carrying it.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// No admissible parameter was found below the iteration cap.
class IterationCap : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bounds were too wide to decide the question asked.
class Inconclusive : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A file could not be read, written or parsed.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace hforge
