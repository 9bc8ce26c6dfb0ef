#pragma once

#include <stdexcept>
#include <string>

namespace monoproj {

// Invalid input: bad dimensions, ungraded context where grading is needed,
// gluing data that does not define a sheaf, and similar caller errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Broken internal invariant. The CLI maps this to exit code 2.
class InternalError : public std::logic_error {
public:
  explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

#define MONOPROJ_CHECK(cond, msg) \
  do {                            \
    if (!(cond)) throw ::monoproj::InternalError(msg); \
  } while (0)

}  // namespace monoproj
