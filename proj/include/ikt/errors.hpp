#pragma once

#include <stdexcept>
#include <string>

namespace ikt {

// Raised for problems with user-supplied files, columns, values or config.
// The CLI maps these to exit code 2; everything else is an internal failure.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ikt
