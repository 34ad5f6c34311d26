#pragma once

#include <stdexcept>
#include <string>

namespace sidcert {

// Raised when an operation would exceed an explicit enumeration / memory
// budget. The message names the bottleneck; never silently truncates.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sidcert
