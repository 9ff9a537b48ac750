#pragma once

#include <stdexcept>
#include <string>

namespace layerstack {

// Every recoverable failure in the library is reported through this type.
// The message is meant to be shown to a user as-is.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace layerstack
