#pragma once

#include <stdexcept>
#include <string>

namespace skillgraph {

struct NotFoundError : std::runtime_error {
    explicit NotFoundError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct RemoteServiceError : std::runtime_error {
    explicit RemoteServiceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace skillgraph
