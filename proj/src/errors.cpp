#include "weiss/errors.hpp"

namespace weiss {

ParseError::ParseError(const std::string& message, std::size_t offset, std::vector<std::string> expected)
    : Error(message), offset_(offset), expected_(std::move(expected)) {}

}  // namespace weiss
