#pragma once

#include <stdexcept>
#include <string>

namespace obbkit {

// Malformed or out-of-range input data (files, records). Carries a message
// that names the offending file and field.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace obbkit
