#pragma once

#include <stdexcept>
#include <string>

namespace ymhk {

/// Caller violated a precondition (mismatched shapes, bad parameter range).
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace ymhk
