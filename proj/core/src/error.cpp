#include "resilog/error.hpp"

namespace resilog {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message,
                       std::string snippet)
    : Error("ParseError",
            std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      message_(message),
      snippet_(std::move(snippet)) {}

NotTangent::NotTangent(std::size_t chart, std::string remainder)
    : Error("NotTangent", "divisor is not invariant in chart " + std::to_string(chart) +
                              ": v(f) mod f = " + remainder),
      chart_(chart),
      remainder_(std::move(remainder)) {}

}  // namespace resilog
