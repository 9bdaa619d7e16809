#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace resilog {

// Root of every error thrown by the library. `code()` is a stable short
// identifier used in machine-readable reports.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  [[nodiscard]] const std::string& code() const { return code_; }

 private:
  std::string code_;
};

#define RESILOG_DEFINE_ERROR(Name)                                              \
  class Name : public Error {                                                   \
   public:                                                                      \
    explicit Name(const std::string& message) : Error(#Name, message) {}        \
  }

// algebra
RESILOG_DEFINE_ERROR(UnknownVariable);
RESILOG_DEFINE_ERROR(DimensionMismatch);
RESILOG_DEFINE_ERROR(ZeroDivisor);
RESILOG_DEFINE_ERROR(SingularMatrix);
RESILOG_DEFINE_ERROR(NonSquare);

// documents
RESILOG_DEFINE_ERROR(SchemaError);

// foliation
RESILOG_DEFINE_ERROR(InvalidProblem);

// residue
RESILOG_DEFINE_ERROR(DivisorSingularAt);
RESILOG_DEFINE_ERROR(NotAZero);
RESILOG_DEFINE_ERROR(DegenerateZero);
RESILOG_DEFINE_ERROR(NotOnDivisor);
RESILOG_DEFINE_ERROR(NotSupported);
RESILOG_DEFINE_ERROR(ZeroCountUnstable);
RESILOG_DEFINE_ERROR(NewtonDivergence);
RESILOG_DEFINE_ERROR(BoundaryZero);
RESILOG_DEFINE_ERROR(NonLinearField);
RESILOG_DEFINE_ERROR(PositiveDimensional);

// birational
RESILOG_DEFINE_ERROR(NotNegativeDefinite);
RESILOG_DEFINE_ERROR(AsymmetricMatrix);

#undef RESILOG_DEFINE_ERROR

// Positioned syntax error. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message,
             std::string snippet);

  [[nodiscard]] std::size_t line() const { return line_; }
  [[nodiscard]] std::size_t column() const { return column_; }
  [[nodiscard]] const std::string& message() const { return message_; }
  [[nodiscard]] const std::string& snippet() const { return snippet_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
  std::string snippet_;
};

// The divisor is not invariant in some chart: v(f) leaves a remainder mod f.
class NotTangent : public Error {
 public:
  NotTangent(std::size_t chart, std::string remainder);
  [[nodiscard]] std::size_t chart() const { return chart_; }
  [[nodiscard]] const std::string& remainder() const { return remainder_; }

 private:
  std::size_t chart_;
  std::string remainder_;
};

}  // namespace resilog
