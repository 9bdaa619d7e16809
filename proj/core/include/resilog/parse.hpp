#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "resilog/poly.hpp"

namespace resilog {

// 1-based position of the first character of a source fragment.
struct SourcePos {
  std::size_t line = 1;
  std::size_t column = 1;
};

// Polynomial grammar:
//   expr   := term (("+"|"-") term)*
//   term   := factor ("*" factor)*
//   factor := base ("^" nat)?
//   base   := rat | ident | "(" expr ")" | "-" factor
//   rat    := int ("/" nat)?
// Identifiers must be in `vars`. Throws ParseError with positions offset by
// `origin`.
MultiPoly parse_poly(std::string_view src, const std::vector<std::string>& vars,
                     SourcePos origin = {});

// Canonical rendering in lex order with explicit '*' and '^'.
std::string print_poly(const MultiPoly& p);

// ---------------------------------------------------------------------------
// Key-value documents
//
//   # comment
//   space.dim = 2
//   field.vars = [z0, z1, z2]
//   field.components = ["-3*z0", "2*z1", "z2"]
//   divisor = "z2"
//   points = [{chart = 0, coords = ["0", "0"]}]
//   [numeric]
//   seed = 0
//
// A "[section]" header prefixes the keys that follow with "section.".

struct DocValue {
  enum class Kind { string, number, word, array, table };
  Kind kind = Kind::word;
  std::string text;  // string contents, number literal or bare word
  std::vector<DocValue> items;
  std::vector<std::pair<std::string, DocValue>> fields;
  SourcePos pos;           // first character of the value
  SourcePos content_pos;   // first character inside the quotes, for strings

  [[nodiscard]] const DocValue* field(std::string_view key) const;
  [[nodiscard]] std::string_view kind_name() const;
};

struct DocEntry {
  std::string key;
  DocValue value;
  SourcePos pos;
};

class Document {
 public:
  explicit Document(std::vector<DocEntry> entries) : entries_(std::move(entries)) {}

  [[nodiscard]] const std::vector<DocEntry>& entries() const { return entries_; }
  [[nodiscard]] const DocEntry* find(std::string_view key) const;
  // Throws SchemaError when absent.
  [[nodiscard]] const DocEntry& require(std::string_view key) const;

 private:
  std::vector<DocEntry> entries_;
};

// Throws ParseError (syntax, duplicate keys).
Document parse_document(std::string_view src);

}  // namespace resilog
