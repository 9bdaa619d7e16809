#include "resilog/parse.hpp"

#include <algorithm>
#include <cctype>

#include "resilog/error.hpp"

namespace resilog {

namespace {

constexpr unsigned kMaxExponent = 1000;

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

// Maps byte offsets of a fragment to absolute (line, column).
class PositionMap {
 public:
  PositionMap(std::string_view src, SourcePos origin) : origin_(origin) {
    line_starts_.push_back(0);
    for (std::size_t i = 0; i < src.size(); ++i) {
      if (src[i] == '\n') line_starts_.push_back(i + 1);
    }
  }

  [[nodiscard]] SourcePos at(std::size_t offset) const {
    const auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
    const std::size_t line_index = static_cast<std::size_t>(it - line_starts_.begin()) - 1;
    const std::size_t col = offset - line_starts_[line_index];
    if (line_index == 0) return {origin_.line, origin_.column + col};
    return {origin_.line + line_index, col + 1};
  }

 private:
  SourcePos origin_;
  std::vector<std::size_t> line_starts_;
};

// ---------------------------------------------------------------------------
// Polynomial expressions

enum class Tok { number, ident, plus, minus, star, caret, slash, lparen, rparen, end };

struct Token {
  Tok kind;
  std::size_t offset;
  std::string_view text;
};

std::string describe(const Token& t) {
  if (t.kind == Tok::end) return "end of input";
  return "'" + std::string(t.text) + "'";
}

class PolyParser {
 public:
  PolyParser(std::string_view src, const std::vector<std::string>& vars, SourcePos origin)
      : src_(src), vars_(vars), positions_(src, origin) {
    tokenize();
  }

  MultiPoly parse() {
    if (tokens_.front().kind == Tok::end) fail(tokens_.front(), "empty expression");
    MultiPoly result = expr();
    const Token& t = peek();
    if (t.kind == Tok::rparen) fail(t, "unmatched ')'");
    if (t.kind != Tok::end) unexpected(t);
    return result;
  }

 private:
  void tokenize() {
    std::size_t i = 0;
    while (i < src_.size()) {
      const char c = src_[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      const std::size_t start = i;
      auto push = [&](Tok kind, std::size_t len) {
        tokens_.push_back({kind, start, src_.substr(start, len)});
        i = start + len;
      };
      if (is_digit(c)) {
        std::size_t j = i;
        while (j < src_.size() && is_digit(src_[j])) ++j;
        if (j < src_.size() && src_[j] == '.') {
          fail_at(j, 1, "floating-point literals are not supported; use a rational such as 3/4");
        }
        push(Tok::number, j - i);
      } else if (is_ident_start(c)) {
        std::size_t j = i;
        while (j < src_.size() && is_ident_char(src_[j])) ++j;
        push(Tok::ident, j - i);
      } else {
        switch (c) {
          case '+': push(Tok::plus, 1); break;
          case '-': push(Tok::minus, 1); break;
          case '*': push(Tok::star, 1); break;
          case '^': push(Tok::caret, 1); break;
          case '/': push(Tok::slash, 1); break;
          case '(': push(Tok::lparen, 1); break;
          case ')': push(Tok::rparen, 1); break;
          default:
            fail_at(i, 1, std::string("unexpected character '") + c + "'");
        }
      }
    }
    tokens_.push_back({Tok::end, src_.size(), std::string_view{}});
  }

  [[noreturn]] void fail_at(std::size_t offset, std::size_t len, const std::string& message) const {
    const SourcePos pos = positions_.at(offset);
    throw ParseError(pos.line, pos.column, message, std::string(src_.substr(offset, len)));
  }

  // Errors at the end of input point at the last token.
  [[noreturn]] void fail(const Token& t, const std::string& message) const {
    if (t.kind == Tok::end && tokens_.size() > 1) {
      const Token& last = tokens_[tokens_.size() - 2];
      fail_at(last.offset, last.text.size(), message);
    }
    fail_at(t.offset, t.text.size(), message);
  }

  [[noreturn]] void unexpected(const Token& t) const {
    if (t.kind == Tok::number || t.kind == Tok::ident || t.kind == Tok::lparen) {
      fail(t, "implicit multiplication is not allowed; write '*' before " + describe(t));
    }
    if (t.kind == Tok::slash) fail(t, "division is only allowed inside rational literals");
    fail(t, "unexpected " + describe(t));
  }

  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }

  MultiPoly expr() {
    MultiPoly acc = term();
    while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
      const bool add = next().kind == Tok::plus;
      MultiPoly rhs = term();
      if (add) {
        acc += rhs;
      } else {
        acc -= rhs;
      }
    }
    return acc;
  }

  MultiPoly term() {
    MultiPoly acc = factor();
    while (peek().kind == Tok::star) {
      next();
      acc *= factor();
    }
    return acc;
  }

  MultiPoly factor() {
    MultiPoly b = base();
    if (peek().kind == Tok::caret) {
      next();
      const Token& e = peek();
      if (e.kind != Tok::number) fail(e, "exponent must be a non-negative integer literal");
      next();
      if (e.text.size() > 4 || std::stoul(std::string(e.text)) > kMaxExponent) {
        fail(e, "exponent exceeds " + std::to_string(kMaxExponent));
      }
      b = b.pow(static_cast<unsigned>(std::stoul(std::string(e.text))));
    }
    return b;
  }

  MultiPoly base() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::number: {
        next();
        Rational value = Rational::parse(t.text);
        if (peek().kind == Tok::slash) {
          next();
          const Token& d = peek();
          if (d.kind != Tok::number) fail(d, "denominator must be a positive integer literal");
          next();
          const Rational den = Rational::parse(d.text);
          if (den.is_zero()) fail(d, "zero denominator");
          value /= den;
        }
        return MultiPoly::constant(vars_, value);
      }
      case Tok::ident: {
        next();
        const auto it = std::find(vars_.begin(), vars_.end(), t.text);
        if (it == vars_.end()) fail(t, "unknown variable '" + std::string(t.text) + "'");
        return MultiPoly::variable(vars_, static_cast<std::size_t>(it - vars_.begin()));
      }
      case Tok::lparen: {
        next();
        MultiPoly inner = expr();
        const Token& close = peek();
        if (close.kind != Tok::rparen) {
          if (close.kind == Tok::end) {
            fail(t, "unbalanced '(': no matching ')'");
          }
          unexpected(close);
        }
        next();
        return inner;
      }
      case Tok::minus: {
        next();
        return -factor();
      }
      default:
        if (t.kind == Tok::end) fail(t, "expression ends unexpectedly");
        fail(t, "expected a number, variable or '(' but found " + describe(t));
    }
  }

  std::string_view src_;
  const std::vector<std::string>& vars_;
  PositionMap positions_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

MultiPoly parse_poly(std::string_view src, const std::vector<std::string>& vars,
                     SourcePos origin) {
  return PolyParser(src, vars, origin).parse();
}

std::string print_poly(const MultiPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    std::string monomial;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!monomial.empty()) monomial += "*";
      monomial += p.vars()[i];
      if (e[i] > 1) monomial += "^" + std::to_string(e[i]);
    }
    const bool negative = c.sign() < 0;
    const Rational magnitude = c.abs();
    std::string body;
    if (monomial.empty()) {
      body = magnitude.str();
    } else if (magnitude.is_one()) {
      body = monomial;
    } else {
      body = magnitude.str() + "*" + monomial;
    }
    if (first) {
      out = negative ? "-" + body : body;
      first = false;
    } else {
      out += negative ? " - " : " + ";
      out += body;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Documents

const DocValue* DocValue::field(std::string_view key) const {
  for (const auto& [k, v] : fields) {
    if (k == key) return &v;
  }
  return nullptr;
}

std::string_view DocValue::kind_name() const {
  switch (kind) {
    case Kind::string: return "string";
    case Kind::number: return "number";
    case Kind::word: return "word";
    case Kind::array: return "array";
    case Kind::table: return "table";
  }
  return "value";
}

const DocEntry* Document::find(std::string_view key) const {
  for (const auto& e : entries_) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

const DocEntry& Document::require(std::string_view key) const {
  const DocEntry* e = find(key);
  if (!e) throw SchemaError("missing required key '" + std::string(key) + "'");
  return *e;
}

namespace {

class DocumentParser {
 public:
  explicit DocumentParser(std::string_view src) : src_(src), positions_(src, {}) {}

  Document parse() {
    std::vector<DocEntry> entries;
    std::string section;
    while (true) {
      skip_blank_lines();
      if (at_end()) break;
      if (peek() == '[') {
        ++i_;
        skip_inline_space();
        section = key();
        skip_inline_space();
        expect(']');
        end_of_line();
        continue;
      }
      const SourcePos pos = here();
      const std::size_t key_start = i_;
      std::string k = key();
      if (!section.empty()) k = section + "." + k;
      skip_inline_space();
      expect('=');
      skip_inline_space();
      DocValue v = value();
      end_of_line();
      for (const auto& e : entries) {
        if (e.key == k) fail(key_start, i_ - key_start, "duplicate key '" + k + "'");
      }
      entries.push_back({std::move(k), std::move(v), pos});
    }
    return Document(std::move(entries));
  }

 private:
  [[nodiscard]] bool at_end() const { return i_ >= src_.size(); }
  [[nodiscard]] char peek() const { return at_end() ? '\0' : src_[i_]; }
  [[nodiscard]] SourcePos here() const { return positions_.at(i_); }

  [[noreturn]] void fail(std::size_t offset, std::size_t len, const std::string& message) const {
    const SourcePos pos = positions_.at(offset);
    const std::size_t end = std::min(src_.size(), offset + std::max<std::size_t>(len, 1));
    std::string snippet(src_.substr(std::min(offset, src_.size()), end - std::min(offset, src_.size())));
    throw ParseError(pos.line, pos.column, message, snippet);
  }

  void skip_inline_space() {
    while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) ++i_;
  }

  void skip_comment() {
    if (peek() == '#') {
      while (!at_end() && peek() != '\n') ++i_;
    }
  }

  void skip_blank_lines() {
    while (!at_end()) {
      skip_inline_space();
      skip_comment();
      if (peek() == '\n') {
        ++i_;
        continue;
      }
      break;
    }
  }

  // Whitespace, comments and newlines inside brackets.
  void skip_any_space() {
    while (!at_end()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        ++i_;
      } else if (c == '#') {
        skip_comment();
      } else {
        break;
      }
    }
  }

  void end_of_line() {
    skip_inline_space();
    skip_comment();
    if (at_end()) return;
    if (peek() != '\n') fail(i_, 1, std::string("unexpected '") + peek() + "' after value");
    ++i_;
  }

  void expect(char c) {
    if (peek() != c) {
      const std::string found = at_end() ? "end of input" : std::string("'") + peek() + "'";
      fail(i_, 1, std::string("expected '") + c + "' but found " + found);
    }
    ++i_;
  }

  std::string ident() {
    if (!is_ident_start(peek())) {
      fail(i_, 1, at_end() ? "expected a name but reached end of input" : "expected a name");
    }
    const std::size_t start = i_;
    while (!at_end() && is_ident_char(peek())) ++i_;
    return std::string(src_.substr(start, i_ - start));
  }

  std::string key() {
    std::string k = ident();
    while (peek() == '.') {
      ++i_;
      k += "." + ident();
    }
    return k;
  }

  DocValue value() {
    DocValue v;
    v.pos = here();
    const char c = peek();
    if (c == '"') {
      ++i_;
      v.kind = DocValue::Kind::string;
      v.content_pos = here();
      const std::size_t start = i_;
      while (!at_end() && peek() != '"' && peek() != '\n') ++i_;
      if (peek() != '"') fail(start - 1, 1, "unterminated string");
      v.text = std::string(src_.substr(start, i_ - start));
      ++i_;
    } else if (c == '[') {
      ++i_;
      v.kind = DocValue::Kind::array;
      const std::size_t open = i_ - 1;
      skip_any_space();
      while (peek() != ']') {
        if (at_end()) fail(open, 1, "unbalanced '[': no matching ']'");
        v.items.push_back(value());
        skip_any_space();
        if (peek() == ',') {
          ++i_;
          skip_any_space();
        } else if (peek() != ']') {
          if (at_end()) fail(open, 1, "unbalanced '[': no matching ']'");
          fail(i_, 1, "expected ',' or ']' in array");
        }
      }
      ++i_;
    } else if (c == '{') {
      ++i_;
      v.kind = DocValue::Kind::table;
      const std::size_t open = i_ - 1;
      skip_any_space();
      while (peek() != '}') {
        if (at_end()) fail(open, 1, "unbalanced '{': no matching '}'");
        const std::size_t key_start = i_;
        std::string k = key();
        skip_any_space();
        expect('=');
        skip_any_space();
        DocValue item = value();
        if (v.field(k)) fail(key_start, k.size(), "duplicate field '" + k + "'");
        v.fields.emplace_back(std::move(k), std::move(item));
        skip_any_space();
        if (peek() == ',') {
          ++i_;
          skip_any_space();
        } else if (peek() != '}') {
          if (at_end()) fail(open, 1, "unbalanced '{': no matching '}'");
          fail(i_, 1, "expected ',' or '}' in table");
        }
      }
      ++i_;
    } else if (is_digit(c) || c == '-' || c == '+' || c == '.') {
      v.kind = DocValue::Kind::number;
      const std::size_t start = i_;
      ++i_;
      while (!at_end()) {
        const char d = peek();
        const char prev = src_[i_ - 1];
        if (is_digit(d) || d == '.' || d == '/' || d == 'e' || d == 'E' ||
            ((d == '-' || d == '+') && (prev == 'e' || prev == 'E'))) {
          ++i_;
        } else {
          break;
        }
      }
      v.text = std::string(src_.substr(start, i_ - start));
    } else if (is_ident_start(c)) {
      v.kind = DocValue::Kind::word;
      v.text = ident();
    } else {
      if (at_end()) fail(i_, 1, "expected a value but reached end of input");
      fail(i_, 1, std::string("unexpected '") + c + "' where a value was expected");
    }
    return v;
  }

  std::string_view src_;
  PositionMap positions_;
  std::size_t i_ = 0;
};

}  // namespace

Document parse_document(std::string_view src) { return DocumentParser(src).parse(); }

}  // namespace resilog
