#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace disco {

/// A value in a finite domain: either an integer or a symbol. Values compare
/// by their text, so the integer 1 and the symbol "1" are the same value;
/// domains therefore require textually distinct entries.
class Value {
 public:
  Value() = default;
  Value(std::int64_t number);  // NOLINT(google-explicit-constructor)
  Value(int number) : Value(static_cast<std::int64_t>(number)) {}  // NOLINT
  Value(std::string symbol);  // NOLINT(google-explicit-constructor)
  Value(const char* symbol) : Value(std::string(symbol)) {}  // NOLINT

  /// Integers for text like "-3" or "12", symbols otherwise.
  static Value parse(std::string_view text);

  const std::string& text() const noexcept { return text_; }
  bool is_integer() const noexcept { return integer_; }

  friend bool operator==(const Value& a, const Value& b) { return a.text_ == b.text_; }
  friend auto operator<=>(const Value& a, const Value& b) { return a.text_ <=> b.text_; }

 private:
  std::string text_;
  bool integer_ = false;
};

using ValueIndex = std::uint32_t;

/// Position of `value` within `domain`, if present.
std::optional<ValueIndex> find_value(std::span<const Value> domain, const Value& value);

}  // namespace disco
