#include "disco/value.hpp"

#include <cctype>

namespace disco {
namespace {

bool looks_integer(std::string_view text) {
  if (text.empty()) return false;
  std::size_t i = (text.front() == '-') ? 1 : 0;
  if (i == text.size()) return false;
  for (; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
  }
  // Keep "007" a symbol so that text round-trips.
  std::string_view digits = text.front() == '-' ? text.substr(1) : text;
  return digits.size() == 1 || digits.front() != '0';
}

}  // namespace

Value::Value(std::int64_t number) : text_(std::to_string(number)), integer_(true) {}

Value::Value(std::string symbol) : text_(std::move(symbol)) {}

Value Value::parse(std::string_view text) {
  Value v{std::string(text)};
  v.integer_ = looks_integer(text);
  return v;
}

std::optional<ValueIndex> find_value(std::span<const Value> domain, const Value& value) {
  for (std::size_t i = 0; i < domain.size(); ++i) {
    if (domain[i] == value) return static_cast<ValueIndex>(i);
  }
  return std::nullopt;
}

}  // namespace disco
