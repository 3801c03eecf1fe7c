#pragma once

// Helpers shared by the JSON readers. Not installed.

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "disco/error.hpp"
#include "disco/rational.hpp"
#include "disco/value.hpp"

namespace disco::json_util {

using nlohmann::json;

inline std::string location(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

// nlohmann does not keep positions, so unknown keys are located by searching
// for the first `"key"` followed by a colon.
inline std::string key_location(std::string_view text, std::string_view key) {
  const std::string quoted = "\"" + std::string(key) + "\"";
  std::size_t pos = 0;
  while ((pos = text.find(quoted, pos)) != std::string_view::npos) {
    std::size_t after = pos + quoted.size();
    while (after < text.size() && (text[after] == ' ' || text[after] == '\t' || text[after] == '\n' || text[after] == '\r')) {
      ++after;
    }
    if (after < text.size() && text[after] == ':') return location(text, pos) + ": ";
    pos = after;
  }
  return "";
}

inline json parse(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::string what = e.what();
    auto cut = what.find("]: ");
    if (cut != std::string::npos) what = what.substr(cut + 3);
    throw Error(ErrorKind::SyntaxError, location(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + what);
  }
}

[[noreturn]] inline void mismatch(const std::string& path, const char* expected) {
  throw Error(ErrorKind::TypeMismatch, path + ": expected " + expected);
}

inline const json& object(const json& j, const std::string& path) {
  if (!j.is_object()) mismatch(path, "an object");
  return j;
}

inline const json& array(const json& j, const std::string& path) {
  if (!j.is_array()) mismatch(path, "an array");
  return j;
}

inline void allow_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& path,
                       std::string_view text) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) {
      throw Error(ErrorKind::UnknownKey, key_location(text, key) + "unknown key '" + key + "' in " + path);
    }
  }
}

inline const json& member(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw Error(ErrorKind::TypeMismatch, path + ": missing required key '" + key + "'");
  return *it;
}

inline std::string string(const json& j, const std::string& path) {
  if (!j.is_string()) mismatch(path, "a string");
  return j.get<std::string>();
}

inline std::int64_t integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) mismatch(path, "an integer");
  return j.get<std::int64_t>();
}

inline Value value(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Value(j.get<std::int64_t>());
  if (j.is_string()) return Value::parse(j.get<std::string>());
  mismatch(path, "an integer or a string");
}

inline Rational probability(const json& j, const std::string& path) {
  try {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_number_float()) return rational_from_double(j.get<double>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const Error& e) {
    throw Error(ErrorKind::TypeMismatch, path + ": " + e.what());
  }
  mismatch(path, "a number or a fraction string");
}

inline json value_json(const Value& v) {
  if (v.is_integer()) return std::stoll(v.text());
  return v.text();
}

}  // namespace disco::json_util
