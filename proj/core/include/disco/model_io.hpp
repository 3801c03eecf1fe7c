#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "disco/model.hpp"

namespace disco {

inline constexpr int kModelSchemaVersion = 1;

/// Parses a JSON model document. Probabilities may be JSON numbers or strings
/// such as "1/3" or "0.25". Throws Error with kind SyntaxError, UnknownKey,
/// TypeMismatch or UnsupportedSchemaVersion; the message starts with
/// "line L, column C" whenever a location is known.
ModelSpec parse_model_document(std::string_view text);

/// Reads and parses a file. Throws Error(IoError) when it cannot be read.
ModelSpec load_model_spec(const std::filesystem::path& path);

/// load_model_spec() followed by build_model().
DiscoModel load_model(const std::filesystem::path& path);

/// Serializes with probabilities as exact fraction strings, so that
/// parse_model_document(write_model_document(s)) reproduces s.
std::string write_model_document(const ModelSpec& spec);

/// Reads a whole file. Throws Error(IoError).
std::string read_text_file(const std::filesystem::path& path);

}  // namespace disco
