#pragma once

#include <filesystem>
#include <string_view>

#include "disco/worlds.hpp"

namespace disco {

/// A coupling file: its kind plus, for explicit couplings, per-noise joint
/// tables. World indices in the file are positions in the world list the
/// caller builds (they become the world ids).
struct CouplingDocument {
  CouplingKind kind = CouplingKind::Independent;
  JointSpec joint;
};

/// Throws Error with kind SyntaxError, UnknownKey, TypeMismatch or
/// UnsupportedSchemaVersion.
CouplingDocument parse_coupling_document(std::string_view text);

CouplingDocument load_coupling_document(const std::filesystem::path& path);

/// "independent", "shared" or "explicit". Throws Error(TypeMismatch).
CouplingKind parse_coupling_kind(std::string_view text);

}  // namespace disco
