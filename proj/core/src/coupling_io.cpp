#include "disco/coupling_io.hpp"

#include "disco/model_io.hpp"
#include "json_util.hpp"

namespace disco {

namespace ju = json_util;
using nlohmann::json;

CouplingKind parse_coupling_kind(std::string_view text) {
  if (text == "independent") return CouplingKind::Independent;
  if (text == "shared") return CouplingKind::Shared;
  if (text == "explicit") return CouplingKind::ExplicitJoint;
  throw Error(ErrorKind::TypeMismatch, "unknown coupling kind '" + std::string(text) + "'");
}

CouplingDocument parse_coupling_document(std::string_view text) {
  const json doc = ju::parse(text);
  ju::object(doc, "document");
  ju::allow_keys(doc, {"schema_version", "kind", "noises"}, "document", text);
  const auto version = ju::integer(ju::member(doc, "schema_version", "document"), "schema_version");
  if (version != 1) {
    throw Error(ErrorKind::UnsupportedSchemaVersion,
                "schema_version " + std::to_string(version) + " is not supported (expected 1)");
  }

  CouplingDocument out;
  out.kind = parse_coupling_kind(ju::string(ju::member(doc, "kind", "document"), "kind"));
  auto noises = doc.find("noises");
  if (noises == doc.end()) return out;
  ju::object(*noises, "noises");
  for (const auto& [name, body] : noises->items()) {
    const std::string path = "noises." + name;
    ju::object(body, path);
    ju::allow_keys(body, {"worlds", "table"}, path, text);
    JointTableSpec table;
    if (auto w = body.find("worlds"); w != body.end()) {
      ju::array(*w, path + ".worlds");
      for (std::size_t i = 0; i < w->size(); ++i) {
        auto id = ju::integer((*w)[i], path + ".worlds[" + std::to_string(i) + "]");
        if (id < 0) throw Error(ErrorKind::TypeMismatch, path + ".worlds: world indices are non-negative");
        table.world_ids.push_back(static_cast<std::size_t>(id));
      }
    }
    const json& entries = ju::array(ju::member(body, "table", path), path + ".table");
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const std::string epath = path + ".table[" + std::to_string(i) + "]";
      const json& e = ju::object(entries[i], epath);
      ju::allow_keys(e, {"values", "p"}, epath, text);
      const json& values = ju::array(ju::member(e, "values", epath), epath + ".values");
      std::vector<Value> tuple;
      for (std::size_t k = 0; k < values.size(); ++k) {
        tuple.push_back(ju::value(values[k], epath + ".values[" + std::to_string(k) + "]"));
      }
      table.entries.emplace_back(std::move(tuple), ju::probability(ju::member(e, "p", epath), epath + ".p"));
    }
    out.joint.emplace(name, std::move(table));
  }
  if (out.kind != CouplingKind::ExplicitJoint && !out.joint.empty()) {
    throw Error(ErrorKind::TypeMismatch, "joint tables require kind \"explicit\"");
  }
  return out;
}

CouplingDocument load_coupling_document(const std::filesystem::path& path) {
  return parse_coupling_document(read_text_file(path));
}

}  // namespace disco
