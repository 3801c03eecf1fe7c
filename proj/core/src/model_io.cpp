#include "disco/model_io.hpp"

#include <fstream>
#include <sstream>

#include "json_util.hpp"

namespace disco {

namespace ju = json_util;
using nlohmann::json;

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot read '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

ModelSpec parse_model_document(std::string_view text) {
  const json doc = ju::parse(text);
  ju::object(doc, "document");
  ju::allow_keys(doc, {"schema_version", "units", "noises", "variables", "functions"}, "document", text);

  const auto version = ju::integer(ju::member(doc, "schema_version", "document"), "schema_version");
  if (version != kModelSchemaVersion) {
    throw Error(ErrorKind::UnsupportedSchemaVersion,
                "schema_version " + std::to_string(version) + " is not supported (expected 1)");
  }

  ModelSpec spec;
  const json& units = ju::object(ju::member(doc, "units", "document"), "units");
  ju::allow_keys(units, {"ids", "weights"}, "units", text);
  const json& ids = ju::array(ju::member(units, "ids", "units"), "units.ids");
  for (std::size_t i = 0; i < ids.size(); ++i) spec.units.push_back(ju::string(ids[i], "units.ids[" + std::to_string(i) + "]"));
  if (auto w = units.find("weights"); w != units.end()) {
    ju::array(*w, "units.weights");
    for (std::size_t i = 0; i < w->size(); ++i) {
      spec.unit_weights.push_back(ju::probability((*w)[i], "units.weights[" + std::to_string(i) + "]"));
    }
  }

  const json& noises = ju::array(ju::member(doc, "noises", "document"), "noises");
  for (std::size_t i = 0; i < noises.size(); ++i) {
    const std::string path = "noises[" + std::to_string(i) + "]";
    const json& n = ju::object(noises[i], path);
    ju::allow_keys(n, {"name", "domain", "pmf"}, path, text);
    NoiseDef def;
    def.name = ju::string(ju::member(n, "name", path), path + ".name");
    const json& domain = ju::array(ju::member(n, "domain", path), path + ".domain");
    for (std::size_t k = 0; k < domain.size(); ++k) {
      def.domain.push_back(ju::value(domain[k], path + ".domain[" + std::to_string(k) + "]"));
    }
    const json& pmf = ju::array(ju::member(n, "pmf", path), path + ".pmf");
    for (std::size_t k = 0; k < pmf.size(); ++k) {
      def.pmf.push_back(ju::probability(pmf[k], path + ".pmf[" + std::to_string(k) + "]"));
    }
    spec.noises.push_back(std::move(def));
  }

  const json& variables = ju::array(ju::member(doc, "variables", "document"), "variables");
  for (std::size_t i = 0; i < variables.size(); ++i) {
    const std::string path = "variables[" + std::to_string(i) + "]";
    const json& v = ju::object(variables[i], path);
    ju::allow_keys(v, {"name", "domain"}, path, text);
    VariableDef def;
    def.name = ju::string(ju::member(v, "name", path), path + ".name");
    const json& domain = ju::array(ju::member(v, "domain", path), path + ".domain");
    for (std::size_t k = 0; k < domain.size(); ++k) {
      def.domain.push_back(ju::value(domain[k], path + ".domain[" + std::to_string(k) + "]"));
    }
    spec.variables.push_back(std::move(def));
  }

  const json& functions = ju::array(ju::member(doc, "functions", "document"), "functions");
  for (std::size_t i = 0; i < functions.size(); ++i) {
    const std::string path = "functions[" + std::to_string(i) + "]";
    const json& f = ju::object(functions[i], path);
    ju::allow_keys(f, {"target", "parents", "noise", "rows"}, path, text);
    FunctionSpec fn;
    fn.target = ju::string(ju::member(f, "target", path), path + ".target");
    if (auto p = f.find("parents"); p != f.end()) {
      ju::array(*p, path + ".parents");
      for (std::size_t k = 0; k < p->size(); ++k) {
        fn.parents.push_back(ju::string((*p)[k], path + ".parents[" + std::to_string(k) + "]"));
      }
    }
    fn.noise = ju::string(ju::member(f, "noise", path), path + ".noise");
    const json& rows = ju::array(ju::member(f, "rows", path), path + ".rows");
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const std::string rpath = path + ".rows[" + std::to_string(r) + "]";
      const json& row = ju::object(rows[r], rpath);
      ju::allow_keys(row, {"unit", "parents", "noise", "value"}, rpath, text);
      TableRow tr;
      tr.unit = row.contains("unit") ? ju::string(row["unit"], rpath + ".unit") : std::string(kAnyUnit);
      if (auto p = row.find("parents"); p != row.end()) {
        ju::array(*p, rpath + ".parents");
        for (std::size_t k = 0; k < p->size(); ++k) {
          tr.parents.push_back(ju::value((*p)[k], rpath + ".parents[" + std::to_string(k) + "]"));
        }
      }
      tr.noise = ju::value(ju::member(row, "noise", rpath), rpath + ".noise");
      tr.value = ju::value(ju::member(row, "value", rpath), rpath + ".value");
      fn.rows.push_back(std::move(tr));
    }
    spec.functions.push_back(std::move(fn));
  }
  return spec;
}

ModelSpec load_model_spec(const std::filesystem::path& path) { return parse_model_document(read_text_file(path)); }

DiscoModel load_model(const std::filesystem::path& path) { return build_model(load_model_spec(path)); }

std::string write_model_document(const ModelSpec& spec) {
  json doc;
  doc["schema_version"] = kModelSchemaVersion;
  json units;
  units["ids"] = spec.units;
  if (!spec.unit_weights.empty()) {
    json w = json::array();
    for (const auto& x : spec.unit_weights) w.push_back(to_fraction_string(x));
    units["weights"] = w;
  }
  doc["units"] = units;

  json noises = json::array();
  for (const auto& n : spec.noises) {
    json domain = json::array(), pmf = json::array();
    for (const auto& v : n.domain) domain.push_back(ju::value_json(v));
    for (const auto& p : n.pmf) pmf.push_back(to_fraction_string(p));
    noises.push_back({{"name", n.name}, {"domain", domain}, {"pmf", pmf}});
  }
  doc["noises"] = noises;

  json variables = json::array();
  for (const auto& v : spec.variables) {
    json domain = json::array();
    for (const auto& x : v.domain) domain.push_back(ju::value_json(x));
    variables.push_back({{"name", v.name}, {"domain", domain}});
  }
  doc["variables"] = variables;

  json functions = json::array();
  for (const auto& f : spec.functions) {
    json rows = json::array();
    for (const auto& r : f.rows) {
      json parents = json::array();
      for (const auto& p : r.parents) parents.push_back(ju::value_json(p));
      rows.push_back({{"unit", r.unit}, {"parents", parents}, {"noise", ju::value_json(r.noise)},
                      {"value", ju::value_json(r.value)}});
    }
    functions.push_back({{"target", f.target}, {"parents", f.parents}, {"noise", f.noise}, {"rows", rows}});
  }
  doc["functions"] = functions;
  return doc.dump(2) + "\n";
}

}  // namespace disco
