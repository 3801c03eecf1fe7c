#include "disco/dataset.hpp"

#include <set>

#include <boost/algorithm/string.hpp>

#include "disco/model_io.hpp"

namespace disco {
namespace {

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> fields;
  boost::split(fields, line, boost::is_any_of(","));
  for (auto& f : fields) boost::trim(f);
  return fields;
}

}  // namespace

Dataset parse_dataset_csv(std::string_view text, const DatasetOptions& options) {
  std::vector<std::string> lines;
  boost::split(lines, text, boost::is_any_of("\n"));
  for (auto& l : lines) {
    if (!l.empty() && l.back() == '\r') l.pop_back();
  }
  while (!lines.empty() && boost::trim_copy(lines.back()).empty()) lines.pop_back();

  if (lines.empty()) throw Error(ErrorKind::BadHeader, "dataset is empty; expected header 'unit,t,y'");
  std::string header = lines.front();
  if (header.rfind("\xEF\xBB\xBF", 0) == 0) header.erase(0, 3);
  if (split_fields(header) != std::vector<std::string>{"unit", "t", "y"}) {
    throw Error(ErrorKind::BadHeader, "expected header 'unit,t,y', got '" + header + "'");
  }

  Dataset data;
  std::set<std::string> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string where = "line " + std::to_string(i + 1);
    if (boost::trim_copy(lines[i]).empty()) continue;
    auto fields = split_fields(lines[i]);
    if (fields.size() != 3) {
      throw Error(ErrorKind::SyntaxError, where + ": expected 3 fields, found " + std::to_string(fields.size()));
    }
    DatasetRow row;
    row.unit = fields[0];
    if (row.unit.empty()) throw Error(ErrorKind::SyntaxError, where + ": empty unit id");
    if (!seen.insert(row.unit).second) {
      throw Error(ErrorKind::DuplicateName, where + ": unit '" + row.unit + "' appears twice");
    }
    if (!fields[1].empty()) {
      Value t = Value::parse(fields[1]);
      if (!find_value(options.t_domain, t)) {
        throw Error(ErrorKind::OutOfDomainValue, where + ": t=" + fields[1] + " is outside the treatment domain");
      }
      row.t = t;
    }
    if (!fields[2].empty()) {
      Rational y;
      try {
        y = parse_rational(fields[2]);
      } catch (const Error&) {
        throw Error(ErrorKind::SyntaxError, where + ": y='" + fields[2] + "' is not a number");
      }
      if (options.y_domain) {
        bool ok = false;
        for (const auto& v : *options.y_domain) ok = ok || v == y;
        if (!ok) throw Error(ErrorKind::OutOfDomainValue, where + ": y=" + fields[2] + " is outside the outcome domain");
      }
      row.y = y;
    }
    data.rows.push_back(std::move(row));
  }
  return data;
}

Dataset load_dataset(const std::filesystem::path& path, const DatasetOptions& options) {
  return parse_dataset_csv(read_text_file(path), options);
}

ArmSummary arm_summary(const Dataset& data, const Value& treated) {
  ArmSummary s;
  Rational sum_c(0), sum_t(0);
  for (const auto& r : data.rows) {
    if (!r.t || !r.y) {
      ++s.incomplete_rows;
      continue;
    }
    if (*r.t == treated) {
      ++s.treatment_rows;
      sum_t += *r.y;
    } else {
      ++s.control_rows;
      sum_c += *r.y;
    }
  }
  if (s.control_rows > 0) s.control_mean = sum_c / s.control_rows;
  if (s.treatment_rows > 0) s.treatment_mean = sum_t / s.treatment_rows;
  return s;
}

CausalStats stats_from_dataset(const Dataset& data, const Value& treated, const Rational& outcome) {
  std::size_t n_t = 0, n_c = 0, hit_t = 0, hit_c = 0;
  for (const auto& r : data.rows) {
    if (!r.t || !r.y) continue;
    if (*r.y != 0 && *r.y != 1) {
      throw Error(ErrorKind::NonBinaryVariable, "unit '" + r.unit + "' has y=" + to_fraction_string(*r.y) +
                                                    "; bounds need a binary outcome");
    }
    const bool hit = *r.y == outcome;
    if (*r.t == treated) {
      ++n_t;
      hit_t += hit;
    } else {
      ++n_c;
      hit_c += hit;
    }
  }
  if (n_t == 0 || n_c == 0) {
    throw Error(ErrorKind::ZeroProbabilityConditioningSet, "both arms need at least one complete row");
  }
  return CausalStats::from_identifiable(Rational(n_t) / (n_t + n_c), Rational(hit_t) / n_t, Rational(hit_c) / n_c);
}

}  // namespace disco
