#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "disco/bounds.hpp"

namespace disco {

/// One observed unit. An empty CSV field leaves t or y unset.
struct DatasetRow {
  std::string unit;
  std::optional<Value> t;
  std::optional<Rational> y;
};

struct Dataset {
  std::vector<DatasetRow> rows;
};

struct DatasetOptions {
  std::vector<Value> t_domain = {Value(0), Value(1)};
  std::optional<std::vector<Rational>> y_domain;  // unrestricted when unset
};

/// Header must be `unit,t,y`. Throws Error(BadHeader), Error(SyntaxError)
/// for a malformed row, Error(DuplicateName) for a repeated unit id and
/// Error(OutOfDomainValue) for t or y outside the declared domains.
Dataset parse_dataset_csv(std::string_view text, const DatasetOptions& options = {});

Dataset load_dataset(const std::filesystem::path& path, const DatasetOptions& options = {});

/// Per-arm summary of rows with both t and y present.
struct ArmSummary {
  std::size_t control_rows = 0;
  std::size_t treatment_rows = 0;
  std::size_t incomplete_rows = 0;
  std::optional<Rational> control_mean;
  std::optional<Rational> treatment_mean;
};

/// `treated` names the treatment arm's t value; every other t value is control.
ArmSummary arm_summary(const Dataset& data, const Value& treated = Value(1));

/// RCT reading of a dataset with a binary outcome: P(t) is the treated share,
/// P(y_t) and P(y_{t'}) the per-arm frequencies of y == `outcome`. Throws
/// Error(ZeroProbabilityConditioningSet) when an arm is empty.
CausalStats stats_from_dataset(const Dataset& data, const Value& treated = Value(1),
                               const Rational& outcome = Rational(1));

}  // namespace disco
