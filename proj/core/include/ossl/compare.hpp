#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ossl/scenario.hpp"

namespace ossl {

struct ComparisonRow {
  std::string name;
  std::string strategy;
  std::string unlabeled_source;
  std::size_t n_seeds = 0;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;  // sample std; 0 for a single seed
  double accuracy_change = 0.0;  // vs. the baseline row
  std::optional<double> mean_gap_reference;
  std::optional<double> mean_gap_final;
  bool single_seed = false;
};

struct ComparisonTable {
  std::size_t baseline = 0;
  std::vector<ComparisonRow> rows;

  [[nodiscard]] std::string to_csv() const;
  [[nodiscard]] std::string to_text() const;
};

/// Needs at least two records sharing one mode; throws ParameterError otherwise.
ComparisonTable compare_strategies(const std::vector<RunRecord>& records, std::size_t baseline = 0);

}  // namespace ossl
