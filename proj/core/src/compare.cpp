#include "ossl/compare.hpp"

#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "ossl/errors.hpp"

namespace ossl {
namespace {

std::optional<double> mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

ComparisonRow summarize(const RunRecord& record) {
  ComparisonRow row;
  row.name = record.scenario.name;
  row.strategy = std::string(to_string(record.scenario.strategy));
  row.unlabeled_source = std::string(to_string(record.scenario.unlabeled_source));
  const auto acc = record.final_accuracies();
  row.n_seeds = acc.size();
  row.single_seed = acc.size() <= 1;
  row.mean_accuracy = mean_of(acc).value_or(0.0);
  if (acc.size() > 1) {
    double ss = 0.0;
    for (double a : acc) ss += (a - row.mean_accuracy) * (a - row.mean_accuracy);
    row.std_accuracy = std::sqrt(ss / static_cast<double>(acc.size() - 1));
  }
  std::vector<double> ref;
  std::vector<double> fin;
  for (const auto& r : record.runs) {
    if (r.gap_supervised_reference) ref.push_back(r.gap_supervised_reference->mmd_gap);
    if (r.gap_final) fin.push_back(r.gap_final->mmd_gap);
  }
  row.mean_gap_reference = mean_of(ref);
  row.mean_gap_final = mean_of(fin);
  return row;
}

std::string opt_str(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream os;
  os.precision(10);
  os << *v;
  return os.str();
}

}  // namespace

ComparisonTable compare_strategies(const std::vector<RunRecord>& records, std::size_t baseline) {
  if (records.size() < 2) throw ParameterError("compare_strategies: need at least two run records");
  if (baseline >= records.size()) throw ParameterError("compare_strategies: baseline index out of range");
  for (const auto& r : records) {
    if (r.scenario.mode != records.front().scenario.mode) {
      throw ParameterError("compare_strategies: records mix polar2d and toy_image runs");
    }
  }
  ComparisonTable table;
  table.baseline = baseline;
  for (const auto& r : records) table.rows.push_back(summarize(r));
  const double base = table.rows[baseline].mean_accuracy;
  for (auto& row : table.rows) row.accuracy_change = row.mean_accuracy - base;
  return table;
}

std::string ComparisonTable::to_csv() const {
  std::ostringstream os;
  os.precision(10);
  os << "name,strategy,unlabeled_source,n_seeds,mean_accuracy,std_accuracy,accuracy_change,"
        "mean_gap_reference,mean_gap_final,single_seed\n";
  for (const auto& r : rows) {
    os << r.name << ',' << r.strategy << ',' << r.unlabeled_source << ',' << r.n_seeds << ',' << r.mean_accuracy
       << ',' << r.std_accuracy << ',' << r.accuracy_change << ',' << opt_str(r.mean_gap_reference) << ','
       << opt_str(r.mean_gap_final) << ',' << (r.single_seed ? "true" : "false") << '\n';
  }
  return os.str();
}

std::string ComparisonTable::to_text() const {
  std::ostringstream os;
  os << std::left << std::setw(28) << "scenario" << std::setw(12) << "strategy" << std::setw(24) << "unlabeled"
     << std::right << std::setw(6) << "seeds" << std::setw(10) << "acc" << std::setw(9) << "std" << std::setw(10)
     << "delta" << std::setw(12) << "gap(ref)" << std::setw(12) << "gap(final)" << '\n';
  os << std::fixed;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    os << std::left << std::setw(28) << (r.name + (i == baseline ? " *" : "")) << std::setw(12) << r.strategy
       << std::setw(24) << r.unlabeled_source << std::right << std::setw(6) << r.n_seeds << std::setprecision(4)
       << std::setw(10) << r.mean_accuracy << std::setw(9) << r.std_accuracy << std::showpos << std::setw(10)
       << r.accuracy_change << std::noshowpos << std::setprecision(5) << std::setw(12)
       << (r.mean_gap_reference ? *r.mean_gap_reference : NAN) << std::setw(12)
       << (r.mean_gap_final ? *r.mean_gap_final : NAN) << (r.single_seed ? "  (single seed, std n/a)" : "") << '\n';
  }
  return os.str();
}

}  // namespace ossl
