// ossl: run scenarios, measure the MMD gap, redraw boundaries, compare runs.
#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "ossl/boundary.hpp"
#include "ossl/compare.hpp"
#include "ossl/dataset_io.hpp"
#include "ossl/errors.hpp"
#include "ossl/scenario.hpp"

namespace {

using namespace ossl;

int cmd_run(const std::string& scenario_path, const std::string& out_dir, const std::string& seeds, bool no_gaps,
            bool export_datasets) {
  ScenarioSpec spec = load_scenario_file(scenario_path);
  if (!seeds.empty()) spec.replicate_seeds = parse_seed_list(seeds);
  RunOptions opt;
  if (!out_dir.empty()) opt.out_dir = out_dir;
  opt.compute_gaps = !no_gaps;
  opt.export_datasets = export_datasets;
  const RunRecord rec = run_scenario(spec, opt);
  std::cout << spec.name << " (" << to_string(spec.strategy) << ", " << to_string(spec.unlabeled_source) << ")\n";
  bool any_aborted = false;
  for (const auto& r : rec.runs) {
    std::cout << "  seed " << r.seed << ": ";
    if (r.status != "ok") {
      any_aborted = true;
      std::cout << "aborted: " << r.diagnostic << '\n';
      continue;
    }
    std::printf("accuracy %.4f", *r.final_accuracy);
    if (r.gap_supervised_reference && r.gap_final) {
      std::printf("  mmd_gap ref %.5f final %.5f", r.gap_supervised_reference->mmd_gap, r.gap_final->mmd_gap);
    }
    std::printf("\n");
  }
  if (!out_dir.empty()) std::cout << "wrote " << rec.artifact_paths.size() << " files to " << out_dir << '\n';
  return any_aborted ? 4 : 0;
}

int cmd_gap(const std::string& labeled, const std::string& unlabeled, int k, double bandwidth) {
  const ProbabilityTable l = read_probability_csv(labeled, true);
  const ProbabilityTable u = read_probability_csv(unlabeled, false);
  if (k <= 0) k = static_cast<int>(l.probs.empty() ? 0 : l.probs.front().size());
  const KernelSpec kernel = bandwidth > 0 ? KernelSpec::fixed(bandwidth) : KernelSpec::median_heuristic();
  std::cout << gap_report_to_json(mmd_gap(l.probs, l.labels, u.probs, k, kernel)) << '\n';
  return 0;
}

int cmd_figure(const std::string& record_path, int resolution, const std::string& out_dir) {
  const RunRecord rec = load_record(record_path);
  if (rec.scenario.mode != Mode::kPolar2d) throw UsageError("figure: only polar2d records have decision boundaries");
  const std::filesystem::path dir = out_dir.empty() ? std::filesystem::path(record_path).parent_path() : std::filesystem::path(out_dir);
  if (!dir.empty()) std::filesystem::create_directories(dir);
  const int res = resolution > 0 ? resolution : rec.scenario.data.boundary_resolution;
  for (const auto& r : rec.runs) {
    if (!r.model) continue;
    const PolarTask task = make_polar_task(rec.scenario, r.seed);
    std::vector<PolarSample> overlay = task.labeled;
    overlay.insert(overlay.end(), task.unlabeled.begin(), task.unlabeled.end());
    FigureOptions fo;
    fo.title = rec.scenario.name + " (seed " + std::to_string(r.seed) + ")";
    const auto path = dir / ("boundary_seed" + std::to_string(r.seed) + ".svg");
    emit_figure(eval_boundary(r.model->restore(), res), overlay, path, fo);
    std::cout << path.string() << '\n';
  }
  return 0;
}

int cmd_compare(const std::vector<std::string>& paths, std::size_t baseline, const std::string& csv) {
  std::vector<RunRecord> records;
  for (const auto& p : paths) records.push_back(load_record(p));
  const ComparisonTable table = compare_strategies(records, baseline);
  std::cout << table.to_text();
  if (csv.empty()) return 0;
  std::ofstream out(csv);
  if (!out) throw IoError("cannot write " + csv);
  out << table.to_csv();
  std::cout << "wrote " << csv << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Open-set semi-supervised learning experiments"};
  app.require_subcommand(1);

  std::string scenario, out_dir, seeds;
  bool no_gaps = false, export_datasets = false;
  auto* run = app.add_subcommand("run", "Train every seed of a scenario file");
  run->add_option("scenario", scenario, "Scenario file (key = value)")->required();
  run->add_option("--out", out_dir, "Directory for run_record.json, metrics CSVs and figures");
  run->add_option("--seeds", seeds, "Comma-separated replicate seeds, overriding the file");
  run->add_flag("--no-gaps", no_gaps, "Skip the MMD gap reports");
  run->add_flag("--export-datasets", export_datasets, "Also write the generated datasets as CSV");

  std::string labeled, unlabeled;
  int k = 0;
  double bandwidth = 0.0;
  auto* gap = app.add_subcommand("gap", "MMD gap between two probability CSV files");
  gap->add_option("labeled", labeled, "CSV: label, then probabilities")->required();
  gap->add_option("unlabeled", unlabeled, "CSV: probabilities")->required();
  gap->add_option("--k", k, "Number of classes (default: probability width)");
  gap->add_option("--bandwidth", bandwidth, "Fixed RBF bandwidth (default: median heuristic)");

  std::string record;
  int resolution = 0;
  std::string fig_out;
  auto* figure = app.add_subcommand("figure", "Redraw decision boundaries from a run record");
  figure->add_option("record", record, "run_record.json")->required();
  figure->add_option("--resolution", resolution, "Grid cells per axis");
  figure->add_option("--out", fig_out, "Output directory (default: next to the record)");

  std::vector<std::string> records;
  std::size_t baseline = 0;
  std::string csv;
  auto* compare = app.add_subcommand("compare", "Tabulate accuracy and gap across run records");
  compare->add_option("records", records, "Two or more run_record.json files")->required();
  compare->add_option("--baseline", baseline, "Index of the baseline record");
  compare->add_option("--csv", csv, "Also write the table as CSV to this path");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(scenario, out_dir, seeds, no_gaps, export_datasets);
    if (*gap) return cmd_gap(labeled, unlabeled, k, bandwidth);
    if (*figure) return cmd_figure(record, resolution, fig_out);
    if (*compare) return cmd_compare(records, baseline, csv);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
