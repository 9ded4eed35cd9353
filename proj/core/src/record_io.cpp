#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ossl/errors.hpp"
#include "ossl/scenario.hpp"

namespace ossl {
namespace {

using nlohmann::json;

json config_json(const TrainConfig& c) {
  return json{{"epochs", c.epochs},
              {"labeled_batch", c.labeled_batch},
              {"unlabeled_batch", c.unlabeled_batch},
              {"hidden_dim", c.hidden_dim},
              {"activation", c.activation == Activation::kRelu ? "relu" : "tanh"},
              {"learning_rate", c.learning_rate},
              {"warmup_epochs", c.warmup_epochs},
              {"sgd_momentum", c.sgd_momentum},
              {"nesterov", c.nesterov},
              {"lambda", c.lambda},
              {"lambda_u", c.lambda_u},
              {"pl_threshold", c.pl_threshold},
              {"softmax_temperature", c.softmax_temperature},
              {"ema_alpha", c.ema_alpha},
              {"beta_range", {c.beta_range.lo, c.beta_range.hi}},
              {"omega_range", {c.omega_range.lo, c.omega_range.hi}},
              {"split_epoch_interval", c.split_epoch_interval},
              {"aug_theta_max", c.aug_theta_max},
              {"aug_count", c.aug_count},
              {"seed", c.seed}};
}

TrainConfig config_from(const json& j) {
  TrainConfig c;
  j.at("epochs").get_to(c.epochs);
  j.at("labeled_batch").get_to(c.labeled_batch);
  j.at("unlabeled_batch").get_to(c.unlabeled_batch);
  j.at("hidden_dim").get_to(c.hidden_dim);
  c.activation = j.at("activation").get<std::string>() == "tanh" ? Activation::kTanh : Activation::kRelu;
  j.at("learning_rate").get_to(c.learning_rate);
  j.at("warmup_epochs").get_to(c.warmup_epochs);
  j.at("sgd_momentum").get_to(c.sgd_momentum);
  j.at("nesterov").get_to(c.nesterov);
  j.at("lambda").get_to(c.lambda);
  j.at("lambda_u").get_to(c.lambda_u);
  j.at("pl_threshold").get_to(c.pl_threshold);
  j.at("softmax_temperature").get_to(c.softmax_temperature);
  j.at("ema_alpha").get_to(c.ema_alpha);
  c.beta_range = {j.at("beta_range").at(0).get<double>(), j.at("beta_range").at(1).get<double>()};
  c.omega_range = {j.at("omega_range").at(0).get<double>(), j.at("omega_range").at(1).get<double>()};
  j.at("split_epoch_interval").get_to(c.split_epoch_interval);
  j.at("aug_theta_max").get_to(c.aug_theta_max);
  j.at("aug_count").get_to(c.aug_count);
  j.at("seed").get_to(c.seed);
  return c;
}

json data_json(const DataSpec& d) {
  return json{{"n_labeled", d.n_labeled},
              {"n_unlabeled", d.n_unlabeled},
              {"n_test", d.n_test},
              {"n_style_transferred", d.n_style_transferred},
              {"k_classes", d.k_classes},
              {"image_labeled_per_class", d.image_labeled_per_class},
              {"image_unlabeled_id_per_class", d.image_unlabeled_id_per_class},
              {"image_ood", d.image_ood},
              {"image_test_per_class", d.image_test_per_class},
              {"boundary_resolution", d.boundary_resolution}};
}

DataSpec data_from(const json& j) {
  DataSpec d;
  j.at("n_labeled").get_to(d.n_labeled);
  j.at("n_unlabeled").get_to(d.n_unlabeled);
  j.at("n_test").get_to(d.n_test);
  j.at("n_style_transferred").get_to(d.n_style_transferred);
  j.at("k_classes").get_to(d.k_classes);
  j.at("image_labeled_per_class").get_to(d.image_labeled_per_class);
  j.at("image_unlabeled_id_per_class").get_to(d.image_unlabeled_id_per_class);
  j.at("image_ood").get_to(d.image_ood);
  j.at("image_test_per_class").get_to(d.image_test_per_class);
  j.at("boundary_resolution").get_to(d.boundary_resolution);
  return d;
}

json scenario_json(const ScenarioSpec& s) {
  return json{{"name", s.name},
              {"mode", to_string(s.mode)},
              {"unlabeled_source", to_string(s.unlabeled_source)},
              {"strategy", to_string(s.strategy)},
              {"config", config_json(s.config)},
              {"data", data_json(s.data)},
              {"dact_bank_targets", s.dact_options.bank_targets},
              {"dact_labeled_consistency", s.dact_options.labeled_partner_consistency},
              {"replicate_seeds", s.replicate_seeds}};
}

ScenarioSpec scenario_from(const json& j) {
  ScenarioSpec s;
  j.at("name").get_to(s.name);
  s.mode = mode_from_string(j.at("mode").get<std::string>());
  s.unlabeled_source = source_from_string(j.at("unlabeled_source").get<std::string>());
  s.strategy = strategy_from_string(j.at("strategy").get<std::string>());
  s.config = config_from(j.at("config"));
  s.data = data_from(j.at("data"));
  j.at("dact_bank_targets").get_to(s.dact_options.bank_targets);
  j.at("dact_labeled_consistency").get_to(s.dact_options.labeled_partner_consistency);
  j.at("replicate_seeds").get_to(s.replicate_seeds);
  return s;
}

json gap_json(const GapReport& r) {
  return json{{"marginal_mmd2", r.marginal_mmd2},
              {"classwise_mmd2", r.classwise_mmd2},
              {"skipped_classes", r.skipped_classes},
              {"mmd_gap", r.mmd_gap},
              {"bandwidth_used", r.bandwidth_used},
              {"kernel", r.kernel},
              {"bandwidth_mode", r.bandwidth_mode},
              {"estimator", r.estimator},
              {"probability_space", r.probability_space}};
}

GapReport gap_from(const json& j) {
  GapReport r;
  j.at("marginal_mmd2").get_to(r.marginal_mmd2);
  j.at("classwise_mmd2").get_to(r.classwise_mmd2);
  j.at("skipped_classes").get_to(r.skipped_classes);
  j.at("mmd_gap").get_to(r.mmd_gap);
  j.at("bandwidth_used").get_to(r.bandwidth_used);
  j.at("kernel").get_to(r.kernel);
  j.at("bandwidth_mode").get_to(r.bandwidth_mode);
  j.at("estimator").get_to(r.estimator);
  j.at("probability_space").get_to(r.probability_space);
  return r;
}

json metrics_json(const EpochMetrics& m) {
  json j{{"epoch", m.epoch},
         {"sup_loss", m.sup_loss},
         {"unsup_loss", m.unsup_loss},
         {"st_loss", m.st_loss},
         {"total_loss", m.total_loss},
         {"id_test_accuracy", m.id_test_accuracy},
         {"ood_split_size", m.ood_split_size}};
  j["mmd_gap_snapshot"] = m.mmd_gap_snapshot ? json(*m.mmd_gap_snapshot) : json(nullptr);
  return j;
}

EpochMetrics metrics_from(const json& j) {
  EpochMetrics m;
  j.at("epoch").get_to(m.epoch);
  j.at("sup_loss").get_to(m.sup_loss);
  j.at("unsup_loss").get_to(m.unsup_loss);
  j.at("st_loss").get_to(m.st_loss);
  j.at("total_loss").get_to(m.total_loss);
  j.at("id_test_accuracy").get_to(m.id_test_accuracy);
  j.at("ood_split_size").get_to(m.ood_split_size);
  if (!j.at("mmd_gap_snapshot").is_null()) m.mmd_gap_snapshot = j.at("mmd_gap_snapshot").get<double>();
  return m;
}

template <typename T, typename F>
json optional_json(const std::optional<T>& v, F&& f) {
  return v ? f(*v) : json(nullptr);
}

json run_json(const SeedRun& r) {
  json metrics = json::array();
  for (const auto& m : r.metrics) metrics.push_back(metrics_json(m));
  json j{{"seed", r.seed}, {"status", r.status}, {"diagnostic", r.diagnostic}, {"metrics", std::move(metrics)}};
  j["final_accuracy"] = r.final_accuracy ? json(*r.final_accuracy) : json(nullptr);
  j["gap_supervised_reference"] = optional_json(r.gap_supervised_reference, gap_json);
  j["gap_final"] = optional_json(r.gap_final, gap_json);
  j["model"] = optional_json(r.model, [](const ModelSnapshot& m) {
    return json{{"input_dim", m.input_dim},
                {"hidden_dim", m.hidden_dim},
                {"output_dim", m.output_dim},
                {"activation", m.activation == Activation::kRelu ? "relu" : "tanh"},
                {"parameters", m.parameters}};
  });
  return j;
}

SeedRun run_from(const json& j) {
  SeedRun r;
  j.at("seed").get_to(r.seed);
  j.at("status").get_to(r.status);
  j.at("diagnostic").get_to(r.diagnostic);
  for (const auto& m : j.at("metrics")) r.metrics.push_back(metrics_from(m));
  if (!j.at("final_accuracy").is_null()) r.final_accuracy = j.at("final_accuracy").get<double>();
  if (!j.at("gap_supervised_reference").is_null()) r.gap_supervised_reference = gap_from(j.at("gap_supervised_reference"));
  if (!j.at("gap_final").is_null()) r.gap_final = gap_from(j.at("gap_final"));
  if (const auto& m = j.at("model"); !m.is_null()) {
    ModelSnapshot s;
    m.at("input_dim").get_to(s.input_dim);
    m.at("hidden_dim").get_to(s.hidden_dim);
    m.at("output_dim").get_to(s.output_dim);
    s.activation = m.at("activation").get<std::string>() == "tanh" ? Activation::kTanh : Activation::kRelu;
    m.at("parameters").get_to(s.parameters);
    r.model = std::move(s);
  }
  return r;
}

}  // namespace

std::string record_to_json(const RunRecord& record) {
  json runs = json::array();
  for (const auto& r : record.runs) runs.push_back(run_json(r));
  const json j{{"format_version", 1},
               {"scenario", scenario_json(record.scenario)},
               {"runs", std::move(runs)},
               {"artifact_paths", record.artifact_paths}};
  return j.dump(1);
}

RunRecord record_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    RunRecord record;
    record.scenario = scenario_from(j.at("scenario"));
    for (const auto& r : j.at("runs")) record.runs.push_back(run_from(r));
    j.at("artifact_paths").get_to(record.artifact_paths);
    return record;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed run record: ") + e.what());
  }
}

void save_record(const RunRecord& record, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << record_to_json(record) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

RunRecord load_record(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return record_from_json(ss.str());
}

std::string gap_report_to_json(const GapReport& report) { return gap_json(report).dump(2); }

void write_metrics_csv(const std::filesystem::path& path, std::span<const EpochMetrics> metrics) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out.precision(17);
  out << "epoch,sup,unsup,st,total,acc,ood_split,mmd_gap\n";
  for (const auto& m : metrics) {
    out << m.epoch << ',' << m.sup_loss << ',' << m.unsup_loss << ',' << m.st_loss << ',' << m.total_loss << ','
        << m.id_test_accuracy << ',' << m.ood_split_size << ',';
    if (m.mmd_gap_snapshot) out << *m.mmd_gap_snapshot;
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<EpochMetrics> read_metrics_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::vector<EpochMetrics> out;
  std::string line;
  std::getline(in, line);
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    if (cells.size() != 8) throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected 8 columns");
    try {
      EpochMetrics m;
      m.epoch = std::stoi(cells[0]);
      m.sup_loss = std::stod(cells[1]);
      m.unsup_loss = std::stod(cells[2]);
      m.st_loss = std::stod(cells[3]);
      m.total_loss = std::stod(cells[4]);
      m.id_test_accuracy = std::stod(cells[5]);
      m.ood_split_size = std::stoull(cells[6]);
      if (!cells[7].empty()) m.mmd_gap_snapshot = std::stod(cells[7]);
      out.push_back(m);
    } catch (const std::exception&) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": malformed metrics row");
    }
  }
  return out;
}

}  // namespace ossl
