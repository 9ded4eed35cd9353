#include "ossl/scenario.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "ossl/boundary.hpp"
#include "ossl/dataset_io.hpp"
#include "ossl/errors.hpp"
#include "ossl/style.hpp"

namespace ossl {
namespace {

template <typename E, std::size_t N>
E parse_enum(std::string_view s, const std::array<E, N>& values, const char* what) {
  for (E v : values) {
    if (to_string(v) == s) return v;
  }
  throw ConfigError(std::string("unknown ") + what + " '" + std::string(s) + "'");
}

constexpr std::array kModes{Mode::kPolar2d, Mode::kToyImage};
constexpr std::array kSources{UnlabeledSource::kId,           UnlabeledSource::kOodDistant,
                              UnlabeledSource::kOodClose,     UnlabeledSource::kOodPlusStyleTransfer,
                              UnlabeledSource::kNoiseGaussian, UnlabeledSource::kNoiseUniform,
                              UnlabeledSource::kMixed};
constexpr std::array kStrategies{Strategy::kSupervised, Strategy::kPl, Strategy::kDact, Strategy::kBgdact};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, std::string_view v) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
    throw ConfigError("key '" + key + "': expected a non-negative integer, got '" + std::string(v) + "'");
  }
  return out;
}

int parse_int(const std::string& key, const std::string& v) {
  const std::uint64_t u = parse_u64(key, v);
  if (u > static_cast<std::uint64_t>(std::numeric_limits<int>::max())) {
    throw ConfigError("key '" + key + "': value too large");
  }
  return static_cast<int>(u);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "': expected true/false, got '" + v + "'");
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t purpose) {
  Rng rng = make_rng(seed, Stream::kData, {purpose});
  return rng();
}

// Purposes for derive_seed.
enum : std::uint64_t {
  kLabeledSet = 1,
  kTestSet = 2,
  kUnlabeledSet = 3,
  kUnlabeledExtra = 4,
  kStyleSet = 5,
  kUnlabeledExtra2 = 6,
};

std::vector<PolarSample> drop_labels(std::vector<PolarSample> v) {
  for (auto& s : v) s.label.reset();
  return v;
}

}  // namespace

// -- Enum names -------------------------------------------------------------------

std::string_view to_string(Mode v) {
  switch (v) {
    case Mode::kPolar2d: return "polar2d";
    case Mode::kToyImage: return "toy_image";
  }
  return "unknown";
}

std::string_view to_string(UnlabeledSource v) {
  switch (v) {
    case UnlabeledSource::kId: return "id";
    case UnlabeledSource::kOodDistant: return "ood_distant";
    case UnlabeledSource::kOodClose: return "ood_close";
    case UnlabeledSource::kOodPlusStyleTransfer: return "ood_plus_styletransfer";
    case UnlabeledSource::kNoiseGaussian: return "noise_gaussian";
    case UnlabeledSource::kNoiseUniform: return "noise_uniform";
    case UnlabeledSource::kMixed: return "mixed";
  }
  return "unknown";
}

std::string_view to_string(Strategy v) {
  switch (v) {
    case Strategy::kSupervised: return "supervised";
    case Strategy::kPl: return "pl";
    case Strategy::kDact: return "dact";
    case Strategy::kBgdact: return "bgdact";
  }
  return "unknown";
}

Mode mode_from_string(std::string_view s) { return parse_enum(s, kModes, "mode"); }
UnlabeledSource source_from_string(std::string_view s) { return parse_enum(s, kSources, "unlabeled_source"); }
Strategy strategy_from_string(std::string_view s) { return parse_enum(s, kStrategies, "strategy"); }

bool ScenarioSpec::operator==(const ScenarioSpec& o) const {
  return name == o.name && mode == o.mode && unlabeled_source == o.unlabeled_source && strategy == o.strategy &&
         config == o.config && data == o.data && dact_options.bank_targets == o.dact_options.bank_targets &&
         dact_options.labeled_partner_consistency == o.dact_options.labeled_partner_consistency &&
         replicate_seeds == o.replicate_seeds;
}

// -- Defaults and validation -----------------------------------------------------------

ScenarioSpec default_scenario(Mode mode) {
  ScenarioSpec spec;
  spec.mode = mode;
  if (mode == Mode::kToyImage) {
    TrainConfig& c = spec.config;
    c.epochs = 100;
    c.labeled_batch = 16;
    c.unlabeled_batch = 64;
    c.hidden_dim = 64;
    c.learning_rate = 0.03;
    c.warmup_epochs = 8;
    c.split_epoch_interval = c.epochs / 2;
  }
  return spec;
}

void validate(const ScenarioSpec& spec) {
  validate(spec.config);
  const bool polar = spec.mode == Mode::kPolar2d;
  const auto src = spec.unlabeled_source;
  if (spec.strategy == Strategy::kBgdact && polar) {
    throw ConfigError("strategy bgdact requires mode toy_image");
  }
  if (!polar && (src == UnlabeledSource::kOodDistant || src == UnlabeledSource::kOodClose ||
                 src == UnlabeledSource::kOodPlusStyleTransfer)) {
    throw ConfigError("unlabeled_source " + std::string(to_string(src)) + " requires mode polar2d");
  }
  if (polar && (src == UnlabeledSource::kNoiseGaussian || src == UnlabeledSource::kNoiseUniform)) {
    throw ConfigError("unlabeled_source " + std::string(to_string(src)) + " requires mode toy_image");
  }
  if (spec.replicate_seeds.empty()) {
    throw ConfigError("scenario needs at least one replicate seed");
  }
  const DataSpec& d = spec.data;
  if (polar) {
    if (d.n_labeled < 2 || d.n_test < 2) throw ConfigError("n_labeled and n_test must be >= 2");
    if (d.boundary_resolution < 1) throw ConfigError("boundary_resolution must be >= 1");
    if (src == UnlabeledSource::kOodPlusStyleTransfer && d.n_unlabeled == 0) {
      throw ConfigError("ood_plus_styletransfer needs n_unlabeled >= 1");
    }
  } else {
    if (d.k_classes < 2) throw ConfigError("k_classes must be >= 2");
    if (d.image_labeled_per_class < 1 || d.image_test_per_class < 1) {
      throw ConfigError("image_labeled_per_class and image_test_per_class must be >= 1");
    }
  }
}

// -- Text format ----------------------------------------------------------------------

ScenarioSpec parse_scenario(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    if (!kv.emplace(key, value).second) {
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
  }

  const Mode mode = kv.count("mode") ? mode_from_string(kv.at("mode")) : Mode::kPolar2d;
  ScenarioSpec spec = default_scenario(mode);
  TrainConfig& c = spec.config;
  DataSpec& d = spec.data;

  using Setter = std::function<void(const std::string&, const std::string&)>;
  auto as_int = [](int& f) -> Setter { return [&f](const std::string& k, const std::string& v) { f = parse_int(k, v); }; };
  auto as_size = [](std::size_t& f) -> Setter {
    return [&f](const std::string& k, const std::string& v) { f = static_cast<std::size_t>(parse_u64(k, v)); };
  };
  auto as_double = [](double& f) -> Setter {
    return [&f](const std::string& k, const std::string& v) { f = parse_double(k, v); };
  };
  auto as_bool = [](bool& f) -> Setter { return [&f](const std::string& k, const std::string& v) { f = parse_bool(k, v); }; };

  const std::map<std::string, Setter> setters = {
      {"mode", [](const std::string&, const std::string&) {}},
      {"name", [&](const std::string&, const std::string& v) { spec.name = v; }},
      {"unlabeled_source", [&](const std::string&, const std::string& v) { spec.unlabeled_source = source_from_string(v); }},
      {"strategy", [&](const std::string&, const std::string& v) { spec.strategy = strategy_from_string(v); }},
      {"seeds", [&](const std::string&, const std::string& v) { spec.replicate_seeds = parse_seed_list(v); }},
      {"epochs", as_int(c.epochs)},
      {"labeled_batch", as_int(c.labeled_batch)},
      {"unlabeled_batch", as_int(c.unlabeled_batch)},
      {"hidden_dim", as_int(c.hidden_dim)},
      {"activation",
       [&](const std::string& k, const std::string& v) {
         if (v == "relu") c.activation = Activation::kRelu;
         else if (v == "tanh") c.activation = Activation::kTanh;
         else throw ConfigError("key '" + k + "': expected relu or tanh");
       }},
      {"learning_rate", as_double(c.learning_rate)},
      {"warmup_epochs", as_int(c.warmup_epochs)},
      {"sgd_momentum", as_double(c.sgd_momentum)},
      {"nesterov", as_bool(c.nesterov)},
      {"lambda", as_double(c.lambda)},
      {"lambda_u", as_double(c.lambda_u)},
      {"pl_threshold", as_double(c.pl_threshold)},
      {"softmax_temperature", as_double(c.softmax_temperature)},
      {"ema_alpha", as_double(c.ema_alpha)},
      {"beta_min", as_double(c.beta_range.lo)},
      {"beta_max", as_double(c.beta_range.hi)},
      {"omega_min", as_double(c.omega_range.lo)},
      {"omega_max", as_double(c.omega_range.hi)},
      {"split_epoch_interval", as_int(c.split_epoch_interval)},
      {"aug_theta_max", as_double(c.aug_theta_max)},
      {"aug_count", as_int(c.aug_count)},
      {"n_labeled", as_size(d.n_labeled)},
      {"n_unlabeled", as_size(d.n_unlabeled)},
      {"n_test", as_size(d.n_test)},
      {"n_style_transferred", as_size(d.n_style_transferred)},
      {"k_classes", as_int(d.k_classes)},
      {"image_labeled_per_class", as_size(d.image_labeled_per_class)},
      {"image_unlabeled_id_per_class", as_size(d.image_unlabeled_id_per_class)},
      {"image_ood", as_size(d.image_ood)},
      {"image_test_per_class", as_size(d.image_test_per_class)},
      {"boundary_resolution", as_int(d.boundary_resolution)},
      {"dact_bank_targets", as_bool(spec.dact_options.bank_targets)},
      {"dact_labeled_consistency", as_bool(spec.dact_options.labeled_partner_consistency)},
  };

  const bool epochs_given = kv.count("epochs") != 0;
  for (const auto& [key, value] : kv) {
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw ConfigError("unknown scenario key '" + key + "'");
    }
    it->second(key, value);
  }
  if (epochs_given && !kv.count("split_epoch_interval")) {
    c.split_epoch_interval = c.epochs / 2;
  }
  if (spec.name.empty()) {
    spec.name = std::string(to_string(spec.strategy)) + "_" + std::string(to_string(spec.unlabeled_source));
  }
  validate(spec);
  return spec;
}

ScenarioSpec load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open scenario file " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string format_scenario(const ScenarioSpec& s) {
  const TrainConfig& c = s.config;
  const DataSpec& d = s.data;
  std::ostringstream os;
  auto line = [&os](const char* k, const std::string& v) { os << k << " = " << v << '\n'; };
  auto b = [](bool v) { return std::string(v ? "true" : "false"); };
  line("name", s.name);
  line("mode", std::string(to_string(s.mode)));
  line("unlabeled_source", std::string(to_string(s.unlabeled_source)));
  line("strategy", std::string(to_string(s.strategy)));
  std::string seeds;
  for (std::size_t i = 0; i < s.replicate_seeds.size(); ++i) {
    seeds += (i ? "," : "") + std::to_string(s.replicate_seeds[i]);
  }
  line("seeds", seeds);
  line("epochs", std::to_string(c.epochs));
  line("labeled_batch", std::to_string(c.labeled_batch));
  line("unlabeled_batch", std::to_string(c.unlabeled_batch));
  line("hidden_dim", std::to_string(c.hidden_dim));
  line("activation", c.activation == Activation::kRelu ? "relu" : "tanh");
  line("learning_rate", fmt(c.learning_rate));
  line("warmup_epochs", std::to_string(c.warmup_epochs));
  line("sgd_momentum", fmt(c.sgd_momentum));
  line("nesterov", b(c.nesterov));
  line("lambda", fmt(c.lambda));
  line("lambda_u", fmt(c.lambda_u));
  line("pl_threshold", fmt(c.pl_threshold));
  line("softmax_temperature", fmt(c.softmax_temperature));
  line("ema_alpha", fmt(c.ema_alpha));
  line("beta_min", fmt(c.beta_range.lo));
  line("beta_max", fmt(c.beta_range.hi));
  line("omega_min", fmt(c.omega_range.lo));
  line("omega_max", fmt(c.omega_range.hi));
  line("split_epoch_interval", std::to_string(c.split_epoch_interval));
  line("aug_theta_max", fmt(c.aug_theta_max));
  line("aug_count", std::to_string(c.aug_count));
  line("n_labeled", std::to_string(d.n_labeled));
  line("n_unlabeled", std::to_string(d.n_unlabeled));
  line("n_test", std::to_string(d.n_test));
  line("n_style_transferred", std::to_string(d.n_style_transferred));
  line("k_classes", std::to_string(d.k_classes));
  line("image_labeled_per_class", std::to_string(d.image_labeled_per_class));
  line("image_unlabeled_id_per_class", std::to_string(d.image_unlabeled_id_per_class));
  line("image_ood", std::to_string(d.image_ood));
  line("image_test_per_class", std::to_string(d.image_test_per_class));
  line("boundary_resolution", std::to_string(d.boundary_resolution));
  line("dact_bank_targets", b(s.dact_options.bank_targets));
  line("dact_labeled_consistency", b(s.dact_options.labeled_partner_consistency));
  return os.str();
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string item = trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (item.empty()) throw ConfigError("empty entry in seed list '" + std::string(text) + "'");
    seeds.push_back(parse_u64("seeds", item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return seeds;
}

// -- Tasks ------------------------------------------------------------------------------

std::vector<PolarSample> make_style_mixed(std::span<const PolarSample> id_pool, std::span<const PolarSample> ood_pool,
                                          std::size_t n, Interval omega_range, std::uint64_t seed) {
  if (n > 0 && (id_pool.empty() || ood_pool.empty())) {
    throw ParameterError("make_style_mixed: needs nonempty ID and OOD pools");
  }
  Rng pairs = make_rng(seed, Stream::kStylePairs);
  Rng omegas = make_rng(seed, Stream::kOmega);
  std::uniform_int_distribution<std::size_t> pick_id(0, id_pool.empty() ? 0 : id_pool.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_ood(0, ood_pool.empty() ? 0 : ood_pool.size() - 1);
  std::vector<PolarSample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const PolarSample& a = id_pool[pick_id(pairs)];
    const PolarSample& b = ood_pool[pick_ood(pairs)];
    out.push_back(style_mix_2d(a, b, uniform(omegas, omega_range.lo, omega_range.hi)));
  }
  return out;
}

PolarTask make_polar_task(const ScenarioSpec& spec, std::uint64_t seed) {
  const DataSpec& d = spec.data;
  PolarTask task;
  task.labeled = sample_id_pair(d.n_labeled / 2, derive_seed(seed, kLabeledSet), Origin::kLabeledId);
  task.test = sample_id_pair(d.n_test / 2, derive_seed(seed, kTestSet), Origin::kLabeledId);
  const std::uint64_t useed = derive_seed(seed, kUnlabeledSet);
  const std::size_t n = d.n_unlabeled;
  auto distant = [&](std::size_t count) {
    return sample_region(RegionSpec::ood_distant(), count, useed, std::nullopt, Origin::kOodDistant);
  };
  switch (spec.unlabeled_source) {
    case UnlabeledSource::kId:
      task.unlabeled = drop_labels(sample_id_pair(n / 2, useed, Origin::kUnlabeledId));
      break;
    case UnlabeledSource::kOodDistant:
      task.unlabeled = distant(n);
      break;
    case UnlabeledSource::kOodClose:
      task.unlabeled = sample_region(RegionSpec::ood_close(), n, useed, std::nullopt, Origin::kOodClose);
      break;
    case UnlabeledSource::kOodPlusStyleTransfer: {
      task.unlabeled = distant(n);
      auto st = make_style_mixed(task.labeled, task.unlabeled, d.n_style_transferred, spec.config.omega_range,
                                 derive_seed(seed, kStyleSet));
      task.unlabeled.insert(task.unlabeled.end(), st.begin(), st.end());
      break;
    }
    case UnlabeledSource::kMixed: {
      const std::size_t third = n / 3;
      task.unlabeled = drop_labels(sample_id_pair((n - 2 * third) / 2, useed, Origin::kUnlabeledId));
      auto far = distant(third);
      auto near = sample_region(RegionSpec::ood_close(), third, derive_seed(seed, kUnlabeledExtra), std::nullopt,
                                Origin::kOodClose);
      task.unlabeled.insert(task.unlabeled.end(), far.begin(), far.end());
      task.unlabeled.insert(task.unlabeled.end(), near.begin(), near.end());
      break;
    }
    default:
      throw ConfigError("unlabeled_source " + std::string(to_string(spec.unlabeled_source)) +
                        " is not available in polar2d mode");
  }
  return task;
}

ImageTask make_image_task(const ScenarioSpec& spec, std::uint64_t seed) {
  const DataSpec& d = spec.data;
  const ImageDims dims{};
  ImageTask task;
  task.k_classes = d.k_classes;
  task.labeled = gen_toy_id_images(d.k_classes, d.image_labeled_per_class, derive_seed(seed, kLabeledSet), dims);
  task.test = gen_toy_id_images(d.k_classes, d.image_test_per_class, derive_seed(seed, kTestSet), dims);
  task.unlabeled = gen_toy_id_images(d.k_classes, d.image_unlabeled_id_per_class, derive_seed(seed, kUnlabeledSet), dims);
  for (auto& im : task.unlabeled) im.label.reset();
  auto append = [&](NoiseKind kind, std::size_t count, std::uint64_t purpose) {
    auto noise = gen_noise_images(kind, count, dims, derive_seed(seed, purpose));
    task.unlabeled.insert(task.unlabeled.end(), std::make_move_iterator(noise.begin()),
                          std::make_move_iterator(noise.end()));
  };
  switch (spec.unlabeled_source) {
    case UnlabeledSource::kId:
      break;
    case UnlabeledSource::kNoiseGaussian:
      append(NoiseKind::kGaussian, d.image_ood, kUnlabeledExtra);
      break;
    case UnlabeledSource::kNoiseUniform:
      append(NoiseKind::kUniform, d.image_ood, kUnlabeledExtra);
      break;
    case UnlabeledSource::kMixed:
      append(NoiseKind::kGaussian, d.image_ood / 2, kUnlabeledExtra);
      append(NoiseKind::kUniform, d.image_ood - d.image_ood / 2, kUnlabeledExtra2);
      break;
    default:
      throw ConfigError("unlabeled_source " + std::string(to_string(spec.unlabeled_source)) +
                        " is not available in toy_image mode");
  }
  return task;
}

Mlp initial_model(const ScenarioSpec& spec, std::uint64_t seed) {
  Rng rng = make_rng(seed, Stream::kInit);
  const TrainConfig& c = spec.config;
  if (spec.mode == Mode::kPolar2d) {
    return Mlp::initialized(2, c.hidden_dim, 1, c.activation, rng);
  }
  const ImageDims dims{};
  return Mlp::initialized(static_cast<int>(dims.size()), c.hidden_dim, spec.data.k_classes + 1, c.activation, rng);
}

TrainResult train_polar(const ScenarioSpec& spec, const PolarTask& task, std::uint64_t seed) {
  TrainConfig cfg = spec.config;
  cfg.seed = seed;
  Mlp model = initial_model(spec, seed);
  switch (spec.strategy) {
    case Strategy::kSupervised: return train_supervised(std::move(model), task, cfg);
    case Strategy::kPl: return train_pl(std::move(model), task, cfg);
    case Strategy::kDact: return train_dact(std::move(model), task, cfg);
    case Strategy::kBgdact: break;
  }
  throw ConfigError("strategy bgdact requires mode toy_image");
}

TrainResult train_image(const ScenarioSpec& spec, const ImageTask& task, std::uint64_t seed) {
  TrainConfig cfg = spec.config;
  cfg.seed = seed;
  Mlp model = initial_model(spec, seed);
  switch (spec.strategy) {
    case Strategy::kSupervised: return train_supervised(std::move(model), task, cfg);
    case Strategy::kPl: return train_pl(std::move(model), task, cfg);
    case Strategy::kDact: return train_dact(std::move(model), task, cfg, spec.dact_options);
    case Strategy::kBgdact: return train_bgdact(std::move(model), task, cfg);
  }
  throw ConfigError("unknown strategy");
}

GapReport polar_gap(const Mlp& model, const PolarTask& task, const KernelSpec& kernel) {
  std::vector<int> labels;
  labels.reserve(task.labeled.size());
  for (const auto& s : task.labeled) labels.push_back(static_cast<int>(*s.label));
  GapReport r = mmd_gap(polar_probabilities(model, task.labeled), labels, polar_probabilities(model, task.unlabeled), 2,
                        kernel);
  r.probability_space = "logistic_of_hinge_score";
  return r;
}

GapReport image_gap(const Mlp& model, const ImageTask& task, double temperature, const KernelSpec& kernel) {
  std::vector<int> labels;
  labels.reserve(task.labeled.size());
  for (const auto& im : task.labeled) labels.push_back(*im.label);
  GapReport r = mmd_gap(image_id_probabilities(model, task.labeled, task.k_classes, temperature), labels,
                        image_id_probabilities(model, task.unlabeled, task.k_classes, temperature), task.k_classes,
                        kernel);
  r.probability_space = "first_k_renormalized";
  return r;
}

// -- Runs ---------------------------------------------------------------------------------

ModelSnapshot ModelSnapshot::of(const Mlp& model) {
  return ModelSnapshot{model.input_dim(), model.hidden_dim(), model.output_dim(), model.activation(),
                       model.parameters()};
}

Mlp ModelSnapshot::restore() const {
  Mlp m(input_dim, hidden_dim, output_dim, activation);
  m.set_parameters(parameters);
  return m;
}

std::vector<double> RunRecord::final_accuracies() const {
  std::vector<double> out;
  for (const auto& r : runs) {
    if (r.final_accuracy) out.push_back(*r.final_accuracy);
  }
  return out;
}

namespace {

SeedRun run_polar_seed(const ScenarioSpec& spec, std::uint64_t seed, const RunOptions& options) {
  SeedRun run;
  run.seed = seed;
  const PolarTask task = make_polar_task(spec, seed);
  TrainResult result = train_polar(spec, task, seed);
  run.metrics = std::move(result.metrics);
  run.final_accuracy = polar_accuracy(result.model, task.test);
  if (options.compute_gaps && !task.unlabeled.empty()) {
    run.gap_final = polar_gap(result.model, task);
    if (spec.strategy == Strategy::kSupervised) {
      run.gap_supervised_reference = run.gap_final;
    } else {
      TrainConfig cfg = spec.config;
      cfg.seed = seed;
      const TrainResult ref = train_supervised(initial_model(spec, seed), task, cfg);
      run.gap_supervised_reference = polar_gap(ref.model, task);
    }
  }
  run.model = ModelSnapshot::of(result.model);
  return run;
}

SeedRun run_image_seed(const ScenarioSpec& spec, std::uint64_t seed, const RunOptions& options) {
  SeedRun run;
  run.seed = seed;
  const ImageTask task = make_image_task(spec, seed);
  TrainResult result = train_image(spec, task, seed);
  run.metrics = std::move(result.metrics);
  run.final_accuracy = image_accuracy(result.model, task.test, task.k_classes);
  const double temp = spec.config.softmax_temperature;
  if (options.compute_gaps && !task.unlabeled.empty()) {
    run.gap_final = image_gap(result.model, task, temp);
    if (spec.strategy == Strategy::kSupervised) {
      run.gap_supervised_reference = run.gap_final;
    } else {
      TrainConfig cfg = spec.config;
      cfg.seed = seed;
      const TrainResult ref = train_supervised(initial_model(spec, seed), task, cfg);
      run.gap_supervised_reference = image_gap(ref.model, task, temp);
    }
  }
  run.model = ModelSnapshot::of(result.model);
  return run;
}

}  // namespace

RunRecord run_scenario(const ScenarioSpec& spec, const RunOptions& options) {
  validate(spec);
  RunRecord record;
  record.scenario = spec;
  for (std::uint64_t seed : spec.replicate_seeds) {
    SeedRun run;
    try {
      run = spec.mode == Mode::kPolar2d ? run_polar_seed(spec, seed, options) : run_image_seed(spec, seed, options);
    } catch (const NumericalError& e) {
      run = SeedRun{};
      run.seed = seed;
      run.status = "aborted";
      run.diagnostic = e.what();
    }
    record.runs.push_back(std::move(run));
  }

  if (options.out_dir) {
    const auto& dir = *options.out_dir;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    for (const auto& run : record.runs) {
      const std::string tag = "seed" + std::to_string(run.seed);
      const auto metrics_path = dir / ("metrics_" + tag + ".csv");
      write_metrics_csv(metrics_path, run.metrics);
      record.artifact_paths.push_back(metrics_path.string());
      if (spec.mode == Mode::kPolar2d && run.model && options.write_figures) {
        const PolarTask task = make_polar_task(spec, run.seed);
        std::vector<PolarSample> overlay = task.labeled;
        overlay.insert(overlay.end(), task.unlabeled.begin(), task.unlabeled.end());
        const auto fig = dir / ("boundary_" + tag + ".svg");
        FigureOptions fo;
        fo.title = spec.name + " (seed " + std::to_string(run.seed) + ")";
        emit_figure(eval_boundary(run.model->restore(), spec.data.boundary_resolution), overlay, fig, fo);
        record.artifact_paths.push_back(fig.string());
      }
      if (options.export_datasets && spec.mode == Mode::kPolar2d) {
        const PolarTask task = make_polar_task(spec, run.seed);
        write_polar_csv(dir / ("labeled_" + tag + ".csv"), task.labeled);
        write_polar_csv(dir / ("unlabeled_" + tag + ".csv"), task.unlabeled);
        record.artifact_paths.push_back((dir / ("labeled_" + tag + ".csv")).string());
        record.artifact_paths.push_back((dir / ("unlabeled_" + tag + ".csv")).string());
      } else if (options.export_datasets) {
        const ImageTask task = make_image_task(spec, run.seed);
        write_image_csv(dir / ("labeled_" + tag + ".csv"), task.labeled);
        write_image_csv(dir / ("unlabeled_" + tag + ".csv"), task.unlabeled);
        record.artifact_paths.push_back((dir / ("labeled_" + tag + ".csv")).string());
        record.artifact_paths.push_back((dir / ("unlabeled_" + tag + ".csv")).string());
      }
    }
    const auto record_path = dir / "run_record.json";
    record.artifact_paths.push_back(record_path.string());
    save_record(record, record_path);
  }
  return record;
}

}  // namespace ossl
