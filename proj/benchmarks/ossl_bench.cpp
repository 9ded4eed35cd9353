#include <benchmark/benchmark.h>

#include <random>

#include "ossl/gap.hpp"
#include "ossl/nn.hpp"
#include "ossl/scenario.hpp"
#include "ossl/style.hpp"
#include "ossl/synth.hpp"

namespace {

using namespace ossl;

Matrix random_matrix(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return m;
}

void BM_ForwardBackward(benchmark::State& state) {
  const int batch = static_cast<int>(state.range(0));
  const int in = static_cast<int>(state.range(1));
  Rng rng = make_rng(1, Stream::kInit);
  const Mlp model = Mlp::initialized(in, 100, 3, Activation::kRelu, rng);
  const Matrix x = random_matrix(batch, in, 2);
  const std::vector<int> labels(static_cast<std::size_t>(batch), 1);
  for (auto _ : state) {
    const ForwardPass pass = model.forward_batch(x);
    const LossGrad lg = cross_entropy_batch(pass.logits, labels, 0.8, batch);
    benchmark::DoNotOptimize(backward(model, pass, lg.logit_grad));
  }
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_ForwardBackward)->Args({256, 2})->Args({64, 192});

void BM_Mmd2(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  PointSet x(n, std::vector<double>(2)), y(n, std::vector<double>(2));
  for (auto& p : x)
    for (auto& v : p) v = g(rng);
  for (auto& p : y)
    for (auto& v : p) v = g(rng) + 0.3;
  for (auto _ : state) benchmark::DoNotOptimize(mmd2_with_bandwidth(x, y, 1.0));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Mmd2)->RangeMultiplier(4)->Range(64, 4096)->Complexity(benchmark::oNSquared);

void BM_MedianBandwidth(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  PointSet x(n, std::vector<double>(2));
  for (auto& p : x)
    for (auto& v : p) v = g(rng);
  for (auto _ : state) benchmark::DoNotOptimize(median_bandwidth(x, x));
}
BENCHMARK(BM_MedianBandwidth)->Arg(500)->Arg(5000);

void BM_Adain(benchmark::State& state) {
  const auto content = gen_toy_id_images(2, 1, 5).front();
  const auto style = gen_noise_images(NoiseKind::kUniform, 1, {}, 6).front();
  for (auto _ : state) benchmark::DoNotOptimize(interpolate_st(adain_transfer(content, style), content, 0.3));
}
BENCHMARK(BM_Adain);

// One epoch of each image strategy on the default toy-image scenario.
void BM_ImageEpoch(benchmark::State& state) {
  ScenarioSpec spec = default_scenario(Mode::kToyImage);
  spec.strategy = static_cast<Strategy>(state.range(0));
  spec.unlabeled_source = UnlabeledSource::kNoiseUniform;
  spec.config.epochs = 2;
  spec.config.warmup_epochs = 0;
  spec.config.split_epoch_interval = 1;
  const ImageTask task = make_image_task(spec, 0);
  for (auto _ : state) benchmark::DoNotOptimize(train_image(spec, task, 0));
  state.SetLabel(std::string(to_string(spec.strategy)));
}
BENCHMARK(BM_ImageEpoch)
    ->Arg(static_cast<int>(Strategy::kSupervised))
    ->Arg(static_cast<int>(Strategy::kDact))
    ->Arg(static_cast<int>(Strategy::kBgdact))
    ->Unit(benchmark::kMillisecond);

// Ten epochs of the 2D protocol.
void BM_PolarEpochs(benchmark::State& state) {
  ScenarioSpec spec = default_scenario(Mode::kPolar2d);
  spec.strategy = static_cast<Strategy>(state.range(0));
  spec.config.epochs = 10;
  const PolarTask task = make_polar_task(spec, 0);
  for (auto _ : state) benchmark::DoNotOptimize(train_polar(spec, task, 0));
  state.SetLabel(std::string(to_string(spec.strategy)));
}
BENCHMARK(BM_PolarEpochs)
    ->Arg(static_cast<int>(Strategy::kSupervised))
    ->Arg(static_cast<int>(Strategy::kDact))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
