///////////////////////////////////////////////////////////////////////
// File:        trainer.cpp
// Description: Training loop, checkpoints and output-layer reconciliation.
//
// (C) Copyright 2026, The ocrtl Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
///////////////////////////////////////////////////////////////////////

#include "trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "ctc.hpp"
#include "dataset.hpp"
#include "error.hpp"
#include "modelstore.hpp"
#include "seeds.hpp"

namespace ocrtl {

namespace fs = std::filesystem;

void TrainingConfig::validate() const {
  if (iterations == 0) throw invalid_argument("iterations must be positive");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw invalid_argument("learning rate must be positive");
  }
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw invalid_argument("momentum must lie in [0, 1)");
  }
  if (checkpoint_every == 0 || checkpoint_every > iterations) {
    throw invalid_argument("checkpoint_every must lie in [1, iterations]");
  }
  if (!(grad_clip > 0.0)) throw invalid_argument("grad_clip must be positive");
  if (output_dir.empty()) throw invalid_argument("output directory not set");
}

Network reconcile_codec(const Network& pretrained,
                        std::span<const std::u32string> gt_texts,
                        const CharSet& whitelist, std::uint64_t seed,
                        bool force_whitelist) {
  CharSet gt = chars_of(gt_texts);
  gt.erase(kBlank);
  CharSet additions = gt;
  if (force_whitelist) additions.insert(whitelist.begin(), whitelist.end());

  Network net = pretrained;
  net.codec = net.codec.with_immune(whitelist);
  net = resize_output(net, extend(net.codec, additions).second, seed);
  net = resize_output(net, reduce(net.codec, additions).second, seed);
  return net;
}

void validate_samples(const Network& net, std::span<const Sample> samples) {
  for (const auto& s : samples) {
    try {
      const auto labels = net.codec.encode(s.text);
      const std::size_t need = ctc_min_steps(labels);
      if (static_cast<std::size_t>(s.image.width()) < need) {
        throw Error(ErrorKind::kInfeasibleTarget,
                    "text needs " + std::to_string(need) +
                        " time steps but the line is " +
                        std::to_string(s.image.width()) + " columns wide");
      }
      if (s.image.height() != net.input_height) {
        throw invalid_argument("line height " + std::to_string(s.image.height()) +
                               " does not match network input height " +
                               std::to_string(net.input_height));
      }
    } catch (const Error& e) {
      throw Error(e.kind(), "sample " + s.id + ": " + e.what());
    }
  }
}

LossGrad loss_and_gradient(const Network& net, const Sample& sample) {
  const auto labels = net.codec.encode(sample.text);
  const ForwardTape tape = forward_with_tape(net, sample.image);
  const CtcResult ctc = ctc_loss_grad(tape.trace.posteriors, labels);
  return {ctc.loss, backward(net, sample.image, tape, ctc.logit_grad)};
}

SgdState::SgdState(Network net)
    : net_(std::move(net)), velocity_(net_.params.zeros_like()) {}

double SgdState::step(const Sample& sample, double learning_rate,
                      double momentum, double grad_clip) {
  LossGrad lg;
  try {
    lg = loss_and_gradient(net_, sample);
  } catch (const Error& e) {
    throw Error(e.kind(), "sample " + sample.id + ": " + e.what());
  }
  Parameters::zip(velocity_, lg.grad, [&](auto& v, const auto& g) {
    v = momentum * v - learning_rate * g.cwiseMax(-grad_clip).cwiseMin(grad_clip);
  });
  Parameters::zip(net_.params, velocity_,
                  [](auto& p, const auto& v) { p += v; });
  return lg.loss;
}

Network initial_network(std::span<const Sample> train_set,
                        const TrainingConfig& config) {
  std::vector<std::u32string> texts;
  texts.reserve(train_set.size());
  for (const auto& s : train_set) texts.push_back(s.text);
  if (!config.pretrained) {
    Network net = init_network(config.input_height, config.hidden_size,
                               build_codec(texts, config.whitelist),
                               derive_seed(config.seed, {0x1a17}));
    net.provenance["init"] = "fresh";
    return net;
  }
  const Network base = load_model(*config.pretrained);
  if (base.input_height != config.input_height) {
    throw invalid_argument("pretrained model expects line height " +
                           std::to_string(base.input_height) + ", training uses " +
                           std::to_string(config.input_height));
  }
  Network net = reconcile_codec(base, texts, config.whitelist,
                                derive_seed(config.seed, {0x2e5c}),
                                config.force_whitelist);
  net.provenance["init"] = "pretrained";
  net.provenance["pretrained_from"] = config.pretrained->filename().string();
  return net;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string checkpoints_csv(const CheckpointSeries& series) {
  std::string csv = "iteration,test_cer\n";
  for (const auto& c : series) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%zu,%.4f\n", c.iteration, 100.0 * c.test_cer);
    csv += buf;
  }
  return csv;
}

CheckpointSeries train(std::span<const Sample> train_set,
                       std::span<const Sample> test_set,
                       const TrainingConfig& config) {
  config.validate();
  if (train_set.empty()) throw invalid_argument("training set is empty");
  if (test_set.empty()) throw invalid_argument("test set is empty");

  SgdState state(initial_network(train_set, config));
  validate_samples(state.network(), train_set);
  auto& prov = state.network().provenance;
  prov["seed"] = std::to_string(config.seed);
  prov["learning_rate"] = format_double(config.learning_rate);
  prov["momentum"] = format_double(config.momentum);
  prov["train_lines"] = std::to_string(train_set.size());

  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec) {
    throw Error(ErrorKind::kIo, "cannot create " + config.output_dir.string() +
                                    ": " + ec.message());
  }

  std::mt19937_64 rng(derive_seed(config.seed, {0x5a3b}));
  std::uniform_int_distribution<std::size_t> pick(0, train_set.size() - 1);
  CheckpointSeries series;
  for (std::size_t it = 1; it <= config.iterations; ++it) {
    state.step(train_set[pick(rng)], config.learning_rate, config.momentum,
               config.grad_clip);
    if (it % config.checkpoint_every != 0) continue;
    Checkpoint cp;
    cp.iteration = it;
    cp.path = config.output_dir / ("model-" + std::to_string(it) + ".ocrm");
    state.network().provenance["iteration"] = std::to_string(it);
    save_model(state.network(), cp.path);
    // Score the network as stored, at float precision.
    const auto stored = std::make_shared<const Network>(round_to_float(state.network()));
    cp.test_cer = evaluate_model(NetworkRecognizer(stored), test_set).cer;
    series.push_back(std::move(cp));
  }
  write_text_file(config.output_dir / "checkpoints.csv", checkpoints_csv(series));
  return series;
}

const Checkpoint& select_best_checkpoint(const CheckpointSeries& series) {
  if (series.empty()) throw invalid_argument("checkpoint series is empty");
  const Checkpoint* best = &series.front();
  for (const auto& c : series) {
    if (c.test_cer < best->test_cer) best = &c;
  }
  return *best;
}

}  // namespace ocrtl
