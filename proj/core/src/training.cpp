// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "ocsr/training.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "ocsr/error.hpp"
#include "ocsr/random.hpp"

namespace ocsr {
namespace {

/// Endless shuffled pass over [0, n); every pass reshuffles with its own
/// substream so data order is a pure function of (seed, draw index).
class Shuffler {
 public:
  Shuffler(size_t n, uint64_t seed) : n_(n), seed_(seed) { reshuffle(); }

  uint32_t next() {
    const uint32_t v = order_[pos_++];
    if (pos_ == order_.size()) {
      ++passes_;
      reshuffle();
    }
    return v;
  }

  int passes() const { return passes_; }

 private:
  void reshuffle() {
    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), 0u);
    Rng rng(substream_seed(seed_, static_cast<uint64_t>(passes_)));
    rng.shuffle(order_);
    pos_ = 0;
  }

  size_t n_;
  uint64_t seed_;
  std::vector<uint32_t> order_;
  size_t pos_ = 0;
  int passes_ = 0;
};

[[noreturn]] void throw_non_finite(const char* what, int step, double loss) {
  throw TrainError(std::string(what) + " loss became non-finite (" +
                   std::to_string(loss) + ") at step " + std::to_string(step) +
                   "; lower the learning rate or check the data");
}

}  // namespace

TrainResult train_segmentation(SegmentationNet& net,
                               const std::vector<LabeledImage>& images,
                               const TrainHyper& hyper) {
  if (images.empty()) throw TrainError("segmentation corpus is empty");
  const SegNetConfig& cfg = net.config();

  Adam<float> opt(hyper.lr, hyper.beta1, hyper.beta2, hyper.eps);
  Shuffler deck(images.size(), hyper.seed);
  TrainResult result;
  result.curve.reserve(static_cast<size_t>(std::max(0, hyper.steps)));

  for (int s = 0; s < hyper.steps; ++s) {
    const int step = hyper.start_step + s;
    const int epoch = deck.passes();
    const LabeledImage& item = images[deck.next()];

    net.zero_grad();
    const Tensor raw = net.forward_raw(image_to_tensor(item.x));
    const SegLoss loss =
        total_segmentation_loss(raw, item.maps, cfg.n_a, cfg.n_b, cfg.n_c);
    if (!std::isfinite(loss.total)) {
      throw_non_finite("segmentation", step, loss.total);
    }
    net.backward(loss.grad);
    opt.step(net.params());

    result.curve.push_back(LossPoint{step, epoch, loss.total});
  }
  return result;
}

TrainResult train_classifier(ClassifierNet& net, const CandidateDataset& data,
                             const std::vector<LabeledImage>& images,
                             const std::vector<SegmentationMaps>& segprobs,
                             const TrainHyper& hyper) {
  if (data.samples.empty()) throw TrainError("candidate dataset is empty");
  if (images.size() != segprobs.size()) {
    throw TrainError("got " + std::to_string(images.size()) + " images but " +
                     std::to_string(segprobs.size()) + " segmentation maps");
  }
  if (hyper.batch_size <= 0) throw TrainError("batch size must be positive");
  const int n_out = net.config().n_out;
  if (n_out != data.n_classes()) {
    throw TrainError("network emits " + std::to_string(n_out) +
                     " classes but the dataset has " +
                     std::to_string(data.n_classes()));
  }

  Adam<float> opt(hyper.lr, hyper.beta1, hyper.beta2, hyper.eps);
  Shuffler deck(data.samples.size(), hyper.seed);
  TrainResult result;
  result.curve.reserve(static_cast<size_t>(std::max(0, hyper.steps)));

  for (int s = 0; s < hyper.steps; ++s) {
    const int step = hyper.start_step + s;
    const int epoch = deck.passes();

    net.zero_grad();
    double batch_loss = 0.0;
    const float inv_batch = 1.0f / static_cast<float>(hyper.batch_size);
    for (int b = 0; b < hyper.batch_size; ++b) {
      const CandidateSample& sample = data.samples[deck.next()];
      if (sample.image_id >= images.size()) {
        throw TrainError("sample references image " +
                         std::to_string(sample.image_id) + " but only " +
                         std::to_string(images.size()) + " images were given");
      }
      const Tensor input = sample_input(sample, images[sample.image_id],
                                        segprobs[sample.image_id]);
      const std::vector<float> logits = net.forward(input);
      ScalarLoss<float> loss = softmax_cross_entropy(logits, sample.label);
      batch_loss += loss.value;
      for (float& g : loss.grad) g *= inv_batch;  // batch loss is the mean
      net.backward(loss.grad);
    }
    batch_loss /= hyper.batch_size;
    if (!std::isfinite(batch_loss)) {
      throw_non_finite("classifier", step, batch_loss);
    }
    opt.step(net.params());

    result.curve.push_back(LossPoint{step, epoch, batch_loss});
  }
  return result;
}

std::string loss_curve_csv(const std::vector<LossPoint>& curve) {
  std::string out = "step,epoch,loss\n";
  char buf[64];
  for (const LossPoint& p : curve) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%.9g\n", p.step, p.epoch, p.loss);
    out += buf;
  }
  return out;
}

}  // namespace ocsr
