// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Training loops for the segmentation net and the three candidate
// classifiers. Both run Adam, log a loss curve, and are bit-deterministic
// for a fixed seed: data order comes from the seeded shuffler, all
// reductions are single-threaded in a fixed order, and weight updates
// follow parameter order.
//
// Segmentation steps take one image each and minimize the summed pixelwise
// cross entropy of the three label maps. Classifier steps take a batch of
// candidate samples, assemble each input window on the fly from the stored
// record, and minimize the mean per-sample cross entropy.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ocsr/corpus.hpp"
#include "ocsr/datasets.hpp"
#include "ocsr/networks.hpp"

namespace ocsr {

struct TrainHyper {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  int steps = 0;        // optimizer steps to run
  int batch_size = 8;   // classifier samples per step; segmentation is 1 image
  uint64_t seed = 0;    // data-order shuffling
  int start_step = 0;   // first step number in the curve (resume offset)
};

struct LossPoint {
  int step = 0;   // optimizer step, counted from start_step
  int epoch = 0;  // completed passes over the data when the step began
  double loss = 0.0;
};

struct TrainResult {
  std::vector<LossPoint> curve;  // one point per step
};

/// Trains `net` in place on the corpus images: per step, one image's
/// summed pixelwise cross entropy against its label maps. The label maps
/// must use the net's class counts. Throws TrainError on an empty corpus,
/// a non-finite loss (with the offending step in the message), or a label
/// map/config mismatch surfacing as a shape error.
TrainResult train_segmentation(SegmentationNet& net,
                               const std::vector<LabeledImage>& images,
                               const TrainHyper& hyper);

/// Trains a classifier in place on candidate records: per step, the mean
/// softmax cross entropy of `batch_size` samples whose input windows are
/// assembled from (image, segmentation probabilities) on demand. Throws
/// TrainError on an empty dataset or non-finite loss.
TrainResult train_classifier(ClassifierNet& net, const CandidateDataset& data,
                             const std::vector<LabeledImage>& images,
                             const std::vector<SegmentationMaps>& segprobs,
                             const TrainHyper& hyper);

/// "step,epoch,loss" CSV with one row per curve point; loss printed with
/// 9 significant digits (round-trip stable for plotting and diffing).
std::string loss_curve_csv(const std::vector<LossPoint>& curve);

}  // namespace ocsr
