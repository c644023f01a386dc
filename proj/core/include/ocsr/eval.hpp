// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Evaluation metrics: per-class F1 from confusion counts (pixelwise for
// segmentation, samplewise for classifiers), whole-graph error rates, and
// the Spearman rank correlation between class frequency and class F1.
// Classes that never occur in prediction or truth are reported as absent
// (undefined F1), not as zero, and are excluded from macro averages.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ocsr/image.hpp"
#include "ocsr/molgraph.hpp"
#include "ocsr/networks.hpp"

namespace ocsr {

/// Per-class confusion counts plus the F1 scores they induce.
struct F1Scores {
  std::vector<int64_t> tp, fp, fn;

  int n_classes() const { return static_cast<int>(tp.size()); }
  /// A class is defined when it occurs at all (TP+FP+FN > 0).
  bool defined(int cls) const;
  /// 2TP / (2TP+FP+FN); only valid for defined classes.
  double f1(int cls) const;
  /// Mean F1 over defined classes. Throws Error when none is defined.
  double macro_f1() const;
};

/// Argmax-per-pixel confusion of one predicted channel map (1, C, H, W)
/// against one truth map. Probabilities and logits give the same argmax.
F1Scores pixel_confusion(const Tensor& pred, const std::vector<uint8_t>& truth,
                         int rows, int cols);

/// Merges counts class by class (shapes must agree).
F1Scores merge_counts(const F1Scores& a, const F1Scores& b);

/// Per-task pixel F1 of predicted segmentation maps against label maps.
struct SegmentationF1 {
  F1Scores atoms, bonds, charges;
};
SegmentationF1 pixel_f1(const SegmentationMaps& pred, const LabelMaps& truth);

/// Argmax-per-sample confusion of logit vectors against labels.
F1Scores classifier_f1(const std::vector<std::vector<float>>& logits,
                       const std::vector<uint8_t>& labels, int n_classes);

/// Fraction of prediction/truth pairs that are not graph-equal within
/// pos_tol. Throws ShapeError when the lists differ in length or are empty.
double graph_error_rate(const std::vector<MolGraph>& predictions,
                        const std::vector<MolGraph>& truths, double pos_tol);

/// Spearman rank correlation between two aligned value lists (already
/// filtered to defined points). Ties receive average ranks; rho is the
/// Pearson correlation of the rank vectors. Fewer than 3 points, or a
/// constant list, leaves the statistic undefined.
struct Correlation {
  bool defined = false;
  double rho = 0.0;
  int points = 0;
};
Correlation frequency_correlation(const std::vector<double>& f1,
                                  const std::vector<double>& frequency);

/// CSV rows for a report: per-class metric rows and per-set graph rows.
struct MetricRow {
  std::string metric;  // e.g. "pixel_f1_atoms", "classifier_f1_bond"
  std::string klass;   // class display name
  bool defined = false;
  double value = 0.0;
  int64_t tp = 0, fp = 0, fn = 0;
};
struct GraphSetRow {
  std::string set_name;  // e.g. "style1_stereo"
  int total = 0;
  int wrong = 0;
  double error_rate = 0.0;
};

/// One flat table: metric,class,defined,value,tp,fp,fn,total,wrong with
/// empty cells where a column does not apply. gnuplot-friendly.
std::string eval_csv(const std::vector<MetricRow>& metrics,
                     const std::vector<GraphSetRow>& graph_sets);

/// MetricRow expansion of one F1Scores block under a metric name; class
/// names come from the caller (index-aligned).
std::vector<MetricRow> f1_rows(const std::string& metric, const F1Scores& s,
                               const std::vector<std::string>& class_names);

}  // namespace ocsr
