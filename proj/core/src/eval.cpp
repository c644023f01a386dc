// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "ocsr/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "ocsr/assembler.hpp"
#include "ocsr/error.hpp"

namespace ocsr {
namespace {

/// Average ranks (1-based) with ties sharing the mean of their positions.
std::vector<double> average_ranks(const std::vector<double>& values) {
  const size_t n = values.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n, 0.0);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = 0.5 * (static_cast<double>(i + 1) +
                              static_cast<double>(j + 1));
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

std::string csv_cell_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

bool F1Scores::defined(int cls) const {
  return tp[cls] + fp[cls] + fn[cls] > 0;
}

double F1Scores::f1(int cls) const {
  const int64_t denom = 2 * tp[cls] + fp[cls] + fn[cls];
  return denom == 0 ? 0.0
                    : 2.0 * static_cast<double>(tp[cls]) /
                          static_cast<double>(denom);
}

double F1Scores::macro_f1() const {
  double sum = 0.0;
  int count = 0;
  for (int cls = 0; cls < n_classes(); ++cls) {
    if (defined(cls)) {
      sum += f1(cls);
      ++count;
    }
  }
  if (count == 0) throw Error("macro F1 undefined: no class ever occurred");
  return sum / count;
}

F1Scores pixel_confusion(const Tensor& pred, const std::vector<uint8_t>& truth,
                         int rows, int cols) {
  if (pred.n != 1 || pred.h != rows || pred.w != cols) {
    throw ShapeError("pixel confusion: prediction " + pred.shape_str() +
                     " does not cover " + std::to_string(rows) + "x" +
                     std::to_string(cols));
  }
  if (truth.size() != static_cast<size_t>(rows) * static_cast<size_t>(cols)) {
    throw ShapeError("pixel confusion: truth map has " +
                     std::to_string(truth.size()) + " entries");
  }
  F1Scores s;
  s.tp.assign(pred.c, 0);
  s.fp.assign(pred.c, 0);
  s.fn.assign(pred.c, 0);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      int best = 0;
      float best_v = pred.at(0, 0, r, c);
      for (int j = 1; j < pred.c; ++j) {
        const float v = pred.at(0, j, r, c);
        if (v > best_v) {
          best_v = v;
          best = j;
        }
      }
      const int want = truth[static_cast<size_t>(r) * cols + c];
      if (want >= pred.c) {
        throw ShapeError("pixel confusion: truth class " +
                         std::to_string(want) + " outside the " +
                         std::to_string(pred.c) + " predicted channels");
      }
      if (best == want) {
        ++s.tp[best];
      } else {
        ++s.fp[best];
        ++s.fn[want];
      }
    }
  }
  return s;
}

F1Scores merge_counts(const F1Scores& a, const F1Scores& b) {
  if (a.tp.size() != b.tp.size()) {
    throw ShapeError("cannot merge confusion counts over different class sets");
  }
  F1Scores out = a;
  for (size_t i = 0; i < out.tp.size(); ++i) {
    out.tp[i] += b.tp[i];
    out.fp[i] += b.fp[i];
    out.fn[i] += b.fn[i];
  }
  return out;
}

SegmentationF1 pixel_f1(const SegmentationMaps& pred, const LabelMaps& truth) {
  SegmentationF1 out;
  out.atoms = pixel_confusion(pred.sa, truth.la, truth.rows, truth.cols);
  out.bonds = pixel_confusion(pred.sb, truth.lb, truth.rows, truth.cols);
  out.charges = pixel_confusion(pred.sc, truth.lc, truth.rows, truth.cols);
  return out;
}

F1Scores classifier_f1(const std::vector<std::vector<float>>& logits,
                       const std::vector<uint8_t>& labels, int n_classes) {
  if (logits.size() != labels.size()) {
    throw ShapeError("classifier F1: " + std::to_string(logits.size()) +
                     " predictions vs " + std::to_string(labels.size()) +
                     " labels");
  }
  F1Scores s;
  s.tp.assign(n_classes, 0);
  s.fp.assign(n_classes, 0);
  s.fn.assign(n_classes, 0);
  for (size_t i = 0; i < logits.size(); ++i) {
    if (static_cast<int>(logits[i].size()) != n_classes) {
      throw ShapeError("classifier F1: prediction " + std::to_string(i) +
                       " has " + std::to_string(logits[i].size()) +
                       " logits, expected " + std::to_string(n_classes));
    }
    const int got = argmax_class(logits[i]);
    const int want = labels[i];
    if (want >= n_classes) {
      throw ShapeError("classifier F1: label " + std::to_string(want) +
                       " out of range");
    }
    if (got == want) {
      ++s.tp[got];
    } else {
      ++s.fp[got];
      ++s.fn[want];
    }
  }
  return s;
}

double graph_error_rate(const std::vector<MolGraph>& predictions,
                        const std::vector<MolGraph>& truths, double pos_tol) {
  if (predictions.size() != truths.size()) {
    throw ShapeError("graph error rate: " + std::to_string(predictions.size()) +
                     " predictions vs " + std::to_string(truths.size()) +
                     " truths");
  }
  if (predictions.empty()) {
    throw ShapeError("graph error rate over an empty set");
  }
  int wrong = 0;
  for (size_t i = 0; i < predictions.size(); ++i) {
    if (!graph_equal(predictions[i], truths[i], pos_tol).equal) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(predictions.size());
}

Correlation frequency_correlation(const std::vector<double>& f1,
                                  const std::vector<double>& frequency) {
  if (f1.size() != frequency.size()) {
    throw ShapeError("correlation: " + std::to_string(f1.size()) +
                     " F1 values vs " + std::to_string(frequency.size()) +
                     " frequencies");
  }
  Correlation out;
  out.points = static_cast<int>(f1.size());
  if (out.points < 3) return out;

  const std::vector<double> rf = average_ranks(f1);
  const std::vector<double> rq = average_ranks(frequency);
  const double n = static_cast<double>(out.points);
  double mf = 0.0, mq = 0.0;
  for (int i = 0; i < out.points; ++i) {
    mf += rf[i];
    mq += rq[i];
  }
  mf /= n;
  mq /= n;
  double num = 0.0, df = 0.0, dq = 0.0;
  for (int i = 0; i < out.points; ++i) {
    num += (rf[i] - mf) * (rq[i] - mq);
    df += (rf[i] - mf) * (rf[i] - mf);
    dq += (rq[i] - mq) * (rq[i] - mq);
  }
  if (df == 0.0 || dq == 0.0) return out;  // constant list: undefined
  out.defined = true;
  out.rho = num / std::sqrt(df * dq);
  return out;
}

std::vector<MetricRow> f1_rows(const std::string& metric, const F1Scores& s,
                               const std::vector<std::string>& class_names) {
  if (class_names.size() != static_cast<size_t>(s.n_classes())) {
    throw ShapeError("F1 rows: " + std::to_string(class_names.size()) +
                     " names for " + std::to_string(s.n_classes()) +
                     " classes");
  }
  std::vector<MetricRow> rows;
  for (int cls = 0; cls < s.n_classes(); ++cls) {
    MetricRow row;
    row.metric = metric;
    row.klass = class_names[cls];
    row.defined = s.defined(cls);
    row.value = row.defined ? s.f1(cls) : 0.0;
    row.tp = s.tp[cls];
    row.fp = s.fp[cls];
    row.fn = s.fn[cls];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string eval_csv(const std::vector<MetricRow>& metrics,
                     const std::vector<GraphSetRow>& graph_sets) {
  std::string out = "metric,class,defined,value,tp,fp,fn,total,wrong\n";
  for (const MetricRow& m : metrics) {
    out += m.metric + "," + m.klass + "," + (m.defined ? "1" : "0") + "," +
           (m.defined ? csv_cell_double(m.value) : std::string("")) + "," +
           std::to_string(m.tp) + "," + std::to_string(m.fp) + "," +
           std::to_string(m.fn) + ",,\n";
  }
  for (const GraphSetRow& g : graph_sets) {
    out += "graph_error_rate," + g.set_name + ",1," +
           csv_cell_double(g.error_rate) + ",,,," + std::to_string(g.total) +
           "," + std::to_string(g.wrong) + "\n";
  }
  return out;
}

}  // namespace ocsr
