// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "ocsr/assembler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "ocsr/error.hpp"

namespace ocsr {

// ---------------------------------------------------------------------------
// Candidate generation

int argmax_class(const std::vector<float>& logits) {
  if (logits.empty()) throw ShapeError("argmax over empty logits");
  int best = 0;
  for (int i = 1; i < int(logits.size()); ++i) {
    if (logits[i] > logits[best]) best = i;
  }
  return best;
}

bool is_not_empty_class(const std::vector<float>& logits) {
  return argmax_class(logits) != 0;
}

std::vector<AtomCandidate> generate_atom_candidates(const Tensor& sa,
                                                    int bond_length) {
  if (sa.n != 1) throw ShapeError("atom map must have batch size 1");
  if (bond_length < 2) throw ShapeError("bond_length too small");
  const int H = sa.h, W = sa.w;

  // Non-Empty mask via per-pixel argmax (first maximum wins, so an exact
  // tie with Empty keeps the pixel empty).
  std::vector<uint8_t> mask(size_t(H) * W, 0);
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      int best = 0;
      for (int j = 1; j < sa.c; ++j) {
        if (sa.at(0, j, y, x) > sa.at(0, best, y, x)) best = j;
      }
      mask[size_t(y) * W + x] = best != 0;
    }
  }

  // 8-connected components, deterministic row-major discovery.
  struct Blob {
    double sum_r = 0, sum_c = 0;
    int count = 0;
  };
  std::vector<Blob> blobs;
  std::vector<int> comp(size_t(H) * W, -1);
  std::vector<int> stack;
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const size_t i0 = size_t(y) * W + x;
      if (!mask[i0] || comp[i0] >= 0) continue;
      const int id = int(blobs.size());
      blobs.push_back({});
      stack.assign(1, int(i0));
      comp[i0] = id;
      while (!stack.empty()) {
        const int i = stack.back();
        stack.pop_back();
        const int r = i / W, c = i % W;
        blobs[id].sum_r += r;
        blobs[id].sum_c += c;
        blobs[id].count += 1;
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            if (dr == 0 && dc == 0) continue;
            const int rr = r + dr, cc = c + dc;
            if (rr < 0 || rr >= H || cc < 0 || cc >= W) continue;
            const size_t ii = size_t(rr) * W + cc;
            if (!mask[ii] || comp[ii] >= 0) continue;
            comp[ii] = id;
            stack.push_back(int(ii));
          }
        }
      }
    }
  }

  // Merge blobs whose centroids are closer than bond_length/2, always
  // taking the currently closest pair (deterministic by index on ties).
  const double r_merge = bond_length / 2.0;
  std::vector<char> alive(blobs.size(), 1);
  auto centroid_r = [&](int i) { return blobs[i].sum_r / blobs[i].count; };
  auto centroid_c = [&](int i) { return blobs[i].sum_c / blobs[i].count; };
  while (true) {
    double best_d = std::numeric_limits<double>::infinity();
    int bi = -1, bj = -1;
    for (int i = 0; i < int(blobs.size()); ++i) {
      if (!alive[i]) continue;
      for (int j = i + 1; j < int(blobs.size()); ++j) {
        if (!alive[j]) continue;
        const double dr = centroid_r(i) - centroid_r(j);
        const double dc = centroid_c(i) - centroid_c(j);
        const double d = std::sqrt(dr * dr + dc * dc);
        if (d < r_merge && d < best_d) {
          best_d = d;
          bi = i;
          bj = j;
        }
      }
    }
    if (bi < 0) break;
    blobs[bi].sum_r += blobs[bj].sum_r;
    blobs[bi].sum_c += blobs[bj].sum_c;
    blobs[bi].count += blobs[bj].count;
    alive[bj] = 0;
  }

  std::vector<AtomCandidate> out;
  for (int i = 0; i < int(blobs.size()); ++i) {
    if (!alive[i]) continue;
    AtomCandidate cand;
    cand.position = {int(std::llround(centroid_r(i))),
                     int(std::llround(centroid_c(i)))};
    cand.support = blobs[i].count;
    out.push_back(cand);
  }
  std::sort(out.begin(), out.end(), [](const AtomCandidate& a, const AtomCandidate& b) {
    if (a.position.row != b.position.row) return a.position.row < b.position.row;
    return a.position.col < b.position.col;
  });
  return out;
}

std::vector<BondCandidate> generate_bond_candidates(
    const std::vector<PixelPos>& nodes, int bond_length) {
  std::vector<BondCandidate> out;
  const long long lim = 2LL * bond_length;
  for (int i = 0; i < int(nodes.size()); ++i) {
    for (int j = i + 1; j < int(nodes.size()); ++j) {
      const long long dr = nodes[i].row - nodes[j].row;
      const long long dc = nodes[i].col - nodes[j].col;
      if (dr * dr + dc * dc < lim * lim) out.push_back({i, j});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Build configuration

BuildConfig BuildConfig::from_style(const RenderStyle& style) {
  BuildConfig cfg;
  cfg.bond_length = style.bond_length;
  cfg.highlight_radius = style.atom_label_radius();
  cfg.highlight_width = style.bond_label_width();
  return cfg;
}

// ---------------------------------------------------------------------------
// Oracle models

namespace {

std::vector<float> pseudo_logits(int cls, int n) {
  std::vector<float> v(size_t(n), -10.0f);
  v[cls] = 10.0f;
  return v;
}

/// Majority class over `counts`; ties break toward the lower index.
int majority(const std::vector<int>& counts) {
  int best = 0;
  for (int i = 1; i < int(counts.size()); ++i) {
    if (counts[i] > counts[best]) best = i;
  }
  return best;
}

}  // namespace

OracleModels::OracleModels(const LabelMaps& truth, const Vocabulary& vocab,
                           const BuildConfig& cfg)
    : truth_(truth), vocab_(vocab), cfg_(cfg) {}

SegmentationMaps OracleModels::segment(const Image& x) {
  if (x.rows != truth_.rows || x.cols != truth_.cols) {
    throw ShapeError("image size does not match the ground-truth label maps");
  }
  return oracle_segmentation(truth_, vocab_);
}

Prediction OracleModels::disk_majority(const std::vector<uint8_t>& map,
                                       PixelPos cand, int n_classes) const {
  std::vector<int> counts(size_t(n_classes), 0);
  const int rad = cfg_.highlight_radius;
  for (int r = cand.row - rad; r <= cand.row + rad; ++r) {
    for (int c = cand.col - rad; c <= cand.col + rad; ++c) {
      if (r < 0 || r >= truth_.rows || c < 0 || c >= truth_.cols) continue;
      const int dr = r - cand.row, dc = c - cand.col;
      if (dr * dr + dc * dc > rad * rad) continue;
      const uint8_t cls = map[size_t(r) * truth_.cols + c];
      if (cls < counts.size()) ++counts[cls];
    }
  }
  return {pseudo_logits(majority(counts), n_classes), false};
}

Prediction OracleModels::predict_atom(const Image&, PixelPos cand) {
  return disk_majority(truth_.la, cand, vocab_.n_a());
}

Prediction OracleModels::predict_charge(const Image&, PixelPos cand) {
  return disk_majority(truth_.lc, cand, vocab_.n_c());
}

Prediction OracleModels::predict_bond(const Image&, PixelPos cand_a,
                                      PixelPos cand_b) {
  const int n_b = vocab_.n_b();
  if (!bond_pair_in_range(cand_a, cand_b, cfg_.bond_length)) {
    throw CandidateError("bond candidate out of range");
  }

  // Majority vote over each half of the candidate's rectangle, using the
  // same canonicalized band geometry as the highlight channels.
  const bool a_first = cand_a.row < cand_b.row ||
                       (cand_a.row == cand_b.row && cand_a.col < cand_b.col);
  const PixelPos p0 = a_first ? cand_a : cand_b;
  const PixelPos p1 = a_first ? cand_b : cand_a;
  const double dr = p1.row - p0.row, dc = p1.col - p0.col;
  const double len = std::sqrt(dr * dr + dc * dc);
  if (len < 1e-9) throw CandidateError("bond candidate endpoints coincide");
  const double ur = dr / len, uc = dc / len;
  const double nr = -uc, nc = ur;
  const double half = cfg_.highlight_width / 2.0;

  std::vector<int> first_cnt(size_t(n_b), 0), second_cnt(size_t(n_b), 0);
  const int rmin = std::max(0, int(std::floor(std::min(p0.row, p1.row) - half - 1)));
  const int rmax = std::min(truth_.rows - 1,
                            int(std::ceil(std::max(p0.row, p1.row) + half + 1)));
  const int cmin = std::max(0, int(std::floor(std::min(p0.col, p1.col) - half - 1)));
  const int cmax = std::min(truth_.cols - 1,
                            int(std::ceil(std::max(p0.col, p1.col) + half + 1)));
  for (int r = rmin; r <= rmax; ++r) {
    for (int c = cmin; c <= cmax; ++c) {
      const double qr = r - double(p0.row), qc = c - double(p0.col);
      const double t = qr * ur + qc * uc;
      if (t < 0.0 || t > len) continue;
      const double s = qr * nr + qc * nc;
      if (s < -half || s >= half) continue;
      const uint8_t cls = truth_.lb[size_t(r) * truth_.cols + c];
      if (cls >= n_b) continue;
      if (t < len / 2.0) {
        ++first_cnt[cls];
      } else {
        ++second_cnt[cls];
      }
    }
  }

  // Map the canonical halves back to the candidate order.
  const int m_a = majority(a_first ? first_cnt : second_cnt);
  const int m_b = majority(a_first ? second_cnt : first_cnt);
  const BondLabel la = vocab_.bonds[m_a];
  const BondLabel lb = vocab_.bonds[m_b];

  auto decide = [&](BondLabel label, bool conflict) -> Prediction {
    return {pseudo_logits(vocab_.bond_class(label), n_b), conflict};
  };
  if (la == BondLabel::Empty || lb == BondLabel::Empty) {
    return decide(BondLabel::Empty, false);
  }
  if (la == lb && (la == BondLabel::Single || la == BondLabel::Double ||
                   la == BondLabel::Triple)) {
    return decide(la, false);
  }
  if (la == BondLabel::WedgeBegin && lb == BondLabel::WedgeEnd)
    return decide(BondLabel::WedgeBegin, false);
  if (la == BondLabel::WedgeEnd && lb == BondLabel::WedgeBegin)
    return decide(BondLabel::WedgeEnd, false);
  if (la == BondLabel::HashBegin && lb == BondLabel::HashEnd)
    return decide(BondLabel::HashBegin, false);
  if (la == BondLabel::HashEnd && lb == BondLabel::HashBegin)
    return decide(BondLabel::HashEnd, false);
  // Halves disagree in a way no single bond explains: demote, flag.
  return decide(BondLabel::Single, true);
}

// ---------------------------------------------------------------------------
// Trained models

TrainedModels::TrainedModels(SegmentationNet& seg, ClassifierNet& atom_net,
                             ClassifierNet& bond_net, ClassifierNet& charge_net,
                             const BuildConfig& cfg)
    : seg_(seg), atom_net_(atom_net), bond_net_(bond_net),
      charge_net_(charge_net), cfg_(cfg) {}

SegmentationMaps TrainedModels::segment(const Image& x) {
  SegmentationMaps maps = seg_.forward(image_to_tensor(x));
  prob_a_ = softmax_channels(maps.sa);
  prob_b_ = softmax_channels(maps.sb);
  prob_c_ = softmax_channels(maps.sc);
  have_maps_ = true;
  return maps;
}

Prediction TrainedModels::predict_atom(const Image& x, PixelPos cand) {
  if (!have_maps_) throw UsageError("predict before segment");
  Tensor in = assemble_atom_input(prob_a_, x, cand, CutSpec(cfg_.bond_length),
                                  cfg_.highlight_radius);
  return {atom_net_.forward(in), false};
}

Prediction TrainedModels::predict_charge(const Image& x, PixelPos cand) {
  if (!have_maps_) throw UsageError("predict before segment");
  Tensor in = assemble_charge_input(prob_c_, x, cand, CutSpec(cfg_.bond_length),
                                    cfg_.highlight_radius);
  return {charge_net_.forward(in), false};
}

Prediction TrainedModels::predict_bond(const Image& x, PixelPos cand_a,
                                       PixelPos cand_b) {
  if (!have_maps_) throw UsageError("predict before segment");
  Tensor in = assemble_bond_input(prob_b_, x, cand_a, cand_b,
                                  CutSpec(cfg_.bond_length), cfg_.highlight_width);
  return {bond_net_.forward(in), false};
}

// ---------------------------------------------------------------------------
// Graph building

BuildResult build_graph(const Image& x, ModelSet& models,
                        const Vocabulary& vocab, const BuildConfig& cfg) {
  BuildResult result;
  SegmentationMaps maps = models.segment(x);
  if (maps.sa.c != vocab.n_a()) {
    throw ShapeError("atom map channels do not match the vocabulary");
  }

  const std::vector<AtomCandidate> cands =
      generate_atom_candidates(maps.sa, cfg.bond_length);
  result.empty_flagged = cands.empty();

  std::vector<PixelPos> node_pos;
  for (const AtomCandidate& cand : cands) {
    AtomRecord rec;
    rec.position = cand.position;
    rec.support = cand.support;
    Prediction pa = models.predict_atom(x, cand.position);
    Prediction pc = models.predict_charge(x, cand.position);
    rec.atom_logits = pa.logits;
    rec.charge_logits = pc.logits;
    if (is_not_empty_class(pa.logits)) {
      Atom atom;
      atom.element = vocab.atoms[argmax_class(pa.logits)];
      atom.charge = vocab.charges[argmax_class(pc.logits)];
      atom.pos = cand.position;
      rec.accepted = true;
      rec.node_index = result.graph.num_atoms();
      result.graph.atoms.push_back(atom);
      node_pos.push_back(cand.position);
    }
    result.atom_records.push_back(std::move(rec));
  }

  const std::vector<BondCandidate> pairs =
      generate_bond_candidates(node_pos, cfg.bond_length);
  for (const BondCandidate& pair : pairs) {
    BondRecord rec;
    rec.a = pair.a;
    rec.b = pair.b;
    Prediction pb = models.predict_bond(x, node_pos[pair.a], node_pos[pair.b]);
    rec.logits = pb.logits;
    rec.stereo_conflict = pb.conflict;
    if (is_not_empty_class(pb.logits)) {
      const BondLabel label = vocab.bonds[argmax_class(pb.logits)];
      Bond bond;
      switch (label) {
        case BondLabel::Single:
          bond = {pair.a, pair.b, BondKind::Single};
          break;
        case BondLabel::Double:
          bond = {pair.a, pair.b, BondKind::Double};
          break;
        case BondLabel::Triple:
          bond = {pair.a, pair.b, BondKind::Triple};
          break;
        case BondLabel::WedgeBegin:
          bond = {pair.a, pair.b, BondKind::Wedge};
          break;
        case BondLabel::WedgeEnd:
          bond = {pair.b, pair.a, BondKind::Wedge};
          break;
        case BondLabel::HashBegin:
          bond = {pair.a, pair.b, BondKind::Hash};
          break;
        case BondLabel::HashEnd:
          bond = {pair.b, pair.a, BondKind::Hash};
          break;
        case BondLabel::Empty:
          throw Error("non-empty decision decoded to Empty");  // unreachable
      }
      rec.accepted = true;
      rec.bond_index = result.graph.num_bonds();
      result.graph.bonds.push_back(bond);
    }
    result.bond_records.push_back(std::move(rec));
  }

  result.violations = validate(result.graph);
  return result;
}

SegmentationMaps oracle_segmentation(const LabelMaps& maps,
                                     const Vocabulary& vocab) {
  const int H = maps.rows, W = maps.cols;
  SegmentationMaps out{Tensor(1, vocab.n_a(), H, W), Tensor(1, vocab.n_b(), H, W),
                       Tensor(1, vocab.n_c(), H, W)};
  auto fill = [&](Tensor& t, const std::vector<uint8_t>& labels) {
    t.fill(-10.0f);
    for (int y = 0; y < H; ++y) {
      for (int x = 0; x < W; ++x) {
        const uint8_t cls = labels[size_t(y) * W + x];
        if (cls >= t.c) {
          throw ShapeError("label map class exceeds the vocabulary");
        }
        t.at(0, cls, y, x) = 10.0f;
      }
    }
  };
  fill(out.sa, maps.la);
  fill(out.sb, maps.lb);
  fill(out.sc, maps.lc);
  return out;
}

// ---------------------------------------------------------------------------
// Provenance

std::string provenance_json(const BuildResult& result, const Vocabulary& vocab,
                            const BuildConfig& cfg) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["empty"] = result.empty_flagged;
  doc["window"] = 2 * cfg.bond_length;
  ordered_json viols = ordered_json::array();
  for (const Violation& v : result.violations) viols.push_back(v.message);
  doc["violations"] = viols;

  ordered_json atoms = ordered_json::array();
  for (const AtomRecord& rec : result.atom_records) {
    ordered_json a;
    a["row"] = rec.position.row;
    a["col"] = rec.position.col;
    a["support"] = rec.support;
    a["window_top"] = rec.position.row - cfg.bond_length;
    a["window_left"] = rec.position.col - cfg.bond_length;
    a["accepted"] = rec.accepted;
    a["node"] = rec.node_index;
    a["atom_class"] = argmax_class(rec.atom_logits);
    a["element"] = element_symbol(vocab.atoms[argmax_class(rec.atom_logits)]);
    a["charge"] = vocab.charges[argmax_class(rec.charge_logits)];
    a["atom_logits"] = rec.atom_logits;
    a["charge_logits"] = rec.charge_logits;
    atoms.push_back(std::move(a));
  }
  doc["atoms"] = std::move(atoms);

  ordered_json bonds = ordered_json::array();
  for (const BondRecord& rec : result.bond_records) {
    ordered_json b;
    b["a"] = rec.a;
    b["b"] = rec.b;
    b["accepted"] = rec.accepted;
    b["bond"] = rec.bond_index;
    b["class"] = argmax_class(rec.logits);
    b["label"] = bond_label_name(vocab.bonds[argmax_class(rec.logits)]);
    b["stereo_conflict"] = rec.stereo_conflict;
    b["logits"] = rec.logits;
    bonds.push_back(std::move(b));
  }
  doc["bonds"] = std::move(bonds);
  return doc.dump(2) + "\n";
}

}  // namespace ocsr
