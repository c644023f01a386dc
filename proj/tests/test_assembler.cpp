// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Tests for candidate generation, oracle readout, and full graph
// assembly, including the ground-truth round trip over rendered
// molecules.

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "ocsr/assembler.hpp"
#include "ocsr/error.hpp"
#include "ocsr/molgraph_gen.hpp"
#include "ocsr/random.hpp"
#include "ocsr/render.hpp"

using namespace ocsr;

namespace {

/// Paints a filled disk of the given class into a single-image atom
/// logit map builder.
struct MapBuilder {
  int n_cls, H, W;
  Tensor t;

  MapBuilder(int n_cls_, int H_, int W_)
      : n_cls(n_cls_), H(H_), W(W_), t(1, n_cls_, H_, W_) {
    // Everything Empty.
    for (int y = 0; y < H; ++y)
      for (int x = 0; x < W; ++x) t.at(0, 0, y, x) = 10.0f;
  }

  void disk(int row, int col, int radius, int cls) {
    for (int r = row - radius; r <= row + radius; ++r)
      for (int c = col - radius; c <= col + radius; ++c) {
        if (r < 0 || r >= H || c < 0 || c >= W) continue;
        const int dr = r - row, dc = c - col;
        if (dr * dr + dc * dc > radius * radius) continue;
        for (int j = 0; j < n_cls; ++j) t.at(0, j, r, c) = j == cls ? 10.0f : -10.0f;
      }
  }
};

int disk_area(int radius) {
  int n = 0;
  for (int r = -radius; r <= radius; ++r)
    for (int c = -radius; c <= radius; ++c)
      if (r * r + c * c <= radius * radius) ++n;
  return n;
}

/// Independent connected-component counter (8-connectivity) for the
/// non-Empty argmax mask of an atom map.
int brute_component_count(const Tensor& sa) {
  const int H = sa.h, W = sa.w;
  std::vector<char> mask(size_t(H) * W, 0);
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x) {
      int best = 0;
      for (int j = 1; j < sa.c; ++j)
        if (sa.at(0, j, y, x) > sa.at(0, best, y, x)) best = j;
      mask[size_t(y) * W + x] = best != 0;
    }
  std::vector<char> seen(mask.size(), 0);
  int comps = 0;
  for (size_t s = 0; s < mask.size(); ++s) {
    if (!mask[s] || seen[s]) continue;
    ++comps;
    std::vector<size_t> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const size_t i = stack.back();
      stack.pop_back();
      const int r = int(i) / W, c = int(i) % W;
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc) {
          const int rr = r + dr, cc = c + dc;
          if (rr < 0 || rr >= H || cc < 0 || cc >= W) continue;
          const size_t ii = size_t(rr) * W + cc;
          if (mask[ii] && !seen[ii]) {
            seen[ii] = 1;
            stack.push_back(ii);
          }
        }
    }
  }
  return comps;
}

}  // namespace

TEST_CASE("argmax and emptiness: ties break toward Empty") {
  CHECK(argmax_class({1.0f, 3.0f, 2.0f}) == 1);
  CHECK(argmax_class({5.0f, 3.0f, 2.0f}) == 0);
  CHECK(argmax_class({2.0f, 2.0f, 1.0f}) == 0);  // exact tie -> Empty
  CHECK(!is_not_empty_class({2.0f, 2.0f, 1.0f}));
  CHECK(!is_not_empty_class({9.0f, 3.0f}));
  CHECK(is_not_empty_class({1.0f, 1.5f}));
  CHECK_THROWS_AS(argmax_class({}), ShapeError);
}

TEST_CASE("atom candidates: single disk, separation, merging") {
  SUBCASE("one disk gives one candidate at its center") {
    MapBuilder mb(4, 64, 64);
    mb.disk(10, 10, 3, 1);
    auto cands = generate_atom_candidates(mb.t, 20);
    REQUIRE(cands.size() == 1);
    CHECK(cands[0].position.row == 10);
    CHECK(cands[0].position.col == 10);
    CHECK(cands[0].support == disk_area(3));
  }

  SUBCASE("well-separated disks stay distinct and sorted") {
    MapBuilder mb(4, 128, 128);
    mb.disk(90, 30, 3, 1);
    mb.disk(30, 90, 3, 2);
    mb.disk(30, 20, 3, 3);
    auto cands = generate_atom_candidates(mb.t, 20);  // r_merge 10
    REQUIRE(cands.size() == 3);
    CHECK(cands[0].position.row == 30);
    CHECK(cands[0].position.col == 20);
    CHECK(cands[1].position.col == 90);
    CHECK(cands[2].position.row == 90);
  }

  SUBCASE("nearby components merge to a support-weighted centroid") {
    MapBuilder mb(4, 64, 64);
    // Two same-size disks 8 px apart with r_merge = 10: one candidate in
    // the middle.
    mb.disk(20, 24, 3, 1);
    mb.disk(20, 32, 3, 1);
    auto cands = generate_atom_candidates(mb.t, 20);
    REQUIRE(cands.size() == 1);
    CHECK(cands[0].position.row == 20);
    CHECK(cands[0].position.col == 28);
    CHECK(cands[0].support == 2 * disk_area(3));

    // Unequal sizes: centroid shifts toward the bigger blob.
    MapBuilder mb2(4, 64, 64);
    mb2.disk(20, 24, 4, 1);
    mb2.disk(20, 32, 2, 1);
    auto c2 = generate_atom_candidates(mb2.t, 20);
    REQUIRE(c2.size() == 1);
    const double wr = disk_area(4), ws = disk_area(2);
    const int want_col = int(std::llround((24 * wr + 32 * ws) / (wr + ws)));
    CHECK(c2[0].position.col == want_col);
  }

  SUBCASE("touching disks of different classes form one component") {
    MapBuilder mb(4, 64, 64);
    mb.disk(20, 20, 3, 1);
    mb.disk(20, 25, 3, 2);  // overlapping
    auto cands = generate_atom_candidates(mb.t, 8);  // r_merge 4: no merge
    CHECK(cands.size() == 1);                        // single 8-connected blob
  }

  SUBCASE("candidate count matches an independent component count") {
    Rng rng(55);
    for (int trial = 0; trial < 10; ++trial) {
      MapBuilder mb(3, 96, 96);
      const int blobs = 2 + int(rng.uniform_index(5));
      for (int i = 0; i < blobs; ++i) {
        mb.disk(8 + int(rng.uniform_index(80)), 8 + int(rng.uniform_index(80)),
                2 + int(rng.uniform_index(3)), 1 + int(rng.uniform_index(2)));
      }
      // bond_length 4 -> r_merge 2: centroids closer than 2 px only when
      // blobs fused into one component anyway, so counts must agree.
      auto cands = generate_atom_candidates(mb.t, 4);
      CHECK(int(cands.size()) == brute_component_count(mb.t));
    }
  }

  SUBCASE("transposing the map transposes the candidates") {
    MapBuilder mb(3, 80, 60);
    mb.disk(12, 40, 3, 1);
    mb.disk(50, 9, 2, 2);
    mb.disk(33, 33, 4, 1);
    Tensor tr(1, 3, 60, 80);
    for (int j = 0; j < 3; ++j)
      for (int y = 0; y < 80; ++y)
        for (int x = 0; x < 60; ++x) tr.at(0, j, x, y) = mb.t.at(0, j, y, x);
    auto a = generate_atom_candidates(mb.t, 12);
    auto b = generate_atom_candidates(tr, 12);
    REQUIRE(a.size() == b.size());
    std::set<std::pair<int, int>> sa, sb;
    for (auto& c : a) sa.insert({c.position.row, c.position.col});
    for (auto& c : b) sb.insert({c.position.col, c.position.row});
    CHECK(sa == sb);
  }

  SUBCASE("all-Empty map yields no candidates") {
    MapBuilder mb(4, 32, 32);
    CHECK(generate_atom_candidates(mb.t, 16).empty());
  }
}

TEST_CASE("bond candidates: strict 2L boundary, canonical order") {
  const int L = 10;
  SUBCASE("distance ladder") {
    std::vector<PixelPos> nodes = {{0, 0}, {0, 10}};
    CHECK(generate_bond_candidates(nodes, L).size() == 1);  // 1.0 L
    nodes[1] = {0, 19};
    CHECK(generate_bond_candidates(nodes, L).size() == 1);  // just under 2L
    nodes[1] = {0, 20};
    CHECK(generate_bond_candidates(nodes, L).empty());  // exactly 2L: out
    nodes[1] = {12, 16};  // 3-4-5 triangle scaled: dist 20 exactly
    CHECK(generate_bond_candidates(nodes, L).empty());
    nodes[1] = {12, 15};  // dist^2 = 369 < 400
    CHECK(generate_bond_candidates(nodes, L).size() == 1);
  }

  SUBCASE("collinear chain at 1.0 L spacing") {
    std::vector<PixelPos> nodes;
    for (int i = 0; i < 5; ++i) nodes.push_back({0, i * L});
    auto pairs = generate_bond_candidates(nodes, L);
    // neighbours included, next-but-one at exactly 2L excluded
    REQUIRE(pairs.size() == 4);
    for (int i = 0; i < 4; ++i) {
      CHECK(pairs[i].a == i);
      CHECK(pairs[i].b == i + 1);
    }
  }

  SUBCASE("exhaustive check against a quadratic oracle") {
    Rng rng(77);
    std::vector<PixelPos> nodes;
    for (int i = 0; i < 12; ++i)
      nodes.push_back({int(rng.uniform_index(60)), int(rng.uniform_index(60))});
    auto pairs = generate_bond_candidates(nodes, L);
    std::set<std::pair<int, int>> got;
    for (auto& p : pairs) {
      CHECK(p.a < p.b);
      got.insert({p.a, p.b});
    }
    CHECK(got.size() == pairs.size());  // no duplicates
    for (int i = 0; i < 12; ++i)
      for (int j = i + 1; j < 12; ++j) {
        const double d = std::hypot(double(nodes[i].row - nodes[j].row),
                                    double(nodes[i].col - nodes[j].col));
        CHECK(got.count({i, j}) == (d < 2.0 * L ? 1u : 0u));
      }
  }
}

TEST_CASE("oracle segmentation: argmax reproduces the label maps") {
  Vocabulary vocab = Vocabulary::full();
  Rng rng(91);
  LabelMaps maps(24, 31);
  for (auto& v : maps.la) v = uint8_t(rng.uniform_index(vocab.n_a()));
  for (auto& v : maps.lb) v = uint8_t(rng.uniform_index(vocab.n_b()));
  for (auto& v : maps.lc) v = uint8_t(rng.uniform_index(vocab.n_c()));

  SegmentationMaps seg = oracle_segmentation(maps, vocab);
  CHECK(seg.sa.c == vocab.n_a());
  CHECK(seg.sb.c == vocab.n_b());
  CHECK(seg.sc.c == vocab.n_c());
  auto check_map = [&](const Tensor& t, const std::vector<uint8_t>& want) {
    for (int y = 0; y < t.h; ++y)
      for (int x = 0; x < t.w; ++x) {
        int best = 0;
        for (int j = 1; j < t.c; ++j)
          if (t.at(0, j, y, x) > t.at(0, best, y, x)) best = j;
        CHECK(best == int(want[size_t(y) * t.w + x]));
        for (int j = 0; j < t.c; ++j) {
          CHECK(std::fabs(t.at(0, j, y, x)) == 10.0f);
        }
      }
  };
  check_map(seg.sa, maps.la);
  check_map(seg.sb, maps.lb);
  check_map(seg.sc, maps.lc);

  // Empty maps: all channels empty-dominated.
  LabelMaps blank(8, 8);
  SegmentationMaps bs = oracle_segmentation(blank, vocab);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) CHECK(bs.sa.at(0, 0, y, x) == 10.0f);

  // Classes beyond the vocabulary are rejected.
  LabelMaps bad(4, 4);
  bad.la[5] = uint8_t(vocab.n_a());
  CHECK_THROWS_AS(oracle_segmentation(bad, vocab), ShapeError);
}

TEST_CASE("blank image: empty graph, flagged, never silent") {
  Vocabulary vocab = Vocabulary::full();
  RenderStyle style = RenderStyle::preset(1);
  BuildConfig cfg = BuildConfig::from_style(style);
  LabelMaps blank(64, 64);
  Image img(64, 64);
  OracleModels models(blank, vocab, cfg);
  BuildResult res = build_graph(img, models, vocab, cfg);
  CHECK(res.empty_flagged);
  CHECK(res.graph.num_atoms() == 0);
  CHECK(!res.violations.empty());  // an empty molecule is not valid chemistry
  CHECK(res.atom_records.empty());
}

TEST_CASE("stereo halves that disagree demote to a flagged single bond") {
  Vocabulary vocab = Vocabulary::full();
  RenderStyle style = RenderStyle::preset(1);
  BuildConfig cfg = BuildConfig::from_style(style);
  // Hand-paint a horizontal bond label whose first half says Single and
  // second half says Double.
  LabelMaps maps(64, 128);
  const int single_cls = vocab.bond_class(BondLabel::Single);
  const int double_cls = vocab.bond_class(BondLabel::Double);
  for (int r = 30; r < 34; ++r) {
    for (int c = 30; c < 50; ++c) maps.lb[size_t(r) * 128 + c] = uint8_t(single_cls);
    for (int c = 50; c < 70; ++c) maps.lb[size_t(r) * 128 + c] = uint8_t(double_cls);
  }
  Image img(64, 128);
  OracleModels models(maps, vocab, cfg);
  Prediction p = models.predict_bond(img, {32, 30}, {32, 70});
  CHECK(p.conflict);
  CHECK(argmax_class(p.logits) == single_cls);

  // Consistent halves: no conflict.
  for (int r = 30; r < 34; ++r)
    for (int c = 30; c < 70; ++c) maps.lb[size_t(r) * 128 + c] = uint8_t(double_cls);
  OracleModels models2(maps, vocab, cfg);
  Prediction p2 = models2.predict_bond(img, {32, 30}, {32, 70});
  CHECK(!p2.conflict);
  CHECK(argmax_class(p2.logits) == double_cls);

  // Wedge encoded as Begin/End halves decodes to the directed class.
  const int wb = vocab.bond_class(BondLabel::WedgeBegin);
  const int we = vocab.bond_class(BondLabel::WedgeEnd);
  for (int r = 30; r < 34; ++r) {
    for (int c = 30; c < 50; ++c) maps.lb[size_t(r) * 128 + c] = uint8_t(wb);
    for (int c = 50; c < 70; ++c) maps.lb[size_t(r) * 128 + c] = uint8_t(we);
  }
  OracleModels models3(maps, vocab, cfg);
  Prediction p3 = models3.predict_bond(img, {32, 30}, {32, 70});
  CHECK(!p3.conflict);
  CHECK(argmax_class(p3.logits) == wb);
  // Reversed candidate order sees the End half first.
  Prediction p4 = models3.predict_bond(img, {32, 70}, {32, 30});
  CHECK(argmax_class(p4.logits) == we);
}

TEST_CASE("oracle round trip rebuilds rendered molecules exactly") {
  Vocabulary vocab = Vocabulary::full();
  GenParams gp;
  gp.min_atoms = 3;
  gp.max_atoms = 7;
  gp.charge_prob = 0.1;
  gp.stereo_prob = 0.2;
  gp.ring_prob = 0.35;
  gp.double_prob = 0.2;
  gp.triple_prob = 0.05;

  int built = 0;
  for (int style_id = 1; style_id <= 3; ++style_id) {
    RenderStyle style = RenderStyle::preset(style_id);
    BuildConfig cfg = BuildConfig::from_style(style);
    for (uint64_t seed = 1; built < 60; ++seed) {
      MolGraph g;
      try {
        g = random_molecule(seed * 7919 + style_id, gp);
        g = place_in_canvas(g, style, 448, 448);
      } catch (const Error&) {
        continue;  // molecule didn't fit; try the next seed
      }
      Image img = rasterize(g, style, 448, 448);
      LabelMaps maps = label_maps(g, vocab, style, 448, 448);
      OracleModels models(maps, vocab, cfg);
      BuildResult res = build_graph(img, models, vocab, cfg);

      CAPTURE(seed);
      CAPTURE(style_id);
      CHECK(!res.empty_flagged);
      CHECK(res.violations.empty());
      GraphDiff diff = graph_equal(res.graph, g, 3.0);
      CHECK(diff.equal);
      if (!diff.equal && !diff.diffs.empty()) {
        CAPTURE(diff.diffs[0]);
      }
      for (const BondRecord& rec : res.bond_records) CHECK(!rec.stereo_conflict);
      ++built;
      if (built % 20 == 0) break;  // rotate styles every 20 molecules
    }
  }
  CHECK(built >= 60);
}

TEST_CASE("provenance JSON carries classes, logits and windows") {
  Vocabulary vocab = Vocabulary::full();
  RenderStyle style = RenderStyle::preset(1);
  BuildConfig cfg = BuildConfig::from_style(style);
  GenParams gp;
  gp.min_atoms = 3;
  gp.max_atoms = 5;
  MolGraph g = random_molecule(4, gp);
  g = place_in_canvas(g, style, 320, 320);
  Image img = rasterize(g, style, 320, 320);
  LabelMaps maps = label_maps(g, vocab, style, 320, 320);
  OracleModels models(maps, vocab, cfg);
  BuildResult res = build_graph(img, models, vocab, cfg);

  const std::string text = provenance_json(res, vocab, cfg);
  auto doc = nlohmann::json::parse(text);
  CHECK(doc["empty"] == false);
  CHECK(doc["atoms"].size() == res.atom_records.size());
  CHECK(doc["bonds"].size() == res.bond_records.size());
  REQUIRE(!doc["atoms"].empty());
  const auto& a0 = doc["atoms"][0];
  CHECK(a0.contains("row"));
  CHECK(a0.contains("atom_logits"));
  CHECK(a0["atom_logits"].size() == size_t(vocab.n_a()));
  CHECK(a0.contains("window_top"));
  CHECK(a0["accepted"] == true);
  CHECK(doc["window"] == 2 * cfg.bond_length);
  // Accepted atoms map to graph nodes one-to-one.
  std::set<int> nodes;
  for (const auto& a : doc["atoms"]) {
    if (a["accepted"]) nodes.insert(int(a["node"]));
  }
  CHECK(int(nodes.size()) == res.graph.num_atoms());
}

TEST_CASE("trained models run the full loop on a small image") {
  // Untrained nets: the point is wiring, shapes and the usage protocol,
  // not accuracy.
  Vocabulary vocab = Vocabulary::full();
  RenderStyle style = RenderStyle::preset(1);
  style.bond_length = 16;
  style.line_width = 1;
  style.double_bond_gap = 6;
  style.wedge_max_width = 8;
  BuildConfig cfg = BuildConfig::from_style(style);

  SegNetConfig sc;
  sc.hidden = 4;
  SegmentationNet seg(sc);
  seg.init(1);
  ClsNetConfig ac{sc.n_a + 2, 4, sc.n_a};
  ClsNetConfig bc{sc.n_b + 3, 4, sc.n_b};
  ClsNetConfig cc{sc.n_c + 2, 4, sc.n_c};
  ClassifierNet atom_net(ac), bond_net(bc), charge_net(cc);
  atom_net.init(2);
  bond_net.init(3);
  charge_net.init(4);

  TrainedModels models(seg, atom_net, bond_net, charge_net, cfg);
  Image img(48, 48);
  for (int r = 20; r < 28; ++r)
    for (int c = 10; c < 38; ++c) img.at(r, c) = 1.0f;

  CHECK_THROWS_AS(models.predict_atom(img, {24, 24}), UsageError);
  BuildResult res = build_graph(img, models, vocab, cfg);
  // Whatever the untrained nets decided, the result must be validated and
  // internally consistent.
  CHECK(res.violations.size() == validate(res.graph).size());
  for (const AtomRecord& rec : res.atom_records) {
    CHECK(rec.atom_logits.size() == size_t(vocab.n_a()));
    CHECK(rec.charge_logits.size() == size_t(vocab.n_c()));
  }
}
