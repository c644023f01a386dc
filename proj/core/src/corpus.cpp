// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "ocsr/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <string>

#include "json_util.hpp"
#include "ocsr/error.hpp"
#include "ocsr/graph_json.hpp"
#include "ocsr/random.hpp"
#include "ocsr/text_io.hpp"

namespace ocsr {
namespace {

using detail::ordered_json;

std::set<Element> elements_of(const MolGraph& g) {
  std::set<Element> out;
  for (const Atom& a : g.atoms) out.insert(a.element);
  return out;
}

/// Would accepting a molecule with these elements keep every quota
/// reachable in the slots that remain afterwards?
bool quota_feasible_after_accept(const std::map<Element, int>& quota,
                                 const std::map<Element, int>& have,
                                 const std::set<Element>& mol_elements,
                                 int slots_after) {
  for (const auto& [el, want] : quota) {
    int got = 0;
    auto it = have.find(el);
    if (it != have.end()) got = it->second;
    if (mol_elements.count(el)) ++got;
    if (want - got > slots_after) return false;
  }
  return true;
}

std::string item_stem(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "img_%05d", index);
  return buf;
}

}  // namespace

Corpus render_dataset(const CorpusParams& params) {
  if (params.count <= 0) throw DatasetError("corpus count must be positive");
  params.style.check();
  params.vocab.check();

  GenParams gen = restrict_to_vocab(params.gen, params.vocab);
  gen.bond_length = params.style.bond_length;
  const int margin =
      (params.style.bond_length + 1) / 2 + 2 * params.style.glyph_scale;
  const int cap_r = params.rows - 1 - 2 * margin;
  const int cap_c = params.cols - 1 - 2 * margin;
  if (cap_r < params.style.bond_length || cap_c < params.style.bond_length) {
    throw DatasetError("canvas " + std::to_string(params.rows) + "x" +
                       std::to_string(params.cols) +
                       " cannot hold one bond of length " +
                       std::to_string(params.style.bond_length));
  }
  gen.max_span_rows =
      gen.max_span_rows > 0 ? std::min(gen.max_span_rows, cap_r) : cap_r;
  gen.max_span_cols =
      gen.max_span_cols > 0 ? std::min(gen.max_span_cols, cap_c) : cap_c;

  Corpus corpus;
  corpus.vocab = params.vocab;
  corpus.style = params.style;
  corpus.rows = params.rows;
  corpus.cols = params.cols;
  corpus.seed = params.seed;
  corpus.items.reserve(static_cast<size_t>(params.count));

  const int64_t max_attempts = 100ll * params.count;
  while (static_cast<int>(corpus.items.size()) < params.count) {
    if (corpus.attempts >= max_attempts) {
      throw DatasetError("element quotas still unmet after " +
                         std::to_string(max_attempts) + " sampled molecules");
    }
    const uint64_t mol_seed =
        substream_seed(params.seed, static_cast<uint64_t>(corpus.attempts));
    ++corpus.attempts;

    MolGraph placed;
    Image img;
    LabelMaps maps;
    try {
      MolGraph g = random_molecule(mol_seed, gen);
      placed = place_in_canvas(g, params.style, params.rows, params.cols);
      const std::set<Element> els = elements_of(placed);
      const int slots_after =
          params.count - static_cast<int>(corpus.items.size()) - 1;
      if (!quota_feasible_after_accept(params.quota, corpus.images_containing,
                                       els, slots_after)) {
        continue;
      }
      img = rasterize(placed, params.style, params.rows, params.cols);
      maps = label_maps(placed, params.vocab, params.style, params.rows,
                        params.cols);
    } catch (const GenerationError&) {
      continue;
    } catch (const RenderError&) {
      continue;
    }

    for (const Atom& a : placed.atoms) {
      ++corpus.atom_counts[a.element];
    }
    for (Element e : elements_of(placed)) {
      ++corpus.images_containing[e];
    }
    corpus.items.push_back(LabeledImage{std::move(img), std::move(maps),
                                        std::move(placed), params.style});
  }
  return corpus;
}

std::string corpus_manifest_json(const Corpus& c) {
  ordered_json j;
  j["count"] = c.items.size();
  j["rows"] = c.rows;
  j["cols"] = c.cols;
  j["seed"] = c.seed;
  j["attempts"] = c.attempts;
  j["config_hash"] = c.config_hash;
  j["style"] = detail::style_to_json(c.style);
  j["vocabulary"] = detail::vocab_to_json(c.vocab);
  ordered_json counts = ordered_json::object();
  for (const auto& [el, n] : c.atom_counts) counts[element_symbol(el)] = n;
  j["atom_counts"] = counts;
  ordered_json containing = ordered_json::object();
  for (const auto& [el, n] : c.images_containing)
    containing[element_symbol(el)] = n;
  j["images_containing"] = containing;
  return j.dump(2) + "\n";
}

void save_corpus(const std::string& dir, const Corpus& c) {
  write_text_file(dir + "/manifest.json", corpus_manifest_json(c));
  for (size_t i = 0; i < c.items.size(); ++i) {
    const LabeledImage& item = c.items[i];
    const std::string stem = dir + "/" + item_stem(static_cast<int>(i));
    write_pgm(stem + ".pgm", item.x);
    write_label_pgm(stem + ".la.pgm", item.maps.la, item.maps.rows,
                    item.maps.cols);
    write_label_pgm(stem + ".lb.pgm", item.maps.lb, item.maps.rows,
                    item.maps.cols);
    write_label_pgm(stem + ".lc.pgm", item.maps.lc, item.maps.rows,
                    item.maps.cols);
    write_text_file(stem + ".json", graph_to_json(item.truth));
  }
}

Corpus load_corpus(const std::string& dir) {
  const std::string manifest_text = read_text_file(dir + "/manifest.json");
  ordered_json j;
  try {
    j = ordered_json::parse(manifest_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("corpus manifest: ") + e.what(), 0);
  }

  Corpus c;
  try {
    const size_t count = j.at("count").get<size_t>();
    c.rows = j.at("rows").get<int>();
    c.cols = j.at("cols").get<int>();
    c.seed = j.at("seed").get<uint64_t>();
    c.attempts = j.at("attempts").get<int64_t>();
    c.config_hash = j.at("config_hash").get<std::string>();
    c.style = detail::style_from_json(j.at("style"));
    c.vocab = detail::vocab_from_json(j.at("vocabulary"));
    c.items.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      const std::string stem = dir + "/" + item_stem(static_cast<int>(i));
      LabeledImage item;
      item.style = c.style;
      item.x = read_pgm(stem + ".pgm");
      int r = 0, col = 0;
      item.maps.la = read_label_pgm(stem + ".la.pgm", r, col);
      item.maps.rows = r;
      item.maps.cols = col;
      item.maps.lb = read_label_pgm(stem + ".lb.pgm", r, col);
      item.maps.lc = read_label_pgm(stem + ".lc.pgm", r, col);
      if (r != item.maps.rows || col != item.maps.cols ||
          item.x.rows != item.maps.rows || item.x.cols != item.maps.cols) {
        throw ParseError("label map dims disagree for " + stem, 0);
      }
      item.truth = graph_from_json(read_text_file(stem + ".json"));
      c.items.push_back(std::move(item));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("corpus manifest: ") + e.what(), 0);
  }

  for (const LabeledImage& item : c.items) {
    for (const Atom& a : item.truth.atoms) ++c.atom_counts[a.element];
    for (Element e : elements_of(item.truth)) ++c.images_containing[e];
  }
  return c;
}

}  // namespace ocsr
