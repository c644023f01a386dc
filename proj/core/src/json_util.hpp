// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Internal JSON helpers for manifest files (not installed).

#pragma once

#include <nlohmann/json.hpp>

#include "ocsr/error.hpp"
#include "ocsr/render.hpp"
#include "ocsr/vocab.hpp"

namespace ocsr {
namespace detail {

using ordered_json = nlohmann::ordered_json;

inline ordered_json style_to_json(const RenderStyle& s) {
  ordered_json j;
  j["bond_length"] = s.bond_length;
  j["line_width"] = s.line_width;
  j["double_bond_gap"] = s.double_bond_gap;
  j["glyph_scale"] = s.glyph_scale;
  j["wedge_max_width"] = s.wedge_max_width;
  j["hash_count"] = s.hash_count;
  j["style_id"] = s.style_id;
  return j;
}

inline RenderStyle style_from_json(const ordered_json& j) {
  RenderStyle s;
  s.bond_length = j.at("bond_length").get<int>();
  s.line_width = j.at("line_width").get<int>();
  s.double_bond_gap = j.at("double_bond_gap").get<int>();
  s.glyph_scale = j.at("glyph_scale").get<int>();
  s.wedge_max_width = j.at("wedge_max_width").get<int>();
  s.hash_count = j.at("hash_count").get<int>();
  s.style_id = j.at("style_id").get<int>();
  return s;
}

inline ordered_json vocab_to_json(const Vocabulary& v) {
  ordered_json j;
  j["atoms"] = ordered_json::array();
  for (Element e : v.atoms) j["atoms"].push_back(element_symbol(e));
  j["bonds"] = ordered_json::array();
  for (BondLabel b : v.bonds) j["bonds"].push_back(bond_label_name(b));
  j["charges"] = v.charges;
  return j;
}

/// Reconstructs the exact stored class lists (Empty classes included).
inline Vocabulary vocab_from_json(const ordered_json& j) {
  Vocabulary v;
  for (const auto& a : j.at("atoms")) {
    const std::string sym = a.get<std::string>();
    if (sym == "*") {
      v.atoms.push_back(Element::Empty);
      continue;
    }
    auto e = element_from_symbol(sym);
    if (!e) throw Error("manifest vocabulary: unknown element " + sym);
    v.atoms.push_back(*e);
  }
  for (const auto& b : j.at("bonds")) {
    const std::string name = b.get<std::string>();
    bool found = false;
    for (int k = 0; k < kNumBondClasses; ++k) {
      const BondLabel lbl = static_cast<BondLabel>(k);
      if (name == bond_label_name(lbl)) {
        v.bonds.push_back(lbl);
        found = true;
        break;
      }
    }
    if (!found) throw Error("manifest vocabulary: unknown bond label " + name);
  }
  v.charges = j.at("charges").get<std::vector<int>>();
  v.check();
  return v;
}

}  // namespace detail
}  // namespace ocsr
