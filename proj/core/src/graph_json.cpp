// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "ocsr/graph_json.hpp"

#include <json.hpp>

#include "ocsr/error.hpp"

namespace ocsr {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

BondKind bond_kind_from_name(const std::string& s) {
  if (s == "single") return BondKind::Single;
  if (s == "double") return BondKind::Double;
  if (s == "triple") return BondKind::Triple;
  if (s == "wedge") return BondKind::Wedge;
  if (s == "hash") return BondKind::Hash;
  throw ParseError("unknown bond kind '" + s + "'", 0);
}

}  // namespace

const char* bond_kind_name(BondKind k) {
  switch (k) {
    case BondKind::Single: return "single";
    case BondKind::Double: return "double";
    case BondKind::Triple: return "triple";
    case BondKind::Wedge: return "wedge";
    case BondKind::Hash: return "hash";
  }
  return "?";
}

std::string graph_to_json(const MolGraph& g) {
  ordered_json atoms = ordered_json::array();
  for (const Atom& a : g.atoms) {
    atoms.push_back({{"el", element_symbol(a.element)},
                     {"chg", a.charge},
                     {"row", a.pos.row},
                     {"col", a.pos.col}});
  }
  ordered_json bonds = ordered_json::array();
  for (const Bond& b : g.bonds) {
    bonds.push_back({{"a", b.a}, {"b", b.b}, {"kind", bond_kind_name(b.kind)}});
  }
  ordered_json root;
  root["atoms"] = std::move(atoms);
  root["bonds"] = std::move(bonds);
  return root.dump(2) + "\n";
}

MolGraph graph_from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("bad JSON: ") + e.what(),
                     static_cast<size_t>(e.byte));
  }
  MolGraph g;
  try {
    for (const auto& a : root.at("atoms")) {
      const std::string el = a.at("el").get<std::string>();
      auto e = element_from_symbol(el);
      if (!e) throw ParseError("unknown element '" + el + "'", 0);
      g.atoms.push_back({*e, a.at("chg").get<int>(),
                         PixelPos{a.at("row").get<int>(), a.at("col").get<int>()}});
    }
    for (const auto& b : root.at("bonds")) {
      g.bonds.push_back({b.at("a").get<int>(), b.at("b").get<int>(),
                         bond_kind_from_name(b.at("kind").get<std::string>())});
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad graph JSON: ") + e.what(), 0);
  }
  return g;
}

}  // namespace ocsr
