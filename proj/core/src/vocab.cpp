// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "ocsr/vocab.hpp"

#include <algorithm>

#include "ocsr/error.hpp"

namespace ocsr {

namespace {

template <typename T>
int index_of(const std::vector<T>& v, T x) {
  auto it = std::find(v.begin(), v.end(), x);
  return it == v.end() ? -1 : static_cast<int>(it - v.begin());
}

}  // namespace

int Vocabulary::atom_class(Element e) const {
  const int i = index_of(atoms, e);
  if (i < 0) throw Error(std::string("element ") + element_symbol(e) + " not in vocabulary");
  return i;
}

int Vocabulary::bond_class(BondLabel b) const {
  const int i = index_of(bonds, b);
  if (i < 0) throw Error(std::string("bond label ") + bond_label_name(b) + " not in vocabulary");
  return i;
}

int Vocabulary::charge_class(int charge) const {
  const int i = index_of(charges, charge);
  if (i < 0) throw Error("charge " + std::to_string(charge) + " not in vocabulary");
  return i;
}

bool Vocabulary::has_element(Element e) const { return index_of(atoms, e) >= 0; }
bool Vocabulary::has_bond(BondLabel b) const { return index_of(bonds, b) >= 0; }
bool Vocabulary::has_charge(int c) const { return index_of(charges, c) >= 0; }

std::pair<BondLabel, BondLabel> Vocabulary::bond_halves(BondKind k) const {
  switch (k) {
    case BondKind::Single: return {BondLabel::Single, BondLabel::Single};
    case BondKind::Double: return {BondLabel::Double, BondLabel::Double};
    case BondKind::Triple: return {BondLabel::Triple, BondLabel::Triple};
    case BondKind::Wedge: return {BondLabel::WedgeBegin, BondLabel::WedgeEnd};
    case BondKind::Hash: return {BondLabel::HashBegin, BondLabel::HashEnd};
  }
  return {BondLabel::Single, BondLabel::Single};
}

void Vocabulary::check() const {
  if (atoms.empty() || atoms[0] != Element::Empty)
    throw Error("vocabulary: atom class 0 must be Empty");
  if (bonds.empty() || bonds[0] != BondLabel::Empty)
    throw Error("vocabulary: bond class 0 must be Empty");
  if (charges.empty() || charges[0] != 0)
    throw Error("vocabulary: charge class 0 must be neutral");
  auto dup = [](auto v) {
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) != v.end();
  };
  if (dup(atoms) || dup(bonds) || dup(charges))
    throw Error("vocabulary: duplicate class");
  const bool wb = has_bond(BondLabel::WedgeBegin), we = has_bond(BondLabel::WedgeEnd);
  const bool hb = has_bond(BondLabel::HashBegin), he = has_bond(BondLabel::HashEnd);
  if (wb != we || hb != he)
    throw Error("vocabulary: stereo Begin/End labels must come in pairs");
}

Vocabulary Vocabulary::full() {
  Vocabulary v;
  v.atoms = {Element::Empty, Element::C,  Element::N, Element::O, Element::S,
             Element::F,     Element::Cl, Element::Br, Element::I, Element::P};
  v.bonds = {BondLabel::Empty,      BondLabel::Single,   BondLabel::Double,
             BondLabel::Triple,     BondLabel::WedgeBegin, BondLabel::WedgeEnd,
             BondLabel::HashBegin,  BondLabel::HashEnd};
  v.charges = {0, +1, -1, +2, -2};
  return v;
}

const char* bond_label_name(BondLabel b) {
  switch (b) {
    case BondLabel::Empty: return "empty";
    case BondLabel::Single: return "single";
    case BondLabel::Double: return "double";
    case BondLabel::Triple: return "triple";
    case BondLabel::WedgeBegin: return "wedge_begin";
    case BondLabel::WedgeEnd: return "wedge_end";
    case BondLabel::HashBegin: return "hash_begin";
    case BondLabel::HashEnd: return "hash_end";
  }
  return "?";
}

Vocabulary Vocabulary::from_names(const std::vector<std::string>& elements,
                                  const std::vector<std::string>& bond_names,
                                  const std::vector<int>& charges) {
  Vocabulary v;
  v.atoms = {Element::Empty};
  for (const auto& s : elements) {
    auto e = element_from_symbol(s);
    if (!e) throw Error("unknown element symbol in vocabulary: " + s);
    v.atoms.push_back(*e);
  }
  v.bonds = {BondLabel::Empty};
  for (const auto& s : bond_names) {
    if (s == "single") v.bonds.push_back(BondLabel::Single);
    else if (s == "double") v.bonds.push_back(BondLabel::Double);
    else if (s == "triple") v.bonds.push_back(BondLabel::Triple);
    else if (s == "wedge") {
      v.bonds.push_back(BondLabel::WedgeBegin);
      v.bonds.push_back(BondLabel::WedgeEnd);
    } else if (s == "hash") {
      v.bonds.push_back(BondLabel::HashBegin);
      v.bonds.push_back(BondLabel::HashEnd);
    } else {
      throw Error("unknown bond name in vocabulary: " + s);
    }
  }
  v.charges = {0};
  for (int c : charges) {
    if (c != 0) v.charges.push_back(c);
  }
  v.check();
  return v;
}

bool vocab_covers(const Vocabulary& v, const MolGraph& g) {
  for (const Atom& a : g.atoms) {
    if (!v.has_element(a.element) || !v.has_charge(a.charge)) return false;
  }
  for (const Bond& b : g.bonds) {
    auto [h0, h1] = v.bond_halves(b.kind);
    if (!v.has_bond(h0) || !v.has_bond(h1)) return false;
  }
  return true;
}

}  // namespace ocsr
