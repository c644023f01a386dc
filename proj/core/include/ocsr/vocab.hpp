// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Class vocabularies. A dataset (and every model trained on it) fixes a
// sub-vocabulary of the full atom/bond/charge class sets; class indices are
// positions in these lists and index 0 is always the Empty class.

#pragma once

#include <string>
#include <vector>

#include "ocsr/molgraph.hpp"

namespace ocsr {

struct Vocabulary {
  // atoms[0] == Element::Empty, bonds[0] == BondLabel::Empty,
  // charges[0] == 0. Stereo bond labels must appear as Begin/End pairs.
  std::vector<Element> atoms;
  std::vector<BondLabel> bonds;
  std::vector<int> charges;

  int n_a() const { return static_cast<int>(atoms.size()); }
  int n_b() const { return static_cast<int>(bonds.size()); }
  int n_c() const { return static_cast<int>(charges.size()); }

  /// Class index of an element / bond label / charge value. Throws Error if
  /// the value is not part of this vocabulary.
  int atom_class(Element e) const;
  int bond_class(BondLabel b) const;
  int charge_class(int charge) const;

  bool has_element(Element e) const;
  bool has_bond(BondLabel b) const;
  bool has_charge(int charge) const;

  /// Label classes of a graph bond: {kind, kind} for plain bonds and
  /// {Begin, End} for stereo bonds (begin half at atom `a`).
  std::pair<BondLabel, BondLabel> bond_halves(BondKind k) const;

  /// Throws Error unless the Empty-first / Begin-End-pair rules hold.
  void check() const;

  /// The full 10/8/5-class vocabulary.
  static Vocabulary full();

  /// Built from symbol lists, e.g. ({"C","N","O"}, {"single","double"}, {}).
  /// Empty classes are implicit and always prepended.
  static Vocabulary from_names(const std::vector<std::string>& elements,
                               const std::vector<std::string>& bonds,
                               const std::vector<int>& charges);
};

const char* bond_label_name(BondLabel b);

/// Is this graph expressible in the vocabulary? (all elements, bond labels
/// and charges present)
bool vocab_covers(const Vocabulary& v, const MolGraph& g);

}  // namespace ocsr
