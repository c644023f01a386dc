// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Molecular graph data model. A MolGraph is the unit the whole pipeline
// revolves around: the generator produces one, the renderer draws one, and
// the assembler reconstructs one from network outputs. Graphs are plain
// value types; treat them as immutable once built.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ocsr {

/// Element vocabulary. Class indices are stable: Empty is always 0 and the
/// remaining symbols keep this declaration order in the full vocabulary.
enum class Element : uint8_t {
  Empty = 0,
  C = 1,
  N = 2,
  O = 3,
  S = 4,
  F = 5,
  Cl = 6,
  Br = 7,
  I = 8,
  P = 9,
};

/// Number of atom classes including Empty (n_a of the full vocabulary).
inline constexpr int kNumElementClasses = 10;

/// Graph-side bond kind. Wedge and Hash are directed a -> b (the narrow end
/// of a wedge and the short hash strokes sit at atom `a`).
enum class BondKind : uint8_t { Single, Double, Triple, Wedge, Hash };

/// Label-side bond classes. Stereo bonds occupy two classes so that the
/// begin/end halves of the drawn bond encode its direction.
enum class BondLabel : uint8_t {
  Empty = 0,
  Single = 1,
  Double = 2,
  Triple = 3,
  WedgeBegin = 4,
  WedgeEnd = 5,
  HashBegin = 6,
  HashEnd = 7,
};

/// Number of bond classes including Empty (n_b of the full vocabulary).
inline constexpr int kNumBondClasses = 8;

/// Charge classes: Empty (neutral), +1, -1, +2, -2.
inline constexpr int kNumChargeClasses = 5;
inline constexpr int kChargeValues[kNumChargeClasses] = {0, +1, -1, +2, -2};

const char* element_symbol(Element e);
std::optional<Element> element_from_symbol(const std::string& s);

/// Maximum bond-order sum for an element at a given formal charge.
/// Base values: C 4, N 3, O 2, S 6, P 5, halogens 1; N(+1) -> 4, O(-1) -> 1.
int max_valence(Element e, int charge);

struct PixelPos {
  int row = 0;
  int col = 0;
  friend bool operator==(const PixelPos&, const PixelPos&) = default;
};

struct Atom {
  Element element = Element::C;
  int charge = 0;  // one of {0, +1, -1, +2, -2}
  PixelPos pos;    // unset (0,0) for parsed-only molecules
};

struct Bond {
  int a = 0;
  int b = 0;
  BondKind kind = BondKind::Single;
};

/// Integer bond order used for valence accounting (stereo bonds count 1).
int bond_order(BondKind k);

struct MolGraph {
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;

  int num_atoms() const { return static_cast<int>(atoms.size()); }
  int num_bonds() const { return static_cast<int>(bonds.size()); }

  /// Index of the bond joining a and b (either order), or nullopt.
  std::optional<int> find_bond(int a, int b) const;

  /// Bond indices incident to atom i.
  std::vector<int> bonds_of(int i) const;

  /// Sum of bond orders at atom i.
  int order_sum(int i) const;

  bool contains_element(Element e) const;
};

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  enum class Rule {
    BadAtomIndex,     // bond endpoint out of range
    SelfBond,         // bond with a == b
    DuplicateBond,    // more than one bond on an unordered atom pair
    EmptyElement,     // atom with element Empty
    BadCharge,        // charge outside {0, +-1, +-2}
    Valence,          // bond-order sum exceeds max_valence
    Disconnected,     // graph has more than one component
    NoAtoms,          // empty graph
  };
  Rule rule;
  int index;  // atom or bond index; -1 for whole-graph rules
  std::string message;
};

/// Checks every MolGraph invariant. Empty result means the graph is valid.
/// Violations are data, not failures: callers decide how to react.
std::vector<Violation> validate(const MolGraph& g);

inline bool is_valid(const MolGraph& g) { return validate(g).empty(); }

// ---------------------------------------------------------------------------
// Position-based graph comparison

struct GraphDiff {
  bool equal = false;
  std::vector<std::string> diffs;
};

/// Compares two graphs by greedy nearest-position atom matching: candidate
/// pairs are sorted by distance and taken greedily while the distance is
/// <= pos_tol, each atom used at most once. Equal iff the matching is perfect
/// and every matched pair agrees on element and charge and the induced bond
/// sets agree on type and stereo direction.
GraphDiff graph_equal(const MolGraph& g1, const MolGraph& g2, double pos_tol);

}  // namespace ocsr
