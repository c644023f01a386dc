// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Procedural molecule generation. Molecules grow self-avoidingly on a
// honeycomb lattice whose integer edge vectors are all >= bond_length, so
// layouts are collision-free by construction: no two atoms closer than one
// bond length and no crossing bonds. Output is deterministic per seed.

#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "ocsr/molgraph.hpp"
#include "ocsr/vocab.hpp"

namespace ocsr {

struct GenParams {
  int min_atoms = 3;
  int max_atoms = 8;
  std::map<Element, double> element_weights;  // empty -> default_weights()
  double charge_prob = 0.0;  // per eligible atom
  double stereo_prob = 0.0;  // per single bond, half wedge / half hash
  double ring_prob = 0.0;    // per closable lattice pair (6-ring closures)
  double double_prob = 0.0;  // per bond with valence slack on both ends
  double triple_prob = 0.0;
  std::vector<int> allowed_charges = {+1, -1, -2};
  int bond_length = 40;      // lattice edge, pixels
  int max_span_rows = 0;     // 0 = unbounded; else bounding-box cap during growth
  int max_span_cols = 0;
  int max_attempts = 50;     // growth retries before GenerationError
};

/// Default element weights, carbon-heavy like typical organic molecules.
std::map<Element, double> default_element_weights();

/// Zeroes out every generation feature the vocabulary cannot label:
/// non-vocabulary element weights, absent charges, stereo/double/triple
/// probabilities without their bond classes.
GenParams restrict_to_vocab(GenParams p, const Vocabulary& v);

/// Grows a random valid molecule. Atom positions are pixel coordinates on the
/// lattice, translated so the minimum row and column are zero. Throws
/// GenerationError if growth fails max_attempts times (caller resamples seed).
MolGraph random_molecule(uint64_t seed, const GenParams& params);

/// Integer honeycomb geometry for a given bond length: edge vectors
/// (L, 0), (hx, hy) and (hx - L, hy), each of length >= L.
struct HexGeometry {
  int bond_length;
  int hx;
  int hy;
};
HexGeometry hex_geometry(int bond_length);

}  // namespace ocsr
