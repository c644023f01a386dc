// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Deterministic molecule rasterization plus pixelwise ground-truth label
// maps. Both functions are pure: the same (graph, style, canvas) always
// yields byte-identical output. Drawing is binary ink (no anti-aliasing)
// so rasterized images are already valid binarization outputs.

#pragma once

#include "ocsr/image.hpp"
#include "ocsr/molgraph.hpp"
#include "ocsr/vocab.hpp"

namespace ocsr {

/// Drawing parameters. Three named presets give the same molecule visibly
/// different line weights, glyph sizes and double-bond spacing.
struct RenderStyle {
  int bond_length = 40;      // pixels per bond
  int line_width = 2;        // stroke thickness
  int double_bond_gap = 8;   // centerline spacing of parallel bond strokes
  int glyph_scale = 2;       // 5x7 font magnification
  int wedge_max_width = 12;  // widest extent of wedge/hash bonds
  int hash_count = 6;        // strokes per hash bond
  int style_id = 1;

  /// Radius of the atom-class (and charge-class) label disk.
  int atom_label_radius() const { return 3 * line_width; }
  /// Full width of the bond-class label rectangle.
  int bond_label_width() const { return 2 * line_width + 2; }

  /// Throws Error when a field breaks the documented invariants
  /// (bond_length >= 16, line_width >= 1, label disks smaller than half a
  /// bond so neighbouring atom labels cannot touch, etc.).
  void check() const;

  /// Presets 1 (regular), 2 (bold), 3 (fine).
  static RenderStyle preset(int id);
};

/// Translates g so its bounding box is centered in a rows x cols canvas.
/// Throws RenderError when the molecule cannot fit with the mandatory
/// margin of half a bond length around every atom.
MolGraph place_in_canvas(const MolGraph& g, const RenderStyle& style, int rows,
                         int cols);

/// Draws g in black ink on white paper (intensity 1 = ink). Requires a
/// valid graph whose atoms keep at least half a bond length of margin to
/// the canvas border; throws RenderError if ink would leave the canvas.
Image rasterize(const MolGraph& g, const RenderStyle& style, int rows, int cols);

/// Ground-truth class-index maps for g under the given vocabulary:
/// - la/lc: a disk of radius atom_label_radius() at every atom (carbons
///   included) holding the element / charge class;
/// - lb: a rectangle of width bond_label_width() along each bond holding
///   the bond class; wedge/hash rectangles split at the bond midpoint into
///   Begin (at the narrow/begin atom) and End halves.
/// Later-indexed bonds overwrite earlier ones; atom disks never contain
/// bond classes (separate maps). Throws like rasterize, plus Error when
/// the graph uses classes outside the vocabulary.
LabelMaps label_maps(const MolGraph& g, const Vocabulary& vocab,
                     const RenderStyle& style, int rows, int cols);

}  // namespace ocsr
