// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0
//
// MOLfile (CTfile V2000) emission. This is the lossless text output of the
// pipeline: unlike the SMILES writer it keeps wedge/hash stereo bonds and
// atom coordinates. Output is deterministic byte for byte: the header
// carries no timestamp, so equal graphs always produce equal files.

#pragma once

#include <string>

#include "ocsr/molgraph.hpp"

namespace ocsr {

/// Renders g as a V2000 MOLfile.
///
/// Pixel positions map to coordinates with one bond length equal to 1.5
/// units, x increasing with image column and y decreasing with image row
/// (so depictions keep the image orientation). `bond_length_pixels` fixes
/// the pixel length of one bond; pass 0 to infer it from the shortest
/// bond in the graph (graphs with unset positions emit all-zero
/// coordinates). Wedge bonds carry stereo flag 1 and hash bonds flag 6,
/// with the narrow/begin atom written first. Formal charges are listed in
/// an "M  CHG" block. Throws Error if g fails validation.
std::string to_molfile(const MolGraph& g, int bond_length_pixels = 0);

}  // namespace ocsr
