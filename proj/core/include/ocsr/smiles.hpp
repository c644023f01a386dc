// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0
//
// SMILES subset reader/writer. The supported grammar covers exactly what the
// pipeline emits: the nine supported elements, single/double/triple bonds,
// branches, numeric ring closures and bracket atoms with a formal charge.
// Aromatic (lowercase) forms, stereo descriptors and dot-disconnection are
// rejected with a clear error. See docs/smiles-subset.md for the grammar.

#pragma once

#include <string>

#include "ocsr/molgraph.hpp"

namespace ocsr {

/// Parses subset SMILES into a graph with unset (0,0) positions. Throws
/// ParseError (with byte offset) on grammar errors, unsupported features,
/// or when the resulting molecule fails validation.
MolGraph parse_smiles(const std::string& text);

/// Emits subset SMILES by lowest-index depth-first traversal, so equal
/// graphs with equal atom order give identical strings. Stereo wedge/hash
/// bonds are written as plain single bonds (use MOLfile output to keep
/// stereo). Throws Error if g is not valid.
std::string to_smiles(const MolGraph& g);

}  // namespace ocsr
