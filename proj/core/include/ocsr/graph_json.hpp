// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0
//
// JSON sidecar serialization of molecular graphs. Every rendered dataset
// image stores its ground truth in this format, and inference writes its
// reconstruction the same way, so the two can be diffed directly:
//   {"atoms":[{"el":"C","chg":0,"row":12,"col":40},...],
//    "bonds":[{"a":0,"b":1,"kind":"single"},...]}

#pragma once

#include <string>

#include "ocsr/molgraph.hpp"

namespace ocsr {

/// Serializes g (2-space indented, keys in the documented order).
std::string graph_to_json(const MolGraph& g);

/// Parses the sidecar format. Throws ParseError on malformed JSON or
/// unknown element / bond-kind names. The result is not validated as a
/// molecule; call validate() if needed.
MolGraph graph_from_json(const std::string& text);

const char* bond_kind_name(BondKind k);

}  // namespace ocsr
