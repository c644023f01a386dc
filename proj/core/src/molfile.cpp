// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "ocsr/molfile.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <vector>

#include "ocsr/error.hpp"

namespace ocsr {

namespace {

int bond_type_code(BondKind k) {
  switch (k) {
    case BondKind::Double: return 2;
    case BondKind::Triple: return 3;
    default: return 1;  // single, wedge, hash
  }
}

int bond_stereo_code(BondKind k) {
  switch (k) {
    case BondKind::Wedge: return 1;  // "up"
    case BondKind::Hash: return 6;   // "down"
    default: return 0;
  }
}

double infer_unit(const MolGraph& g) {
  double best = 0.0;
  for (const Bond& b : g.bonds) {
    const double dr = g.atoms[b.a].pos.row - g.atoms[b.b].pos.row;
    const double dc = g.atoms[b.a].pos.col - g.atoms[b.b].pos.col;
    const double d = std::sqrt(dr * dr + dc * dc);
    if (d > 0.0 && (best == 0.0 || d < best)) best = d;
  }
  return best;
}

void append_line(std::string& out, const char* fmt, ...) {
  char buf[256];
  va_list args;
  va_start(args, fmt);
  vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  out += buf;
  out += '\n';
}

}  // namespace

std::string to_molfile(const MolGraph& g, int bond_length_pixels) {
  auto violations = validate(g);
  if (!violations.empty()) {
    throw Error("to_molfile: invalid molecule: " + violations[0].message);
  }

  double unit = bond_length_pixels > 0 ? double(bond_length_pixels) : infer_unit(g);
  const double scale = unit > 0.0 ? 1.5 / unit : 0.0;

  std::string out;
  out += "molecule\n";
  out += "  ocsr\n";
  out += "\n";
  append_line(out, "%3d%3d  0  0  0  0  0  0  0  0999 V2000",
              g.num_atoms(), g.num_bonds());

  for (const Atom& a : g.atoms) {
    const double x = a.pos.col * scale;
    const double y = (0.0 - a.pos.row) * scale;
    append_line(out,
                "%10.4f%10.4f%10.4f %-3s 0  0  0  0  0  0  0  0  0  0  0  0",
                x, y, 0.0, element_symbol(a.element));
  }
  for (const Bond& b : g.bonds) {
    append_line(out, "%3d%3d%3d%3d  0  0  0", b.a + 1, b.b + 1,
                bond_type_code(b.kind), bond_stereo_code(b.kind));
  }

  // Charged atoms, up to eight per M CHG record.
  std::vector<std::pair<int, int>> charged;  // (1-based atom, charge)
  for (int i = 0; i < g.num_atoms(); ++i) {
    if (g.atoms[i].charge != 0) charged.emplace_back(i + 1, g.atoms[i].charge);
  }
  for (size_t start = 0; start < charged.size(); start += 8) {
    const size_t n = std::min<size_t>(8, charged.size() - start);
    char buf[32];
    snprintf(buf, sizeof(buf), "M  CHG%3d", static_cast<int>(n));
    out += buf;
    for (size_t k = start; k < start + n; ++k) {
      snprintf(buf, sizeof(buf), " %3d %3d", charged[k].first, charged[k].second);
      out += buf;
    }
    out += '\n';
  }
  out += "M  END\n";
  return out;
}

}  // namespace ocsr
