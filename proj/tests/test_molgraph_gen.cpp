// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "ocsr/molgraph_gen.hpp"

#include <doctest.h>

#include <cstdint>
#include <set>

#include "ocsr/error.hpp"

using namespace ocsr;

namespace {

int64_t dist2(PixelPos a, PixelPos b) {
  const int64_t dr = a.row - b.row, dc = a.col - b.col;
  return dr * dr + dc * dc;
}

GenParams rich_params() {
  GenParams p;
  p.min_atoms = 3;
  p.max_atoms = 10;
  p.charge_prob = 0.15;
  p.stereo_prob = 0.15;
  p.ring_prob = 0.5;
  p.double_prob = 0.3;
  p.triple_prob = 0.1;
  p.bond_length = 40;
  return p;
}

}  // namespace

TEST_CASE("hex_geometry: every lattice edge is at least bond_length long") {
  for (int L = 2; L <= 120; ++L) {
    CAPTURE(L);
    HexGeometry g = hex_geometry(L);
    CHECK(g.hx >= 0);
    CHECK(g.hy >= 1);
    // Edge vectors: (0, L), (hy, hx) and (hy, hx - L) as (row, col).
    CHECK(int64_t(g.hx) * g.hx + int64_t(g.hy) * g.hy >= int64_t(L) * L);
    CHECK(int64_t(L - g.hx) * (L - g.hx) + int64_t(g.hy) * g.hy >= int64_t(L) * L);
    // Stay close to a regular hexagon: edges no longer than ~1.2 L.
    const double lim = 1.2 * L + 2.0;
    CHECK(double(g.hx) * g.hx + double(g.hy) * g.hy <= lim * lim);
  }
}

TEST_CASE("hex_geometry: known small case") {
  HexGeometry g = hex_geometry(40);
  CHECK(g.hx == 20);
  CHECK(g.hy == 35);  // 20^2 + 35^2 = 1625 >= 1600
}

TEST_CASE("random_molecule is deterministic per seed") {
  const GenParams p = rich_params();
  for (uint64_t seed : {0ull, 1ull, 42ull, 0xdeadbeefull}) {
    MolGraph a = random_molecule(seed, p);
    MolGraph b = random_molecule(seed, p);
    REQUIRE(a.num_atoms() == b.num_atoms());
    REQUIRE(a.num_bonds() == b.num_bonds());
    for (int i = 0; i < a.num_atoms(); ++i) {
      CHECK(a.atoms[i].element == b.atoms[i].element);
      CHECK(a.atoms[i].charge == b.atoms[i].charge);
      CHECK(a.atoms[i].pos == b.atoms[i].pos);
    }
    for (int i = 0; i < a.num_bonds(); ++i) {
      CHECK(a.bonds[i].a == b.bonds[i].a);
      CHECK(a.bonds[i].b == b.bonds[i].b);
      CHECK(a.bonds[i].kind == b.bonds[i].kind);
    }
  }
}

TEST_CASE("different seeds explore different molecules") {
  const GenParams p = rich_params();
  std::set<std::pair<int, int>> shapes;  // (atoms, bonds) fingerprints
  for (uint64_t seed = 0; seed < 40; ++seed) {
    MolGraph g = random_molecule(seed, p);
    shapes.insert({g.num_atoms(), g.num_bonds()});
  }
  CHECK(shapes.size() >= 5);
}

TEST_CASE("generated molecules are valid, in range, and collision-free") {
  const GenParams p = rich_params();
  const int64_t L2 = int64_t(p.bond_length) * p.bond_length;
  const HexGeometry geo = hex_geometry(p.bond_length);
  const int64_t max_edge2 = int64_t(geo.hx) * geo.hx + int64_t(geo.hy) * geo.hy;

  int stereo_seen = 0, multi_seen = 0, charge_seen = 0, ring_seen = 0;
  for (uint64_t seed = 0; seed < 400; ++seed) {
    CAPTURE(seed);
    MolGraph g = random_molecule(seed, p);

    auto vs = validate(g);
    REQUIRE_MESSAGE(vs.empty(), (vs.empty() ? "" : vs[0].message));
    CHECK(g.num_atoms() >= p.min_atoms);
    CHECK(g.num_atoms() <= p.max_atoms);
    if (g.num_bonds() >= g.num_atoms()) ++ring_seen;

    // Positions normalized to a zero-anchored bounding box.
    int min_r = g.atoms[0].pos.row, min_c = g.atoms[0].pos.col;
    for (const Atom& a : g.atoms) {
      min_r = std::min(min_r, a.pos.row);
      min_c = std::min(min_c, a.pos.col);
    }
    CHECK(min_r == 0);
    CHECK(min_c == 0);

    // No two atoms closer than one bond length; bonds join lattice
    // neighbours so their pixel length is one of the edge lengths.
    for (int i = 0; i < g.num_atoms(); ++i) {
      for (int j = i + 1; j < g.num_atoms(); ++j) {
        CHECK(dist2(g.atoms[i].pos, g.atoms[j].pos) >= L2);
      }
    }
    for (const Bond& b : g.bonds) {
      const int64_t d2 = dist2(g.atoms[b.a].pos, g.atoms[b.b].pos);
      CHECK(d2 >= L2);
      CHECK(d2 <= max_edge2);
      if (b.kind == BondKind::Wedge || b.kind == BondKind::Hash) ++stereo_seen;
      if (b.kind == BondKind::Double || b.kind == BondKind::Triple) ++multi_seen;
    }
    for (const Atom& a : g.atoms) {
      if (a.charge != 0) ++charge_seen;
    }
  }
  // The decoration probabilities are high enough that each feature must
  // appear somewhere in 400 samples.
  CHECK(stereo_seen > 0);
  CHECK(multi_seen > 0);
  CHECK(charge_seen > 0);
  CHECK(ring_seen > 0);
}

TEST_CASE("span caps keep molecules inside the requested box") {
  GenParams p = rich_params();
  p.min_atoms = 6;
  p.max_atoms = 12;
  p.max_span_rows = 160;
  p.max_span_cols = 160;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    CAPTURE(seed);
    MolGraph g = random_molecule(seed, p);
    int max_r = 0, max_c = 0;
    for (const Atom& a : g.atoms) {
      max_r = std::max(max_r, a.pos.row);
      max_c = std::max(max_c, a.pos.col);
    }
    CHECK(max_r <= p.max_span_rows);
    CHECK(max_c <= p.max_span_cols);
  }
}

TEST_CASE("growth failure raises GenerationError") {
  GenParams p;
  p.min_atoms = 20;
  p.max_atoms = 20;
  p.bond_length = 40;
  p.max_span_rows = 80;  // box far too small for 20 atoms
  p.max_span_cols = 80;
  p.max_attempts = 5;
  CHECK_THROWS_AS(random_molecule(7, p), GenerationError);
}

TEST_CASE("parameter validation") {
  GenParams p;
  p.min_atoms = 1;
  CHECK_THROWS_AS(random_molecule(0, p), Error);
  p.min_atoms = 5;
  p.max_atoms = 4;
  CHECK_THROWS_AS(random_molecule(0, p), Error);
  CHECK_THROWS_AS(hex_geometry(1), Error);
}

TEST_CASE("restrict_to_vocab trims generation features") {
  Vocabulary v = Vocabulary::from_names({"C", "N", "O"}, {"single", "double"}, {});
  GenParams p = rich_params();
  GenParams q = restrict_to_vocab(p, v);

  for (const auto& [el, w] : q.element_weights) {
    CHECK(v.has_element(el));
  }
  CHECK(q.element_weights.count(Element::C) == 1);
  CHECK(q.element_weights.count(Element::S) == 0);
  CHECK(q.stereo_prob == 0.0);
  CHECK(q.triple_prob == 0.0);
  CHECK(q.double_prob == p.double_prob);
  CHECK(q.charge_prob == 0.0);  // no charge classes -> no charges
  CHECK(q.allowed_charges.empty());

  // Generated molecules stay inside the vocabulary.
  for (uint64_t seed = 0; seed < 60; ++seed) {
    MolGraph g = random_molecule(seed, q);
    CHECK(vocab_covers(v, g));
  }
}

TEST_CASE("stereo_prob = 1 converts every single bond") {
  GenParams p;
  p.min_atoms = 4;
  p.max_atoms = 8;
  p.stereo_prob = 1.0;
  for (uint64_t seed = 0; seed < 30; ++seed) {
    MolGraph g = random_molecule(seed, p);
    for (const Bond& b : g.bonds) {
      CHECK(b.kind != BondKind::Single);
    }
  }
}

TEST_CASE("smallest molecules: two-atom chains are well-formed") {
  GenParams p;
  p.min_atoms = 2;
  p.max_atoms = 2;
  MolGraph g = random_molecule(3, p);
  CHECK(g.num_atoms() == 2);
  CHECK(g.num_bonds() == 1);
  CHECK(is_valid(g));
}
