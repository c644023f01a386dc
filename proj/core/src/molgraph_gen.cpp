// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "ocsr/molgraph_gen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>

#include "ocsr/error.hpp"
#include "ocsr/random.hpp"

namespace ocsr {

namespace {

// Honeycomb sites are the triangular lattice points (i, j) whose color
// (i - j) mod 3 is 0 or 1; color-2 points are removed, leaving every site
// with exactly three neighbors.
struct Site {
  int i = 0;
  int j = 0;
  friend auto operator<=>(const Site&, const Site&) = default;
};

int site_color(Site s) { return ((s.i - s.j) % 3 + 3) % 3; }

std::array<Site, 3> site_neighbors(Site s) {
  if (site_color(s) == 0) {
    return {Site{s.i + 1, s.j}, Site{s.i, s.j - 1}, Site{s.i - 1, s.j + 1}};
  }
  return {Site{s.i - 1, s.j}, Site{s.i, s.j + 1}, Site{s.i + 1, s.j - 1}};
}

PixelPos site_pixel(const HexGeometry& geo, Site s) {
  return PixelPos{geo.hy * s.j, geo.bond_length * s.i + geo.hx * s.j};
}

// Elements with a positive weight, paired with their weights, in class order.
struct WeightTable {
  std::vector<Element> elements;
  std::vector<double> weights;
};

WeightTable weight_table(const std::map<Element, double>& w) {
  WeightTable t;
  for (const auto& [el, wt] : w) {
    if (wt < 0.0) throw Error("negative element weight");
    if (wt > 0.0 && el != Element::Empty) {
      t.elements.push_back(el);
      t.weights.push_back(wt);
    }
  }
  if (t.elements.empty()) throw Error("element weights: need at least one positive weight");
  return t;
}

// Charge options per element that keep the molecule valid:
// N+ raises the cap, O- requires order sum <= 1, S tolerates -1/+1/-2.
std::vector<int> charge_options(Element el, int order_sum,
                                const std::vector<int>& allowed) {
  std::vector<int> opts;
  auto ok = [&](int c) {
    return std::find(allowed.begin(), allowed.end(), c) != allowed.end() &&
           order_sum <= max_valence(el, c);
  };
  switch (el) {
    case Element::N:
      if (ok(+1)) opts.push_back(+1);
      break;
    case Element::O:
      if (ok(-1)) opts.push_back(-1);
      break;
    case Element::S:
      for (int c : {-1, +1, -2})
        if (ok(c)) opts.push_back(c);
      break;
    case Element::P:
      if (ok(+1)) opts.push_back(+1);
      break;
    default:
      break;
  }
  return opts;
}

struct GrowAtom {
  Site site;
  Element element;
  int degree = 0;
};

int degree_cap(Element el) { return std::min(3, max_valence(el, 0)); }

// Graph distance between two atoms over the current bond list.
int graph_distance(const std::vector<std::pair<int, int>>& edges, int n, int a, int b) {
  std::vector<int> dist(n, -1);
  std::queue<int> q;
  dist[a] = 0;
  q.push(a);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    if (u == b) return dist[u];
    for (const auto& [x, y] : edges) {
      int v = -1;
      if (x == u) v = y;
      else if (y == u) v = x;
      if (v >= 0 && dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
    }
  }
  return -1;
}

struct Skeleton {
  std::vector<GrowAtom> atoms;
  std::vector<std::pair<int, int>> edges;  // tree edges + ring closures
};

// One growth attempt. Returns false when no atom can sprout any further.
bool grow_skeleton(Rng& rng, const GenParams& p, const WeightTable& wt,
                   int target, Skeleton& out) {
  out.atoms.clear();
  out.edges.clear();

  std::set<Site> occupied;
  const HexGeometry geo = hex_geometry(p.bond_length);

  auto sample_element = [&] {
    return wt.elements[rng.weighted_index(wt.weights)];
  };

  int min_r = 0, max_r = 0, min_c = 0, max_c = 0;
  auto span_ok = [&](PixelPos px) {
    const int nmin_r = std::min(min_r, px.row), nmax_r = std::max(max_r, px.row);
    const int nmin_c = std::min(min_c, px.col), nmax_c = std::max(max_c, px.col);
    if (p.max_span_rows > 0 && nmax_r - nmin_r > p.max_span_rows) return false;
    if (p.max_span_cols > 0 && nmax_c - nmin_c > p.max_span_cols) return false;
    return true;
  };

  out.atoms.push_back({Site{0, 0}, sample_element(), 0});
  occupied.insert(Site{0, 0});

  while (static_cast<int>(out.atoms.size()) < target) {
    // Atoms that can sprout: below their degree cap with a free in-span site.
    std::vector<std::pair<int, std::vector<Site>>> growable;
    for (size_t ai = 0; ai < out.atoms.size(); ++ai) {
      const GrowAtom& a = out.atoms[ai];
      if (a.degree >= degree_cap(a.element)) continue;
      std::vector<Site> free;
      for (Site nb : site_neighbors(a.site)) {
        if (occupied.count(nb)) continue;
        if (!span_ok(site_pixel(geo, nb))) continue;
        free.push_back(nb);
      }
      if (!free.empty()) growable.emplace_back(static_cast<int>(ai), std::move(free));
    }
    if (growable.empty()) return false;

    const auto& [parent, free] = growable[rng.uniform_index(static_cast<uint32_t>(growable.size()))];
    const Site child_site = free[rng.uniform_index(static_cast<uint32_t>(free.size()))];
    const PixelPos px = site_pixel(geo, child_site);
    min_r = std::min(min_r, px.row);
    max_r = std::max(max_r, px.row);
    min_c = std::min(min_c, px.col);
    max_c = std::max(max_c, px.col);

    const int child = static_cast<int>(out.atoms.size());
    out.atoms.push_back({child_site, sample_element(), 1});
    occupied.insert(child_site);
    out.atoms[parent].degree += 1;
    out.edges.emplace_back(parent, child);
  }

  // Optional ring closures: lattice-adjacent unbonded pairs whose graph
  // distance is 5 close into hexagons.
  if (p.ring_prob > 0.0) {
    const int n = static_cast<int>(out.atoms.size());
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        const auto nbs = site_neighbors(out.atoms[a].site);
        if (std::find(nbs.begin(), nbs.end(), out.atoms[b].site) == nbs.end()) continue;
        const bool bonded = std::any_of(out.edges.begin(), out.edges.end(), [&](auto e) {
          return (e.first == a && e.second == b) || (e.first == b && e.second == a);
        });
        if (bonded) continue;
        if (out.atoms[a].degree >= degree_cap(out.atoms[a].element)) continue;
        if (out.atoms[b].degree >= degree_cap(out.atoms[b].element)) continue;
        if (!rng.bernoulli(p.ring_prob)) continue;
        if (graph_distance(out.edges, n, a, b) != 5) continue;
        out.edges.emplace_back(a, b);
        out.atoms[a].degree += 1;
        out.atoms[b].degree += 1;
      }
    }
  }
  return true;
}

}  // namespace

HexGeometry hex_geometry(int bond_length) {
  if (bond_length < 2) throw Error("bond_length too small");
  const int L = bond_length;
  const int hx = (L + 1) / 2;
  // Smallest hy making both slanted edge vectors at least L long.
  auto need = [&](int dx) {
    const double v = std::sqrt(std::max(0.0, double(L) * L - double(dx) * dx));
    return static_cast<int>(std::ceil(v - 1e-9));
  };
  int hy = std::max(need(hx), need(L - hx));
  while (int64_t(hx) * hx + int64_t(hy) * hy < int64_t(L) * L ||
         int64_t(L - hx) * (L - hx) + int64_t(hy) * hy < int64_t(L) * L) {
    ++hy;
  }
  return HexGeometry{L, hx, hy};
}

std::map<Element, double> default_element_weights() {
  return {
      {Element::C, 0.70},  {Element::N, 0.10},  {Element::O, 0.10},
      {Element::S, 0.030}, {Element::F, 0.025}, {Element::Cl, 0.020},
      {Element::Br, 0.012}, {Element::I, 0.006}, {Element::P, 0.007},
  };
}

GenParams restrict_to_vocab(GenParams p, const Vocabulary& v) {
  if (p.element_weights.empty()) p.element_weights = default_element_weights();
  for (auto it = p.element_weights.begin(); it != p.element_weights.end();) {
    if (!v.has_element(it->first)) it = p.element_weights.erase(it);
    else ++it;
  }
  std::vector<int> charges;
  for (int c : p.allowed_charges) {
    if (v.has_charge(c)) charges.push_back(c);
  }
  p.allowed_charges = std::move(charges);
  if (p.allowed_charges.empty()) p.charge_prob = 0.0;
  if (!v.has_bond(BondLabel::Double)) p.double_prob = 0.0;
  if (!v.has_bond(BondLabel::Triple)) p.triple_prob = 0.0;
  if (!v.has_bond(BondLabel::WedgeBegin) && !v.has_bond(BondLabel::HashBegin)) {
    p.stereo_prob = 0.0;
  }
  return p;
}

MolGraph random_molecule(uint64_t seed, const GenParams& params) {
  if (params.min_atoms < 2) throw Error("min_atoms must be >= 2");
  if (params.max_atoms < params.min_atoms) throw Error("max_atoms < min_atoms");

  GenParams p = params;
  if (p.element_weights.empty()) p.element_weights = default_element_weights();
  const WeightTable wt = weight_table(p.element_weights);

  Rng rng(seed);
  const int target = rng.uniform_int(p.min_atoms, p.max_atoms);

  Skeleton sk;
  bool grown = false;
  for (int attempt = 0; attempt < p.max_attempts && !grown; ++attempt) {
    grown = grow_skeleton(rng, p, wt, target, sk);
  }
  if (!grown) {
    throw GenerationError("molecule growth failed after " +
                          std::to_string(p.max_attempts) + " attempts");
  }

  MolGraph g;
  const HexGeometry geo = hex_geometry(p.bond_length);
  for (const GrowAtom& a : sk.atoms) {
    g.atoms.push_back({a.element, 0, site_pixel(geo, a.site)});
  }
  for (auto [a, b] : sk.edges) {
    g.bonds.push_back({a, b, BondKind::Single});
  }

  // Bond-order upgrades where both endpoints have valence slack.
  auto slack = [&](int i) {
    return max_valence(g.atoms[i].element, g.atoms[i].charge) - g.order_sum(i);
  };
  std::vector<int> order(g.bonds.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  rng.shuffle(order);
  for (int bi : order) {
    Bond& b = g.bonds[bi];
    if (p.triple_prob > 0.0 && slack(b.a) >= 2 && slack(b.b) >= 2 &&
        rng.bernoulli(p.triple_prob)) {
      b.kind = BondKind::Triple;
      continue;
    }
    if (p.double_prob > 0.0 && slack(b.a) >= 1 && slack(b.b) >= 1 &&
        rng.bernoulli(p.double_prob)) {
      b.kind = BondKind::Double;
    }
  }

  // Stereo decoration of remaining single bonds.
  if (p.stereo_prob > 0.0) {
    for (Bond& b : g.bonds) {
      if (b.kind != BondKind::Single) continue;
      if (!rng.bernoulli(p.stereo_prob)) continue;
      const bool wedge = rng.bernoulli(0.5);
      if (rng.bernoulli(0.5)) std::swap(b.a, b.b);  // random direction
      b.kind = wedge ? BondKind::Wedge : BondKind::Hash;
    }
  }

  // Formal charges.
  if (p.charge_prob > 0.0) {
    for (size_t i = 0; i < g.atoms.size(); ++i) {
      if (!rng.bernoulli(p.charge_prob)) continue;
      auto opts = charge_options(g.atoms[i].element, g.order_sum(static_cast<int>(i)),
                                 p.allowed_charges);
      if (opts.empty()) continue;
      g.atoms[i].charge = opts[rng.uniform_index(static_cast<uint32_t>(opts.size()))];
    }
  }

  // Normalize positions to a (0,0)-anchored bounding box.
  int min_r = std::numeric_limits<int>::max(), min_c = std::numeric_limits<int>::max();
  for (const Atom& a : g.atoms) {
    min_r = std::min(min_r, a.pos.row);
    min_c = std::min(min_c, a.pos.col);
  }
  for (Atom& a : g.atoms) {
    a.pos.row -= min_r;
    a.pos.col -= min_c;
  }
  return g;
}

}  // namespace ocsr
