// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "ocsr/molgraph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <tuple>

namespace ocsr {

const char* element_symbol(Element e) {
  switch (e) {
    case Element::Empty: return "*";
    case Element::C: return "C";
    case Element::N: return "N";
    case Element::O: return "O";
    case Element::S: return "S";
    case Element::F: return "F";
    case Element::Cl: return "Cl";
    case Element::Br: return "Br";
    case Element::I: return "I";
    case Element::P: return "P";
  }
  return "?";
}

std::optional<Element> element_from_symbol(const std::string& s) {
  static const std::pair<const char*, Element> table[] = {
      {"C", Element::C},   {"N", Element::N},  {"O", Element::O},
      {"S", Element::S},   {"F", Element::F},  {"Cl", Element::Cl},
      {"Br", Element::Br}, {"I", Element::I},  {"P", Element::P},
  };
  for (const auto& [sym, el] : table) {
    if (s == sym) return el;
  }
  return std::nullopt;
}

int max_valence(Element e, int charge) {
  switch (e) {
    case Element::C: return 4;
    case Element::N: return charge == +1 ? 4 : 3;
    case Element::O: return charge == -1 ? 1 : 2;
    case Element::S: return 6;
    case Element::P: return 5;
    case Element::F:
    case Element::Cl:
    case Element::Br:
    case Element::I: return 1;
    case Element::Empty: return 0;
  }
  return 0;
}

int bond_order(BondKind k) {
  switch (k) {
    case BondKind::Double: return 2;
    case BondKind::Triple: return 3;
    case BondKind::Single:
    case BondKind::Wedge:
    case BondKind::Hash: return 1;
  }
  return 1;
}

std::optional<int> MolGraph::find_bond(int a, int b) const {
  for (size_t i = 0; i < bonds.size(); ++i) {
    const Bond& bd = bonds[i];
    if ((bd.a == a && bd.b == b) || (bd.a == b && bd.b == a)) {
      return static_cast<int>(i);
    }
  }
  return std::nullopt;
}

std::vector<int> MolGraph::bonds_of(int i) const {
  std::vector<int> out;
  for (size_t k = 0; k < bonds.size(); ++k) {
    if (bonds[k].a == i || bonds[k].b == i) out.push_back(static_cast<int>(k));
  }
  return out;
}

int MolGraph::order_sum(int i) const {
  int sum = 0;
  for (const Bond& b : bonds) {
    if (b.a == i || b.b == i) sum += bond_order(b.kind);
  }
  return sum;
}

bool MolGraph::contains_element(Element e) const {
  return std::any_of(atoms.begin(), atoms.end(),
                     [e](const Atom& a) { return a.element == e; });
}

namespace {

bool valid_charge(int c) { return c == 0 || c == 1 || c == -1 || c == 2 || c == -2; }

}  // namespace

std::vector<Violation> validate(const MolGraph& g) {
  std::vector<Violation> out;
  const int n = g.num_atoms();

  if (n == 0) {
    out.push_back({Violation::Rule::NoAtoms, -1, "graph has no atoms"});
    return out;
  }

  for (int i = 0; i < n; ++i) {
    const Atom& a = g.atoms[i];
    if (a.element == Element::Empty) {
      out.push_back({Violation::Rule::EmptyElement, i,
                     "atom " + std::to_string(i) + " has element Empty"});
    }
    if (!valid_charge(a.charge)) {
      out.push_back({Violation::Rule::BadCharge, i,
                     "atom " + std::to_string(i) + " has charge " +
                         std::to_string(a.charge)});
    }
  }

  std::set<std::pair<int, int>> seen_pairs;
  bool indices_ok = true;
  for (size_t k = 0; k < g.bonds.size(); ++k) {
    const Bond& b = g.bonds[k];
    const int ki = static_cast<int>(k);
    if (b.a < 0 || b.a >= n || b.b < 0 || b.b >= n) {
      out.push_back({Violation::Rule::BadAtomIndex, ki,
                     "bond " + std::to_string(k) + " references atom out of range"});
      indices_ok = false;
      continue;
    }
    if (b.a == b.b) {
      out.push_back({Violation::Rule::SelfBond, ki,
                     "bond " + std::to_string(k) + " joins atom " +
                         std::to_string(b.a) + " to itself"});
      continue;
    }
    auto key = std::minmax(b.a, b.b);
    if (!seen_pairs.insert(key).second) {
      out.push_back({Violation::Rule::DuplicateBond, ki,
                     "bond " + std::to_string(k) + " duplicates pair (" +
                         std::to_string(key.first) + "," +
                         std::to_string(key.second) + ")"});
    }
  }

  if (indices_ok) {
    for (int i = 0; i < n; ++i) {
      const Atom& a = g.atoms[i];
      if (a.element == Element::Empty) continue;
      const int sum = g.order_sum(i);
      const int cap = max_valence(a.element, a.charge);
      if (sum > cap) {
        out.push_back({Violation::Rule::Valence, i,
                       "valence violation at atom " + std::to_string(i) + ": " +
                           element_symbol(a.element) + " order sum " +
                           std::to_string(sum) + " exceeds " +
                           std::to_string(cap)});
      }
    }

    // Connectivity via BFS from atom 0.
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (const Bond& b : g.bonds) {
        int v = -1;
        if (b.a == u) v = b.b;
        else if (b.b == u) v = b.a;
        if (v >= 0 && !seen[v]) {
          seen[v] = 1;
          ++reached;
          q.push(v);
        }
      }
    }
    if (reached != n) {
      out.push_back({Violation::Rule::Disconnected, -1,
                     "connectivity violation: " + std::to_string(n - reached) +
                         " atom(s) unreachable from atom 0"});
    }
  }

  return out;
}

// ---------------------------------------------------------------------------

namespace {

double pos_dist(const PixelPos& a, const PixelPos& b) {
  const double dr = a.row - b.row;
  const double dc = a.col - b.col;
  return std::sqrt(dr * dr + dc * dc);
}

std::string bond_desc(const MolGraph& g, const Bond& b) {
  return "(" + std::to_string(b.a) + "," + std::to_string(b.b) + ")";
}

const char* kind_name(BondKind k) {
  switch (k) {
    case BondKind::Single: return "single";
    case BondKind::Double: return "double";
    case BondKind::Triple: return "triple";
    case BondKind::Wedge: return "wedge";
    case BondKind::Hash: return "hash";
  }
  return "?";
}

}  // namespace

GraphDiff graph_equal(const MolGraph& g1, const MolGraph& g2, double pos_tol) {
  GraphDiff res;
  const int n1 = g1.num_atoms();
  const int n2 = g2.num_atoms();

  // Greedy matching on sorted pair distances.
  struct Cand {
    double d;
    int i, j;
  };
  std::vector<Cand> cands;
  cands.reserve(static_cast<size_t>(n1) * n2);
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      const double d = pos_dist(g1.atoms[i].pos, g2.atoms[j].pos);
      if (d <= pos_tol) cands.push_back({d, i, j});
    }
  }
  std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    return std::tie(a.d, a.i, a.j) < std::tie(b.d, b.i, b.j);
  });

  std::vector<int> match1(n1, -1), match2(n2, -1);
  for (const Cand& c : cands) {
    if (match1[c.i] < 0 && match2[c.j] < 0) {
      match1[c.i] = c.j;
      match2[c.j] = c.i;
    }
  }

  for (int i = 0; i < n1; ++i) {
    if (match1[i] < 0) {
      res.diffs.push_back("atom " + std::to_string(i) +
                          " of first graph unmatched within tolerance");
    }
  }
  for (int j = 0; j < n2; ++j) {
    if (match2[j] < 0) {
      res.diffs.push_back("atom " + std::to_string(j) +
                          " of second graph unmatched within tolerance");
    }
  }

  for (int i = 0; i < n1; ++i) {
    const int j = match1[i];
    if (j < 0) continue;
    const Atom& a1 = g1.atoms[i];
    const Atom& a2 = g2.atoms[j];
    if (a1.element != a2.element) {
      res.diffs.push_back("atom " + std::to_string(i) + "<->" + std::to_string(j) +
                          " element mismatch: " + element_symbol(a1.element) +
                          " vs " + element_symbol(a2.element));
    }
    if (a1.charge != a2.charge) {
      res.diffs.push_back("atom " + std::to_string(i) + "<->" + std::to_string(j) +
                          " charge mismatch: " + std::to_string(a1.charge) +
                          " vs " + std::to_string(a2.charge));
    }
  }

  // Bond sets under the matching. A stereo bond matches only if its direction
  // maps begin -> begin.
  for (const Bond& b : g1.bonds) {
    const int ma = match1[b.a];
    const int mb = match1[b.b];
    if (ma < 0 || mb < 0) continue;  // already reported via unmatched atoms
    auto idx = g2.find_bond(ma, mb);
    if (!idx) {
      res.diffs.push_back("bond " + bond_desc(g1, b) +
                          " of first graph missing in second");
      continue;
    }
    const Bond& b2 = g2.bonds[*idx];
    if (b.kind != b2.kind) {
      res.diffs.push_back("bond " + bond_desc(g1, b) + " kind mismatch: " +
                          kind_name(b.kind) + " vs " + kind_name(b2.kind));
      continue;
    }
    if (b.kind == BondKind::Wedge || b.kind == BondKind::Hash) {
      const bool same_dir = (match1[b.a] == b2.a && match1[b.b] == b2.b);
      if (!same_dir) {
        res.diffs.push_back("bond " + bond_desc(g1, b) +
                            " stereo direction mismatch");
      }
    }
  }
  for (const Bond& b : g2.bonds) {
    const int ma = match2[b.a];
    const int mb = match2[b.b];
    if (ma < 0 || mb < 0) continue;
    if (!g1.find_bond(ma, mb)) {
      res.diffs.push_back("bond " + bond_desc(g2, b) +
                          " of second graph missing in first");
    }
  }

  res.equal = res.diffs.empty() && n1 == n2;
  if (n1 != n2 && res.diffs.empty()) {
    res.diffs.push_back("atom counts differ: " + std::to_string(n1) + " vs " +
                        std::to_string(n2));
  }
  return res;
}

}  // namespace ocsr
