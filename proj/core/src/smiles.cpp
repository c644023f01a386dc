// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "ocsr/smiles.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "ocsr/error.hpp"

namespace ocsr {

namespace {

// ---------------------------------------------------------------------------
// Parsing

struct Parser {
  const std::string& s;
  size_t pos = 0;

  explicit Parser(const std::string& text) : s(text) {}

  [[noreturn]] void fail(const std::string& msg, size_t at) const {
    throw ParseError(msg, at);
  }

  bool done() const { return pos >= s.size(); }
  char peek() const { return s[pos]; }

  std::optional<Element> try_element() {
    if (done()) return std::nullopt;
    const char c = s[pos];
    // Two-letter symbols first.
    if (c == 'C' && pos + 1 < s.size() && s[pos + 1] == 'l') {
      pos += 2;
      return Element::Cl;
    }
    if (c == 'B' && pos + 1 < s.size() && s[pos + 1] == 'r') {
      pos += 2;
      return Element::Br;
    }
    switch (c) {
      case 'C': ++pos; return Element::C;
      case 'N': ++pos; return Element::N;
      case 'O': ++pos; return Element::O;
      case 'S': ++pos; return Element::S;
      case 'P': ++pos; return Element::P;
      case 'F': ++pos; return Element::F;
      case 'I': ++pos; return Element::I;
      default: break;
    }
    if (c == 'B') {
      fail("element 'B' is outside the supported element set", pos);
    }
    if (c == 'c' || c == 'n' || c == 'o' || c == 's' || c == 'p' || c == 'b') {
      fail("aromatic (lowercase) atoms are not supported", pos);
    }
    return std::nullopt;
  }

  // [symbol charge?]
  Element bracket_atom(int& charge) {
    const size_t open = pos;
    ++pos;  // consume '['
    auto el = try_element();
    if (!el) {
      if (done()) fail("unterminated bracket atom", open);
      if (s[pos] == 'H') fail("explicit hydrogens are not supported", pos);
      fail("unknown element symbol in bracket atom", pos);
    }
    charge = 0;
    if (!done() && (s[pos] == '+' || s[pos] == '-')) {
      const int sign = (s[pos] == '+') ? +1 : -1;
      ++pos;
      int mag = 1;
      if (!done() && s[pos] >= '0' && s[pos] <= '9') {
        mag = s[pos] - '0';
        ++pos;
      }
      charge = sign * mag;
    }
    if (done() || s[pos] != ']') {
      fail("expected ']' to close bracket atom", done() ? open : pos);
    }
    ++pos;
    return *el;
  }
};

BondKind bond_from_symbol(char c) {
  switch (c) {
    case '-': return BondKind::Single;
    case '=': return BondKind::Double;
    case '#': return BondKind::Triple;
    default: break;
  }
  throw Error("not a bond symbol");
}

struct RingOpen {
  int atom;
  std::optional<BondKind> kind;
  size_t at;  // byte offset of the opening digit, for error reporting
};

}  // namespace

MolGraph parse_smiles(const std::string& text) {
  Parser p(text);
  MolGraph g;

  // prev = atom awaiting the next connection; stack holds branch returns.
  int prev = -1;
  std::vector<int> stack;
  std::vector<size_t> open_paren_at;
  std::optional<BondKind> pending;
  size_t pending_at = 0;
  std::map<char, RingOpen> rings;

  auto add_bond = [&](int a, int b, BondKind k, size_t at) {
    if (g.find_bond(a, b)) p.fail("duplicate bond between atoms", at);
    g.bonds.push_back({a, b, k});
  };

  while (!p.done()) {
    const size_t at = p.pos;
    const char c = p.peek();

    if (c == '(') {
      if (prev < 0) p.fail("branch before any atom", at);
      if (pending) p.fail("bond symbol before '('", pending_at);
      stack.push_back(prev);
      open_paren_at.push_back(at);
      ++p.pos;
      continue;
    }
    if (c == ')') {
      if (stack.empty()) p.fail("unbalanced ')'", at);
      if (pending) p.fail("dangling bond symbol before ')'", pending_at);
      prev = stack.back();
      stack.pop_back();
      open_paren_at.pop_back();
      ++p.pos;
      continue;
    }
    if (c == '-' || c == '=' || c == '#') {
      if (prev < 0) p.fail("bond symbol before any atom", at);
      if (pending) p.fail("two bond symbols in a row", at);
      pending = bond_from_symbol(c);
      pending_at = at;
      ++p.pos;
      continue;
    }
    if (c >= '1' && c <= '9') {
      if (prev < 0) p.fail("ring closure before any atom", at);
      auto it = rings.find(c);
      if (it == rings.end()) {
        rings.emplace(c, RingOpen{prev, pending, at});
      } else {
        RingOpen open = it->second;
        rings.erase(it);
        if (open.atom == prev) p.fail("ring closure to the same atom", at);
        BondKind k = BondKind::Single;
        if (open.kind && pending && *open.kind != *pending) {
          p.fail("ring closure bond symbols disagree", at);
        }
        if (open.kind) k = *open.kind;
        if (pending) k = *pending;
        add_bond(open.atom, prev, k, at);
      }
      pending.reset();
      ++p.pos;
      continue;
    }
    if (c == '.') p.fail("dot-disconnected SMILES are not supported", at);
    if (c == '/' || c == '\\' || c == '@') {
      p.fail("stereo descriptors are not supported", at);
    }
    if (c == '%') p.fail("two-digit ring closures are not supported", at);

    // Otherwise this must be an atom.
    Element el;
    int charge = 0;
    if (c == '[') {
      el = p.bracket_atom(charge);
    } else {
      auto maybe = p.try_element();
      if (!maybe) p.fail("unknown symbol", at);
      el = *maybe;
    }
    const int idx = g.num_atoms();
    g.atoms.push_back({el, charge, PixelPos{0, 0}});
    if (prev >= 0) {
      add_bond(prev, idx, pending.value_or(BondKind::Single), at);
    } else if (pending) {
      p.fail("bond symbol before any atom", pending_at);
    }
    pending.reset();
    prev = idx;
  }

  if (!stack.empty()) {
    p.fail("unbalanced '(': branch opened at byte " +
               std::to_string(open_paren_at.back()) + " never closed",
           text.size());
  }
  if (pending) p.fail("dangling bond symbol at end of input", pending_at);
  if (!rings.empty()) {
    p.fail("unmatched ring closure digit '" +
               std::string(1, rings.begin()->first) + "'",
           rings.begin()->second.at);
  }
  if (g.num_atoms() == 0) p.fail("empty SMILES", 0);

  auto violations = validate(g);
  if (!violations.empty()) {
    p.fail("molecule fails validation: " + violations[0].message, text.size());
  }
  return g;
}

// ---------------------------------------------------------------------------
// Emission

namespace {

std::string atom_token(const Atom& a) {
  const std::string sym = element_symbol(a.element);
  if (a.charge == 0) return sym;
  std::string out = "[" + sym;
  out += (a.charge > 0) ? '+' : '-';
  const int mag = std::abs(a.charge);
  if (mag > 1) out += static_cast<char>('0' + mag);
  out += ']';
  return out;
}

// Bond symbol prefix; stereo kinds degrade to single (empty prefix).
std::string bond_token(BondKind k) {
  switch (k) {
    case BondKind::Double: return "=";
    case BondKind::Triple: return "#";
    default: return "";
  }
}

struct Emitter {
  const MolGraph& g;
  std::vector<int> parent;           // tree parent atom, -1 for root
  std::vector<std::vector<int>> kids;  // tree children, ascending
  // Ring closures per atom: (digit, bond index, opens_here).
  std::vector<std::vector<std::pair<char, int>>> ring_at;
  std::vector<char> ring_digit_of_bond;
  std::string out;

  explicit Emitter(const MolGraph& mg)
      : g(mg),
        parent(mg.num_atoms(), -1),
        kids(mg.num_atoms()),
        ring_at(mg.num_atoms()),
        ring_digit_of_bond(mg.num_bonds(), 0) {}

  void build_tree() {
    std::vector<char> seen(g.num_atoms(), 0);
    std::vector<int> order;
    std::vector<char> bond_in_tree(g.num_bonds(), 0);
    // Depth-first descent, lowest neighbour index first; tree children keep
    // discovery order so rings read along the cycle (C1CC1, not C(C1)C1).
    auto dfs = [&](auto&& self, int u) -> void {
      seen[u] = 1;
      order.push_back(u);
      std::vector<std::pair<int, int>> nbrs;  // (atom, bond index)
      for (int bi : g.bonds_of(u)) {
        const Bond& b = g.bonds[bi];
        nbrs.emplace_back(b.a == u ? b.b : b.a, bi);
      }
      std::sort(nbrs.begin(), nbrs.end());
      for (auto [v, bi] : nbrs) {
        if (!seen[v]) {
          parent[v] = u;
          bond_in_tree[bi] = 1;
          kids[u].push_back(v);
          self(self, v);
        }
      }
    };
    dfs(dfs, 0);

    // Assign ring-closure digits to non-tree edges in visit order.
    std::vector<int> visit_rank(g.num_atoms(), 0);
    for (size_t r = 0; r < order.size(); ++r) visit_rank[order[r]] = static_cast<int>(r);
    std::vector<char> in_use(10, 0);
    struct Open {
      int close_rank;
      char digit;
    };
    // Process atoms in visit order; open a digit at the earlier-ranked
    // endpoint and free it after the later-ranked endpoint emits it.
    std::vector<std::pair<int, int>> back_edges;  // (bond, rank of later end)
    for (int bi = 0; bi < g.num_bonds(); ++bi) {
      if (bond_in_tree[bi]) continue;
      const Bond& b = g.bonds[bi];
      back_edges.emplace_back(bi, std::max(visit_rank[b.a], visit_rank[b.b]));
    }
    // Open digits in order of the earlier endpoint, so nesting is stable.
    std::sort(back_edges.begin(), back_edges.end(), [&](auto x, auto y) {
      const Bond &bx = g.bonds[x.first], &by = g.bonds[y.first];
      const int ox = std::min(visit_rank[bx.a], visit_rank[bx.b]);
      const int oy = std::min(visit_rank[by.a], visit_rank[by.b]);
      if (ox != oy) return ox < oy;
      return x.second < y.second;
    });
    std::vector<Open> opens;
    for (auto [bi, close_rank] : back_edges) {
      const Bond& edge = g.bonds[bi];
      const int open_rank = std::min(visit_rank[edge.a], visit_rank[edge.b]);
      // A digit is reusable once its closing endpoint precedes this opening.
      for (auto it = opens.begin(); it != opens.end();) {
        if (it->close_rank < open_rank) {
          in_use[it->digit - '0'] = 0;
          it = opens.erase(it);
        } else {
          ++it;
        }
      }
      char digit = 0;
      for (char d = '1'; d <= '9'; ++d) {
        if (!in_use[d - '0']) {
          digit = d;
          break;
        }
      }
      if (digit == 0) throw Error("SMILES emission: more than 9 open ring closures");
      in_use[digit - '0'] = 1;
      opens.push_back({close_rank, digit});
      ring_digit_of_bond[bi] = digit;
      ring_at[edge.a].emplace_back(digit, bi);
      ring_at[edge.b].emplace_back(digit, bi);
    }
  }

  void emit_atom(int u) {
    out += atom_token(g.atoms[u]);
    for (auto [digit, bi] : ring_at[u]) {
      out += bond_token(g.bonds[bi].kind);
      out += digit;
    }
    const auto& ch = kids[u];
    for (size_t i = 0; i < ch.size(); ++i) {
      const int v = ch[i];
      const int bi = *g.find_bond(u, v);
      const bool last = (i + 1 == ch.size());
      if (!last) out += '(';
      out += bond_token(g.bonds[bi].kind);
      emit_atom(v);
      if (!last) out += ')';
    }
  }
};

}  // namespace

std::string to_smiles(const MolGraph& g) {
  auto violations = validate(g);
  if (!violations.empty()) {
    throw Error("to_smiles: invalid molecule: " + violations[0].message);
  }
  Emitter e(g);
  e.build_tree();
  e.emit_atom(0);
  return e.out;
}

}  // namespace ocsr
