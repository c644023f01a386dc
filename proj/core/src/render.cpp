// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "ocsr/render.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ocsr/error.hpp"
#include "ocsr/font5x7.hpp"

namespace ocsr {

namespace {

struct Vec2 {
  double r = 0.0;
  double c = 0.0;
};

Vec2 operator-(Vec2 a, Vec2 b) { return {a.r - b.r, a.c - b.c}; }
Vec2 operator+(Vec2 a, Vec2 b) { return {a.r + b.r, a.c + b.c}; }
Vec2 operator*(Vec2 a, double k) { return {a.r * k, a.c * k}; }
double dot(Vec2 a, Vec2 b) { return a.r * b.r + a.c * b.c; }
double norm(Vec2 a) { return std::sqrt(dot(a, a)); }

Vec2 at(const MolGraph& g, int i) {
  return {double(g.atoms[i].pos.row), double(g.atoms[i].pos.col)};
}

void paint(Image& img, int r, int c) {
  if (!img.in_bounds(r, c)) {
    throw RenderError("ink outside canvas at (" + std::to_string(r) + "," +
                      std::to_string(c) + ")");
  }
  img.at(r, c) = 1.0f;
}

// Fills the thick segment p0 -> p1: longitudinal span [0, len] inclusive,
// perpendicular span [-w/2, w/2) half-open. The half-open side keeps pixel
// counts exact: a horizontal run of length n at width w inks (n+1)*w pixels.
void fill_thick_segment(Image& img, Vec2 p0, Vec2 p1, double width) {
  const Vec2 d = p1 - p0;
  const double len = norm(d);
  if (len < 1e-9) return;
  const Vec2 u{d.r / len, d.c / len};
  const Vec2 n{-u.c, u.r};
  const double half = width / 2.0;
  const int rmin = int(std::floor(std::min(p0.r, p1.r) - half - 1));
  const int rmax = int(std::ceil(std::max(p0.r, p1.r) + half + 1));
  const int cmin = int(std::floor(std::min(p0.c, p1.c) - half - 1));
  const int cmax = int(std::ceil(std::max(p0.c, p1.c) + half + 1));
  for (int r = rmin; r <= rmax; ++r) {
    for (int c = cmin; c <= cmax; ++c) {
      const Vec2 q = Vec2{double(r), double(c)} - p0;
      const double t = dot(q, u);
      if (t < 0.0 || t > len) continue;
      const double s = dot(q, n);
      if (s < -half || s >= half) continue;
      paint(img, r, c);
    }
  }
}

// Filled triangle via inclusive half-plane tests.
void fill_triangle(Image& img, Vec2 a, Vec2 b, Vec2 c) {
  auto edge = [](Vec2 p, Vec2 q, Vec2 x) {
    return (q.c - p.c) * (x.r - p.r) - (q.r - p.r) * (x.c - p.c);
  };
  const double area = edge(a, b, c);
  if (std::abs(area) < 1e-9) return;
  const double sign = area > 0 ? 1.0 : -1.0;
  const int rmin = int(std::floor(std::min({a.r, b.r, c.r})));
  const int rmax = int(std::ceil(std::max({a.r, b.r, c.r})));
  const int cmin = int(std::floor(std::min({a.c, b.c, c.c})));
  const int cmax = int(std::ceil(std::max({a.c, b.c, c.c})));
  for (int r = rmin; r <= rmax; ++r) {
    for (int col = cmin; col <= cmax; ++col) {
      const Vec2 x{double(r), double(col)};
      if (sign * edge(a, b, x) >= 0 && sign * edge(b, c, x) >= 0 &&
          sign * edge(c, a, x) >= 0) {
        paint(img, r, col);
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Glyph layout

struct GlyphBox {
  // Inclusive pixel bounds of everything the atom draws (letters + signs).
  // `core` is the letter-only box used for bond retraction.
  int top = 0, bottom = -1, left = 0, right = -1;
  bool has_letters = false;
};

struct GlyphPlan {
  // Letters and signs with their top-left pixel and scale.
  struct Placed {
    char ch;
    int top, left, scale;
  };
  std::vector<Placed> items;
  GlyphBox core;  // letter bbox (retraction target); empty for bare carbons
};

void include_box(GlyphBox& b, int top, int left, int scale) {
  const int bottom = top + kGlyphRows * scale - 1;
  const int right = left + kGlyphCols * scale - 1;
  if (!b.has_letters) {
    b.top = top;
    b.bottom = bottom;
    b.left = left;
    b.right = right;
    b.has_letters = true;
  } else {
    b.top = std::min(b.top, top);
    b.bottom = std::max(b.bottom, bottom);
    b.left = std::min(b.left, left);
    b.right = std::max(b.right, right);
  }
}

GlyphPlan plan_glyphs(const Atom& atom, const RenderStyle& st) {
  GlyphPlan plan;
  const int s = st.glyph_scale;
  const int w = kGlyphCols * s, h = kGlyphRows * s;

  std::string letters;
  if (atom.element != Element::C && atom.element != Element::Empty) {
    letters = element_symbol(atom.element);
  }
  int right_edge = atom.pos.col;  // where superscripts start
  int top_edge = atom.pos.row;
  if (!letters.empty()) {
    // First letter centered on the atom position; extra letters follow with
    // a one-column (scaled) gap.
    int left = atom.pos.col - w / 2;
    const int top = atom.pos.row - h / 2;
    for (char ch : letters) {
      plan.items.push_back({ch, top, left, s});
      include_box(plan.core, top, left, s);
      left += w + s;
    }
    right_edge = plan.core.right;
    top_edge = plan.core.top;
  }

  if (atom.charge != 0) {
    const int sc = std::max(1, s / 2);
    const char sign = atom.charge > 0 ? '+' : '-';
    const int count = std::abs(atom.charge) >= 2 ? 2 : 1;
    // Superscript: sign block centered on the letter-box top-right corner.
    int left = right_edge + 2 + sc;
    const int top = top_edge - (kGlyphRows * sc) / 2;
    for (int k = 0; k < count; ++k) {
      plan.items.push_back({sign, top, left, sc});
      left += kGlyphCols * sc + sc;
    }
  }
  return plan;
}

void draw_glyphs(Image& img, const GlyphPlan& plan) {
  for (const auto& it : plan.items) {
    const Glyph* gl = find_glyph(it.ch);
    if (!gl) throw RenderError(std::string("font misses glyph '") + it.ch + "'");
    for (int gr = 0; gr < kGlyphRows; ++gr) {
      for (int gc = 0; gc < kGlyphCols; ++gc) {
        if (!((gl->row[gr] >> (kGlyphCols - 1 - gc)) & 1)) continue;
        for (int dr = 0; dr < it.scale; ++dr) {
          for (int dc = 0; dc < it.scale; ++dc) {
            paint(img, it.top + gr * it.scale + dr, it.left + gc * it.scale + dc);
          }
        }
      }
    }
  }
}

// Moves `from` along from->to until it exits the retraction box (letter
// bbox padded by 2), so bonds stop short of glyph ink.
Vec2 retract(Vec2 from, Vec2 to, const GlyphBox& box) {
  if (!box.has_letters) return from;
  const double pad = 2.0;
  const double rlo = box.top - pad, rhi = box.bottom + pad;
  const double clo = box.left - pad, chi = box.right + pad;
  if (from.r < rlo || from.r > rhi || from.c < clo || from.c > chi) return from;
  const Vec2 d = to - from;
  const double len = norm(d);
  if (len < 1e-9) return from;
  const Vec2 u{d.r / len, d.c / len};
  double t_exit = len;
  if (u.r > 1e-12) t_exit = std::min(t_exit, (rhi - from.r) / u.r);
  if (u.r < -1e-12) t_exit = std::min(t_exit, (rlo - from.r) / u.r);
  if (u.c > 1e-12) t_exit = std::min(t_exit, (chi - from.c) / u.c);
  if (u.c < -1e-12) t_exit = std::min(t_exit, (clo - from.c) / u.c);
  t_exit = std::max(0.0, std::min(t_exit, len));
  return from + u * t_exit;
}

void draw_bond(Image& img, const Bond& bond, Vec2 pa, Vec2 pb,
               const RenderStyle& st) {
  const Vec2 d = pb - pa;
  const double len = norm(d);
  if (len < 1.0) return;  // glyphs swallowed the whole bond
  const Vec2 u{d.r / len, d.c / len};
  const Vec2 n{-u.c, u.r};
  const double lw = st.line_width;

  switch (bond.kind) {
    case BondKind::Single:
      fill_thick_segment(img, pa, pb, lw);
      break;
    case BondKind::Double: {
      const double off = st.double_bond_gap / 2.0;
      fill_thick_segment(img, pa + n * off, pb + n * off, lw);
      fill_thick_segment(img, pa + n * (-off), pb + n * (-off), lw);
      break;
    }
    case BondKind::Triple: {
      const double off = st.double_bond_gap;
      fill_thick_segment(img, pa, pb, lw);
      fill_thick_segment(img, pa + n * off, pb + n * off, lw);
      fill_thick_segment(img, pa + n * (-off), pb + n * (-off), lw);
      break;
    }
    case BondKind::Wedge: {
      const double half = st.wedge_max_width / 2.0;
      fill_triangle(img, pa, pb + n * half, pb + n * (-half));
      break;
    }
    case BondKind::Hash: {
      for (int k = 0; k < st.hash_count; ++k) {
        const double t = (k + 0.5) * len / st.hash_count;
        const double w = std::max(1.0, st.wedge_max_width * t / len);
        const Vec2 center = pa + u * t;
        fill_thick_segment(img, center + n * (-w / 2.0), center + n * (w / 2.0), lw);
      }
      break;
    }
  }
}

void check_canvas_preconditions(const MolGraph& g, const RenderStyle& st,
                                int rows, int cols) {
  st.check();
  if (rows <= 0 || cols <= 0) throw RenderError("empty canvas");
  auto violations = validate(g);
  if (!violations.empty()) {
    throw RenderError("refusing to draw invalid molecule: " + violations[0].message);
  }
  const int margin = st.bond_length / 2;
  for (int i = 0; i < g.num_atoms(); ++i) {
    const PixelPos p = g.atoms[i].pos;
    if (p.row < margin || p.row >= rows - margin || p.col < margin ||
        p.col >= cols - margin) {
      throw RenderError("atom " + std::to_string(i) +
                        " closer than half a bond length to the canvas edge");
    }
  }
}

// ---------------------------------------------------------------------------
// Label painting

void fill_label_disk(std::vector<uint8_t>& map, int rows, int cols, PixelPos p,
                     int radius, uint8_t cls) {
  const int r2 = radius * radius;
  for (int r = p.row - radius; r <= p.row + radius; ++r) {
    for (int c = p.col - radius; c <= p.col + radius; ++c) {
      const int dr = r - p.row, dc = c - p.col;
      if (dr * dr + dc * dc > r2) continue;
      if (r < 0 || r >= rows || c < 0 || c >= cols) {
        throw RenderError("label disk outside canvas");
      }
      map[size_t(r) * cols + c] = cls;
    }
  }
}

// Bond label rectangle with an optional class change at the midpoint
// (begin half t < len/2, end half t >= len/2).
void fill_label_rect(std::vector<uint8_t>& map, int rows, int cols, Vec2 p0,
                     Vec2 p1, double width, uint8_t begin_cls, uint8_t end_cls) {
  const Vec2 d = p1 - p0;
  const double len = norm(d);
  if (len < 1e-9) return;
  const Vec2 u{d.r / len, d.c / len};
  const Vec2 n{-u.c, u.r};
  const double half = width / 2.0;
  const int rmin = int(std::floor(std::min(p0.r, p1.r) - half - 1));
  const int rmax = int(std::ceil(std::max(p0.r, p1.r) + half + 1));
  const int cmin = int(std::floor(std::min(p0.c, p1.c) - half - 1));
  const int cmax = int(std::ceil(std::max(p0.c, p1.c) + half + 1));
  for (int r = rmin; r <= rmax; ++r) {
    for (int c = cmin; c <= cmax; ++c) {
      const Vec2 q = Vec2{double(r), double(c)} - p0;
      const double t = dot(q, u);
      if (t < 0.0 || t > len) continue;
      const double s = dot(q, n);
      if (s < -half || s >= half) continue;
      if (r < 0 || r >= rows || c < 0 || c >= cols) {
        throw RenderError("bond label outside canvas");
      }
      map[size_t(r) * cols + c] = (t < len / 2.0) ? begin_cls : end_cls;
    }
  }
}

}  // namespace

void RenderStyle::check() const {
  auto bad = [](const std::string& msg) { throw Error("RenderStyle: " + msg); };
  if (bond_length < 16) bad("bond_length must be >= 16");
  if (line_width < 1) bad("line_width must be >= 1");
  if (6 * line_width >= bond_length) {
    bad("atom label disks would touch: need 6*line_width < bond_length");
  }
  if (double_bond_gap <= line_width) bad("double_bond_gap must exceed line_width");
  if (glyph_scale < 1) bad("glyph_scale must be >= 1");
  if (wedge_max_width < 2) bad("wedge_max_width must be >= 2");
  if (hash_count < 2) bad("hash_count must be >= 2");
  if (style_id < 1 || style_id > 3) bad("style_id must be 1, 2 or 3");
}

RenderStyle RenderStyle::preset(int id) {
  RenderStyle st;
  st.style_id = id;
  switch (id) {
    case 1:  // regular
      st.line_width = 2;
      st.double_bond_gap = 8;
      st.glyph_scale = 2;
      st.wedge_max_width = 12;
      st.hash_count = 6;
      break;
    case 2:  // bold
      st.line_width = 3;
      st.double_bond_gap = 10;
      st.glyph_scale = 3;
      st.wedge_max_width = 14;
      st.hash_count = 5;
      break;
    case 3:  // fine
      st.line_width = 1;
      st.double_bond_gap = 6;
      st.glyph_scale = 2;
      st.wedge_max_width = 10;
      st.hash_count = 7;
      break;
    default:
      throw Error("RenderStyle preset id must be 1, 2 or 3");
  }
  st.check();
  return st;
}

MolGraph place_in_canvas(const MolGraph& g, const RenderStyle& style, int rows,
                         int cols) {
  style.check();
  if (g.num_atoms() == 0) throw RenderError("cannot place an empty molecule");
  int min_r = g.atoms[0].pos.row, max_r = min_r;
  int min_c = g.atoms[0].pos.col, max_c = min_c;
  for (const Atom& a : g.atoms) {
    min_r = std::min(min_r, a.pos.row);
    max_r = std::max(max_r, a.pos.row);
    min_c = std::min(min_c, a.pos.col);
    max_c = std::max(max_c, a.pos.col);
  }
  // Half a bond length of hard margin plus a little glyph slack.
  const int margin = (style.bond_length + 1) / 2 + 2 * style.glyph_scale;
  const int span_r = max_r - min_r, span_c = max_c - min_c;
  if (span_r > rows - 1 - 2 * margin || span_c > cols - 1 - 2 * margin) {
    throw RenderError("molecule span " + std::to_string(span_r) + "x" +
                      std::to_string(span_c) + " does not fit a " +
                      std::to_string(rows) + "x" + std::to_string(cols) +
                      " canvas with margin " + std::to_string(margin));
  }
  const int off_r = margin + (rows - 2 * margin - span_r) / 2 - min_r;
  const int off_c = margin + (cols - 2 * margin - span_c) / 2 - min_c;
  MolGraph placed = g;
  for (Atom& a : placed.atoms) {
    a.pos.row += off_r;
    a.pos.col += off_c;
  }
  return placed;
}

Image rasterize(const MolGraph& g, const RenderStyle& style, int rows, int cols) {
  check_canvas_preconditions(g, style, rows, cols);
  Image img(rows, cols);

  std::vector<GlyphPlan> plans;
  plans.reserve(g.atoms.size());
  for (const Atom& a : g.atoms) plans.push_back(plan_glyphs(a, style));

  for (const Bond& b : g.bonds) {
    const Vec2 pa = retract(at(g, b.a), at(g, b.b), plans[b.a].core);
    const Vec2 pb = retract(at(g, b.b), at(g, b.a), plans[b.b].core);
    draw_bond(img, b, pa, pb, style);
  }
  for (const GlyphPlan& plan : plans) draw_glyphs(img, plan);
  return img;
}

LabelMaps label_maps(const MolGraph& g, const Vocabulary& vocab,
                     const RenderStyle& style, int rows, int cols) {
  check_canvas_preconditions(g, style, rows, cols);
  LabelMaps maps(rows, cols);

  // Bonds first, in index order (later bonds overwrite earlier ones).
  for (const Bond& b : g.bonds) {
    const auto [begin_label, end_label] = vocab.bond_halves(b.kind);
    fill_label_rect(maps.lb, rows, cols, at(g, b.a), at(g, b.b),
                    double(style.bond_label_width()),
                    uint8_t(vocab.bond_class(begin_label)),
                    uint8_t(vocab.bond_class(end_label)));
  }
  for (const Atom& a : g.atoms) {
    fill_label_disk(maps.la, rows, cols, a.pos, style.atom_label_radius(),
                    uint8_t(vocab.atom_class(a.element)));
    fill_label_disk(maps.lc, rows, cols, a.pos, style.atom_label_radius(),
                    uint8_t(vocab.charge_class(a.charge)));
  }
  return maps;
}

}  // namespace ocsr
