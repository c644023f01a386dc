// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Embedded 5x7 bitmap font covering exactly the characters the renderer
// draws: element letters (B C F I N O P S plus lowercase l and r for Cl/Br)
// and charge signs. No system font dependency, so renders are reproducible
// everywhere. Each glyph row is a 5-bit mask, bit 4 = leftmost pixel.

#pragma once

#include <cstdint>

namespace ocsr {

inline constexpr int kGlyphCols = 5;
inline constexpr int kGlyphRows = 7;

struct Glyph {
  char ch;
  uint8_t row[kGlyphRows];
};

inline constexpr Glyph kFont5x7[] = {
    {'B', {0b11110, 0b10001, 0b10001, 0b11110, 0b10001, 0b10001, 0b11110}},
    {'C', {0b01110, 0b10001, 0b10000, 0b10000, 0b10000, 0b10001, 0b01110}},
    {'F', {0b11111, 0b10000, 0b10000, 0b11110, 0b10000, 0b10000, 0b10000}},
    {'I', {0b01110, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100, 0b01110}},
    {'N', {0b10001, 0b11001, 0b10101, 0b10011, 0b10001, 0b10001, 0b10001}},
    {'O', {0b01110, 0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b01110}},
    {'P', {0b11110, 0b10001, 0b10001, 0b11110, 0b10000, 0b10000, 0b10000}},
    {'S', {0b01111, 0b10000, 0b10000, 0b01110, 0b00001, 0b00001, 0b11110}},
    {'l', {0b01100, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100, 0b01110}},
    {'r', {0b00000, 0b00000, 0b10110, 0b11001, 0b10000, 0b10000, 0b10000}},
    {'+', {0b00000, 0b00100, 0b00100, 0b11111, 0b00100, 0b00100, 0b00000}},
    {'-', {0b00000, 0b00000, 0b00000, 0b11111, 0b00000, 0b00000, 0b00000}},
};

/// Glyph bitmap for ch, or nullptr when the font does not cover it.
inline const Glyph* find_glyph(char ch) {
  for (const Glyph& g : kFont5x7) {
    if (g.ch == ch) return &g;
  }
  return nullptr;
}

}  // namespace ocsr
