// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "ocsr/config.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include "ocsr/error.hpp"

namespace ocsr {
namespace {

bool is_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

/// Cuts a trailing comment, respecting double-quoted strings.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) {
      in_string = !in_string;
    } else if (line[i] == '#' && !in_string) {
      return line.substr(0, i);
    }
  }
  return line;
}

TomlValue parse_scalar(const std::string& text, size_t offset) {
  TomlValue v;
  if (text.empty()) throw ParseError("missing value", offset);

  if (text.front() == '"') {
    if (text.size() < 2 || text.back() != '"') {
      throw ParseError("unterminated string", offset);
    }
    v.kind = TomlValue::Kind::String;
    for (size_t i = 1; i + 1 < text.size(); ++i) {
      if (text[i] == '\\') {
        if (i + 2 >= text.size() || (text[i + 1] != '"' && text[i + 1] != '\\')) {
          throw ParseError("unsupported escape in string", offset + i);
        }
        v.s += text[++i];
      } else if (text[i] == '"') {
        throw ParseError("stray quote inside string", offset + i);
      } else {
        v.s += text[i];
      }
    }
    return v;
  }
  if (text == "true" || text == "false") {
    v.kind = TomlValue::Kind::Bool;
    v.b = (text == "true");
    return v;
  }

  // Number: integer unless it contains '.', 'e' or 'E'.
  const bool is_float = text.find_first_of(".eE") != std::string::npos &&
                        text.find_first_not_of("+-0123456789") != std::string::npos;
  char* end = nullptr;
  if (!is_float) {
    const long long i = std::strtoll(text.c_str(), &end, 10);
    if (end == text.c_str() + text.size() && end != text.c_str()) {
      v.kind = TomlValue::Kind::Int;
      v.i = i;
      return v;
    }
  }
  const double d = std::strtod(text.c_str(), &end);
  if (end == text.c_str() + text.size() && end != text.c_str()) {
    v.kind = TomlValue::Kind::Float;
    v.f = d;
    return v;
  }
  throw ParseError("cannot parse value '" + text + "'", offset);
}

TomlValue parse_value(const std::string& text, size_t offset) {
  if (!text.empty() && text.front() == '[') {
    if (text.back() != ']') throw ParseError("unterminated array", offset);
    TomlValue v;
    v.kind = TomlValue::Kind::Array;
    const std::string body = trim(text.substr(1, text.size() - 2));
    if (body.empty()) return v;
    // Split on commas outside strings.
    size_t start = 0;
    bool in_string = false;
    for (size_t i = 0; i <= body.size(); ++i) {
      if (i < body.size() && body[i] == '"' && (i == 0 || body[i - 1] != '\\')) {
        in_string = !in_string;
      }
      if (i == body.size() || (body[i] == ',' && !in_string)) {
        const std::string item = trim(body.substr(start, i - start));
        if (item.empty()) throw ParseError("empty array element", offset + i);
        v.array.push_back(parse_scalar(item, offset + start));
        start = i + 1;
      }
    }
    return v;
  }
  return parse_scalar(text, offset);
}

// --- typed accessors -------------------------------------------------------

[[noreturn]] void type_error(const std::string& key, const char* want) {
  throw ParseError("configuration key '" + key + "' must be " + want, 0);
}

int64_t need_int(const std::string& key, const TomlValue& v) {
  if (v.kind != TomlValue::Kind::Int) type_error(key, "an integer");
  return v.i;
}

double need_float(const std::string& key, const TomlValue& v) {
  if (v.kind == TomlValue::Kind::Int) return static_cast<double>(v.i);
  if (v.kind != TomlValue::Kind::Float) type_error(key, "a number");
  return v.f;
}

bool need_bool(const std::string& key, const TomlValue& v) {
  if (v.kind != TomlValue::Kind::Bool) type_error(key, "a boolean");
  return v.b;
}

std::string need_string(const std::string& key, const TomlValue& v) {
  if (v.kind != TomlValue::Kind::String) type_error(key, "a string");
  return v.s;
}

std::vector<std::string> need_string_array(const std::string& key,
                                           const TomlValue& v) {
  if (v.kind != TomlValue::Kind::Array) type_error(key, "an array of strings");
  std::vector<std::string> out;
  for (const TomlValue& e : v.array) {
    if (e.kind != TomlValue::Kind::String) type_error(key, "an array of strings");
    out.push_back(e.s);
  }
  return out;
}

std::vector<int> need_int_array(const std::string& key, const TomlValue& v) {
  if (v.kind != TomlValue::Kind::Array) type_error(key, "an array of integers");
  std::vector<int> out;
  for (const TomlValue& e : v.array) {
    if (e.kind != TomlValue::Kind::Int) type_error(key, "an array of integers");
    out.push_back(static_cast<int>(e.i));
  }
  return out;
}

std::string fmt_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_string_array(const std::vector<std::string>& a) {
  std::string out = "[";
  for (size_t i = 0; i < a.size(); ++i) {
    out += (i ? ", \"" : "\"") + a[i] + "\"";
  }
  return out + "]";
}

std::string fmt_int_array(const std::vector<int>& a) {
  std::string out = "[";
  for (size_t i = 0; i < a.size(); ++i) {
    out += (i ? ", " : "") + std::to_string(a[i]);
  }
  return out + "]";
}

}  // namespace

std::map<std::string, TomlValue> parse_toml_subset(const std::string& text) {
  std::map<std::string, TomlValue> table;
  std::string section;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    const size_t line_off = pos;
    const std::string line = trim(strip_comment(text.substr(pos, eol - pos)));
    pos = eol + 1;
    if (line.empty()) {
      if (eol == text.size()) break;
      continue;
    }

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ParseError("unterminated section header", line_off);
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ParseError("empty section name", line_off);
      for (char c : section) {
        if (!is_key_char(c)) {
          throw ParseError("bad character in section name", line_off);
        }
      }
    } else {
      const size_t eq = line.find('=');
      if (eq == std::string::npos) {
        throw ParseError("expected 'key = value'", line_off);
      }
      const std::string key = trim(line.substr(0, eq));
      if (key.empty()) throw ParseError("missing key", line_off);
      for (char c : key) {
        // '.' lets dotted keys stand in for a [section] header.
        if (!is_key_char(c) && c != '.') {
          throw ParseError("bad character in key", line_off);
        }
      }
      const std::string value = trim(line.substr(eq + 1));
      const std::string full = section.empty() ? key : section + "." + key;
      if (table.count(full)) {
        throw ParseError("duplicate key '" + full + "'", line_off);
      }
      table[full] = parse_value(value, line_off + eq + 1);
    }
    if (eol == text.size()) break;
  }
  return table;
}

RenderStyle RunConfig::style() const {
  RenderStyle s = RenderStyle::preset(style_id);
  s.bond_length = bond_length;
  return s;
}

Vocabulary RunConfig::vocabulary() const {
  return Vocabulary::from_names(vocab_atoms, vocab_bonds, vocab_charges);
}

GenParams RunConfig::gen_params() const {
  GenParams g;
  g.min_atoms = min_atoms;
  g.max_atoms = max_atoms;
  g.charge_prob = charge_prob;
  g.stereo_prob = stereo_prob;
  g.ring_prob = ring_prob;
  g.double_prob = double_prob;
  g.triple_prob = triple_prob;
  g.allowed_charges = vocab_charges;
  g.bond_length = bond_length;
  return g;
}

std::map<Element, int> RunConfig::element_quota() const {
  std::map<Element, int> out;
  for (const auto& [sym, n] : quota) {
    const auto e = element_from_symbol(sym);
    if (!e) throw ParseError("unknown element in quota: " + sym, 0);
    out[*e] = n;
  }
  return out;
}

void RunConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error("config: " + msg); };
  if (style_id < 1 || style_id > 3) fail("style_id must be 1, 2 or 3");
  if (bond_length < 16) fail("bond_length must be at least 16");
  if (rows < 32 || cols < 32) fail("canvas must be at least 32x32");
  if (min_atoms < 1 || max_atoms < min_atoms) {
    fail("need 1 <= min_atoms <= max_atoms");
  }
  for (double p : {charge_prob, stereo_prob, ring_prob, double_prob, triple_prob}) {
    if (p < 0.0 || p > 1.0) fail("probabilities must lie in [0, 1]");
  }
  if (splits.seg_train < 1 || splits.cls_train < 1 || splits.cls_val < 1 ||
      splits.test < 1) {
    fail("every split needs at least one image");
  }
  if (lr < 0.0) fail("learning rate must be non-negative");
  if (seg_steps < 0 || cls_steps < 0) fail("step counts must be non-negative");
  if (batch < 1) fail("batch size must be positive");
  if (hidden_seg < 1 || hidden_cls < 1) fail("hidden widths must be positive");
  if (data_dir.empty() || weights_dir.empty() || out_dir.empty()) {
    fail("paths must not be empty");
  }
  const Vocabulary v = vocabulary();  // throws on bad class names
  for (const auto& [el, n] : element_quota()) {
    if (n < 0) fail("quotas must be non-negative");
    if (!v.has_element(el)) {
      fail(std::string("quota element ") + element_symbol(el) +
           " is not in the vocabulary");
    }
  }
  style().check();
}

RunConfig config_from_toml(const std::string& text) {
  RunConfig cfg;
  const auto table = parse_toml_subset(text);
  for (const auto& [key, v] : table) {
    if (key == "seed") cfg.seed = static_cast<uint64_t>(need_int(key, v));
    else if (key == "render.style_id") cfg.style_id = int(need_int(key, v));
    else if (key == "render.bond_length") cfg.bond_length = int(need_int(key, v));
    else if (key == "render.rows") cfg.rows = int(need_int(key, v));
    else if (key == "render.cols") cfg.cols = int(need_int(key, v));
    else if (key == "vocab.atoms") cfg.vocab_atoms = need_string_array(key, v);
    else if (key == "vocab.bonds") cfg.vocab_bonds = need_string_array(key, v);
    else if (key == "vocab.charges") cfg.vocab_charges = need_int_array(key, v);
    else if (key == "gen.min_atoms") cfg.min_atoms = int(need_int(key, v));
    else if (key == "gen.max_atoms") cfg.max_atoms = int(need_int(key, v));
    else if (key == "gen.charge_prob") cfg.charge_prob = need_float(key, v);
    else if (key == "gen.stereo_prob") cfg.stereo_prob = need_float(key, v);
    else if (key == "gen.ring_prob") cfg.ring_prob = need_float(key, v);
    else if (key == "gen.double_prob") cfg.double_prob = need_float(key, v);
    else if (key == "gen.triple_prob") cfg.triple_prob = need_float(key, v);
    else if (key.rfind("quota.", 0) == 0) {
      cfg.quota[key.substr(6)] = int(need_int(key, v));
    }
    else if (key == "splits.seg_train") cfg.splits.seg_train = int(need_int(key, v));
    else if (key == "splits.cls_train") cfg.splits.cls_train = int(need_int(key, v));
    else if (key == "splits.cls_val") cfg.splits.cls_val = int(need_int(key, v));
    else if (key == "splits.test") cfg.splits.test = int(need_int(key, v));
    else if (key == "train.lr") cfg.lr = need_float(key, v);
    else if (key == "train.seg_steps") cfg.seg_steps = int(need_int(key, v));
    else if (key == "train.cls_steps") cfg.cls_steps = int(need_int(key, v));
    else if (key == "train.batch") cfg.batch = int(need_int(key, v));
    else if (key == "train.hidden_seg") cfg.hidden_seg = int(need_int(key, v));
    else if (key == "train.hidden_cls") cfg.hidden_cls = int(need_int(key, v));
    else if (key == "train.oracle_seg_for_cls") {
      cfg.oracle_seg_for_cls = need_bool(key, v);
    }
    else if (key == "paths.data_dir") cfg.data_dir = need_string(key, v);
    else if (key == "paths.weights_dir") cfg.weights_dir = need_string(key, v);
    else if (key == "paths.out_dir") cfg.out_dir = need_string(key, v);
    else throw ParseError("unknown configuration key '" + key + "'", 0);
  }
  cfg.validate();
  return cfg;
}

std::string canonical_config(const RunConfig& cfg) {
  std::string out;
  out += "seed = " + std::to_string(cfg.seed) + "\n";
  out += "render.style_id = " + std::to_string(cfg.style_id) + "\n";
  out += "render.bond_length = " + std::to_string(cfg.bond_length) + "\n";
  out += "render.rows = " + std::to_string(cfg.rows) + "\n";
  out += "render.cols = " + std::to_string(cfg.cols) + "\n";
  out += "vocab.atoms = " + fmt_string_array(cfg.vocab_atoms) + "\n";
  out += "vocab.bonds = " + fmt_string_array(cfg.vocab_bonds) + "\n";
  out += "vocab.charges = " + fmt_int_array(cfg.vocab_charges) + "\n";
  out += "gen.min_atoms = " + std::to_string(cfg.min_atoms) + "\n";
  out += "gen.max_atoms = " + std::to_string(cfg.max_atoms) + "\n";
  out += "gen.charge_prob = " + fmt_double(cfg.charge_prob) + "\n";
  out += "gen.stereo_prob = " + fmt_double(cfg.stereo_prob) + "\n";
  out += "gen.ring_prob = " + fmt_double(cfg.ring_prob) + "\n";
  out += "gen.double_prob = " + fmt_double(cfg.double_prob) + "\n";
  out += "gen.triple_prob = " + fmt_double(cfg.triple_prob) + "\n";
  for (const auto& [sym, n] : cfg.quota) {
    out += "quota." + sym + " = " + std::to_string(n) + "\n";
  }
  out += "splits.seg_train = " + std::to_string(cfg.splits.seg_train) + "\n";
  out += "splits.cls_train = " + std::to_string(cfg.splits.cls_train) + "\n";
  out += "splits.cls_val = " + std::to_string(cfg.splits.cls_val) + "\n";
  out += "splits.test = " + std::to_string(cfg.splits.test) + "\n";
  out += "train.lr = " + fmt_double(cfg.lr) + "\n";
  out += "train.seg_steps = " + std::to_string(cfg.seg_steps) + "\n";
  out += "train.cls_steps = " + std::to_string(cfg.cls_steps) + "\n";
  out += "train.batch = " + std::to_string(cfg.batch) + "\n";
  out += "train.hidden_seg = " + std::to_string(cfg.hidden_seg) + "\n";
  out += "train.hidden_cls = " + std::to_string(cfg.hidden_cls) + "\n";
  out += std::string("train.oracle_seg_for_cls = ") +
         (cfg.oracle_seg_for_cls ? "true" : "false") + "\n";
  return out;
}

std::string config_hash(const RunConfig& cfg) {
  const std::string text = canonical_config(cfg);
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ocsr
