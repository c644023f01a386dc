// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "ocsr/config.hpp"
#include "ocsr/error.hpp"
#include "ocsr/render.hpp"
#include "ocsr/vocab.hpp"

using namespace ocsr;

TEST_CASE("toml subset parses scalars, strings, arrays and comments") {
  const std::string text =
      "# top comment\n"
      "seed = 7\n"
      "\n"
      "[render]\n"
      "style_id = 2   # inline comment\n"
      "bond_length = 32\n"
      "\n"
      "[gen]\n"
      "charge_prob = 0.25\n"
      "ring_prob = 1e-1\n"
      "\n"
      "[train]\n"
      "oracle_seg_for_cls = true\n"
      "\n"
      "[paths]\n"
      "data_dir = \"my data # not a comment\"\n"
      "\n"
      "[vocab]\n"
      "atoms = [\"C\", \"O\"]\n"
      "charges = [1, -1]\n";
  const auto t = parse_toml_subset(text);
  CHECK(t.at("seed").kind == TomlValue::Kind::Int);
  CHECK(t.at("seed").i == 7);
  CHECK(t.at("render.style_id").i == 2);
  CHECK(t.at("render.bond_length").i == 32);
  CHECK(t.at("gen.charge_prob").kind == TomlValue::Kind::Float);
  CHECK(t.at("gen.charge_prob").f == doctest::Approx(0.25));
  CHECK(t.at("gen.ring_prob").f == doctest::Approx(0.1));
  CHECK(t.at("train.oracle_seg_for_cls").kind == TomlValue::Kind::Bool);
  CHECK(t.at("train.oracle_seg_for_cls").b == true);
  CHECK(t.at("paths.data_dir").kind == TomlValue::Kind::String);
  CHECK(t.at("paths.data_dir").s == "my data # not a comment");
  REQUIRE(t.at("vocab.atoms").kind == TomlValue::Kind::Array);
  REQUIRE(t.at("vocab.atoms").array.size() == 2);
  CHECK(t.at("vocab.atoms").array[0].s == "C");
  CHECK(t.at("vocab.atoms").array[1].s == "O");
  REQUIRE(t.at("vocab.charges").array.size() == 2);
  CHECK(t.at("vocab.charges").array[0].i == 1);
  CHECK(t.at("vocab.charges").array[1].i == -1);
}

TEST_CASE("toml subset rejects malformed input") {
  CHECK_THROWS_AS((void)parse_toml_subset("no equals sign\n"), ParseError);
  CHECK_THROWS_AS((void)parse_toml_subset("[unclosed\n"), ParseError);
  CHECK_THROWS_AS((void)parse_toml_subset("[]\nk = 1\n"), ParseError);
  CHECK_THROWS_AS((void)parse_toml_subset("k = \"open\n"), ParseError);
  CHECK_THROWS_AS((void)parse_toml_subset("k = [1, 2\n"), ParseError);
  CHECK_THROWS_AS((void)parse_toml_subset("k = [1,, 2]\n"), ParseError);
  CHECK_THROWS_AS((void)parse_toml_subset("k = twelve\n"), ParseError);
  CHECK_THROWS_AS((void)parse_toml_subset("k = 1\nk = 2\n"), ParseError);
  CHECK_THROWS_AS((void)parse_toml_subset("bad key = 1\n"), ParseError);
  CHECK_THROWS_AS((void)parse_toml_subset(" = 5\n"), ParseError);
}

TEST_CASE("empty text and missing trailing newline both work") {
  CHECK(parse_toml_subset("").empty());
  CHECK(parse_toml_subset("# only a comment").empty());
  const auto t = parse_toml_subset("seed = 3");
  CHECK(t.at("seed").i == 3);
}

TEST_CASE("config defaults apply when keys are omitted") {
  const RunConfig cfg = config_from_toml("seed = 9\n");
  CHECK(cfg.seed == 9);
  CHECK(cfg.style_id == 1);
  CHECK(cfg.bond_length == 40);
  CHECK(cfg.rows == 256);
  CHECK(cfg.cols == 256);
  CHECK(cfg.vocab_atoms.size() == 9);
  CHECK(cfg.vocab_bonds.size() == 5);
  CHECK(cfg.vocab_charges.size() == 4);
  CHECK(cfg.splits.seg_train == 20);
  CHECK(cfg.batch == 8);
  CHECK(cfg.data_dir == "data");

  const RunConfig empty = config_from_toml("");
  CHECK(empty.seed == 1);
}

TEST_CASE("config overrides and quota section are applied") {
  const std::string text =
      "seed = 42\n"
      "[render]\n"
      "style_id = 3\n"
      "bond_length = 24\n"
      "rows = 128\n"
      "cols = 128\n"
      "[vocab]\n"
      "atoms = [\"C\", \"N\", \"O\"]\n"
      "bonds = [\"single\", \"double\"]\n"
      "charges = []\n"
      "[gen]\n"
      "min_atoms = 2\n"
      "max_atoms = 5\n"
      "charge_prob = 0.0\n"
      "[quota]\n"
      "N = 4\n"
      "O = 2\n"
      "[train]\n"
      "lr = 0.005\n"
      "oracle_seg_for_cls = true\n"
      "[paths]\n"
      "out_dir = \"results\"\n";
  const RunConfig cfg = config_from_toml(text);
  CHECK(cfg.seed == 42);
  CHECK(cfg.style_id == 3);
  CHECK(cfg.bond_length == 24);
  CHECK(cfg.rows == 128);
  CHECK(cfg.vocab_atoms == std::vector<std::string>{"C", "N", "O"});
  CHECK(cfg.vocab_bonds == std::vector<std::string>{"single", "double"});
  CHECK(cfg.vocab_charges.empty());
  CHECK(cfg.min_atoms == 2);
  CHECK(cfg.max_atoms == 5);
  CHECK(cfg.charge_prob == 0.0);
  CHECK(cfg.lr == doctest::Approx(0.005));
  CHECK(cfg.oracle_seg_for_cls == true);
  CHECK(cfg.out_dir == "results");
  CHECK(cfg.data_dir == "data");  // untouched default

  const auto q = cfg.element_quota();
  REQUIRE(q.size() == 2);
  CHECK(q.at(Element::N) == 4);
  CHECK(q.at(Element::O) == 2);

  const RenderStyle s = cfg.style();
  CHECK(s.bond_length == 24);

  const Vocabulary v = cfg.vocabulary();
  CHECK(v.atoms.size() == 4);   // Empty + C, N, O
  CHECK(v.bonds.size() == 3);   // Empty + single, double (no stereo halves)
  CHECK(v.charges.size() == 1); // Empty only

  const GenParams g = cfg.gen_params();
  CHECK(g.min_atoms == 2);
  CHECK(g.max_atoms == 5);
  CHECK(g.bond_length == 24);
  CHECK(g.charge_prob == 0.0);
}

TEST_CASE("unknown keys and wrong types are rejected") {
  CHECK_THROWS_AS((void)config_from_toml("sede = 1\n"), ParseError);
  CHECK_THROWS_AS((void)config_from_toml("[render]\nstylid = 1\n"), ParseError);
  CHECK_THROWS_AS((void)config_from_toml("[render]\nstyle_id = \"one\"\n"),
                  ParseError);
  CHECK_THROWS_AS((void)config_from_toml("[train]\nlr = \"fast\"\n"), ParseError);
  CHECK_THROWS_AS((void)config_from_toml("[train]\noracle_seg_for_cls = 1\n"),
                  ParseError);
  CHECK_THROWS_AS((void)config_from_toml("[vocab]\natoms = [1, 2]\n"), ParseError);
  CHECK_THROWS_AS((void)config_from_toml("[vocab]\ncharges = [\"+1\"]\n"),
                  ParseError);
  CHECK_THROWS_AS((void)config_from_toml("[paths]\ndata_dir = 5\n"), ParseError);
  // Integer is acceptable where a float is expected.
  const RunConfig cfg = config_from_toml("[gen]\ncharge_prob = 0\n");
  CHECK(cfg.charge_prob == 0.0);
}

TEST_CASE("validation rejects out-of-range settings") {
  CHECK_THROWS_AS((void)config_from_toml("[render]\nstyle_id = 4\n"), Error);
  CHECK_THROWS_AS((void)config_from_toml("[render]\nbond_length = 8\n"), Error);
  CHECK_THROWS_AS((void)config_from_toml("[render]\nrows = 16\n"), Error);
  CHECK_THROWS_AS((void)config_from_toml("[gen]\nmin_atoms = 6\nmax_atoms = 3\n"),
                  Error);
  CHECK_THROWS_AS((void)config_from_toml("[gen]\ncharge_prob = 1.5\n"), Error);
  CHECK_THROWS_AS((void)config_from_toml("[splits]\ntest = 0\n"), Error);
  CHECK_THROWS_AS((void)config_from_toml("[train]\nbatch = 0\n"), Error);
  CHECK_THROWS_AS((void)config_from_toml("[train]\nhidden_seg = 0\n"), Error);
  CHECK_THROWS_AS((void)config_from_toml("[vocab]\natoms = [\"Xx\"]\n"), Error);
  CHECK_THROWS_AS((void)config_from_toml("[quota]\nXx = 1\n"), Error);
  // Quota for an element outside the vocabulary is rejected up front.
  CHECK_THROWS_AS(
      (void)config_from_toml("[vocab]\natoms = [\"C\"]\n[quota]\nN = 1\n"), Error);
  CHECK_THROWS_AS((void)config_from_toml("[paths]\nout_dir = \"\"\n"), Error);
}

TEST_CASE("canonical form is stable and covers every field") {
  const RunConfig cfg = config_from_toml(
      "seed = 5\n[quota]\nO = 3\nN = 1\n[train]\nlr = 0.001\n");
  const std::string canon = canonical_config(cfg);
  CHECK(canon.find("seed = 5\n") != std::string::npos);
  CHECK(canon.find("render.style_id = 1\n") != std::string::npos);
  CHECK(canon.find("vocab.atoms = [\"C\", \"N\", \"O\", \"S\", \"F\", \"Cl\", "
                   "\"Br\", \"I\", \"P\"]\n") != std::string::npos);
  CHECK(canon.find("vocab.charges = [1, -1, 2, -2]\n") != std::string::npos);
  CHECK(canon.find("quota.N = 1\n") != std::string::npos);
  CHECK(canon.find("quota.O = 3\n") != std::string::npos);
  CHECK(canon.find("train.lr = 0.001\n") != std::string::npos);
  CHECK(canon.find("train.oracle_seg_for_cls = false\n") != std::string::npos);
  // Paths stay out of the canonical form: relocating artifact directories
  // must not change the experiment identity.
  CHECK(canon.find("paths.") == std::string::npos);
  // Quota order is alphabetical regardless of the order keys appeared in.
  CHECK(canon.find("quota.N") < canon.find("quota.O"));
  // Re-parsing the canonical form reproduces the same canonical form.
  CHECK(canonical_config(config_from_toml(canon)) == canon);
}

TEST_CASE("config hash separates settings and ignores formatting") {
  const RunConfig a = config_from_toml("seed = 5\n");
  const RunConfig b = config_from_toml("# different text\nseed = 5   # same\n");
  const RunConfig c = config_from_toml("seed = 6\n");
  const RunConfig d = config_from_toml("seed = 5\n[train]\nbatch = 4\n");
  const RunConfig e = config_from_toml("seed = 5\n[paths]\nout_dir = \"x\"\n");
  CHECK(config_hash(a).size() == 16);
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a) != config_hash(c));
  CHECK(config_hash(a) != config_hash(d));
  CHECK(config_hash(a) == config_hash(e));  // paths do not affect the hash
  for (char ch : config_hash(a)) {
    CHECK((std::isdigit(static_cast<unsigned char>(ch)) || (ch >= 'a' && ch <= 'f')));
  }
}
