// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0
//
// ocsr — command-line front end of the recognizer pipeline.
//
//   ocsr gen                      render the four corpus splits
//   ocsr train seg|atom|bond|charge   train one network (optionally --resume)
//   ocsr infer INPUT              recognize one image or a directory of them
//   ocsr eval --truth D --pred D  score predictions against a corpus
//   ocsr export INPUT.json        convert a graph JSON to MOLfile / SMILES
//
// Settings come from built-in defaults, overridden by --config FILE (TOML),
// overridden by command-line flags. Every artifact written carries the
// 16-hex-digit hash of the effective configuration; commands that combine
// artifacts refuse mismatched hashes unless --force is given.
//
// Exit codes: 0 success, 2 finished with flagged outputs, 3 error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ocsr/assembler.hpp"
#include "ocsr/config.hpp"
#include "ocsr/corpus.hpp"
#include "ocsr/datasets.hpp"
#include "ocsr/error.hpp"
#include "ocsr/eval.hpp"
#include "ocsr/graph_json.hpp"
#include "ocsr/image.hpp"
#include "ocsr/molfile.hpp"
#include "ocsr/networks.hpp"
#include "ocsr/random.hpp"
#include "ocsr/smiles.hpp"
#include "ocsr/text_io.hpp"
#include "ocsr/training.hpp"
#include "ocsr/weights_io.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace ocsr;

namespace {

constexpr int kExitFlagged = 2;
constexpr int kExitError = 3;

// Seed substreams. Every stage derives its RNG stream from the master seed
// so stages never share random state.
enum SeedStream : uint64_t {
  kSeedSplitBase = 100,  // +0..3: the four corpus splits
  kSeedInitBase = 200,   // +kind: network initialization
  kSeedOrderBase = 210,  // +kind: training data order
};

// Network kinds as the CLI names them. Order fixes seed substreams.
const std::vector<std::string> kKindNames = {"seg", "atom", "bond", "charge"};

int kind_index(const std::string& kind) {
  const auto it = std::find(kKindNames.begin(), kKindNames.end(), kind);
  if (it == kKindNames.end()) {
    throw Error("unknown network kind '" + kind + "' (want seg|atom|bond|charge)");
  }
  return static_cast<int>(it - kKindNames.begin());
}

const std::vector<std::string> kSplitNames = {"seg_train", "cls_train",
                                              "cls_val", "test"};

struct CliState {
  std::string config_path;
  bool deterministic = false;  // pins single-threaded execution (the
                               // pipeline is single-threaded by design, so
                               // this documents intent rather than changing
                               // behavior)
  std::vector<std::function<void(RunConfig&)>> overrides;
};

/// Effective configuration: defaults <- TOML file <- command-line flags.
RunConfig effective_config(const CliState& st) {
  RunConfig cfg;
  if (!st.config_path.empty()) {
    cfg = config_from_toml(read_text_file(st.config_path));
  }
  for (const auto& op : st.overrides) op(cfg);
  cfg.validate();
  return cfg;
}

void check_hash(const std::string& artifact, const std::string& found,
                const std::string& want, bool force) {
  if (found == want) return;
  const std::string msg = artifact + " was produced under configuration " +
                          found + " but the current configuration hashes to " +
                          want;
  if (!force) throw Error(msg + " (pass --force to proceed anyway)");
  std::cerr << "warning: " << msg << "\n";
}

SegNetConfig seg_config(const RunConfig& cfg, const Vocabulary& v) {
  SegNetConfig sc;
  sc.hidden = cfg.hidden_seg;
  sc.n_a = v.n_a();
  sc.n_b = v.n_b();
  sc.n_c = v.n_c();
  return sc;
}

ClsNetConfig cls_config(const RunConfig& cfg, const Vocabulary& v,
                        const std::string& kind) {
  ClsNetConfig cc;
  cc.hidden = cfg.hidden_cls;
  if (kind == "atom") {
    cc.in_channels = v.n_a() + 2;
    cc.n_out = v.n_a();
  } else if (kind == "bond") {
    cc.in_channels = v.n_b() + 3;
    cc.n_out = v.n_b();
  } else {
    cc.in_channels = v.n_c() + 2;
    cc.n_out = v.n_c();
  }
  return cc;
}

std::string weights_path(const RunConfig& cfg, const std::string& kind) {
  return (fs::path(cfg.weights_dir) / (kind + ".cgw1")).string();
}

std::string weights_manifest_path(const RunConfig& cfg, const std::string& kind) {
  return (fs::path(cfg.weights_dir) / (kind + ".json")).string();
}

std::string loss_csv_path(const RunConfig& cfg, const std::string& kind) {
  return (fs::path(cfg.weights_dir) / (kind + "_loss.csv")).string();
}

void load_net_weights(const std::vector<ParamRef<float>>& params,
                      const std::string& path) {
  if (!fs::exists(path)) {
    throw IoError("weight file " + path + " does not exist (train first?)");
  }
  restore_params(params, load_weights(path));
}

/// Per-image segmentation probability maps for classifier training: either
/// the ground-truth oracle readout or the trained segmentation net.
std::vector<SegmentationMaps> classifier_segprobs(const RunConfig& cfg,
                                                  const Corpus& corpus,
                                                  const Vocabulary& vocab) {
  std::vector<SegmentationMaps> probs;
  probs.reserve(corpus.items.size());
  if (cfg.oracle_seg_for_cls) {
    for (const LabeledImage& item : corpus.items) {
      probs.push_back(softmax_maps(oracle_segmentation(item.maps, vocab)));
    }
    return probs;
  }
  SegmentationNet seg(seg_config(cfg, vocab));
  load_net_weights(seg.params(), weights_path(cfg, "seg"));
  for (const LabeledImage& item : corpus.items) {
    probs.push_back(softmax_maps(seg.forward(image_to_tensor(item.x))));
  }
  return probs;
}

// ---------------------------------------------------------------------------
// gen

int cmd_gen(const CliState& st) {
  const RunConfig cfg = effective_config(st);
  const std::string hash = config_hash(cfg);
  const std::vector<int> sizes = {cfg.splits.seg_train, cfg.splits.cls_train,
                                  cfg.splits.cls_val, cfg.splits.test};
  fs::create_directories(cfg.data_dir);
  for (size_t i = 0; i < kSplitNames.size(); ++i) {
    CorpusParams p;
    p.count = sizes[i];
    p.style = cfg.style();
    p.gen = cfg.gen_params();
    p.vocab = cfg.vocabulary();
    p.rows = cfg.rows;
    p.cols = cfg.cols;
    p.quota = cfg.element_quota();
    p.seed = substream_seed(cfg.seed, kSeedSplitBase + i);
    Corpus c = render_dataset(p);
    c.config_hash = hash;
    const fs::path dir = fs::path(cfg.data_dir) / kSplitNames[i];
    fs::create_directories(dir);
    save_corpus(dir.string(), c);
    std::cout << kSplitNames[i] << ": " << c.items.size() << " images, "
              << c.attempts << " molecules sampled -> " << dir.string() << "\n";
  }
  std::cout << "config " << hash << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// train

CandidateDataset build_candidates(const std::string& kind, const Corpus& corpus,
                                  const std::vector<SegmentationMaps>& probs,
                                  const Vocabulary& vocab) {
  if (kind == "atom") return make_atom_dataset(corpus.items, probs, vocab);
  if (kind == "bond") return make_bond_dataset(corpus.items, probs, vocab);
  return make_charge_dataset(corpus.items, probs, vocab);
}

int cmd_train(const CliState& st, const std::string& kind, bool resume,
              bool force) {
  const RunConfig cfg = effective_config(st);
  const std::string hash = config_hash(cfg);
  const Vocabulary vocab = cfg.vocabulary();
  const int ki = kind_index(kind);
  const bool is_seg = (kind == "seg");

  const fs::path corpus_dir =
      fs::path(cfg.data_dir) / (is_seg ? "seg_train" : "cls_train");
  const Corpus corpus = load_corpus(corpus_dir.string());
  check_hash("corpus " + corpus_dir.string(), corpus.config_hash, hash, force);

  TrainHyper hyper;
  hyper.lr = cfg.lr;
  hyper.steps = is_seg ? cfg.seg_steps : cfg.cls_steps;
  hyper.batch_size = cfg.batch;
  hyper.seed = substream_seed(cfg.seed, kSeedOrderBase + ki);

  int prior_steps = 0;
  std::string prior_csv;
  if (resume) {
    const auto manifest =
        ordered_json::parse(read_text_file(weights_manifest_path(cfg, kind)));
    check_hash("weights for " + kind, manifest.at("config_hash"), hash, force);
    prior_steps = manifest.at("steps_completed").get<int>();
    prior_csv = read_text_file(loss_csv_path(cfg, kind));
  }
  hyper.start_step = prior_steps;

  fs::create_directories(cfg.weights_dir);
  TrainResult result;
  std::vector<NamedTensor> snapshot;
  double final_loss = 0.0;
  if (is_seg) {
    SegmentationNet net(seg_config(cfg, vocab));
    if (resume) {
      load_net_weights(net.params(), weights_path(cfg, kind));
    } else {
      net.init(substream_seed(cfg.seed, kSeedInitBase + ki));
    }
    result = train_segmentation(net, corpus.items, hyper);
    snapshot = snapshot_params(net.params());
  } else {
    const auto probs = classifier_segprobs(cfg, corpus, vocab);
    CandidateDataset data = build_candidates(kind, corpus, probs, vocab);
    data.config_hash = hash;
    ClassifierNet net(cls_config(cfg, vocab, kind));
    if (resume) {
      load_net_weights(net.params(), weights_path(cfg, kind));
    } else {
      net.init(substream_seed(cfg.seed, kSeedInitBase + ki));
    }
    result = train_classifier(net, data, corpus.items, probs, hyper);
    snapshot = snapshot_params(net.params());
    write_text_file(
        (fs::path(cfg.weights_dir) / (kind + "_data.json")).string(),
        candidates_manifest_json(data));
  }
  if (!result.curve.empty()) final_loss = result.curve.back().loss;

  save_weights(weights_path(cfg, kind), snapshot);

  std::string csv = loss_curve_csv(result.curve);
  if (resume && !prior_csv.empty()) {
    // Keep one header; append only the new data rows.
    csv = prior_csv + csv.substr(csv.find('\n') + 1);
  }
  write_text_file(loss_csv_path(cfg, kind), csv);

  ordered_json manifest;
  manifest["kind"] = kind;
  manifest["steps_completed"] = prior_steps + hyper.steps;
  manifest["final_loss"] = final_loss;
  manifest["hidden"] = is_seg ? cfg.hidden_seg : cfg.hidden_cls;
  manifest["classes"] = {
      {"atoms", vocab.n_a()}, {"bonds", vocab.n_b()}, {"charges", vocab.n_c()}};
  manifest["config_hash"] = hash;
  write_text_file(weights_manifest_path(cfg, kind), manifest.dump(2) + "\n");

  std::cout << kind << ": " << hyper.steps << " steps ("
            << manifest["steps_completed"].get<int>() << " total), final loss "
            << final_loss << " -> " << weights_path(cfg, kind) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// infer

bool is_label_map_path(const fs::path& p) {
  const std::string name = p.filename().string();
  for (const char* suffix : {".la.pgm", ".lb.pgm", ".lc.pgm"}) {
    if (name.size() > std::string(suffix).size() &&
        name.rfind(suffix) == name.size() - std::string(suffix).size()) {
      return true;
    }
  }
  return false;
}

std::vector<fs::path> input_images(const std::string& input) {
  std::vector<fs::path> files;
  if (fs::is_directory(input)) {
    for (const auto& entry : fs::directory_iterator(input)) {
      const fs::path& p = entry.path();
      if (p.extension() == ".pgm" && !is_label_map_path(p)) files.push_back(p);
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw IoError("no .pgm images found in " + input);
  } else if (fs::exists(input)) {
    files.emplace_back(input);
  } else {
    throw IoError("input path " + input + " does not exist");
  }
  return files;
}

LabelMaps read_truth_maps(const fs::path& image_path) {
  fs::path base = image_path;
  base.replace_extension();  // drop .pgm
  LabelMaps m;
  int rows = 0, cols = 0;
  m.la = read_label_pgm(base.string() + ".la.pgm", rows, cols);
  m.rows = rows;
  m.cols = cols;
  m.lb = read_label_pgm(base.string() + ".lb.pgm", rows, cols);
  if (rows != m.rows || cols != m.cols) {
    throw Error("label map dimensions disagree next to " + image_path.string());
  }
  m.lc = read_label_pgm(base.string() + ".lc.pgm", rows, cols);
  if (rows != m.rows || cols != m.cols) {
    throw Error("label map dimensions disagree next to " + image_path.string());
  }
  return m;
}

int cmd_infer(const CliState& st, const std::string& input, bool oracle,
              bool force) {
  const RunConfig cfg = effective_config(st);
  const std::string hash = config_hash(cfg);
  const Vocabulary vocab = cfg.vocabulary();
  const BuildConfig bcfg = BuildConfig::from_style(cfg.style());
  const std::vector<fs::path> files = input_images(input);

  // Trained nets are loaded once and reused across images.
  std::optional<SegmentationNet> seg;
  std::optional<ClassifierNet> atom_net, bond_net, charge_net;
  std::optional<TrainedModels> trained;
  if (!oracle) {
    const auto manifest_path = weights_manifest_path(cfg, "seg");
    if (fs::exists(manifest_path)) {
      const auto manifest = ordered_json::parse(read_text_file(manifest_path));
      check_hash("weights", manifest.at("config_hash"), hash, force);
    }
    seg.emplace(seg_config(cfg, vocab));
    atom_net.emplace(cls_config(cfg, vocab, "atom"));
    bond_net.emplace(cls_config(cfg, vocab, "bond"));
    charge_net.emplace(cls_config(cfg, vocab, "charge"));
    load_net_weights(seg->params(), weights_path(cfg, "seg"));
    load_net_weights(atom_net->params(), weights_path(cfg, "atom"));
    load_net_weights(bond_net->params(), weights_path(cfg, "bond"));
    load_net_weights(charge_net->params(), weights_path(cfg, "charge"));
    trained.emplace(*seg, *atom_net, *bond_net, *charge_net, bcfg);
  }

  fs::create_directories(cfg.out_dir);
  ordered_json items = ordered_json::array();
  int flagged_count = 0;
  for (const fs::path& file : files) {
    const std::string stem = file.stem().string();
    const Image img = binarize(read_pgm(file.string()), 0.5f);

    BuildResult r;
    if (oracle) {
      OracleModels models(read_truth_maps(file), vocab, bcfg);
      r = build_graph(img, models, vocab, bcfg);
    } else {
      r = build_graph(img, *trained, vocab, bcfg);
    }

    bool stereo_conflict = false;
    for (const BondRecord& br : r.bond_records) {
      stereo_conflict = stereo_conflict || br.stereo_conflict;
    }
    const bool flagged =
        r.empty_flagged || !r.violations.empty() || stereo_conflict;
    flagged_count += flagged ? 1 : 0;

    const fs::path out_base = fs::path(cfg.out_dir) / stem;
    write_text_file(out_base.string() + ".json",
                    provenance_json(r, vocab, bcfg));
    write_text_file(out_base.string() + ".graph.json",
                    graph_to_json(r.graph));
    // MOLfile/SMILES require a valid graph; flagged results keep only the
    // provenance record.
    if (r.violations.empty()) {
      write_text_file(out_base.string() + ".mol",
                      to_molfile(r.graph, cfg.bond_length));
      write_text_file(out_base.string() + ".smi", to_smiles(r.graph) + "\n");
    }

    items.push_back({{"stem", stem},
                     {"flagged", flagged},
                     {"empty", r.empty_flagged},
                     {"violations", static_cast<int>(r.violations.size())},
                     {"stereo_conflict", stereo_conflict},
                     {"atoms", r.graph.num_atoms()},
                     {"bonds", r.graph.num_bonds()}});
    std::cout << stem << (flagged ? ": flagged" : ": ok") << " ("
              << r.graph.num_atoms() << " atoms, " << r.graph.num_bonds()
              << " bonds)\n";
  }

  ordered_json manifest;
  manifest["config_hash"] = hash;
  manifest["oracle"] = oracle;
  manifest["count"] = items.size();
  manifest["flagged"] = flagged_count;
  manifest["items"] = items;
  write_text_file((fs::path(cfg.out_dir) / "manifest.json").string(),
                  manifest.dump(2) + "\n");

  return flagged_count > 0 ? kExitFlagged : 0;
}

// ---------------------------------------------------------------------------
// eval

/// Multiset-overlap confusion: per class, TP is the per-graph minimum of
/// predicted and true multiplicities, the surpluses count as FP / FN.
template <class Count>
void add_presence(F1Scores& s, const std::vector<Count>& pred,
                  const std::vector<Count>& truth) {
  for (size_t c = 0; c < pred.size(); ++c) {
    const int64_t m = std::min<int64_t>(pred[c], truth[c]);
    s.tp[c] += m;
    s.fp[c] += pred[c] - m;
    s.fn[c] += truth[c] - m;
  }
}

int cmd_eval(const CliState& st, const std::string& truth_dir,
             const std::string& pred_dir, const std::string& out_path,
             bool force) {
  const RunConfig cfg = effective_config(st);
  const std::string hash = config_hash(cfg);
  const Vocabulary vocab = cfg.vocabulary();
  const Corpus truth = load_corpus(truth_dir);
  check_hash("corpus " + truth_dir, truth.config_hash, hash, force);

  const fs::path pred_manifest_path = fs::path(pred_dir) / "manifest.json";
  if (fs::exists(pred_manifest_path)) {
    const auto pm = ordered_json::parse(read_text_file(pred_manifest_path.string()));
    check_hash("predictions " + pred_dir, pm.at("config_hash"), hash, force);
  }

  std::vector<MolGraph> preds, truths;
  F1Scores atom_scores{std::vector<int64_t>(vocab.n_a(), 0),
                       std::vector<int64_t>(vocab.n_a(), 0),
                       std::vector<int64_t>(vocab.n_a(), 0)};
  F1Scores bond_scores{std::vector<int64_t>(vocab.n_b(), 0),
                       std::vector<int64_t>(vocab.n_b(), 0),
                       std::vector<int64_t>(vocab.n_b(), 0)};
  F1Scores charge_scores{std::vector<int64_t>(vocab.n_c(), 0),
                         std::vector<int64_t>(vocab.n_c(), 0),
                         std::vector<int64_t>(vocab.n_c(), 0)};
  for (size_t i = 0; i < truth.items.size(); ++i) {
    char stem[16];
    std::snprintf(stem, sizeof(stem), "img_%05zu", i);
    const fs::path ppath = fs::path(pred_dir) / (std::string(stem) + ".graph.json");
    const MolGraph pred = graph_from_json(read_text_file(ppath.string()));
    const MolGraph& tg = truth.items[i].truth;

    auto atom_counts = [&](const MolGraph& g) {
      std::vector<int64_t> n(vocab.n_a(), 0);
      for (const Atom& a : g.atoms) {
        if (vocab.has_element(a.element)) ++n[vocab.atom_class(a.element)];
      }
      return n;
    };
    auto bond_counts = [&](const MolGraph& g) {
      std::vector<int64_t> n(vocab.n_b(), 0);
      for (const Bond& b : g.bonds) {
        const BondLabel lbl = vocab.bond_halves(b.kind).first;
        if (vocab.has_bond(lbl)) ++n[vocab.bond_class(lbl)];
      }
      return n;
    };
    auto charge_counts = [&](const MolGraph& g) {
      std::vector<int64_t> n(vocab.n_c(), 0);
      for (const Atom& a : g.atoms) {
        if (a.charge != 0 && vocab.has_charge(a.charge)) {
          ++n[vocab.charge_class(a.charge)];
        }
      }
      return n;
    };
    add_presence(atom_scores, atom_counts(pred), atom_counts(tg));
    add_presence(bond_scores, bond_counts(pred), bond_counts(tg));
    add_presence(charge_scores, charge_counts(pred), charge_counts(tg));
    preds.push_back(pred);
    truths.push_back(tg);
  }

  const double pos_tol = cfg.bond_length / 2.0;
  const double err = graph_error_rate(preds, truths, pos_tol);

  auto class_names = [&](char which) {
    std::vector<std::string> names;
    if (which == 'a') {
      for (Element e : vocab.atoms) names.emplace_back(element_symbol(e));
    } else if (which == 'b') {
      for (BondLabel b : vocab.bonds) names.emplace_back(bond_label_name(b));
    } else {
      for (int c : vocab.charges) {
        names.push_back(c > 0 ? "+" + std::to_string(c) : std::to_string(c));
      }
    }
    return names;
  };

  std::vector<MetricRow> metrics;
  for (const MetricRow& row : f1_rows("atom_presence", atom_scores, class_names('a')))
    metrics.push_back(row);
  for (const MetricRow& row : f1_rows("bond_presence", bond_scores, class_names('b')))
    metrics.push_back(row);
  for (const MetricRow& row :
       f1_rows("charge_presence", charge_scores, class_names('c')))
    metrics.push_back(row);

  GraphSetRow graphs;
  graphs.set_name = "all";
  graphs.total = static_cast<int>(truths.size());
  graphs.wrong = static_cast<int>(err * truths.size() + 0.5);
  graphs.error_rate = err;

  const std::string csv =
      "# config_hash = " + hash + "\n" + eval_csv(metrics, {graphs});
  const std::string out = out_path.empty()
                              ? (fs::path(pred_dir) / "eval.csv").string()
                              : out_path;
  write_text_file(out, csv);
  std::cout << "graph error rate " << err << " over " << truths.size()
            << " images -> " << out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// export

int cmd_export(const std::string& input, const std::string& mol_path,
               const std::string& smi_path) {
  const MolGraph g = graph_from_json(read_text_file(input));
  if (!mol_path.empty()) write_text_file(mol_path, to_molfile(g));
  if (!smi_path.empty()) write_text_file(smi_path, to_smiles(g) + "\n");
  if (mol_path.empty() && smi_path.empty()) std::cout << to_smiles(g) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// argument wiring

void add_config_overrides(CLI::App& app, CliState& st) {
  auto set_int = [&st](std::function<void(RunConfig&, long long)> assign) {
    return [&st, assign](const long long& v) {
      st.overrides.push_back([assign, v](RunConfig& c) { assign(c, v); });
    };
  };
  auto set_float = [&st](std::function<void(RunConfig&, double)> assign) {
    return [&st, assign](const double& v) {
      st.overrides.push_back([assign, v](RunConfig& c) { assign(c, v); });
    };
  };
  auto set_str = [&st](std::function<void(RunConfig&, std::string)> assign) {
    return [&st, assign](const std::string& v) {
      st.overrides.push_back([assign, v](RunConfig& c) { assign(c, v); });
    };
  };

  app.add_option_function<long long>(
      "--seed", set_int([](RunConfig& c, long long v) { c.seed = uint64_t(v); }),
      "Master random seed");
  app.add_option_function<long long>(
      "--style", set_int([](RunConfig& c, long long v) { c.style_id = int(v); }),
      "Render style preset (1-3)");
  app.add_option_function<long long>(
      "--bond-length",
      set_int([](RunConfig& c, long long v) { c.bond_length = int(v); }),
      "Bond length in pixels");
  app.add_option_function<long long>(
      "--rows", set_int([](RunConfig& c, long long v) { c.rows = int(v); }),
      "Canvas rows");
  app.add_option_function<long long>(
      "--cols", set_int([](RunConfig& c, long long v) { c.cols = int(v); }),
      "Canvas columns");
  app.add_option_function<double>(
      "--lr", set_float([](RunConfig& c, double v) { c.lr = v; }),
      "Adam learning rate");
  app.add_option_function<long long>(
      "--seg-steps",
      set_int([](RunConfig& c, long long v) { c.seg_steps = int(v); }),
      "Segmentation training steps");
  app.add_option_function<long long>(
      "--cls-steps",
      set_int([](RunConfig& c, long long v) { c.cls_steps = int(v); }),
      "Classifier training steps");
  app.add_option_function<long long>(
      "--batch", set_int([](RunConfig& c, long long v) { c.batch = int(v); }),
      "Classifier batch size");
  app.add_option_function<long long>(
      "--hidden-seg",
      set_int([](RunConfig& c, long long v) { c.hidden_seg = int(v); }),
      "Segmentation trunk width");
  app.add_option_function<long long>(
      "--hidden-cls",
      set_int([](RunConfig& c, long long v) { c.hidden_cls = int(v); }),
      "Classifier trunk width");
  app.add_flag_function(
      "--oracle-seg-for-cls",
      [&st](int64_t) {
        st.overrides.push_back(
            [](RunConfig& c) { c.oracle_seg_for_cls = true; });
      },
      "Train classifiers on ground-truth segmentation maps");
  app.add_option_function<std::string>(
      "--data-dir",
      set_str([](RunConfig& c, std::string v) { c.data_dir = std::move(v); }),
      "Corpus directory");
  app.add_option_function<std::string>(
      "--weights-dir",
      set_str([](RunConfig& c, std::string v) { c.weights_dir = std::move(v); }),
      "Weight file directory");
  app.add_option_function<std::string>(
      "--out-dir",
      set_str([](RunConfig& c, std::string v) { c.out_dir = std::move(v); }),
      "Output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optical recognition of drawn chemical structures"};
  app.require_subcommand(1);

  CliState st;
  app.add_option("--config", st.config_path, "TOML run configuration file");
  app.add_flag("--deterministic", st.deterministic,
               "Pin single-threaded, bit-reproducible execution");
  add_config_overrides(app, st);

  auto* gen = app.add_subcommand("gen", "Render the four corpus splits");
  gen->fallthrough();

  auto* train = app.add_subcommand("train", "Train one network");
  train->fallthrough();
  std::string train_kind;
  bool train_resume = false, train_force = false;
  train->add_option("kind", train_kind, "One of seg|atom|bond|charge")
      ->required()
      ->check(CLI::IsMember(kKindNames));
  train->add_flag("--resume", train_resume,
                  "Continue from the saved weights and step count");
  train->add_flag("--force", train_force, "Ignore configuration hash mismatches");

  auto* infer = app.add_subcommand("infer", "Recognize images");
  infer->fallthrough();
  std::string infer_input;
  bool infer_oracle = false, infer_force = false;
  infer->add_option("input", infer_input, "A .pgm image or a directory of them")
      ->required();
  infer->add_flag("--oracle", infer_oracle,
                  "Read ground truth from label maps next to each image");
  infer->add_flag("--force", infer_force, "Ignore configuration hash mismatches");

  auto* eval = app.add_subcommand("eval", "Score predictions against a corpus");
  eval->fallthrough();
  std::string eval_truth, eval_pred, eval_out;
  bool eval_force = false;
  eval->add_option("--truth", eval_truth, "Corpus directory with ground truth")
      ->required();
  eval->add_option("--pred", eval_pred, "Directory written by `ocsr infer`")
      ->required();
  eval->add_option("--out", eval_out, "Report path (default: PRED/eval.csv)");
  eval->add_flag("--force", eval_force, "Ignore configuration hash mismatches");

  auto* exp = app.add_subcommand("export", "Convert a graph JSON file");
  exp->fallthrough();
  std::string exp_input, exp_mol, exp_smi;
  exp->add_option("input", exp_input, "Graph JSON file")->required();
  exp->add_option("--mol", exp_mol, "Write a V2000 MOLfile here");
  exp->add_option("--smi", exp_smi, "Write a SMILES line here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(st);
    if (train->parsed()) return cmd_train(st, train_kind, train_resume, train_force);
    if (infer->parsed()) return cmd_infer(st, infer_input, infer_oracle, infer_force);
    if (eval->parsed()) return cmd_eval(st, eval_truth, eval_pred, eval_out, eval_force);
    if (exp->parsed()) return cmd_export(exp_input, exp_mol, exp_smi);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
