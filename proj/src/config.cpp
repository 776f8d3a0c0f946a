#include "arnet/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "arnet/tensor.hpp"

namespace arnet {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "task", "seed", "out_dir", "hidden_dim", "emb_dim", "attention",
      "attn_dim", "arnet_hidden", "init_bound", "forget_bias",
      "orthogonal_init", "conditioning", "lambda", "lr_stage1", "lr_stage2",
      "batch_size", "epochs_stage1", "epochs_stage2", "early_stop_patience",
      "adam_beta1", "adam_beta2", "adam_eps", "clip_norm",
      "scheduled_sampling", "ss_floor", "ss_decay", "regularizer",
      "zoneout_rate_h", "zoneout_rate_c", "dropout_rate", "arnet_detached",
      "time_budget_sec", "val_metric", "debug_checks", "beam_size", "max_len",
      "max_src_len", "max_tgt_len", "min_count", "train_src", "train_tgt",
      "val_src", "val_tgt", "test_src", "test_tgt", "mnist_images",
      "mnist_labels", "mnist_test_images", "mnist_test_labels",
      "pmnist_perm_seed", "pmnist_val_count", "pmnist_train_limit",
      "pmnist_test_limit"};
  return keys;
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw DataError("config line " + std::to_string(lineno) +
                      ": expected key = value");
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

Config Config::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void Config::set(const std::string& key, const std::string& value) {
  values[key] = value;
}

std::string Config::get_str(const std::string& key, const std::string& dflt) const {
  auto it = values.find(key);
  return it == values.end() ? dflt : it->second;
}

double Config::get_double(const std::string& key, double dflt) const {
  auto it = values.find(key);
  if (it == values.end()) return dflt;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw DataError("config key '" + key + "': not a number: " + it->second);
  }
}

std::int64_t Config::get_int(const std::string& key, std::int64_t dflt) const {
  auto it = values.find(key);
  if (it == values.end()) return dflt;
  try {
    return std::stoll(it->second);
  } catch (const std::exception&) {
    throw DataError("config key '" + key + "': not an integer: " + it->second);
  }
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t dflt) const {
  auto it = values.find(key);
  if (it == values.end()) return dflt;
  try {
    return std::stoull(it->second);
  } catch (const std::exception&) {
    throw DataError("config key '" + key + "': not an unsigned integer: " + it->second);
  }
}

bool Config::get_bool(const std::string& key, bool dflt) const {
  auto it = values.find(key);
  if (it == values.end()) return dflt;
  const std::string& v = it->second;
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw DataError("config key '" + key + "': not a boolean: " + v);
}

std::string task_name(TaskKind task) {
  switch (task) {
    case TaskKind::CopyToy: return "copy-toy";
    case TaskKind::CaptionSeq: return "caption-seq";
    case TaskKind::CaptionFeat: return "caption-feat";
    case TaskKind::Pmnist: return "pmnist";
  }
  return "?";
}

TaskKind task_from_name(const std::string& name) {
  if (name == "copy-toy") return TaskKind::CopyToy;
  if (name == "caption-seq") return TaskKind::CaptionSeq;
  if (name == "caption-feat") return TaskKind::CaptionFeat;
  if (name == "pmnist") return TaskKind::Pmnist;
  throw DataError("unknown task: " + name +
                  " (expected copy-toy | caption-seq | caption-feat | pmnist)");
}

ExperimentConfig ExperimentConfig::from(const Config& config) {
  for (const auto& [key, value] : config.values) {
    (void)value;
    if (!known_keys().count(key)) throw DataError("unknown config key: " + key);
  }

  ExperimentConfig e;
  e.task = task_from_name(config.get_str("task", "caption-seq"));

  // Per-task defaults; explicit keys always win.
  switch (e.task) {
    case TaskKind::CopyToy:
      e.hidden_dim = 64; e.emb_dim = 32;
      e.lr_stage1 = 1e-3; e.lr_stage2 = 5e-4;
      e.min_count = 1; e.max_src_len = 30; e.max_tgt_len = 30;
      e.val_metric = "token_acc";
      break;
    case TaskKind::CaptionSeq:
    case TaskKind::CaptionFeat:
      e.hidden_dim = 512; e.emb_dim = 512;
      e.lr_stage1 = 5e-4; e.lr_stage2 = 1e-4;
      e.val_metric = "nll";
      break;
    case TaskKind::Pmnist:
      e.hidden_dim = 128; e.emb_dim = 0;
      e.lr_stage1 = 1e-3; e.lr_stage2 = 5e-4;
      e.val_metric = "accuracy";
      break;
  }

  e.seed = config.get_u64("seed", e.seed);
  e.out_dir = config.get_str("out_dir", e.out_dir);
  e.hidden_dim = static_cast<std::size_t>(config.get_int("hidden_dim", static_cast<std::int64_t>(e.hidden_dim)));
  e.emb_dim = static_cast<std::size_t>(config.get_int("emb_dim", static_cast<std::int64_t>(e.emb_dim)));
  e.attention = config.get_bool("attention", e.attention);
  e.attn_dim = static_cast<std::size_t>(config.get_int("attn_dim", 0));
  e.arnet_hidden = static_cast<std::size_t>(config.get_int("arnet_hidden", 0));
  e.init_bound = config.get_double("init_bound", e.init_bound);
  e.forget_bias = config.get_double("forget_bias", e.forget_bias);
  e.orthogonal_init = config.get_bool("orthogonal_init", e.orthogonal_init);
  const std::string cond = config.get_str("conditioning", "state-init");
  if (cond == "state-init") e.conditioning = SourceConditioning::StateInit;
  else if (cond == "first-input") e.conditioning = SourceConditioning::FirstInput;
  else throw DataError("conditioning must be state-init or first-input, got " + cond);

  e.lambda = config.get_double("lambda", e.lambda);
  e.lr_stage1 = config.get_double("lr_stage1", e.lr_stage1);
  e.lr_stage2 = config.get_double("lr_stage2", e.lr_stage2);
  e.batch_size = static_cast<std::size_t>(config.get_int("batch_size", static_cast<std::int64_t>(e.batch_size)));
  e.epochs_stage1 = static_cast<std::size_t>(config.get_int("epochs_stage1", static_cast<std::int64_t>(e.epochs_stage1)));
  e.epochs_stage2 = static_cast<std::size_t>(config.get_int("epochs_stage2", static_cast<std::int64_t>(e.epochs_stage2)));
  e.early_stop_patience = static_cast<std::size_t>(config.get_int("early_stop_patience", static_cast<std::int64_t>(e.early_stop_patience)));
  e.adam_beta1 = config.get_double("adam_beta1", e.adam_beta1);
  e.adam_beta2 = config.get_double("adam_beta2", e.adam_beta2);
  e.adam_eps = config.get_double("adam_eps", e.adam_eps);
  e.clip_norm = config.get_double("clip_norm", e.clip_norm);
  e.scheduled_sampling = config.get_bool("scheduled_sampling", e.scheduled_sampling);
  e.ss_floor = config.get_double("ss_floor", e.ss_floor);
  e.ss_decay = config.get_double("ss_decay", e.ss_decay);
  const std::string reg = config.get_str("regularizer", "none");
  if (reg == "none") e.regularizer.mode = RegularizerMode::None;
  else if (reg == "zoneout") e.regularizer.mode = RegularizerMode::Zoneout;
  else if (reg == "recurrent_dropout") e.regularizer.mode = RegularizerMode::RecurrentDropout;
  else throw DataError("regularizer must be none | zoneout | recurrent_dropout, got " + reg);
  e.regularizer.zoneout_rate_h = config.get_double("zoneout_rate_h", 0.1);
  e.regularizer.zoneout_rate_c = config.get_double("zoneout_rate_c", 0.1);
  e.regularizer.dropout_rate = config.get_double("dropout_rate", 0.1);
  e.arnet_detached = config.get_bool("arnet_detached", e.arnet_detached);
  e.time_budget_sec = config.get_double("time_budget_sec", e.time_budget_sec);
  e.val_metric = config.get_str("val_metric", e.val_metric);
  e.debug_checks = config.get_bool("debug_checks", e.debug_checks);

  e.beam_size = static_cast<std::size_t>(config.get_int("beam_size", static_cast<std::int64_t>(e.beam_size)));
  e.max_len = static_cast<std::size_t>(config.get_int("max_len", static_cast<std::int64_t>(e.max_len)));
  e.max_src_len = static_cast<std::size_t>(config.get_int("max_src_len", static_cast<std::int64_t>(e.max_src_len)));
  e.max_tgt_len = static_cast<std::size_t>(config.get_int("max_tgt_len", static_cast<std::int64_t>(e.max_tgt_len)));
  e.min_count = static_cast<std::size_t>(config.get_int("min_count", static_cast<std::int64_t>(e.min_count)));
  e.train_src = config.get_str("train_src", "");
  e.train_tgt = config.get_str("train_tgt", "");
  e.val_src = config.get_str("val_src", "");
  e.val_tgt = config.get_str("val_tgt", "");
  e.test_src = config.get_str("test_src", "");
  e.test_tgt = config.get_str("test_tgt", "");
  e.mnist_images = config.get_str("mnist_images", "");
  e.mnist_labels = config.get_str("mnist_labels", "");
  e.mnist_test_images = config.get_str("mnist_test_images", "");
  e.mnist_test_labels = config.get_str("mnist_test_labels", "");
  e.pmnist_perm_seed = config.get_u64("pmnist_perm_seed", e.pmnist_perm_seed);
  e.pmnist_val_count = static_cast<std::size_t>(config.get_int("pmnist_val_count", static_cast<std::int64_t>(e.pmnist_val_count)));
  e.pmnist_train_limit = static_cast<std::size_t>(config.get_int("pmnist_train_limit", 0));
  e.pmnist_test_limit = static_cast<std::size_t>(config.get_int("pmnist_test_limit", 0));
  return e;
}

void ExperimentConfig::validate() const {
  std::vector<std::string> errors;
  auto check = [&](bool ok, const std::string& msg) {
    if (!ok) errors.push_back(msg);
  };
  check(lambda >= 0.0, "lambda must be nonnegative");
  check(beam_size >= 1, "beam_size must be >= 1");
  check(hidden_dim >= 1, "hidden_dim must be >= 1");
  check(batch_size >= 1, "batch_size must be >= 1");
  check(max_len >= 1, "max_len must be >= 1");
  check(lr_stage1 > 0.0 && lr_stage2 > 0.0, "learning rates must be positive");
  check(init_bound > 0.0, "init_bound must be positive");
  check(adam_beta1 >= 0.0 && adam_beta1 < 1.0, "adam_beta1 must lie in [0, 1)");
  check(adam_beta2 >= 0.0 && adam_beta2 < 1.0, "adam_beta2 must lie in [0, 1)");
  check(adam_eps > 0.0, "adam_eps must be positive");
  check(ss_floor >= 0.0 && ss_floor <= 1.0, "ss_floor must lie in [0, 1]");
  check(ss_decay >= 0.0, "ss_decay must be nonnegative");
  check(regularizer.zoneout_rate_h >= 0.0 && regularizer.zoneout_rate_h <= 1.0,
        "zoneout_rate_h must lie in [0, 1]");
  check(regularizer.zoneout_rate_c >= 0.0 && regularizer.zoneout_rate_c <= 1.0,
        "zoneout_rate_c must lie in [0, 1]");
  check(regularizer.dropout_rate >= 0.0 && regularizer.dropout_rate < 1.0,
        "dropout_rate must lie in [0, 1)");
  if (task != TaskKind::Pmnist) check(emb_dim >= 1, "emb_dim must be >= 1");
  if (!(val_metric == "nll" || val_metric == "token_acc" ||
        val_metric == "bleu4" || val_metric == "accuracy"))
    errors.push_back("val_metric must be nll | token_acc | bleu4 | accuracy");
  if (!errors.empty()) {
    std::string all = "invalid configuration:";
    for (const auto& e : errors) all += "\n  - " + e;
    throw DataError(all);
  }
}

std::map<std::string, std::string> ExperimentConfig::snapshot() const {
  std::map<std::string, std::string> snap;
  auto put_num = [&](const std::string& key, double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    snap[key] = os.str();
  };
  snap["task"] = task_name(task);
  snap["seed"] = std::to_string(seed);
  snap["out_dir"] = out_dir;
  snap["hidden_dim"] = std::to_string(hidden_dim);
  snap["emb_dim"] = std::to_string(emb_dim);
  snap["attention"] = attention ? "1" : "0";
  snap["attn_dim"] = std::to_string(attn_dim);
  snap["arnet_hidden"] = std::to_string(arnet_hidden);
  put_num("init_bound", init_bound);
  put_num("forget_bias", forget_bias);
  snap["orthogonal_init"] = orthogonal_init ? "1" : "0";
  snap["conditioning"] = conditioning == SourceConditioning::StateInit ? "state-init" : "first-input";
  put_num("lambda", lambda);
  put_num("lr_stage1", lr_stage1);
  put_num("lr_stage2", lr_stage2);
  snap["batch_size"] = std::to_string(batch_size);
  snap["epochs_stage1"] = std::to_string(epochs_stage1);
  snap["epochs_stage2"] = std::to_string(epochs_stage2);
  snap["early_stop_patience"] = std::to_string(early_stop_patience);
  put_num("adam_beta1", adam_beta1);
  put_num("adam_beta2", adam_beta2);
  put_num("adam_eps", adam_eps);
  put_num("clip_norm", clip_norm);
  snap["scheduled_sampling"] = scheduled_sampling ? "1" : "0";
  put_num("ss_floor", ss_floor);
  put_num("ss_decay", ss_decay);
  snap["regularizer"] = regularizer.mode == RegularizerMode::None
                            ? "none"
                            : (regularizer.mode == RegularizerMode::Zoneout
                                   ? "zoneout"
                                   : "recurrent_dropout");
  put_num("zoneout_rate_h", regularizer.zoneout_rate_h);
  put_num("zoneout_rate_c", regularizer.zoneout_rate_c);
  put_num("dropout_rate", regularizer.dropout_rate);
  snap["arnet_detached"] = arnet_detached ? "1" : "0";
  put_num("time_budget_sec", time_budget_sec);
  snap["val_metric"] = val_metric;
  snap["debug_checks"] = debug_checks ? "1" : "0";
  snap["beam_size"] = std::to_string(beam_size);
  snap["max_len"] = std::to_string(max_len);
  snap["max_src_len"] = std::to_string(max_src_len);
  snap["max_tgt_len"] = std::to_string(max_tgt_len);
  snap["min_count"] = std::to_string(min_count);
  snap["pmnist_perm_seed"] = std::to_string(pmnist_perm_seed);
  snap["pmnist_val_count"] = std::to_string(pmnist_val_count);
  snap["pmnist_train_limit"] = std::to_string(pmnist_train_limit);
  snap["pmnist_test_limit"] = std::to_string(pmnist_test_limit);
  return snap;
}

}  // namespace arnet
