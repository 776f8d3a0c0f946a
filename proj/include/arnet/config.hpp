#ifndef ARNET_CONFIG_HPP
#define ARNET_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "arnet/lstm.hpp"

namespace arnet {

/// Flat key = value configuration. '#' starts a comment; blank lines are
/// ignored; later assignments win (command-line flags are applied last).
struct Config {
  std::map<std::string, std::string> values;

  static Config load_file(const std::string& path);
  static Config parse(const std::string& text);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return values.count(key) != 0; }

  std::string get_str(const std::string& key, const std::string& dflt) const;
  double get_double(const std::string& key, double dflt) const;
  std::int64_t get_int(const std::string& key, std::int64_t dflt) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t dflt) const;
  bool get_bool(const std::string& key, bool dflt) const;
};

enum class TaskKind { CopyToy, CaptionSeq, CaptionFeat, Pmnist };

std::string task_name(TaskKind task);
TaskKind task_from_name(const std::string& name);

enum class SourceConditioning { StateInit, FirstInput };

/// Every tunable in one place. Defaults follow the experiment descriptions;
/// a few (epoch budgets, embedding size for toy tasks) are per-task.
struct ExperimentConfig {
  TaskKind task = TaskKind::CaptionSeq;
  std::uint64_t seed = 1;
  std::string out_dir = ".";

  // model
  std::size_t hidden_dim = 512;
  std::size_t emb_dim = 512;
  bool attention = false;
  std::size_t attn_dim = 0;      // 0 -> hidden_dim
  std::size_t arnet_hidden = 0;  // 0 -> hidden_dim
  double init_bound = 0.08;
  double forget_bias = 1.0;
  bool orthogonal_init = false;
  SourceConditioning conditioning = SourceConditioning::StateInit;

  // objective / optimization
  double lambda = 0.01;
  double lr_stage1 = 5e-4;
  double lr_stage2 = 1e-4;
  std::size_t batch_size = 64;
  std::size_t epochs_stage1 = 30;
  std::size_t epochs_stage2 = 20;
  std::size_t early_stop_patience = 10;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  double clip_norm = 5.0;
  bool scheduled_sampling = false;
  double ss_floor = 0.75;
  double ss_decay = 0.05;
  RegularizerConfig regularizer;
  bool arnet_detached = false;
  double time_budget_sec = 0.0;  // 0 disables the wall-clock cap
  std::string val_metric;        // nll | token_acc | bleu4 | accuracy
  bool debug_checks = false;

  // decoding
  std::size_t beam_size = 3;
  std::size_t max_len = 30;

  // data
  std::size_t max_src_len = 30;
  std::size_t max_tgt_len = 30;
  std::size_t min_count = 5;
  std::string train_src, train_tgt, val_src, val_tgt, test_src, test_tgt;
  std::string mnist_images, mnist_labels, mnist_test_images, mnist_test_labels;
  std::uint64_t pmnist_perm_seed = 12345;
  std::size_t pmnist_val_count = 5000;
  std::size_t pmnist_train_limit = 0;
  std::size_t pmnist_test_limit = 0;

  static ExperimentConfig from(const Config& config);

  /// Collects every problem and throws one DataError listing all of them.
  void validate() const;

  /// Re-serializes to key = value lines (checkpoint snapshot).
  std::map<std::string, std::string> snapshot() const;

  std::size_t effective_attn_dim() const { return attn_dim ? attn_dim : hidden_dim; }
  std::size_t effective_arnet_hidden() const { return arnet_hidden ? arnet_hidden : hidden_dim; }
};

}  // namespace arnet

#endif  // ARNET_CONFIG_HPP
