#ifndef ARNET_SEQ2SEQ_HPP
#define ARNET_SEQ2SEQ_HPP

#include <string>
#include <vector>

#include "arnet/attention.hpp"
#include "arnet/config.hpp"
#include "arnet/lstm.hpp"
#include "arnet/reconstructor.hpp"
#include "arnet/tensor.hpp"
#include "arnet/vocab.hpp"

namespace arnet {

/// Whole-input summary vector g plus per-position local vectors s_1..s_n.
struct EncodedSource {
  Vector g;
  std::vector<Vector> s;
};

// ---- precomputed-feature ingestion (binary, little-endian) ----
// magic "ARNFEAT1", u32 g_dim, g as f64, u32 n, u32 s_dim, n*s_dim f64.
EncodedSource load_features(const std::string& path);
void save_features(const std::string& path, const EncodedSource& src);

// ---- sequence encoder ----

struct EncoderCaches {
  std::vector<LstmStepCache> steps;
  std::vector<int> tokens;
};

/// g = h_T, s = [h_1..h_T] over the embedded token sequence.
EncodedSource encode_tokens(const LstmParams& cell, const Matrix& embed,
                            const std::vector<int>& tokens);
EncodedSource encode_tokens_cached(const LstmParams& cell, const Matrix& embed,
                                   const std::vector<int>& tokens,
                                   EncoderCaches& caches);

/// Returns gold with probability p_use_gold, else the model's token.
int scheduled_sampling_step(double p_use_gold, int gold_token, int model_token,
                            RngStream& rng);

/// nll + lambda * total reconstruction loss.
double joint_loss(double nll, double total_reconstruction, double lambda);

// ---- encoder-decoder model ----

struct Seq2SeqModel {
  bool has_encoder = true;  // false: sources come from feature files
  std::size_t src_vocab_size = 0;
  std::size_t tgt_vocab_size = 0;
  std::size_t emb_dim = 0;
  std::size_t hidden_dim = 0;
  std::size_t g_dim = 0;       // dimension of g
  std::size_t src_vec_dim = 0; // dimension of each s_i
  bool attentive = false;
  SourceConditioning conditioning = SourceConditioning::StateInit;

  Matrix enc_embed;      // V_src x emb
  LstmParams enc_cell;   // emb -> H
  Matrix dec_embed;      // V_tgt x emb
  LstmParams dec_cell;   // emb (+ src_vec_dim if attentive) -> H
  AttentionParams attn;
  Matrix w_init_h;       // H x g_dim
  Matrix w_init_c;       // H x g_dim
  Matrix w_first_in;     // emb x g_dim (FirstInput conditioning only)
  Matrix w_out;          // V_tgt x H
  Vector b_out;          // V_tgt

  bool arnet_attached = false;
  ArnetParams arnet;

  static Seq2SeqModel create(const ExperimentConfig& cfg,
                             std::size_t src_vocab, std::size_t tgt_vocab,
                             std::size_t g_dim, std::size_t src_vec_dim,
                             RngStream& rng);

  Seq2SeqModel zeros_like() const;
  void attach_arnet(std::size_t ar_hidden, double bound, double forget_bias,
                    RngStream& rng);

  /// Aligned name->storage views for the optimizer / checkpoints / gradcheck.
  std::vector<TensorRef> tensor_refs(bool include_arnet);
};

struct DecodeResult {
  double nll = 0.0;
  std::size_t scored = 0;   // number of predicted positions
  std::size_t correct = 0;  // argmax == gold among scored positions
  std::vector<Vector> hiddens;  // one per scored step

  // populated when caches are requested
  std::vector<LstmStepCache> cell_caches;
  std::vector<AttendCache> attn_caches;
  std::vector<Vector> probs;
  std::vector<int> inputs;   // decoder inputs actually fed
  std::vector<int> targets;  // scored target ids
  Vector h0, c0;             // initial decoder state
  bool has_first_step = false;    // FirstInput conditioning consumed a step
  Vector first_input;             // w_first_in g
  LstmStepCache first_cache;
  AttendCache first_attn_cache;
  double max_attention_sum_error = 0.0;  // debug_checks bookkeeping
};

/// Teacher-forced pass over a gold caption (y_1 = BOS). Scores positions
/// 2..N; positions whose target is PAD are skipped and stop the unroll.
/// ss_prob < 1 replaces inputs by the previous argmax with prob 1 - ss_prob.
DecodeResult decode_teacher_forced(const Seq2SeqModel& model,
                                   const EncodedSource& src,
                                   const std::vector<int>& gold,
                                   bool want_caches, double ss_prob = 1.0,
                                   RngStream* rng = nullptr,
                                   bool debug_checks = false);

struct SourceGrad {
  Vector dg;
  std::vector<Vector> ds;
};

/// Exact gradients for one decoded example. Every contribution is multiplied
/// by `scale` (use 1/batch for mean-over-batch reduction). arnet_dh, when
/// given, is added to each step's hidden-state gradient after scaling by
/// lambda * scale. src_grad may be null for feature-mode training without
/// encoder fine-tuning.
void decode_backward(const Seq2SeqModel& model, const EncodedSource& src,
                     const DecodeResult& fwd, double scale, double lambda,
                     const std::vector<Vector>* arnet_dh, Seq2SeqModel& grads,
                     SourceGrad* src_grad);

/// BPTT through the token encoder given upstream ds_i / dg.
void encoder_backward(const Seq2SeqModel& model, const EncoderCaches& caches,
                      const SourceGrad& src_grad, Seq2SeqModel& grads);

// ---- inference (beam.cpp) ----

/// Caption ids starting with BOS; stops after EOS or max_len emissions.
std::vector<int> greedy_decode(const Seq2SeqModel& model,
                               const EncodedSource& src, std::size_t max_len);

/// Length-wise beam keeping beam_size partial hypotheses; finished ones
/// retire to a completed pool ranked by logprob / emitted-token count. The
/// greedy rollout is always scored as a floor candidate, so the returned
/// hypothesis never ranks below greedy.
std::vector<int> beam_search(const Seq2SeqModel& model, const EncodedSource& src,
                             std::size_t beam_size, std::size_t max_len);

/// Sum of emission log-probs of a caption [BOS, t_1.., maybe EOS].
double sequence_logprob(const Seq2SeqModel& model, const EncodedSource& src,
                        const std::vector<int>& caption);

/// logprob / emitted count, the beam ranking score.
double normalized_logprob(const Seq2SeqModel& model, const EncodedSource& src,
                          const std::vector<int>& caption);

}  // namespace arnet

#endif  // ARNET_SEQ2SEQ_HPP
