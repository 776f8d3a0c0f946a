#ifndef ARNET_VOCAB_HPP
#define ARNET_VOCAB_HPP

#include <string>
#include <unordered_map>
#include <vector>

namespace arnet {

/// Token <-> id bijection with the reserved control tokens at fixed ids.
struct Vocabulary {
  static constexpr int kPad = 0;
  static constexpr int kBos = 1;
  static constexpr int kEos = 2;
  static constexpr int kUnk = 3;

  std::vector<std::string> id_to_token;
  std::unordered_map<std::string, int> token_to_id;

  Vocabulary();

  /// Keeps tokens occurring at least min_count times, in first-seen order.
  static Vocabulary build(const std::vector<std::vector<std::string>>& corpus,
                          std::size_t min_count);

  int lookup(const std::string& token) const;  // UNK when absent
  const std::string& token(int id) const;
  std::size_t size() const { return id_to_token.size(); }

  /// BOS + mapped tokens (truncated to max_len) + EOS.
  std::vector<int> encode(const std::vector<std::string>& tokens,
                          std::size_t max_len) const;
  /// Inverse of encode for display; drops control tokens.
  std::vector<std::string> decode(const std::vector<int>& ids) const;
};

}  // namespace arnet

#endif  // ARNET_VOCAB_HPP
