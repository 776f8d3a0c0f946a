#include "arnet/vocab.hpp"

#include <map>
#include <stdexcept>

#include "arnet/tensor.hpp"

namespace arnet {

Vocabulary::Vocabulary() {
  id_to_token = {"<pad>", "<bos>", "<eos>", "<unk>"};
  for (std::size_t i = 0; i < id_to_token.size(); ++i)
    token_to_id[id_to_token[i]] = static_cast<int>(i);
}

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>>& corpus,
                             std::size_t min_count) {
  Vocabulary vocab;
  std::unordered_map<std::string, std::size_t> counts;
  std::vector<std::string> order;
  for (const auto& line : corpus) {
    for (const auto& tok : line) {
      auto [it, inserted] = counts.try_emplace(tok, 0);
      if (inserted) order.push_back(tok);
      it->second += 1;
    }
  }
  for (const auto& tok : order) {
    if (counts[tok] >= min_count && !vocab.token_to_id.count(tok)) {
      vocab.token_to_id[tok] = static_cast<int>(vocab.id_to_token.size());
      vocab.id_to_token.push_back(tok);
    }
  }
  return vocab;
}

int Vocabulary::lookup(const std::string& token) const {
  auto it = token_to_id.find(token);
  return it == token_to_id.end() ? kUnk : it->second;
}

const std::string& Vocabulary::token(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= id_to_token.size())
    throw DataError("vocabulary: id " + std::to_string(id) + " out of range");
  return id_to_token[static_cast<std::size_t>(id)];
}

std::vector<int> Vocabulary::encode(const std::vector<std::string>& tokens,
                                    std::size_t max_len) const {
  std::vector<int> ids;
  ids.reserve(tokens.size() + 2);
  ids.push_back(kBos);
  for (const auto& tok : tokens) {
    if (ids.size() - 1 >= max_len) break;
    ids.push_back(lookup(tok));
  }
  ids.push_back(kEos);
  return ids;
}

std::vector<std::string> Vocabulary::decode(const std::vector<int>& ids) const {
  std::vector<std::string> out;
  for (int id : ids) {
    if (id == kPad || id == kBos || id == kEos) continue;
    out.push_back(token(id));
  }
  return out;
}

}  // namespace arnet
