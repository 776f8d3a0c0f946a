#include "arnet/corpus.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

namespace arnet {

std::vector<std::vector<std::string>> load_token_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file: " + path);
  std::vector<std::vector<std::string>> lines;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream iss(line);
    std::vector<std::string> toks;
    std::string tok;
    while (iss >> tok) toks.push_back(tok);
    lines.push_back(std::move(toks));
  }
  return lines;
}

void write_token_lines(const std::string& path,
                       const std::vector<std::vector<std::string>>& lines) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write corpus file: " + path);
  for (const auto& toks : lines) {
    for (std::size_t i = 0; i < toks.size(); ++i) {
      if (i) out << ' ';
      out << toks[i];
    }
    out << '\n';
  }
}

ParallelCorpus load_parallel_corpus(const std::string& source_path,
                                    const std::string& target_path) {
  ParallelCorpus corpus;
  corpus.source = load_token_lines(source_path);
  corpus.target = load_token_lines(target_path);
  if (corpus.source.size() != corpus.target.size())
    throw DataError("parallel corpus line counts differ: " +
                    std::to_string(corpus.source.size()) + " vs " +
                    std::to_string(corpus.target.size()));
  return corpus;
}

namespace {

std::string word_token(std::size_t i) { return "w" + std::to_string(i); }

}  // namespace

ParallelCorpus generate_copy_corpus(std::size_t count, std::size_t vocab_size,
                                    std::size_t min_len, std::size_t max_len,
                                    std::uint64_t seed) {
  if (count < 1) throw DataError("generate_copy_corpus: size must be >= 1");
  if (vocab_size < 1 || min_len < 1 || max_len < min_len)
    throw DataError("generate_copy_corpus: bad shape arguments");
  RngStream rng(seed);
  ParallelCorpus corpus;
  for (std::size_t k = 0; k < count; ++k) {
    std::size_t len = min_len + rng.uniform_index(max_len - min_len + 1);
    std::vector<std::string> toks(len);
    for (auto& t : toks) t = word_token(rng.uniform_index(vocab_size));
    corpus.source.push_back(toks);
    corpus.target.push_back(std::move(toks));
  }
  return corpus;
}

std::vector<std::string> synthetic_caption_target(
    const std::vector<std::string>& source) {
  if (source.empty()) return {};
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& t : source) counts[t] += 1;
  // Most frequent token, earliest occurrence breaking ties.
  std::string most = source[0];
  std::size_t best = 0;
  for (const auto& t : source) {
    if (counts[t] > best) {
      best = counts[t];
      most = t;
    }
  }
  std::vector<std::string> target;
  target.push_back(source.front());
  target.push_back(source.size() > 1 ? source[1] : source.front());
  target.push_back(most);
  target.push_back(source.back());
  target.push_back("len" + std::to_string(source.size() / 5));
  return target;
}

ParallelCorpus generate_synthetic_caption_corpus(std::size_t count,
                                                 std::size_t vocab_size,
                                                 std::size_t min_len,
                                                 std::size_t max_len,
                                                 std::uint64_t seed) {
  if (count < 1) throw DataError("generate_synthetic_caption_corpus: size must be >= 1");
  if (vocab_size < 1 || min_len < 1 || max_len < min_len)
    throw DataError("generate_synthetic_caption_corpus: bad shape arguments");
  RngStream rng(seed);
  ParallelCorpus corpus;
  for (std::size_t k = 0; k < count; ++k) {
    std::size_t len = min_len + rng.uniform_index(max_len - min_len + 1);
    std::vector<std::string> toks(len);
    for (auto& t : toks) t = word_token(rng.uniform_index(vocab_size));
    corpus.target.push_back(synthetic_caption_target(toks));
    corpus.source.push_back(std::move(toks));
  }
  return corpus;
}

}  // namespace arnet
