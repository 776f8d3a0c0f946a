#ifndef ARNET_CORPUS_HPP
#define ARNET_CORPUS_HPP

#include <string>
#include <vector>

#include "arnet/tensor.hpp"
#include "arnet/vocab.hpp"

namespace arnet {

/// Aligned source/target token lines.
struct ParallelCorpus {
  std::vector<std::vector<std::string>> source;
  std::vector<std::vector<std::string>> target;

  std::size_t size() const { return source.size(); }
};

/// Reads two whitespace-tokenized files; lines are paired by index.
ParallelCorpus load_parallel_corpus(const std::string& source_path,
                                    const std::string& target_path);

std::vector<std::vector<std::string>> load_token_lines(const std::string& path);

void write_token_lines(const std::string& path,
                       const std::vector<std::vector<std::string>>& lines);

/// Random sequences with target == source. Tokens are w0..w{vocab-1}.
ParallelCorpus generate_copy_corpus(std::size_t count, std::size_t vocab_size,
                                    std::size_t min_len, std::size_t max_len,
                                    std::uint64_t seed);

/// Program-like random source; target is a deterministic summary of it
/// (first, second, most-frequent, last, and a length-bucket token), so the
/// mapping is learnable and regeneration reproduces it exactly.
ParallelCorpus generate_synthetic_caption_corpus(std::size_t count,
                                                 std::size_t vocab_size,
                                                 std::size_t min_len,
                                                 std::size_t max_len,
                                                 std::uint64_t seed);

std::vector<std::string> synthetic_caption_target(
    const std::vector<std::string>& source);

}  // namespace arnet

#endif  // ARNET_CORPUS_HPP
