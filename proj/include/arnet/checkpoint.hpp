#ifndef ARNET_CHECKPOINT_HPP
#define ARNET_CHECKPOINT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arnet/adam.hpp"
#include "arnet/tensor.hpp"

namespace arnet {

/// Binary layout (little-endian): magic "ARNETCKPT", u32 version, u32 record
/// count, then records of (u16 name length, name bytes, u8 rank, u32 dims...,
/// f64 payload row-major). Rank 0 means a single scalar. Round-trips are
/// bit-exact.
constexpr std::uint32_t kCheckpointVersion = 1;

struct NamedTensor {
  std::string name;
  std::vector<std::size_t> dims;  // empty for scalars
  std::vector<double> data;
};

struct CheckpointData {
  std::uint32_t version = kCheckpointVersion;
  std::vector<NamedTensor> tensors;

  const NamedTensor* find(const std::string& name) const;
  NamedTensor& upsert(const std::string& name);

  void set_scalar(const std::string& name, double value);
  double get_scalar(const std::string& name) const;  // throws if absent
  void set_u64(const std::string& name, std::uint64_t value);  // bit-cast
  std::uint64_t get_u64(const std::string& name) const;

  void add_matrix(const std::string& name, const Matrix& m);
  void add_vector(const std::string& name, const Vector& v);
  Matrix get_matrix(const std::string& name) const;
  Vector get_vector(const std::string& name) const;

  /// Config snapshot entries ride along as zero-payload "cfg/<key>=<value>"
  /// records so the pinned record grammar carries strings too.
  void add_config(const std::map<std::string, std::string>& snapshot);
  std::map<std::string, std::string> config_entries() const;
};

void save_checkpoint(const std::string& path, const CheckpointData& data);
CheckpointData load_checkpoint(const std::string& path);

/// Adam moments <-> named records under "adam/".
void store_adam(CheckpointData& data, const AdamOptimizer& opt);
void restore_adam(const CheckpointData& data, AdamOptimizer& opt);

/// One training process owns a checkpoint directory at a time.
class DirectoryLock {
 public:
  explicit DirectoryLock(const std::string& dir);
  ~DirectoryLock();
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

 private:
  std::string lock_path_;
};

}  // namespace arnet

#endif  // ARNET_CHECKPOINT_HPP
