#include "arnet/checkpoint.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace arnet {

static_assert(std::endian::native == std::endian::little,
              "checkpoint writer assumes a little-endian host");

namespace {

constexpr char kMagic[] = "ARNETCKPT";  // 9 bytes, no terminator on disk

template <typename T>
void write_pod(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in, const std::string& what) {
  T value;
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw DataError("checkpoint truncated while reading " + what);
  return value;
}

}  // namespace

const NamedTensor* CheckpointData::find(const std::string& name) const {
  for (const auto& t : tensors)
    if (t.name == name) return &t;
  return nullptr;
}

NamedTensor& CheckpointData::upsert(const std::string& name) {
  for (auto& t : tensors)
    if (t.name == name) return t;
  tensors.push_back(NamedTensor{name, {}, {}});
  return tensors.back();
}

void CheckpointData::set_scalar(const std::string& name, double value) {
  NamedTensor& t = upsert(name);
  t.dims.clear();
  t.data.assign(1, value);
}

double CheckpointData::get_scalar(const std::string& name) const {
  const NamedTensor* t = find(name);
  if (!t || t->data.size() != 1)
    throw DataError("checkpoint scalar missing: " + name);
  return t->data[0];
}

void CheckpointData::set_u64(const std::string& name, std::uint64_t value) {
  set_scalar(name, std::bit_cast<double>(value));
}

std::uint64_t CheckpointData::get_u64(const std::string& name) const {
  return std::bit_cast<std::uint64_t>(get_scalar(name));
}

void CheckpointData::add_matrix(const std::string& name, const Matrix& m) {
  NamedTensor& t = upsert(name);
  t.dims = {m.rows, m.cols};
  t.data = m.data;
}

void CheckpointData::add_vector(const std::string& name, const Vector& v) {
  NamedTensor& t = upsert(name);
  t.dims = {v.len()};
  t.data = v.data;
}

Matrix CheckpointData::get_matrix(const std::string& name) const {
  const NamedTensor* t = find(name);
  if (!t || t->dims.size() != 2)
    throw DataError("checkpoint matrix missing: " + name);
  Matrix m(t->dims[0], t->dims[1]);
  m.data = t->data;
  return m;
}

Vector CheckpointData::get_vector(const std::string& name) const {
  const NamedTensor* t = find(name);
  if (!t || t->dims.size() != 1)
    throw DataError("checkpoint vector missing: " + name);
  Vector v(t->dims[0]);
  v.data = t->data;
  return v;
}

void CheckpointData::add_config(const std::map<std::string, std::string>& snapshot) {
  for (const auto& [key, value] : snapshot) {
    NamedTensor& t = upsert("cfg/" + key + "=" + value);
    t.dims.clear();
    t.data.assign(1, 0.0);
  }
}

std::map<std::string, std::string> CheckpointData::config_entries() const {
  std::map<std::string, std::string> out;
  for (const auto& t : tensors) {
    if (t.name.rfind("cfg/", 0) != 0) continue;
    std::string body = t.name.substr(4);
    std::size_t eq = body.find('=');
    if (eq == std::string::npos) continue;
    out[body.substr(0, eq)] = body.substr(eq + 1);
  }
  return out;
}

void save_checkpoint(const std::string& path, const CheckpointData& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write checkpoint: " + path);
  out.write(kMagic, 9);
  write_pod<std::uint32_t>(out, data.version);
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(data.tensors.size()));
  for (const auto& t : data.tensors) {
    if (t.name.size() > 0xFFFF)
      throw DataError("checkpoint record name too long: " + t.name);
    write_pod<std::uint16_t>(out, static_cast<std::uint16_t>(t.name.size()));
    out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    write_pod<std::uint8_t>(out, static_cast<std::uint8_t>(t.dims.size()));
    std::size_t expect = 1;
    for (std::size_t d : t.dims) {
      write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(d));
      expect *= d;
    }
    if (t.data.size() != expect)
      throw DataError("checkpoint record payload size mismatch: " + t.name);
    out.write(reinterpret_cast<const char*>(t.data.data()),
              static_cast<std::streamsize>(t.data.size() * sizeof(double)));
  }
  if (!out) throw DataError("write failure on checkpoint: " + path);
}

CheckpointData load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint: " + path);
  char magic[9];
  in.read(magic, 9);
  if (!in || std::memcmp(magic, kMagic, 9) != 0)
    throw DataError("not a checkpoint file (bad magic): " + path);
  CheckpointData data;
  data.version = read_pod<std::uint32_t>(in, "version");
  if (data.version > kCheckpointVersion)
    throw DataError("checkpoint version " + std::to_string(data.version) +
                    " is newer than supported version " +
                    std::to_string(kCheckpointVersion));
  const std::uint32_t count = read_pod<std::uint32_t>(in, "record count");
  data.tensors.reserve(count);
  for (std::uint32_t r = 0; r < count; ++r) {
    const std::uint16_t name_len = read_pod<std::uint16_t>(in, "name length");
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    if (!in) throw DataError("checkpoint truncated in record name");
    const std::uint8_t rank = read_pod<std::uint8_t>(in, "rank of " + name);
    std::vector<std::size_t> dims(rank);
    std::size_t total = 1;
    for (std::uint8_t d = 0; d < rank; ++d) {
      dims[d] = read_pod<std::uint32_t>(in, "dims of " + name);
      total *= dims[d];
    }
    NamedTensor t;
    t.name = std::move(name);
    t.dims = std::move(dims);
    t.data.resize(total);
    in.read(reinterpret_cast<char*>(t.data.data()),
            static_cast<std::streamsize>(total * sizeof(double)));
    if (!in) throw DataError("checkpoint truncated in payload of " + t.name);
    data.tensors.push_back(std::move(t));
  }
  return data;
}

void store_adam(CheckpointData& data, const AdamOptimizer& opt) {
  data.set_scalar("adam/t", static_cast<double>(opt.step_count));
  data.set_scalar("adam/beta1", opt.cfg.beta1);
  data.set_scalar("adam/beta2", opt.cfg.beta2);
  data.set_scalar("adam/eps", opt.cfg.eps);
  for (const auto& [name, buf] : opt.m) {
    NamedTensor& t = data.upsert("adam/m/" + name);
    t.dims = {buf.size()};
    t.data = buf;
  }
  for (const auto& [name, buf] : opt.v) {
    NamedTensor& t = data.upsert("adam/v/" + name);
    t.dims = {buf.size()};
    t.data = buf;
  }
}

void restore_adam(const CheckpointData& data, AdamOptimizer& opt) {
  opt.step_count = static_cast<std::int64_t>(data.get_scalar("adam/t"));
  opt.cfg.beta1 = data.get_scalar("adam/beta1");
  opt.cfg.beta2 = data.get_scalar("adam/beta2");
  opt.cfg.eps = data.get_scalar("adam/eps");
  opt.m.clear();
  opt.v.clear();
  for (const auto& t : data.tensors) {
    if (t.name.rfind("adam/m/", 0) == 0) opt.m[t.name.substr(7)] = t.data;
    else if (t.name.rfind("adam/v/", 0) == 0) opt.v[t.name.substr(7)] = t.data;
  }
}

DirectoryLock::DirectoryLock(const std::string& dir) {
  std::filesystem::create_directories(dir);
  lock_path_ = dir + "/lock";
  std::FILE* f = std::fopen(lock_path_.c_str(), "wx");
  if (!f)
    throw DataError("checkpoint directory is locked by another process: " +
                    lock_path_);
  std::fclose(f);
}

DirectoryLock::~DirectoryLock() { std::remove(lock_path_.c_str()); }

}  // namespace arnet
