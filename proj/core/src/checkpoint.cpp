#include "mldnn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace mldnn {

namespace {

constexpr std::size_t kMagicLen = sizeof(kCheckpointMagic) - 1;

class Writer {
 public:
  void raw(std::string_view bytes) { out_.append(bytes); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void str(std::string_view s) {
    u64(s.size());
    raw(s);
  }
  void tensor(const NamedTensor& t) {
    str(t.name);
    u64(t.value.rows());
    u64(t.value.cols());
    for (double d : t.value.data()) u64(std::bit_cast<std::uint64_t>(d));
  }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  std::string_view raw(std::size_t n, const char* what) {
    if (bytes_.size() - pos_ < n) {
      throw CheckpointError("truncated checkpoint: needed " + std::to_string(n) + " bytes for " +
                            what + " at offset " + std::to_string(pos_) + ", " +
                            std::to_string(bytes_.size() - pos_) + " left");
    }
    std::string_view v(bytes_.data() + pos_, n);
    pos_ += n;
    return v;
  }
  std::uint32_t u32(const char* what) {
    const auto b = raw(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    return v;
  }
  std::uint64_t u64(const char* what) {
    const auto b = raw(8, what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    return v;
  }
  std::string str(const char* what) {
    const std::uint64_t n = u64(what);
    return std::string(raw(n, what));
  }
  NamedTensor tensor() {
    NamedTensor t;
    t.name = str("tensor name");
    const std::uint64_t rows = u64("tensor rows");
    const std::uint64_t cols = u64("tensor cols");
    if (cols != 0 && rows > (bytes_.size() - pos_) / 8 / cols)
      throw CheckpointError("truncated checkpoint: tensor '" + t.name + "' data is incomplete");
    std::vector<double> data(rows * cols);
    for (double& d : data) d = std::bit_cast<double>(u64("tensor data"));
    t.value = Matrix(rows, cols, std::move(data));
    return t;
  }
  std::uint64_t count(const char* what) {
    const std::uint64_t n = u64(what);
    // every entry occupies at least 8 bytes
    if (n > (bytes_.size() - pos_) / 8) throw CheckpointError(std::string("truncated checkpoint: bad ") + what);
    return n;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string checkpoint_encode(const ModelGraph& g, const CheckpointExtras& extras) {
  if (!g.architecture()) {
    throw StateError("checkpoints require a graph built from an architecture spec");
  }
  Writer w;
  w.raw(std::string_view(kCheckpointMagic, kMagicLen));
  w.u32(kCheckpointVersion);
  w.str(render_spec(*g.architecture()));
  w.u64(extras.metadata.size());
  for (const auto& [k, v] : extras.metadata) {
    w.str(k);
    w.str(v);
  }
  const auto model = g.state_tensors();
  w.u64(model.size());
  for (const auto& t : model) w.tensor(t);
  w.u64(extras.tensors.size());
  for (const auto& t : extras.tensors) w.tensor(t);
  return w.take();
}

Checkpoint checkpoint_decode(const std::string& bytes) {
  Reader r(bytes);
  if (bytes.size() < kMagicLen || bytes.compare(0, kMagicLen, kCheckpointMagic) != 0) {
    throw CheckpointError(std::string("not a checkpoint: expected magic \"") + kCheckpointMagic + "\"");
  }
  r.raw(kMagicLen, "magic");
  const std::uint32_t version = r.u32("version");
  if (version != kCheckpointVersion) {
    throw CheckpointError("unsupported checkpoint version " + std::to_string(version) +
                          " (expected " + std::to_string(kCheckpointVersion) + ")");
  }
  const std::string spec_text = r.str("architecture spec");
  ArchitectureSpec spec;
  try {
    spec = parse_spec(spec_text);
  } catch (const Error& e) {
    throw CheckpointError(std::string("checkpoint holds an invalid architecture spec: ") + e.what());
  }

  Checkpoint cp{build_from_spec(spec), {}};
  const std::uint64_t n_meta = r.count("metadata count");
  for (std::uint64_t i = 0; i < n_meta; ++i) {
    std::string k = r.str("metadata key");
    cp.extras.metadata[std::move(k)] = r.str("metadata value");
  }

  const std::size_t expected = cp.graph.state_tensors().size();
  const std::uint64_t n_model = r.count("model tensor count");
  if (n_model != expected) {
    throw CheckpointError("checkpoint has " + std::to_string(n_model) + " model tensors, architecture needs " +
                          std::to_string(expected));
  }
  for (std::uint64_t i = 0; i < n_model; ++i) {
    NamedTensor t = r.tensor();
    try {
      cp.graph.set_state_tensor(t.name, t.value);
    } catch (const Error& e) {
      throw CheckpointError(std::string("checkpoint tensor mismatch: ") + e.what());
    }
  }
  const std::uint64_t n_extra = r.count("extra tensor count");
  for (std::uint64_t i = 0; i < n_extra; ++i) cp.extras.tensors.push_back(r.tensor());
  if (!r.done()) throw CheckpointError("trailing bytes after checkpoint payload");
  return cp;
}

void checkpoint_save(const ModelGraph& g, const std::filesystem::path& path,
                     const CheckpointExtras& extras) {
  const std::string bytes = checkpoint_encode(g, extras);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing checkpoint '" + path.string() + "'");
}

Checkpoint checkpoint_load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint '" + path.string() + "'");
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return checkpoint_decode(bytes);
}

}  // namespace mldnn
