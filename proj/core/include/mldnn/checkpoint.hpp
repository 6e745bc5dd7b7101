#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mldnn/error.hpp"
#include "mldnn/graph.hpp"

namespace mldnn {

inline constexpr char kCheckpointMagic[] = "MLDNN1";
inline constexpr std::uint32_t kCheckpointVersion = 1;

class CheckpointError : public IoError {
 public:
  using IoError::IoError;
};

/// Data stored next to the model: free-form key/value metadata and extra
/// named tensors (the CLI keeps the feature normalizer here).
struct CheckpointExtras {
  std::map<std::string, std::string> metadata;
  std::vector<NamedTensor> tensors;

  friend bool operator==(const CheckpointExtras&, const CheckpointExtras&) = default;
};

struct Checkpoint {
  ModelGraph graph;
  CheckpointExtras extras;
};

// Layout, all integers little-endian:
//   "MLDNN1" | u32 version | str spec_text
//   | u64 n_meta   { str key | str value }
//   | u64 n_model  { tensor }
//   | u64 n_extra  { tensor }
// where str = u64 length + bytes and
//   tensor = str name | u64 rows | u64 cols | rows*cols IEEE-754 f64.
std::string checkpoint_encode(const ModelGraph& g, const CheckpointExtras& extras = {});
Checkpoint checkpoint_decode(const std::string& bytes);

void checkpoint_save(const ModelGraph& g, const std::filesystem::path& path,
                     const CheckpointExtras& extras = {});
Checkpoint checkpoint_load(const std::filesystem::path& path);

}  // namespace mldnn
