#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mldnn/layers.hpp"
#include "mldnn/modelspec.hpp"
#include "mldnn/rng.hpp"
#include "mldnn/tensor.hpp"

namespace mldnn {

enum class NodeKind { input, batchnorm, dense, concat, output_alias };

std::string_view to_string(NodeKind k) noexcept;

/// One node of the compute graph. Only the members relevant to `kind` are
/// populated; the rest stay empty.
struct LayerNode {
  std::size_t id = 0;
  NodeKind kind = NodeKind::input;
  std::string name;
  std::vector<std::size_t> predecessors;
  std::size_t width = 0;

  Activation activation = Activation::linear;
  DenseParams dense;
  DenseParams dense_grad;

  BatchNormState batchnorm;
  Matrix gamma_grad;
  Matrix beta_grad;

  ActivationCache cache;
};

/// A trainable tensor and its gradient buffer, addressed by a stable name
/// such as "level1_dense3.weights".
struct ParamRef {
  std::string name;
  Matrix* value;
  Matrix* grad;
};

struct NamedTensor {
  std::string name;
  Matrix value;

  friend bool operator==(const NamedTensor&, const NamedTensor&) = default;
};

struct ParamCount {
  std::size_t trainable = 0;
  std::size_t non_trainable = 0;

  friend bool operator==(const ParamCount&, const ParamCount&) = default;
};

class GraphBuilder;

/// Validated DAG of layer nodes stored in topological order. Node ids equal
/// their index; every predecessor id is smaller than the node's own id.
class ModelGraph {
 public:
  const std::vector<LayerNode>& nodes() const noexcept { return nodes_; }
  std::vector<LayerNode>& nodes() noexcept { return nodes_; }
  const LayerNode& node(std::size_t id) const { return nodes_.at(id); }
  const LayerNode& find(std::string_view name) const;
  LayerNode& find(std::string_view name);

  std::size_t input_width() const noexcept { return input_width_; }
  std::size_t output_width() const noexcept { return output_width_; }
  std::size_t terminal_id() const noexcept { return nodes_.size() - 1; }

  /// The spec this graph was built from, if any. Checkpoints need it.
  const std::optional<ArchitectureSpec>& architecture() const noexcept { return architecture_; }

  /// Trainable tensors in node order (dense: weights, bias; BN: gamma, beta).
  std::vector<ParamRef> trainable_parameters();
  /// Every persistent tensor: trainable values plus BN running statistics.
  std::vector<NamedTensor> state_tensors() const;
  /// Overwrites one persistent tensor by name; shape must match.
  void set_state_tensor(const std::string& name, const Matrix& value);

  std::size_t count_kind(NodeKind kind) const noexcept;

 private:
  friend class GraphBuilder;
  friend Matrix forward(ModelGraph& g, const Matrix& x, Mode mode);
  friend void backward(ModelGraph& g, const Matrix& loss_grad);

  std::vector<LayerNode> nodes_;
  std::size_t input_width_ = 0;
  std::size_t output_width_ = 0;
  std::optional<ArchitectureSpec> architecture_;
  std::size_t cached_rows_ = 0;
  bool train_cache_ready_ = false;
};

/// Incremental construction of a ModelGraph. Dense weights are drawn from a
/// Glorot-uniform distribution (limit √(6/(fan_in+fan_out))) in creation
/// order; biases start at zero.
class GraphBuilder {
 public:
  explicit GraphBuilder(std::uint64_t seed);

  std::size_t input(std::size_t width, std::string name = "input");
  std::size_t batchnorm(std::size_t pred, std::string name = {}, double momentum = 0.99,
                        double epsilon = 1e-3);
  std::size_t dense(std::size_t pred, std::size_t units, Activation activation, std::string name = {});
  std::size_t concat(std::vector<std::size_t> preds, std::string name = {});
  std::size_t output_alias(std::size_t pred, std::string name = {});

  /// Checks the structural invariants (one input first, one terminal node
  /// last, arity per kind) and hands over the graph.
  ModelGraph finish(std::optional<ArchitectureSpec> architecture = std::nullopt);

 private:
  LayerNode& add(NodeKind kind, std::vector<std::size_t> preds, std::string name);
  const LayerNode& at(std::size_t id) const;

  Rng rng_;
  std::vector<LayerNode> nodes_;
};

ModelGraph build_from_spec(const ArchitectureSpec& spec, std::uint64_t seed = 0);
ModelGraph build_default(std::uint64_t seed = 0);

/// Evaluates all nodes in order. Train mode fills caches and updates BN
/// running statistics; infer mode leaves the graph untouched.
Matrix forward(ModelGraph& g, const Matrix& x, Mode mode);
/// Infer-mode forward on a const graph; safe to call concurrently.
Matrix predict(const ModelGraph& g, const Matrix& x);

/// Reverse sweep after a train-mode forward; overwrites every gradient buffer.
void backward(ModelGraph& g, const Matrix& loss_grad);

ParamCount param_count(const ModelGraph& g);

}  // namespace mldnn
