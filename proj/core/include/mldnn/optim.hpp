#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mldnn/graph.hpp"
#include "mldnn/tensor.hpp"

namespace mldnn {

struct AdamHyper {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-7;
};

/// First and second moments per trainable tensor, in the order of
/// ModelGraph::trainable_parameters().
struct AdamState {
  std::vector<Matrix> m;
  std::vector<Matrix> v;
  std::int64_t t = 0;
  AdamHyper hyper;
};

/// Throws ConfigError on a non-positive learning rate or epsilon, or betas
/// outside [0, 1).
void validate(const AdamHyper& hyper);

/// Zero moments shaped like `shapes`.
AdamState adam_init(std::span<const Matrix* const> shapes, const AdamHyper& hyper = {});
AdamState adam_init(ModelGraph& g, const AdamHyper& hyper = {});

/// One bias-corrected update:
///   m ← β₁m + (1−β₁)g,  v ← β₂v + (1−β₂)g²,
///   p ← p − lr · (m / (1−β₁ᵗ)) / (√(v / (1−β₂ᵗ)) + ε)
void adam_step(std::span<Matrix* const> params, std::span<const Matrix* const> grads, AdamState& state);
void adam_step(ModelGraph& g, AdamState& state);

}  // namespace mldnn
