#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "mldnn/error.hpp"
#include "mldnn/optim.hpp"

namespace mldnn {
namespace {

TEST(Adam, FirstStepMovesByLearningRate) {
  Matrix p = Matrix::from_rows({{1.0}});
  Matrix g = Matrix::from_rows({{0.5}});
  Matrix* params[] = {&p};
  const Matrix* grads[] = {&g};
  const Matrix* shapes[] = {&p};
  AdamState s = adam_init(shapes);
  adam_step(params, grads, s);
  // m̂ = 0.5, v̂ = 0.25: step = 0.001 * 0.5 / (0.5 + 1e-7)
  const double expected = 1.0 - 0.001 * 0.5 / (0.5 + 1e-7);
  EXPECT_NEAR(p(0, 0), expected, 1e-15);
  EXPECT_EQ(s.t, 1);
}

TEST(Adam, UnitGradientFromZero) {
  Matrix p(1, 1);
  Matrix g = Matrix::from_rows({{1.0}});
  Matrix* params[] = {&p};
  const Matrix* grads[] = {&g};
  const Matrix* shapes[] = {&p};
  AdamState s = adam_init(shapes);
  adam_step(params, grads, s);
  EXPECT_NEAR(p(0, 0), -0.001 / (1.0 + 1e-7), 1e-18);
  EXPECT_NEAR(p(0, 0), -0.0009999999, 1e-13);
}

TEST(Adam, IndependentOracleOverSeveralSteps) {
  Matrix p = Matrix::from_rows({{0.3, -1.2}});
  Matrix g(1, 2);
  Matrix* params[] = {&p};
  const Matrix* grads[] = {&g};
  const Matrix* shapes[] = {&p};
  AdamState s = adam_init(shapes);
  double ref[2] = {0.3, -1.2}, m[2] = {0, 0}, v[2] = {0, 0};
  for (int t = 1; t <= 20; ++t) {
    for (int j = 0; j < 2; ++j) g(0, j) = std::sin(t * (j + 1.0)) + ref[j];
    for (int j = 0; j < 2; ++j) {
      const double gj = g(0, j);
      m[j] = 0.9 * m[j] + 0.1 * gj;
      v[j] = 0.999 * v[j] + 0.001 * gj * gj;
      const double mh = m[j] / (1 - std::pow(0.9, t));
      const double vh = v[j] / (1 - std::pow(0.999, t));
      ref[j] -= 0.001 * mh / (std::sqrt(vh) + 1e-7);
    }
    adam_step(params, grads, s);
  }
  EXPECT_NEAR(p(0, 0), ref[0], 1e-12);
  EXPECT_NEAR(p(0, 1), ref[1], 1e-12);
}

TEST(Adam, ZeroGradientLeavesParameters) {
  Matrix p = Matrix::from_rows({{2.0, 3.0}});
  Matrix g(1, 2);
  Matrix* params[] = {&p};
  const Matrix* grads[] = {&g};
  const Matrix* shapes[] = {&p};
  AdamState s = adam_init(shapes);
  adam_step(params, grads, s);
  EXPECT_EQ(p, Matrix::from_rows({{2.0, 3.0}}));
}

TEST(Adam, ShapeMismatchRejected) {
  Matrix p(1, 2), g(2, 1);
  Matrix* params[] = {&p};
  const Matrix* grads[] = {&g};
  const Matrix* shapes[] = {&p};
  AdamState s = adam_init(shapes);
  EXPECT_THROW(adam_step(params, grads, s), ShapeError);
}

TEST(Adam, HyperValidation) {
  EXPECT_THROW(validate(AdamHyper{0.0}), ConfigError);
  EXPECT_THROW(validate(AdamHyper{0.001, 1.0}), ConfigError);
  EXPECT_THROW(validate(AdamHyper{0.001, 0.9, -0.1}), ConfigError);
  EXPECT_THROW(validate(AdamHyper{0.001, 0.9, 0.999, 0.0}), ConfigError);
  EXPECT_NO_THROW(validate(AdamHyper{}));
}

TEST(Adam, GraphOverloadUpdatesEveryTrainableTensor) {
  ModelGraph g = build_default(0);
  auto params = g.trainable_parameters();
  for (auto& p : params) std::fill(p.grad->data().begin(), p.grad->data().end(), 1.0);
  const auto before = g.state_tensors();
  AdamState s = adam_init(g);
  EXPECT_EQ(s.m.size(), params.size());
  adam_step(g, s);
  const auto after = g.state_tensors();
  std::size_t changed = 0;
  for (std::size_t i = 0; i < before.size(); ++i) changed += before[i].value != after[i].value;
  EXPECT_EQ(changed, params.size());
}

}  // namespace
}  // namespace mldnn
