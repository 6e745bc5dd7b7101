#include "mldnn/optim.hpp"

#include <cmath>
#include <string>

#include "mldnn/error.hpp"

namespace mldnn {

void validate(const AdamHyper& h) {
  if (!(h.learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  if (!(h.epsilon > 0.0)) throw ConfigError("adam epsilon must be positive");
  if (!(h.beta1 >= 0.0 && h.beta1 < 1.0)) throw ConfigError("adam beta1 must lie in [0, 1)");
  if (!(h.beta2 >= 0.0 && h.beta2 < 1.0)) throw ConfigError("adam beta2 must lie in [0, 1)");
}

AdamState adam_init(std::span<const Matrix* const> shapes, const AdamHyper& hyper) {
  validate(hyper);
  AdamState s;
  s.hyper = hyper;
  for (const Matrix* p : shapes) {
    s.m.emplace_back(p->rows(), p->cols());
    s.v.emplace_back(p->rows(), p->cols());
  }
  return s;
}

AdamState adam_init(ModelGraph& g, const AdamHyper& hyper) {
  std::vector<const Matrix*> shapes;
  for (const auto& ref : g.trainable_parameters()) shapes.push_back(ref.value);
  return adam_init(shapes, hyper);
}

void adam_step(std::span<Matrix* const> params, std::span<const Matrix* const> grads, AdamState& s) {
  if (params.size() != grads.size() || params.size() != s.m.size()) {
    throw ShapeError("adam step got " + std::to_string(params.size()) + " params, " +
                     std::to_string(grads.size()) + " grads for " + std::to_string(s.m.size()) +
                     " moment tensors");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!params[i]->same_shape(*grads[i]) || !params[i]->same_shape(s.m[i])) {
      throw ShapeError("adam tensor " + std::to_string(i) + ": param " + params[i]->shape_string() +
                       ", grad " + grads[i]->shape_string() + ", moments " + s.m[i].shape_string());
    }
  }

  s.t += 1;
  const AdamHyper& h = s.hyper;
  const double t = static_cast<double>(s.t);
  const double m_corr = 1.0 - std::pow(h.beta1, t);
  const double v_corr = 1.0 - std::pow(h.beta2, t);

  for (std::size_t i = 0; i < params.size(); ++i) {
    auto p = params[i]->data();
    const auto g = grads[i]->data();
    auto m = s.m[i].data();
    auto v = s.v[i].data();
    for (std::size_t k = 0; k < p.size(); ++k) {
      m[k] = h.beta1 * m[k] + (1.0 - h.beta1) * g[k];
      v[k] = h.beta2 * v[k] + (1.0 - h.beta2) * (g[k] * g[k]);
      const double m_hat = m[k] / m_corr;
      const double v_hat = v[k] / v_corr;
      p[k] -= h.learning_rate * m_hat / (std::sqrt(v_hat) + h.epsilon);
    }
  }
}

void adam_step(ModelGraph& g, AdamState& state) {
  std::vector<Matrix*> params;
  std::vector<const Matrix*> grads;
  for (const auto& ref : g.trainable_parameters()) {
    params.push_back(ref.value);
    grads.push_back(ref.grad);
  }
  adam_step(params, grads, state);
}

}  // namespace mldnn
