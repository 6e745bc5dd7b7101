#include "mldnn/graph.hpp"

#include <cmath>
#include <utility>

#include "mldnn/error.hpp"

namespace mldnn {

std::string_view to_string(NodeKind k) noexcept {
  switch (k) {
    case NodeKind::input: return "input";
    case NodeKind::batchnorm: return "batchnorm";
    case NodeKind::dense: return "dense";
    case NodeKind::concat: return "concat";
    case NodeKind::output_alias: return "output_alias";
  }
  return "unknown";
}

const LayerNode& ModelGraph::find(std::string_view name) const {
  for (const auto& n : nodes_)
    if (n.name == name) return n;
  throw StateError("no node named '" + std::string(name) + "'");
}

LayerNode& ModelGraph::find(std::string_view name) {
  return const_cast<LayerNode&>(std::as_const(*this).find(name));
}

std::vector<ParamRef> ModelGraph::trainable_parameters() {
  std::vector<ParamRef> refs;
  for (auto& n : nodes_) {
    if (n.kind == NodeKind::dense) {
      refs.push_back({n.name + ".weights", &n.dense.weights, &n.dense_grad.weights});
      refs.push_back({n.name + ".bias", &n.dense.bias, &n.dense_grad.bias});
    } else if (n.kind == NodeKind::batchnorm) {
      refs.push_back({n.name + ".gamma", &n.batchnorm.gamma, &n.gamma_grad});
      refs.push_back({n.name + ".beta", &n.batchnorm.beta, &n.beta_grad});
    }
  }
  return refs;
}

std::vector<NamedTensor> ModelGraph::state_tensors() const {
  std::vector<NamedTensor> out;
  for (const auto& n : nodes_) {
    if (n.kind == NodeKind::dense) {
      out.push_back({n.name + ".weights", n.dense.weights});
      out.push_back({n.name + ".bias", n.dense.bias});
    } else if (n.kind == NodeKind::batchnorm) {
      out.push_back({n.name + ".gamma", n.batchnorm.gamma});
      out.push_back({n.name + ".beta", n.batchnorm.beta});
      out.push_back({n.name + ".running_mean", n.batchnorm.running_mean});
      out.push_back({n.name + ".running_var", n.batchnorm.running_var});
      out.push_back({n.name + ".config",
                     Matrix(1, 2, std::vector<double>{n.batchnorm.momentum, n.batchnorm.epsilon})});
    }
  }
  return out;
}

void ModelGraph::set_state_tensor(const std::string& name, const Matrix& value) {
  const auto dot = name.rfind('.');
  if (dot == std::string::npos) throw StateError("malformed tensor name '" + name + "'");
  LayerNode& n = find(std::string_view(name).substr(0, dot));
  const std::string field = name.substr(dot + 1);

  Matrix* target = nullptr;
  if (n.kind == NodeKind::dense) {
    if (field == "weights") target = &n.dense.weights;
    if (field == "bias") target = &n.dense.bias;
  } else if (n.kind == NodeKind::batchnorm) {
    if (field == "gamma") target = &n.batchnorm.gamma;
    if (field == "beta") target = &n.batchnorm.beta;
    if (field == "running_mean") target = &n.batchnorm.running_mean;
    if (field == "running_var") target = &n.batchnorm.running_var;
    if (field == "config") {
      if (value.rows() != 1 || value.cols() != 2)
        throw ShapeError("tensor '" + name + "' must be 1x2, got " + value.shape_string());
      n.batchnorm.momentum = value(0, 0);
      n.batchnorm.epsilon = value(0, 1);
      return;
    }
  }
  if (target == nullptr) throw StateError("node '" + n.name + "' has no tensor '" + field + "'");
  if (!target->same_shape(value)) {
    throw ShapeError("tensor '" + name + "' expects shape " + target->shape_string() + ", got " +
                     value.shape_string());
  }
  *target = value;
  train_cache_ready_ = false;
}

std::size_t ModelGraph::count_kind(NodeKind kind) const noexcept {
  std::size_t c = 0;
  for (const auto& n : nodes_) c += n.kind == kind ? 1 : 0;
  return c;
}

GraphBuilder::GraphBuilder(std::uint64_t seed) : rng_(derive_seed(seed, 1)) {}

const LayerNode& GraphBuilder::at(std::size_t id) const {
  if (id >= nodes_.size())
    throw StateError("predecessor id " + std::to_string(id) + " is not defined yet");
  return nodes_[id];
}

LayerNode& GraphBuilder::add(NodeKind kind, std::vector<std::size_t> preds, std::string name) {
  for (std::size_t p : preds) (void)at(p);
  LayerNode n;
  n.id = nodes_.size();
  n.kind = kind;
  n.name = name.empty() ? std::string(to_string(kind)) + "_" + std::to_string(n.id) : std::move(name);
  for (const auto& other : nodes_)
    if (other.name == n.name) throw StateError("duplicate node name '" + n.name + "'");
  n.predecessors = std::move(preds);
  nodes_.push_back(std::move(n));
  return nodes_.back();
}

std::size_t GraphBuilder::input(std::size_t width, std::string name) {
  if (width == 0) throw ConfigError("input width must be positive");
  if (!nodes_.empty()) throw StateError("the input node must be the first node");
  LayerNode& n = add(NodeKind::input, {}, std::move(name));
  n.width = width;
  return n.id;
}

std::size_t GraphBuilder::batchnorm(std::size_t pred, std::string name, double momentum,
                                    double epsilon) {
  const std::size_t width = at(pred).width;
  LayerNode& n = add(NodeKind::batchnorm, {pred}, std::move(name));
  n.width = width;
  n.batchnorm = BatchNormState::make(width, momentum, epsilon);
  n.gamma_grad = Matrix(1, width);
  n.beta_grad = Matrix(1, width);
  return n.id;
}

std::size_t GraphBuilder::dense(std::size_t pred, std::size_t units, Activation activation,
                                std::string name) {
  if (units == 0) throw ConfigError("dense units must be positive");
  const std::size_t fan_in = at(pred).width;
  LayerNode& n = add(NodeKind::dense, {pred}, std::move(name));
  n.width = units;
  n.activation = activation;
  n.dense.weights = Matrix(fan_in, units);
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + units));
  for (double& w : n.dense.weights.data()) w = rng_.uniform(-limit, limit);
  n.dense.bias = Matrix(1, units);
  n.dense_grad = {Matrix(fan_in, units), Matrix(1, units)};
  return n.id;
}

std::size_t GraphBuilder::concat(std::vector<std::size_t> preds, std::string name) {
  if (preds.size() < 2) throw ConfigError("concat needs at least 2 predecessors");
  std::size_t width = 0;
  for (std::size_t p : preds) width += at(p).width;
  LayerNode& n = add(NodeKind::concat, std::move(preds), std::move(name));
  n.width = width;
  return n.id;
}

std::size_t GraphBuilder::output_alias(std::size_t pred, std::string name) {
  const std::size_t width = at(pred).width;
  LayerNode& n = add(NodeKind::output_alias, {pred}, std::move(name));
  n.width = width;
  return n.id;
}

ModelGraph GraphBuilder::finish(std::optional<ArchitectureSpec> architecture) {
  if (nodes_.empty() || nodes_.front().kind != NodeKind::input)
    throw StateError("graph must start with an input node");
  std::vector<std::size_t> consumers(nodes_.size(), 0);
  for (const auto& n : nodes_) {
    if (n.id != 0 && n.kind == NodeKind::input) throw StateError("graph has more than one input node");
    for (std::size_t p : n.predecessors) ++consumers[p];
  }
  std::size_t terminals = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) terminals += consumers[i] == 0 ? 1 : 0;
  if (terminals != 1 || consumers.back() != 0) {
    throw StateError("graph must have exactly one terminal node, and it must be last (found " +
                     std::to_string(terminals) + " terminals)");
  }

  ModelGraph g;
  g.input_width_ = nodes_.front().width;
  g.output_width_ = nodes_.back().width;
  g.nodes_ = std::move(nodes_);
  g.architecture_ = std::move(architecture);
  nodes_.clear();
  return g;
}

ModelGraph build_from_spec(const ArchitectureSpec& spec, std::uint64_t seed) {
  if (auto violations = validate_spec(spec); !violations.empty())
    throw SpecValidationError(std::move(violations));

  GraphBuilder b(seed);
  std::size_t source = b.input(spec.input_width);
  if (spec.use_batchnorm) source = b.batchnorm(source, "batchnorm");

  std::vector<std::size_t> streams{source};
  for (std::size_t li = 0; li < spec.levels.size(); ++li) {
    const LevelSpec& level = spec.levels[li];
    const std::string prefix = "level" + std::to_string(li + 1);
    std::vector<std::size_t> branch_out;
    for (std::size_t bi = 0; bi < level.branches; ++bi) {
      const std::size_t in = li == 0 ? streams.front() : streams[bi];
      branch_out.push_back(
          b.dense(in, level.units, level.activation, prefix + "_dense" + std::to_string(bi + 1)));
    }
    std::vector<std::size_t> next;
    switch (level.merge) {
      case Merge::none:
        next = branch_out;
        break;
      case Merge::pairs:
        for (std::size_t i = 0; i + 1 < branch_out.size(); i += 2)
          next.push_back(b.concat({branch_out[i], branch_out[i + 1]},
                                  prefix + "_concat" + std::to_string(i / 2 + 1)));
        break;
      case Merge::all:
        next.push_back(branch_out.size() == 1 ? branch_out.front()
                                              : b.concat(branch_out, prefix + "_concat1"));
        break;
    }
    streams = std::move(next);
  }
  b.dense(streams.front(), spec.output_units, spec.output_activation, "output");
  return b.finish(spec);
}

ModelGraph build_default(std::uint64_t seed) { return build_from_spec(default_architecture(), seed); }

namespace {

void check_input(const ModelGraph& g, const Matrix& x) {
  if (x.cols() != g.input_width()) {
    throw ShapeError("graph input expects " + std::to_string(g.input_width()) +
                     " columns, got " + x.shape_string());
  }
}

Matrix gather_concat(const std::vector<Matrix>& outs, const LayerNode& n) {
  std::vector<Matrix> parts;
  parts.reserve(n.predecessors.size());
  for (std::size_t p : n.predecessors) parts.push_back(outs[p]);
  return concat(parts);
}

void accumulate(std::vector<Matrix>& grads, std::vector<bool>& present, std::size_t id, Matrix g) {
  if (present[id]) {
    grads[id] = add(grads[id], g);
  } else {
    grads[id] = std::move(g);
    present[id] = true;
  }
}

}  // namespace

Matrix predict(const ModelGraph& g, const Matrix& x) {
  check_input(g, x);
  const auto& nodes = g.nodes();
  std::vector<Matrix> outs(nodes.size());
  for (const auto& n : nodes) {
    switch (n.kind) {
      case NodeKind::input:
        outs[n.id] = x;
        break;
      case NodeKind::batchnorm:
        outs[n.id] = batchnorm_infer(outs[n.predecessors[0]], n.batchnorm);
        break;
      case NodeKind::dense:
        outs[n.id] = dense_forward(outs[n.predecessors[0]], n.dense, n.activation, Mode::infer).output;
        break;
      case NodeKind::concat:
        outs[n.id] = gather_concat(outs, n);
        break;
      case NodeKind::output_alias:
        outs[n.id] = outs[n.predecessors[0]];
        break;
    }
  }
  return std::move(outs.back());
}

Matrix forward(ModelGraph& g, const Matrix& x, Mode mode) {
  if (mode == Mode::infer) return predict(g, x);
  check_input(g, x);
  std::vector<Matrix> outs(g.nodes_.size());
  for (auto& n : g.nodes_) {
    switch (n.kind) {
      case NodeKind::input:
        outs[n.id] = x;
        break;
      case NodeKind::batchnorm: {
        auto r = batchnorm_forward(outs[n.predecessors[0]], n.batchnorm, Mode::train);
        outs[n.id] = std::move(r.output);
        n.cache = std::move(r.cache);
        break;
      }
      case NodeKind::dense: {
        auto r = dense_forward(outs[n.predecessors[0]], n.dense, n.activation, Mode::train);
        outs[n.id] = std::move(r.output);
        n.cache = std::move(r.cache);
        break;
      }
      case NodeKind::concat:
        outs[n.id] = gather_concat(outs, n);
        break;
      case NodeKind::output_alias:
        outs[n.id] = outs[n.predecessors[0]];
        break;
    }
  }
  g.cached_rows_ = x.rows();
  g.train_cache_ready_ = true;
  return std::move(outs.back());
}

void backward(ModelGraph& g, const Matrix& loss_grad) {
  if (!g.train_cache_ready_) throw StateError("backward requires a train-mode forward first");
  if (loss_grad.rows() != g.cached_rows_ || loss_grad.cols() != g.output_width_) {
    throw ShapeError("loss gradient " + loss_grad.shape_string() + " does not match graph output (" +
                     std::to_string(g.cached_rows_) + "x" + std::to_string(g.output_width_) + ")");
  }
  auto& nodes = g.nodes_;
  std::vector<Matrix> grads(nodes.size());
  std::vector<bool> present(nodes.size(), false);
  grads.back() = loss_grad;
  present.back() = true;

  for (std::size_t i = nodes.size(); i-- > 0;) {
    LayerNode& n = nodes[i];
    // A node nobody consumed on this path contributes a zero gradient.
    if (!present[i] && n.kind != NodeKind::input) {
      grads[i] = Matrix(g.cached_rows_, n.width);
      present[i] = true;
    }
    switch (n.kind) {
      case NodeKind::input:
        break;
      case NodeKind::dense: {
        auto d = dense_backward(grads[i], n.dense, n.activation, n.cache);
        n.dense_grad.weights = std::move(d.weights);
        n.dense_grad.bias = std::move(d.bias);
        if (nodes[n.predecessors[0]].kind != NodeKind::input)
          accumulate(grads, present, n.predecessors[0], std::move(d.input));
        break;
      }
      case NodeKind::batchnorm: {
        auto d = batchnorm_backward(grads[i], n.batchnorm, n.cache);
        n.gamma_grad = std::move(d.gamma);
        n.beta_grad = std::move(d.beta);
        if (nodes[n.predecessors[0]].kind != NodeKind::input)
          accumulate(grads, present, n.predecessors[0], std::move(d.input));
        break;
      }
      case NodeKind::concat: {
        std::vector<std::size_t> widths;
        for (std::size_t p : n.predecessors) widths.push_back(nodes[p].width);
        auto parts = concat_backward(grads[i], widths);
        for (std::size_t k = 0; k < parts.size(); ++k)
          accumulate(grads, present, n.predecessors[k], std::move(parts[k]));
        break;
      }
      case NodeKind::output_alias:
        accumulate(grads, present, n.predecessors[0], std::move(grads[i]));
        break;
    }
  }
}

ParamCount param_count(const ModelGraph& g) {
  ParamCount c;
  for (const auto& n : g.nodes()) {
    if (n.kind == NodeKind::dense) {
      c.trainable += n.dense.weights.size() + n.dense.bias.size();
    } else if (n.kind == NodeKind::batchnorm) {
      c.trainable += n.batchnorm.gamma.size() + n.batchnorm.beta.size();
      c.non_trainable += n.batchnorm.running_mean.size() + n.batchnorm.running_var.size();
    }
  }
  return c;
}

}  // namespace mldnn
