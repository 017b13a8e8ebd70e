#include "graphadapt/param_store.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "graphadapt/error.hpp"

namespace graphadapt {

std::size_t ParamStore::add(std::string name, std::vector<std::size_t> shape) {
  if (std::any_of(tensors_.begin(), tensors_.end(),
                  [&](const Tensor& t) { return t.name == name; })) {
    throw InvalidArgument("ParamStore: duplicate tensor name '" + name + "'");
  }
  const std::size_t n = std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                                        std::multiplies<>());
  Tensor t;
  t.name = std::move(name);
  t.shape = std::move(shape);
  t.value.assign(n, 0.0);
  t.grad.assign(n, 0.0);
  t.m.assign(n, 0.0);
  t.v.assign(n, 0.0);
  offsets_.push_back(total_);
  total_ += n;
  tensors_.push_back(std::move(t));
  return tensors_.size() - 1;
}

std::size_t ParamStore::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < tensors_.size(); ++i) {
    if (tensors_[i].name == name) return i;
  }
  throw InvalidArgument("ParamStore: no tensor named '" + std::string(name) + "'");
}

std::vector<double> ParamStore::flat_values() const {
  std::vector<double> out;
  out.reserve(total_);
  for (const auto& t : tensors_) out.insert(out.end(), t.value.begin(), t.value.end());
  return out;
}

void ParamStore::set_flat_values(std::span<const double> values) {
  if (values.size() != total_) throw InvalidArgument("ParamStore: flat value size mismatch");
  for (std::size_t i = 0; i < tensors_.size(); ++i) {
    std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(offsets_[i]), tensors_[i].size(),
                tensors_[i].value.begin());
  }
}

std::vector<double> ParamStore::flat_grads() const {
  std::vector<double> out;
  out.reserve(total_);
  for (const auto& t : tensors_) out.insert(out.end(), t.grad.begin(), t.grad.end());
  return out;
}

void ParamStore::accumulate_grad(std::span<const double> flat) {
  if (flat.size() != total_) throw InvalidArgument("ParamStore: flat gradient size mismatch");
  for (std::size_t i = 0; i < tensors_.size(); ++i) {
    auto& g = tensors_[i].grad;
    for (std::size_t e = 0; e < g.size(); ++e) g[e] += flat[offsets_[i] + e];
  }
}

void ParamStore::zero_grad() {
  for (auto& t : tensors_) std::fill(t.grad.begin(), t.grad.end(), 0.0);
}

}  // namespace graphadapt
