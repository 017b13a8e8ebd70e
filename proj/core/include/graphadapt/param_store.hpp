#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace graphadapt {

/// Named real tensor with gradient and ADAM moment slots.
struct Tensor {
  std::string name;
  std::vector<std::size_t> shape;
  std::vector<double> value;
  std::vector<double> grad;
  std::vector<double> m;
  std::vector<double> v;

  std::size_t size() const noexcept { return value.size(); }
};

/// Flat, ordered collection of every trainable tensor of a model.
///
/// Tensors are laid out back to back in declaration order; `offset(t)` is the
/// position of tensor t inside the flat views used by gradient buffers and
/// checkpoints.
class ParamStore {
 public:
  /// Appends a zero-initialized tensor; returns its index.
  std::size_t add(std::string name, std::vector<std::size_t> shape);

  std::size_t num_tensors() const noexcept { return tensors_.size(); }
  std::size_t parameter_count() const noexcept { return total_; }

  Tensor& tensor(std::size_t i) { return tensors_.at(i); }
  const Tensor& tensor(std::size_t i) const { return tensors_.at(i); }
  std::size_t index_of(std::string_view name) const;
  std::size_t offset(std::size_t i) const { return offsets_.at(i); }

  std::vector<double> flat_values() const;
  void set_flat_values(std::span<const double> values);
  std::vector<double> flat_grads() const;

  /// grad += flat (tensor-major, declaration order).
  void accumulate_grad(std::span<const double> flat);
  void zero_grad();

  std::uint64_t step() const noexcept { return step_; }
  void set_step(std::uint64_t t) noexcept { step_ = t; }

 private:
  std::vector<Tensor> tensors_;
  std::vector<std::size_t> offsets_;
  std::size_t total_ = 0;
  std::uint64_t step_ = 0;
};

}  // namespace graphadapt
