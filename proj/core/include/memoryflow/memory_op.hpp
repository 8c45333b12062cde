#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "memoryflow/kernel.hpp"

namespace memoryflow {

// Quadrature weights for the discrete memory operator on a uniform time grid:
//   G_tau v(t_n) = W0 v^n - sum_{k=1..M} w_k v^{n-k},
// where w_k = (1/(k tau)) integral of rho over ((k-1) tau, k tau) and
// M tau = delta. The weights are positive and sum_k w_k (k tau) equals the
// kernel mass exactly, which the first-moment identities below rely on.
struct MemoryWeights {
  double tau{0.0};
  int M{0};
  std::vector<double> w;  // w[k-1] holds w_k
  double W0{0.0};
};

// tau must divide delta to machine accuracy; closed-form weights for the
// fractional families, exact piecewise-linear integrals for Tabulated.
MemoryWeights build_weights(const KernelSpec& spec, double tau);

// Evaluates G_tau at one time level. history is newest-first:
// history[0] = v^{n-1}, ..., history[M-1] = v^{n-M}.
double apply(const MemoryWeights& weights, double current,
             std::span<const double> history);

// c_{delta,alpha} = (1-alpha) delta^(alpha-1) sum_{k>=1} (1/k) integral_{k-1}^k s^(-alpha) ds,
// the small-tau limit of W0 tau^alpha for the NormalizedFractional kernel.
// Absolute accuracy better than 1e-10.
double c_coefficient(double alpha, double delta);

// Fixed-capacity ring; index 0 is the most recent push. Starts filled with
// copies of the fill value so pre-start history reads are well defined.
template <class T>
class RingBuffer {
 public:
  RingBuffer(std::size_t capacity, const T& fill)
      : buf_(capacity, fill), head_(0) {}

  void push(T value) {
    head_ = (head_ + buf_.size() - 1) % buf_.size();
    buf_[head_] = std::move(value);
  }

  const T& operator[](std::size_t steps_back) const {
    return buf_[(head_ + steps_back) % buf_.size()];
  }

  T& operator[](std::size_t steps_back) {
    return buf_[(head_ + steps_back) % buf_.size()];
  }

  std::size_t capacity() const { return buf_.size(); }

 private:
  std::vector<T> buf_;
  std::size_t head_;
};

}  // namespace memoryflow
