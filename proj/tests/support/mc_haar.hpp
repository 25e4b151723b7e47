#pragma once

// Monte Carlo oracle: sample Haar-distributed orthogonal matrices as the Q
// factor of a Gaussian matrix (sign-corrected so diag(R) > 0) and average
// monomials in double precision.

#include "sphlas/moments.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace sphlas::testsupport {

class HaarSampler {
 public:
  HaarSampler(int n, uint64_t seed) : n_(n), rng_(seed), gauss_(0.0, 1.0) {}

  // next Haar sample, written as row-major n x n
  const std::vector<double>& next() {
    a_.assign(n_ * n_, 0.0);
    for (auto& x : a_) x = gauss_(rng_);
    q_.assign(n_ * n_, 0.0);
    // modified Gram-Schmidt on columns
    for (int j = 0; j < n_; ++j) {
      for (int i = 0; i < n_; ++i) q_[i * n_ + j] = a_[i * n_ + j];
      for (int k = 0; k < j; ++k) {
        double dot = 0;
        for (int i = 0; i < n_; ++i) dot += q_[i * n_ + k] * q_[i * n_ + j];
        for (int i = 0; i < n_; ++i) q_[i * n_ + j] -= dot * q_[i * n_ + k];
      }
      double nrm = 0;
      for (int i = 0; i < n_; ++i) nrm += q_[i * n_ + j] * q_[i * n_ + j];
      nrm = std::sqrt(nrm);
      // sign fix: make the R diagonal positive
      double head = 0;
      for (int i = 0; i < n_; ++i) head += q_[i * n_ + j] * a_[i * n_ + j];
      double s = (head >= 0 ? 1.0 : -1.0) / nrm;
      for (int i = 0; i < n_; ++i) q_[i * n_ + j] *= s;
    }
    return q_;
  }

  int n() const { return n_; }

 private:
  int n_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> gauss_;
  std::vector<double> a_, q_;
};

struct McEstimate {
  double mean = 0;
  double stderr_ = 0;
};

// Averages of many monomials over shared samples.
inline std::vector<McEstimate> mc_moments(const std::vector<MonomialExponent>& monos, int n,
                                          size_t samples, uint64_t seed) {
  HaarSampler sampler(n, seed);
  size_t m = monos.size();
  std::vector<double> sum(m, 0.0), sumsq(m, 0.0);
  for (size_t s = 0; s < samples; ++s) {
    const auto& q = sampler.next();
    for (size_t t = 0; t < m; ++t) {
      double v = 1.0;
      const auto& e = monos[t].e;
      for (size_t i = 0; i < e.size(); ++i)
        for (size_t j = 0; j < e[i].size(); ++j)
          for (unsigned c = 0; c < e[i][j]; ++c) v *= q[i * n + j];
      sum[t] += v;
      sumsq[t] += v * v;
    }
  }
  std::vector<McEstimate> out(m);
  for (size_t t = 0; t < m; ++t) {
    double mean = sum[t] / static_cast<double>(samples);
    double var = sumsq[t] / static_cast<double>(samples) - mean * mean;
    out[t].mean = mean;
    out[t].stderr_ = std::sqrt(std::max(var, 0.0) / static_cast<double>(samples));
  }
  return out;
}

}  // namespace sphlas::testsupport
