// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "conformer_forge/ad/batchnorm.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace conformer_forge::ad {

BatchNorm::BatchNorm(const std::string& prefix, std::size_t features)
    : gamma(prefix + ".gamma", Tensor({features}, 1.0)),
      beta(prefix + ".beta", Tensor({features}, 0.0)),
      running_mean({features}, 0.0),
      running_var({features}, 1.0) {}

Var BatchNorm::forward(Var x, Mode mode, bool update_running) {
  const Tensor& xv = x.value();
  const std::size_t n = xv.rows();
  const std::size_t m = xv.cols();
  if (m != features()) {
    throw std::invalid_argument("batchnorm: expected " + std::to_string(features()) +
                                " features, got " + xv.shape_string());
  }
  if (mode == Mode::kTrain && n < 2) {
    throw std::invalid_argument("batchnorm: train mode needs a batch of at least 2 rows");
  }

  std::vector<double> mu(m, 0.0);
  std::vector<double> var(m, 0.0);
  if (mode == Mode::kTrain) {
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < m; ++c) mu[c] += xv[r * m + c];
    }
    for (double& v : mu) v /= static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < m; ++c) {
        const double d = xv[r * m + c] - mu[c];
        var[c] += d * d;
      }
    }
    for (double& v : var) v /= static_cast<double>(n);
    if (update_running) {
      const double unbias = static_cast<double>(n) / static_cast<double>(n - 1);
      for (std::size_t c = 0; c < m; ++c) {
        running_mean[c] = (1.0 - momentum) * running_mean[c] + momentum * mu[c];
        running_var[c] = (1.0 - momentum) * running_var[c] + momentum * var[c] * unbias;
      }
    }
  } else {
    for (std::size_t c = 0; c < m; ++c) {
      mu[c] = running_mean[c];
      var[c] = running_var[c];
    }
  }

  std::vector<double> inv_std(m);
  for (std::size_t c = 0; c < m; ++c) inv_std[c] = 1.0 / std::sqrt(var[c] + eps);

  Tensor xhat(xv.shape());
  Tensor out(xv.shape());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      const std::size_t k = r * m + c;
      xhat[k] = (xv[k] - mu[c]) * inv_std[c];
      out[k] = gamma.value[c] * xhat[k] + beta.value[c];
    }
  }

  Tape& tape = x.tape();
  Var g = tape.parameter(gamma);
  Var b = tape.parameter(beta);
  const std::size_t xid = x.id();
  const std::size_t gid = g.id();
  const std::size_t bid = b.id();
  const bool train = mode == Mode::kTrain;
  return tape.record(
      std::move(out), {x, g, b},
      [xid, gid, bid, n, m, train, inv_std = std::move(inv_std), xhat = std::move(xhat)](
          Tape& t, const Tensor&, const Tensor& grad) {
        const Tensor& gamma = t.value(gid);
        if (Tensor* gg = t.grad_buffer(gid)) {
          for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < m; ++c) (*gg)[c] += grad[r * m + c] * xhat[r * m + c];
          }
        }
        if (Tensor* gb = t.grad_buffer(bid)) {
          for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < m; ++c) (*gb)[c] += grad[r * m + c];
          }
        }
        Tensor* gx = t.grad_buffer(xid);
        if (gx == nullptr) return;
        if (!train) {
          for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < m; ++c) {
              (*gx)[r * m + c] += grad[r * m + c] * gamma[c] * inv_std[c];
            }
          }
          return;
        }
        // dx = inv_std / n * (n * dxhat - sum(dxhat) - xhat * sum(dxhat * xhat))
        std::vector<double> sum_d(m, 0.0);
        std::vector<double> sum_dx(m, 0.0);
        for (std::size_t r = 0; r < n; ++r) {
          for (std::size_t c = 0; c < m; ++c) {
            const double d = grad[r * m + c] * gamma[c];
            sum_d[c] += d;
            sum_dx[c] += d * xhat[r * m + c];
          }
        }
        const double inv_n = 1.0 / static_cast<double>(n);
        for (std::size_t r = 0; r < n; ++r) {
          for (std::size_t c = 0; c < m; ++c) {
            const double d = grad[r * m + c] * gamma[c];
            (*gx)[r * m + c] +=
                inv_std[c] * inv_n *
                (static_cast<double>(n) * d - sum_d[c] - xhat[r * m + c] * sum_dx[c]);
          }
        }
      });
}

}  // namespace conformer_forge::ad
