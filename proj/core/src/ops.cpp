// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "conformer_forge/ad/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace conformer_forge::ad {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMat>;
using MutMap = Eigen::Map<RowMat>;

ConstMap as_matrix(const Tensor& t) {
  return ConstMap(t.data(), static_cast<Eigen::Index>(t.rows()),
                  static_cast<Eigen::Index>(t.cols()));
}

MutMap as_matrix(Tensor& t) {
  return MutMap(t.data(), static_cast<Eigen::Index>(t.rows()),
                static_cast<Eigen::Index>(t.cols()));
}

[[noreturn]] void shape_error(const char* op, const Tensor& a, const Tensor& b) {
  throw std::invalid_argument(std::string(op) + ": shape mismatch " + a.shape_string() + " vs " +
                              b.shape_string());
}

void check_segments(const char* op, const Tensor& x, const std::vector<std::size_t>& seg,
                    std::size_t count) {
  if (seg.size() != x.rows()) {
    throw std::invalid_argument(std::string(op) + ": need one segment id per row");
  }
  for (std::size_t s : seg) {
    if (s >= count) throw std::invalid_argument(std::string(op) + ": segment id out of range");
  }
}

// Shared helper for unary elementwise ops: `fwd` maps x -> y and `deriv`
// maps (x, y) -> dy/dx.
template <typename Fwd, typename Deriv>
Var unary(Var x, Fwd fwd, Deriv deriv) {
  const Tensor& xv = x.value();
  Tensor out(xv.shape());
  for (std::size_t i = 0; i < xv.size(); ++i) out[i] = fwd(xv[i]);
  const std::size_t xid = x.id();
  return x.tape().record(std::move(out), {x},
                         [xid, deriv](Tape& t, const Tensor& y, const Tensor& g) {
                           Tensor* gx = t.grad_buffer(xid);
                           if (gx == nullptr) return;
                           const Tensor& xv = t.value(xid);
                           for (std::size_t i = 0; i < g.size(); ++i) {
                             (*gx)[i] += g[i] * deriv(xv[i], y[i]);
                           }
                         });
}

}  // namespace

Var matmul(Var a, Var b) {
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  if (av.cols() != bv.rows()) shape_error("matmul", av, bv);
  Tensor out = Tensor::matrix(av.rows(), bv.cols());
  as_matrix(out).noalias() = as_matrix(av) * as_matrix(bv);
  const std::size_t aid = a.id();
  const std::size_t bid = b.id();
  return a.tape().record(std::move(out), {a, b}, [aid, bid](Tape& t, const Tensor&, const Tensor& g) {
    if (Tensor* ga = t.grad_buffer(aid)) {
      as_matrix(*ga).noalias() += as_matrix(g) * as_matrix(t.value(bid)).transpose();
    }
    if (Tensor* gb = t.grad_buffer(bid)) {
      as_matrix(*gb).noalias() += as_matrix(t.value(aid)).transpose() * as_matrix(g);
    }
  });
}

Var add(Var a, Var b) {
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  if (!av.same_shape(bv)) shape_error("add", av, bv);
  Tensor out(av.shape());
  for (std::size_t i = 0; i < av.size(); ++i) out[i] = av[i] + bv[i];
  const std::size_t aid = a.id();
  const std::size_t bid = b.id();
  return a.tape().record(std::move(out), {a, b}, [aid, bid](Tape& t, const Tensor&, const Tensor& g) {
    for (std::size_t id : {aid, bid}) {
      if (Tensor* gx = t.grad_buffer(id)) {
        for (std::size_t i = 0; i < g.size(); ++i) (*gx)[i] += g[i];
      }
    }
  });
}

Var sub(Var a, Var b) {
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  if (!av.same_shape(bv)) shape_error("sub", av, bv);
  Tensor out(av.shape());
  for (std::size_t i = 0; i < av.size(); ++i) out[i] = av[i] - bv[i];
  const std::size_t aid = a.id();
  const std::size_t bid = b.id();
  return a.tape().record(std::move(out), {a, b}, [aid, bid](Tape& t, const Tensor&, const Tensor& g) {
    if (Tensor* ga = t.grad_buffer(aid)) {
      for (std::size_t i = 0; i < g.size(); ++i) (*ga)[i] += g[i];
    }
    if (Tensor* gb = t.grad_buffer(bid)) {
      for (std::size_t i = 0; i < g.size(); ++i) (*gb)[i] -= g[i];
    }
  });
}

Var mul(Var a, Var b) {
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  if (!av.same_shape(bv)) shape_error("mul", av, bv);
  Tensor out(av.shape());
  for (std::size_t i = 0; i < av.size(); ++i) out[i] = av[i] * bv[i];
  const std::size_t aid = a.id();
  const std::size_t bid = b.id();
  return a.tape().record(std::move(out), {a, b}, [aid, bid](Tape& t, const Tensor&, const Tensor& g) {
    if (Tensor* ga = t.grad_buffer(aid)) {
      const Tensor& bv = t.value(bid);
      for (std::size_t i = 0; i < g.size(); ++i) (*ga)[i] += g[i] * bv[i];
    }
    if (Tensor* gb = t.grad_buffer(bid)) {
      const Tensor& av = t.value(aid);
      for (std::size_t i = 0; i < g.size(); ++i) (*gb)[i] += g[i] * av[i];
    }
  });
}

Var scale(Var a, double factor) {
  const Tensor& av = a.value();
  Tensor out(av.shape());
  for (std::size_t i = 0; i < av.size(); ++i) out[i] = factor * av[i];
  const std::size_t aid = a.id();
  return a.tape().record(std::move(out), {a}, [aid, factor](Tape& t, const Tensor&, const Tensor& g) {
    if (Tensor* ga = t.grad_buffer(aid)) {
      for (std::size_t i = 0; i < g.size(); ++i) (*ga)[i] += factor * g[i];
    }
  });
}

Var add_row(Var x, Var row) {
  const Tensor& xv = x.value();
  const Tensor& rv = row.value();
  const std::size_t n = xv.rows();
  const std::size_t m = xv.cols();
  if (rv.size() != m) shape_error("add_row", xv, rv);
  Tensor out(xv.shape());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m; ++c) out[r * m + c] = xv[r * m + c] + rv[c];
  }
  const std::size_t xid = x.id();
  const std::size_t rid = row.id();
  return x.tape().record(std::move(out), {x, row},
                         [xid, rid, n, m](Tape& t, const Tensor&, const Tensor& g) {
                           if (Tensor* gx = t.grad_buffer(xid)) {
                             for (std::size_t i = 0; i < g.size(); ++i) (*gx)[i] += g[i];
                           }
                           if (Tensor* gr = t.grad_buffer(rid)) {
                             for (std::size_t r = 0; r < n; ++r) {
                               for (std::size_t c = 0; c < m; ++c) (*gr)[c] += g[r * m + c];
                             }
                           }
                         });
}

Var concat(const std::vector<Var>& parts) {
  if (parts.empty()) throw std::invalid_argument("concat: no inputs");
  const std::size_t n = parts.front().rows();
  std::vector<std::size_t> widths;
  std::vector<std::size_t> ids;
  std::size_t total = 0;
  for (const Var& p : parts) {
    if (p.rows() != n) shape_error("concat", parts.front().value(), p.value());
    widths.push_back(p.cols());
    ids.push_back(p.id());
    total += p.cols();
  }
  Tensor out = Tensor::matrix(n, total);
  std::size_t offset = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const Tensor& pv = parts[k].value();
    for (std::size_t r = 0; r < n; ++r) {
      std::copy_n(pv.data() + r * widths[k], widths[k], out.data() + r * total + offset);
    }
    offset += widths[k];
  }
  return parts.front().tape().record(
      std::move(out), parts, [ids, widths, n, total](Tape& t, const Tensor&, const Tensor& g) {
        std::size_t offset = 0;
        for (std::size_t k = 0; k < ids.size(); ++k) {
          if (Tensor* gp = t.grad_buffer(ids[k])) {
            for (std::size_t r = 0; r < n; ++r) {
              for (std::size_t c = 0; c < widths[k]; ++c) {
                (*gp)[r * widths[k] + c] += g[r * total + offset + c];
              }
            }
          }
          offset += widths[k];
        }
      });
}

Var reshape(Var x, std::vector<std::size_t> shape) {
  Tensor out = x.value();
  out.reshape(std::move(shape));
  const std::size_t xid = x.id();
  return x.tape().record(std::move(out), {x}, [xid](Tape& t, const Tensor&, const Tensor& g) {
    if (Tensor* gx = t.grad_buffer(xid)) {
      for (std::size_t i = 0; i < g.size(); ++i) (*gx)[i] += g[i];
    }
  });
}

Var sum(Var x) {
  const Tensor& xv = x.value();
  double s = 0.0;
  for (double v : xv.values()) s += v;
  const std::size_t xid = x.id();
  return x.tape().record(Tensor::scalar(s), {x}, [xid](Tape& t, const Tensor&, const Tensor& g) {
    if (Tensor* gx = t.grad_buffer(xid)) {
      for (std::size_t i = 0; i < gx->size(); ++i) (*gx)[i] += g[0];
    }
  });
}

Var mean(Var x) {
  const std::size_t n = x.value().size();
  if (n == 0) throw std::invalid_argument("mean: empty tensor");
  return scale(sum(x), 1.0 / static_cast<double>(n));
}

Var mean_rows(Var x) {
  const Tensor& xv = x.value();
  const std::size_t n = xv.rows();
  const std::size_t m = xv.cols();
  if (n == 0) throw std::invalid_argument("mean_rows: no rows");
  Tensor out = Tensor::matrix(1, m);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m; ++c) out[c] += xv[r * m + c];
  }
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t c = 0; c < m; ++c) out[c] *= inv;
  const std::size_t xid = x.id();
  return x.tape().record(std::move(out), {x}, [xid, n, m, inv](Tape& t, const Tensor&, const Tensor& g) {
    if (Tensor* gx = t.grad_buffer(xid)) {
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < m; ++c) (*gx)[r * m + c] += g[c] * inv;
      }
    }
  });
}

Var relu(Var x) {
  return unary(
      x, [](double v) { return v > 0.0 ? v : 0.0; },
      [](double v, double) { return v > 0.0 ? 1.0 : 0.0; });
}

Var leaky_relu(Var x, double slope) {
  return unary(
      x, [slope](double v) { return v > 0.0 ? v : slope * v; },
      [slope](double v, double) { return v > 0.0 ? 1.0 : slope; });
}

Var tanh(Var x) {
  return unary(
      x, [](double v) { return std::tanh(v); }, [](double, double y) { return 1.0 - y * y; });
}

Var square(Var x) {
  return unary(
      x, [](double v) { return v * v; }, [](double v, double) { return 2.0 * v; });
}

Var huber(Var x, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("huber: delta must be positive");
  return unary(
      x,
      [delta](double d) {
        const double a = std::abs(d);
        return a <= delta ? 0.5 * d * d : delta * a - 0.5 * delta * delta;
      },
      [delta](double d, double) {
        if (std::abs(d) <= delta) return d;
        return d > 0.0 ? delta : -delta;
      });
}

Var softmax_rows(Var x) {
  const Tensor& xv = x.value();
  const std::size_t n = xv.rows();
  const std::size_t m = xv.cols();
  Tensor out(xv.shape());
  for (std::size_t r = 0; r < n; ++r) {
    const double* row = xv.data() + r * m;
    double* y = out.data() + r * m;
    const double mx = *std::max_element(row, row + m);
    double z = 0.0;
    for (std::size_t c = 0; c < m; ++c) z += (y[c] = std::exp(row[c] - mx));
    for (std::size_t c = 0; c < m; ++c) y[c] /= z;
  }
  const std::size_t xid = x.id();
  return x.tape().record(std::move(out), {x}, [xid, n, m](Tape& t, const Tensor& y, const Tensor& g) {
    Tensor* gx = t.grad_buffer(xid);
    if (gx == nullptr) return;
    for (std::size_t r = 0; r < n; ++r) {
      double dot = 0.0;
      for (std::size_t c = 0; c < m; ++c) dot += g[r * m + c] * y[r * m + c];
      for (std::size_t c = 0; c < m; ++c) (*gx)[r * m + c] += y[r * m + c] * (g[r * m + c] - dot);
    }
  });
}

Var row_norm(Var x) {
  const Tensor& xv = x.value();
  const std::size_t n = xv.rows();
  const std::size_t m = xv.cols();
  Tensor out = Tensor::matrix(n, 1);
  for (std::size_t r = 0; r < n; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < m; ++c) s += xv[r * m + c] * xv[r * m + c];
    out[r] = std::sqrt(s);
  }
  const std::size_t xid = x.id();
  return x.tape().record(std::move(out), {x}, [xid, n, m](Tape& t, const Tensor& y, const Tensor& g) {
    Tensor* gx = t.grad_buffer(xid);
    if (gx == nullptr) return;
    const Tensor& xv = t.value(xid);
    for (std::size_t r = 0; r < n; ++r) {
      if (y[r] == 0.0) continue;
      const double k = g[r] / y[r];
      for (std::size_t c = 0; c < m; ++c) (*gx)[r * m + c] += k * xv[r * m + c];
    }
  });
}

Var gather_rows(Var x, std::vector<std::size_t> index) {
  const Tensor& xv = x.value();
  const std::size_t m = xv.cols();
  const std::size_t n = xv.rows();
  Tensor out = Tensor::matrix(index.size(), m);
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (index[k] >= n) throw std::invalid_argument("gather_rows: index out of range");
    std::copy_n(xv.data() + index[k] * m, m, out.data() + k * m);
  }
  const std::size_t xid = x.id();
  return x.tape().record(std::move(out), {x},
                         [xid, m, index = std::move(index)](Tape& t, const Tensor&, const Tensor& g) {
                           Tensor* gx = t.grad_buffer(xid);
                           if (gx == nullptr) return;
                           for (std::size_t k = 0; k < index.size(); ++k) {
                             double* dst = gx->data() + index[k] * m;
                             const double* src = g.data() + k * m;
                             for (std::size_t c = 0; c < m; ++c) dst[c] += src[c];
                           }
                         });
}

Var segment_sum(Var x, std::vector<std::size_t> segments, std::size_t segment_count) {
  const Tensor& xv = x.value();
  check_segments("segment_sum", xv, segments, segment_count);
  const std::size_t m = xv.cols();
  Tensor out = Tensor::matrix(segment_count, m);
  for (std::size_t r = 0; r < segments.size(); ++r) {
    double* dst = out.data() + segments[r] * m;
    const double* src = xv.data() + r * m;
    for (std::size_t c = 0; c < m; ++c) dst[c] += src[c];
  }
  const std::size_t xid = x.id();
  return x.tape().record(
      std::move(out), {x},
      [xid, m, segments = std::move(segments)](Tape& t, const Tensor&, const Tensor& g) {
        Tensor* gx = t.grad_buffer(xid);
        if (gx == nullptr) return;
        for (std::size_t r = 0; r < segments.size(); ++r) {
          double* dst = gx->data() + r * m;
          const double* src = g.data() + segments[r] * m;
          for (std::size_t c = 0; c < m; ++c) dst[c] += src[c];
        }
      });
}

Var segment_mean(Var x, std::vector<std::size_t> segments, std::size_t segment_count) {
  const Tensor& xv = x.value();
  check_segments("segment_mean", xv, segments, segment_count);
  const std::size_t m = xv.cols();
  std::vector<double> inv(segment_count, 0.0);
  for (std::size_t s : segments) inv[s] += 1.0;
  for (double& v : inv) v = v > 0.0 ? 1.0 / v : 0.0;

  Tensor out = Tensor::matrix(segment_count, m);
  for (std::size_t r = 0; r < segments.size(); ++r) {
    double* dst = out.data() + segments[r] * m;
    const double* src = xv.data() + r * m;
    const double w = inv[segments[r]];
    for (std::size_t c = 0; c < m; ++c) dst[c] += w * src[c];
  }
  const std::size_t xid = x.id();
  return x.tape().record(
      std::move(out), {x},
      [xid, m, segments = std::move(segments), inv = std::move(inv)](Tape& t, const Tensor&,
                                                                     const Tensor& g) {
        Tensor* gx = t.grad_buffer(xid);
        if (gx == nullptr) return;
        for (std::size_t r = 0; r < segments.size(); ++r) {
          double* dst = gx->data() + r * m;
          const double* src = g.data() + segments[r] * m;
          const double w = inv[segments[r]];
          for (std::size_t c = 0; c < m; ++c) dst[c] += w * src[c];
        }
      });
}

Var segment_softmax(Var x, std::vector<std::size_t> segments, std::size_t segment_count) {
  const Tensor& xv = x.value();
  check_segments("segment_softmax", xv, segments, segment_count);
  const std::size_t m = xv.cols();
  std::vector<double> mx(segment_count * m, -std::numeric_limits<double>::infinity());
  for (std::size_t r = 0; r < segments.size(); ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      double& v = mx[segments[r] * m + c];
      v = std::max(v, xv[r * m + c]);
    }
  }
  Tensor out(xv.shape());
  std::vector<double> z(segment_count * m, 0.0);
  for (std::size_t r = 0; r < segments.size(); ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      const std::size_t k = segments[r] * m + c;
      z[k] += (out[r * m + c] = std::exp(xv[r * m + c] - mx[k]));
    }
  }
  for (std::size_t r = 0; r < segments.size(); ++r) {
    for (std::size_t c = 0; c < m; ++c) out[r * m + c] /= z[segments[r] * m + c];
  }
  const std::size_t xid = x.id();
  return x.tape().record(
      std::move(out), {x},
      [xid, m, segment_count, segments = std::move(segments)](Tape& t, const Tensor& y,
                                                              const Tensor& g) {
        Tensor* gx = t.grad_buffer(xid);
        if (gx == nullptr) return;
        std::vector<double> dot(segment_count * m, 0.0);
        for (std::size_t r = 0; r < segments.size(); ++r) {
          for (std::size_t c = 0; c < m; ++c) dot[segments[r] * m + c] += g[r * m + c] * y[r * m + c];
        }
        for (std::size_t r = 0; r < segments.size(); ++r) {
          for (std::size_t c = 0; c < m; ++c) {
            (*gx)[r * m + c] += y[r * m + c] * (g[r * m + c] - dot[segments[r] * m + c]);
          }
        }
      });
}

Var head_dot(Var x, Var a) {
  const Tensor& xv = x.value();
  const Tensor& av = a.value();
  const std::size_t heads = av.rows();
  const std::size_t d = av.cols();
  if (xv.cols() != heads * d) shape_error("head_dot", xv, av);
  const std::size_t n = xv.rows();
  const std::size_t w = heads * d;
  Tensor out = Tensor::matrix(n, heads);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t h = 0; h < heads; ++h) {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) s += xv[r * w + h * d + k] * av[h * d + k];
      out[r * heads + h] = s;
    }
  }
  const std::size_t xid = x.id();
  const std::size_t aid = a.id();
  return x.tape().record(
      std::move(out), {x, a}, [xid, aid, n, heads, d, w](Tape& t, const Tensor&, const Tensor& g) {
        if (Tensor* gx = t.grad_buffer(xid)) {
          const Tensor& av = t.value(aid);
          for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t h = 0; h < heads; ++h) {
              const double gr = g[r * heads + h];
              for (std::size_t k = 0; k < d; ++k) (*gx)[r * w + h * d + k] += gr * av[h * d + k];
            }
          }
        }
        if (Tensor* ga = t.grad_buffer(aid)) {
          const Tensor& xv = t.value(xid);
          for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t h = 0; h < heads; ++h) {
              const double gr = g[r * heads + h];
              for (std::size_t k = 0; k < d; ++k) (*ga)[h * d + k] += gr * xv[r * w + h * d + k];
            }
          }
        }
      });
}

Var attention_aggregate(Var values, Var alpha, std::vector<std::size_t> src,
                        std::vector<std::size_t> dst, std::size_t out_rows) {
  const Tensor& vv = values.value();
  const Tensor& av = alpha.value();
  const std::size_t heads = av.cols();
  const std::size_t edges = av.rows();
  if (src.size() != edges || dst.size() != edges) {
    throw std::invalid_argument("attention_aggregate: edge index length mismatch");
  }
  if (heads == 0 || vv.cols() % heads != 0) shape_error("attention_aggregate", vv, av);
  const std::size_t w = vv.cols();
  const std::size_t d = w / heads;
  for (std::size_t e = 0; e < edges; ++e) {
    if (src[e] >= vv.rows() || dst[e] >= out_rows) {
      throw std::invalid_argument("attention_aggregate: edge index out of range");
    }
  }
  Tensor out = Tensor::matrix(out_rows, w);
  for (std::size_t e = 0; e < edges; ++e) {
    const double* v = vv.data() + src[e] * w;
    double* o = out.data() + dst[e] * w;
    for (std::size_t h = 0; h < heads; ++h) {
      const double a = av[e * heads + h];
      for (std::size_t k = 0; k < d; ++k) o[h * d + k] += a * v[h * d + k];
    }
  }
  const std::size_t vid = values.id();
  const std::size_t aid = alpha.id();
  return values.tape().record(
      std::move(out), {values, alpha},
      [vid, aid, heads, d, w, src = std::move(src), dst = std::move(dst)](Tape& t, const Tensor&,
                                                                          const Tensor& g) {
        Tensor* gv = t.grad_buffer(vid);
        Tensor* ga = t.grad_buffer(aid);
        const Tensor& vv = t.value(vid);
        const Tensor& av = t.value(aid);
        for (std::size_t e = 0; e < src.size(); ++e) {
          const double* go = g.data() + dst[e] * w;
          for (std::size_t h = 0; h < heads; ++h) {
            if (gv != nullptr) {
              const double a = av[e * heads + h];
              double* dv = gv->data() + src[e] * w + h * d;
              for (std::size_t k = 0; k < d; ++k) dv[k] += a * go[h * d + k];
            }
            if (ga != nullptr) {
              const double* v = vv.data() + src[e] * w + h * d;
              double s = 0.0;
              for (std::size_t k = 0; k < d; ++k) s += go[h * d + k] * v[k];
              (*ga)[e * heads + h] += s;
            }
          }
        }
      });
}

Var head_mean(Var x, std::size_t heads) {
  const Tensor& xv = x.value();
  if (heads == 0 || xv.cols() % heads != 0) {
    throw std::invalid_argument("head_mean: width not divisible by head count");
  }
  const std::size_t n = xv.rows();
  const std::size_t w = xv.cols();
  const std::size_t d = w / heads;
  const double inv = 1.0 / static_cast<double>(heads);
  Tensor out = Tensor::matrix(n, d);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t h = 0; h < heads; ++h) {
      for (std::size_t k = 0; k < d; ++k) out[r * d + k] += inv * xv[r * w + h * d + k];
    }
  }
  const std::size_t xid = x.id();
  return x.tape().record(std::move(out), {x},
                         [xid, n, heads, d, w, inv](Tape& t, const Tensor&, const Tensor& g) {
                           Tensor* gx = t.grad_buffer(xid);
                           if (gx == nullptr) return;
                           for (std::size_t r = 0; r < n; ++r) {
                             for (std::size_t h = 0; h < heads; ++h) {
                               for (std::size_t k = 0; k < d; ++k) {
                                 (*gx)[r * w + h * d + k] += inv * g[r * d + k];
                               }
                             }
                           }
                         });
}

}  // namespace conformer_forge::ad
