/*
 * Copyright 2026 The dagflow Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "dagflow/ops.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <string>

#include "dagflow/errors.hpp"
#include "gemm.hpp"

namespace dagflow::ad {

namespace {

void require_same_shape(Var a, Var b, const char* op) {
  if (a.shape() != b.shape()) {
    throw invalid_argument(std::string(op) + ": shape mismatch " + a.value().shape_string() +
                           " vs " + b.value().shape_string());
  }
}

void require_rank(Var x, std::size_t rank, const char* op) {
  if (x.value().rank() != rank) {
    throw invalid_argument(std::string(op) + ": expected rank " + std::to_string(rank) +
                           ", got " + x.value().shape_string());
  }
}

// Runs `f(grad_buffer)` only when node `id` takes part in differentiation.
template <typename F>
void accumulate_into(Tape& t, std::size_t id, F&& f) {
  if (t.requires_grad(id)) f(t.accumulate(id));
}

template <typename F>
Var unary_elementwise(const char* op, Var x, F&& forward,
                      Tape::BackwardFn backward) {
  const Tensor& v = x.value();
  Tensor out(v.shape());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = forward(v[i]);
  return x.tape().record(op, std::move(out), {x}, std::move(backward));
}

}  // namespace

Var add(Var a, Var b) {
  require_same_shape(a, b, "add");
  Tensor out = a.value();
  const Tensor& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += bv[i];
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape().record("add", std::move(out), {a, b}, [ia, ib](Tape& t, std::size_t self) {
    const Tensor& g = t.grad(self);
    for (std::size_t id : {ia, ib}) {
      accumulate_into(t, id, [&](Tensor& acc) {
        for (std::size_t i = 0; i < g.size(); ++i) acc[i] += g[i];
      });
    }
  });
}

Var sub(Var a, Var b) {
  require_same_shape(a, b, "sub");
  Tensor out = a.value();
  const Tensor& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= bv[i];
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape().record("sub", std::move(out), {a, b}, [ia, ib](Tape& t, std::size_t self) {
    const Tensor& g = t.grad(self);
    accumulate_into(t, ia, [&](Tensor& acc) {
      for (std::size_t i = 0; i < g.size(); ++i) acc[i] += g[i];
    });
    accumulate_into(t, ib, [&](Tensor& acc) {
      for (std::size_t i = 0; i < g.size(); ++i) acc[i] -= g[i];
    });
  });
}

Var mul(Var a, Var b) {
  require_same_shape(a, b, "mul");
  Tensor out = a.value();
  const Tensor& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= bv[i];
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape().record("mul", std::move(out), {a, b}, [ia, ib](Tape& t, std::size_t self) {
    const Tensor& g = t.grad(self);
    const Tensor& av = t.value(ia);
    const Tensor& bv = t.value(ib);
    accumulate_into(t, ia, [&](Tensor& acc) {
      for (std::size_t i = 0; i < g.size(); ++i) acc[i] += g[i] * bv[i];
    });
    accumulate_into(t, ib, [&](Tensor& acc) {
      for (std::size_t i = 0; i < g.size(); ++i) acc[i] += g[i] * av[i];
    });
  });
}

Var square(Var x) {
  const std::size_t ix = x.id();
  return unary_elementwise("square", x, [](double v) { return v * v; },
                           [ix](Tape& t, std::size_t self) {
                             const Tensor& g = t.grad(self);
                             const Tensor& xv = t.value(ix);
                             Tensor& acc = t.accumulate(ix);
                             for (std::size_t i = 0; i < g.size(); ++i) acc[i] += 2.0 * xv[i] * g[i];
                           });
}

Var exp(Var x) {
  const std::size_t ix = x.id();
  return unary_elementwise("exp", x, [](double v) { return std::exp(v); },
                           [ix](Tape& t, std::size_t self) {
                             const Tensor& g = t.grad(self);
                             const Tensor& y = t.value(self);
                             Tensor& acc = t.accumulate(ix);
                             for (std::size_t i = 0; i < g.size(); ++i) acc[i] += y[i] * g[i];
                           });
}

Var tanh(Var x) {
  const std::size_t ix = x.id();
  return unary_elementwise("tanh", x, [](double v) { return std::tanh(v); },
                           [ix](Tape& t, std::size_t self) {
                             const Tensor& g = t.grad(self);
                             const Tensor& y = t.value(self);
                             Tensor& acc = t.accumulate(ix);
                             for (std::size_t i = 0; i < g.size(); ++i)
                               acc[i] += (1.0 - y[i] * y[i]) * g[i];
                           });
}

Var relu(Var x) {
  const std::size_t ix = x.id();
  return unary_elementwise("relu", x, [](double v) { return v > 0.0 ? v : 0.0; },
                           [ix](Tape& t, std::size_t self) {
                             const Tensor& g = t.grad(self);
                             const Tensor& xv = t.value(ix);
                             Tensor& acc = t.accumulate(ix);
                             for (std::size_t i = 0; i < g.size(); ++i)
                               if (xv[i] > 0.0) acc[i] += g[i];
                           });
}

Var scale(Var x, double factor) {
  const std::size_t ix = x.id();
  return unary_elementwise("scale", x, [factor](double v) { return v * factor; },
                           [ix, factor](Tape& t, std::size_t self) {
                             const Tensor& g = t.grad(self);
                             Tensor& acc = t.accumulate(ix);
                             for (std::size_t i = 0; i < g.size(); ++i) acc[i] += factor * g[i];
                           });
}

Var add_scalar(Var x, double c) {
  const std::size_t ix = x.id();
  return unary_elementwise("add_scalar", x, [c](double v) { return v + c; },
                           [ix](Tape& t, std::size_t self) {
                             const Tensor& g = t.grad(self);
                             Tensor& acc = t.accumulate(ix);
                             for (std::size_t i = 0; i < g.size(); ++i) acc[i] += g[i];
                           });
}

Var gaussian_logpdf(Var x) {
  static const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);
  const std::size_t ix = x.id();
  return unary_elementwise("gaussian_logpdf", x,
                           [](double v) { return -0.5 * v * v - kHalfLog2Pi; },
                           [ix](Tape& t, std::size_t self) {
                             const Tensor& g = t.grad(self);
                             const Tensor& xv = t.value(ix);
                             Tensor& acc = t.accumulate(ix);
                             for (std::size_t i = 0; i < g.size(); ++i) acc[i] -= xv[i] * g[i];
                           });
}

Var sum(Var x) {
  double s = 0.0;
  for (double v : x.value().data()) s += v;
  const std::size_t ix = x.id();
  return x.tape().record("sum", Tensor::scalar(s), {x}, [ix](Tape& t, std::size_t self) {
    const double g = t.grad(self)[0];
    Tensor& acc = t.accumulate(ix);
    for (double& a : acc.data()) a += g;
  });
}

Var mean(Var x) {
  const std::size_t n = x.value().size();
  if (n == 0) throw invalid_argument("mean: empty tensor");
  return scale(sum(x), 1.0 / static_cast<double>(n));
}

Var matmul(Var a, Var b) {
  require_rank(a, 2, "matmul");
  require_rank(b, 2, "matmul");
  const std::size_t m = a.shape()[0], k = a.shape()[1], n = b.shape()[1];
  if (b.shape()[0] != k) {
    throw invalid_argument("matmul: inner dimension mismatch " + a.value().shape_string() + " * " +
                           b.value().shape_string());
  }
  Tensor out({m, n});
  detail::gemm(a.value().data().data(), false, b.value().data().data(), false, out.data().data(), m, n, k,
               false);
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape().record("matmul", std::move(out), {a, b}, [ia, ib, m, n, k](Tape& t, std::size_t self) {
    const double* g = t.grad(self).data().data();
    accumulate_into(t, ia, [&](Tensor& acc) {
      detail::gemm(g, false, t.value(ib).data().data(), true, acc.data().data(), m, k, n, true);
    });
    accumulate_into(t, ib, [&](Tensor& acc) {
      detail::gemm(t.value(ia).data().data(), true, g, false, acc.data().data(), k, n, m, true);
    });
  });
}

Var affine(Var x, Var w, Var bias) {
  require_rank(x, 2, "affine");
  require_rank(w, 2, "affine");
  require_rank(bias, 1, "affine");
  const std::size_t m = x.shape()[0], p = x.shape()[1], q = w.shape()[1];
  if (w.shape()[0] != p || bias.shape()[0] != q) {
    throw invalid_argument("affine: incompatible shapes x" + x.value().shape_string() + " w" +
                           w.value().shape_string() + " b" + bias.value().shape_string());
  }
  const Tensor& bv = bias.value();
  Tensor out({m, q});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < q; ++j) out[i * q + j] = bv[j];
  detail::gemm(x.value().data().data(), false, w.value().data().data(), false, out.data().data(), m, q, p,
               true);
  const std::size_t ix = x.id(), iw = w.id(), ib = bias.id();
  return x.tape().record("affine", std::move(out), {x, w, bias},
                         [ix, iw, ib, m, p, q](Tape& t, std::size_t self) {
    const Tensor& g = t.grad(self);
    accumulate_into(t, ix, [&](Tensor& acc) {
      detail::gemm(g.data().data(), false, t.value(iw).data().data(), true, acc.data().data(), m, p, q, true);
    });
    accumulate_into(t, iw, [&](Tensor& acc) {
      detail::gemm(t.value(ix).data().data(), true, g.data().data(), false, acc.data().data(), p, q, m, true);
    });
    accumulate_into(t, ib, [&](Tensor& acc) {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < q; ++j) acc[j] += g[i * q + j];
    });
  });
}

Var apply_mask(Var w, const DenseMatrix& mask) {
  require_rank(w, 2, "apply_mask");
  if (w.shape()[0] != mask.rows() || w.shape()[1] != mask.cols()) {
    throw invalid_argument("apply_mask: mask shape does not match weight shape " +
                           w.value().shape_string());
  }
  auto shared_mask = std::make_shared<const DenseMatrix>(mask);
  Tensor out = w.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= mask.data()[i];
  const std::size_t iw = w.id();
  return w.tape().record("apply_mask", std::move(out), {w},
                         [iw, shared_mask](Tape& t, std::size_t self) {
                           const Tensor& g = t.grad(self);
                           Tensor& acc = t.accumulate(iw);
                           auto mk = shared_mask->data();
                           for (std::size_t i = 0; i < g.size(); ++i) acc[i] += g[i] * mk[i];
                         });
}

Var masked_affine(Var x, Var w, const DenseMatrix& mask, Var bias) {
  return affine(x, apply_mask(w, mask), bias);
}

Var slice_rows(Var x, std::size_t count) {
  require_rank(x, 2, "slice_rows");
  const std::size_t rows = x.shape()[0], cols = x.shape()[1];
  if (count > rows) throw invalid_argument("slice_rows: count exceeds row count");
  if (count == rows) return x;
  auto src = x.value().data();
  Tensor out({count, cols}, std::vector<double>(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(count * cols)));
  const std::size_t ix = x.id();
  return x.tape().record("slice_rows", std::move(out), {x}, [ix](Tape& t, std::size_t self) {
    const Tensor& g = t.grad(self);
    Tensor& acc = t.accumulate(ix);
    for (std::size_t i = 0; i < g.size(); ++i) acc[i] += g[i];
  });
}

Var trace(Var a) {
  require_rank(a, 2, "trace");
  const std::size_t n = a.shape()[0];
  if (a.shape()[1] != n) throw invalid_argument("trace: matrix must be square");
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a.value()[i * n + i];
  const std::size_t ia = a.id();
  return a.tape().record("trace", Tensor::scalar(s), {a}, [ia, n](Tape& t, std::size_t self) {
    const double g = t.grad(self)[0];
    Tensor& acc = t.accumulate(ia);
    for (std::size_t i = 0; i < n; ++i) acc[i * n + i] += g;
  });
}

Var matrix_exp(Var a) {
  require_rank(a, 2, "matrix_exp");
  const DenseMatrix e = dagflow::matrix_exp(a.value().to_matrix());
  const std::size_t ia = a.id();
  return a.tape().record("matrix_exp", Tensor::from_matrix(e), {a}, [ia](Tape& t, std::size_t self) {
    // Adjoint of the Frechet derivative: L_exp(A^T, G), read from the upper
    // right block of exp([[A^T, G], [0, A^T]]).
    const DenseMatrix at = transpose(t.value(ia).to_matrix());
    const DenseMatrix g = t.grad(self).to_matrix();
    const std::size_t n = at.rows();
    DenseMatrix block(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        block(i, j) = at(i, j);
        block(n + i, n + j) = at(i, j);
        block(i, n + j) = g(i, j);
      }
    const DenseMatrix eb = dagflow::matrix_exp(block);
    Tensor& acc = t.accumulate(ia);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) acc[i * n + j] += eb(i, n + j);
  });
}

Var scale_columns(Var matrices, Var s) {
  require_rank(s, 2, "scale_columns");
  const Tensor& mv = matrices.value();
  const bool shared = mv.rank() == 2;
  if (!shared) require_rank(matrices, 3, "scale_columns");
  const std::size_t m = s.shape()[0];
  const std::size_t p = shared ? mv.dim(0) : mv.dim(1);
  const std::size_t q = shared ? mv.dim(1) : mv.dim(2);
  if (s.shape()[1] != q || (!shared && mv.dim(0) != m)) {
    throw invalid_argument("scale_columns: incompatible shapes " + mv.shape_string() + " and " +
                           s.value().shape_string());
  }
  const Tensor& sv = s.value();
  Tensor out({m, p, q});
  for (std::size_t b = 0; b < m; ++b) {
    const double* src = shared ? &mv[0] : &mv[b * p * q];
    const double* sb = &sv[b * q];
    double* dst = &out[b * p * q];
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < q; ++j) dst[i * q + j] = src[i * q + j] * sb[j];
  }
  const std::size_t im = matrices.id(), is = s.id();
  return s.tape().record("scale_columns", std::move(out), {matrices, s},
                         [im, is, shared, m, p, q](Tape& t, std::size_t self) {
    const Tensor& g = t.grad(self);
    const Tensor& mv = t.value(im);
    const Tensor& sv = t.value(is);
    accumulate_into(t, im, [&](Tensor& acc) {
      for (std::size_t b = 0; b < m; ++b) {
        double* dst = shared ? &acc[0] : &acc[b * p * q];
        const double* gb = &g[b * p * q];
        const double* sb = &sv[b * q];
        for (std::size_t i = 0; i < p; ++i)
          for (std::size_t j = 0; j < q; ++j) dst[i * q + j] += gb[i * q + j] * sb[j];
      }
    });
    accumulate_into(t, is, [&](Tensor& acc) {
      for (std::size_t b = 0; b < m; ++b) {
        const double* src = shared ? &mv[0] : &mv[b * p * q];
        const double* gb = &g[b * p * q];
        double* ab = &acc[b * q];
        for (std::size_t i = 0; i < p; ++i)
          for (std::size_t j = 0; j < q; ++j) ab[j] += gb[i * q + j] * src[i * q + j];
      }
    });
  });
}

Var batched_matmul(Var x, Var y) {
  require_rank(x, 3, "batched_matmul");
  const Tensor& xv = x.value();
  const Tensor& yv = y.value();
  const bool shared = yv.rank() == 2;
  if (!shared) require_rank(y, 3, "batched_matmul");
  const std::size_t m = xv.dim(0), p = xv.dim(1), q = xv.dim(2);
  const std::size_t yq = shared ? yv.dim(0) : yv.dim(1);
  const std::size_t r = shared ? yv.dim(1) : yv.dim(2);
  if (yq != q || (!shared && yv.dim(0) != m)) {
    throw invalid_argument("batched_matmul: incompatible shapes " + xv.shape_string() + " and " +
                           yv.shape_string());
  }
  Tensor out({m, p, r});
  for (std::size_t b = 0; b < m; ++b) {
    const double* xb = &xv[b * p * q];
    const double* yb = shared ? &yv[0] : &yv[b * q * r];
    double* ob = &out[b * p * r];
    for (std::size_t i = 0; i < p; ++i) {
      double* orow = ob + i * r;
      for (std::size_t k = 0; k < q; ++k) {
        const double xik = xb[i * q + k];
        if (xik == 0.0) continue;
        const double* yrow = yb + k * r;
        for (std::size_t j = 0; j < r; ++j) orow[j] += xik * yrow[j];
      }
    }
  }
  const std::size_t ix = x.id(), iy = y.id();
  return x.tape().record("batched_matmul", std::move(out), {x, y},
                         [ix, iy, shared, m, p, q, r](Tape& t, std::size_t self) {
    const Tensor& g = t.grad(self);
    const Tensor& xv = t.value(ix);
    const Tensor& yv = t.value(iy);
    accumulate_into(t, ix, [&](Tensor& acc) {
      for (std::size_t b = 0; b < m; ++b) {
        const double* gb = &g[b * p * r];
        const double* yb = shared ? &yv[0] : &yv[b * q * r];
        double* ab = &acc[b * p * q];
        for (std::size_t i = 0; i < p; ++i) {
          const double* grow = gb + i * r;
          for (std::size_t k = 0; k < q; ++k) {
            const double* yrow = yb + k * r;
            double s = 0.0;
            for (std::size_t j = 0; j < r; ++j) s += grow[j] * yrow[j];
            ab[i * q + k] += s;
          }
        }
      }
    });
    accumulate_into(t, iy, [&](Tensor& acc) {
      for (std::size_t b = 0; b < m; ++b) {
        const double* gb = &g[b * p * r];
        const double* xb = &xv[b * p * q];
        double* ab = shared ? &acc[0] : &acc[b * q * r];
        for (std::size_t i = 0; i < p; ++i) {
          const double* grow = gb + i * r;
          for (std::size_t k = 0; k < q; ++k) {
            const double xik = xb[i * q + k];
            if (xik == 0.0) continue;
            double* arow = ab + k * r;
            for (std::size_t j = 0; j < r; ++j) arow[j] += xik * grow[j];
          }
        }
      }
    });
  });
}

Var add_shared(Var x, Var shared) {
  require_rank(x, 3, "add_shared");
  require_rank(shared, 2, "add_shared");
  const Tensor& xv = x.value();
  const std::size_t m = xv.dim(0), pq = xv.dim(1) * xv.dim(2);
  if (shared.shape()[0] != xv.dim(1) || shared.shape()[1] != xv.dim(2)) {
    throw invalid_argument("add_shared: incompatible shapes " + xv.shape_string() + " and " +
                           shared.value().shape_string());
  }
  const Tensor& sv = shared.value();
  Tensor out = xv;
  for (std::size_t b = 0; b < m; ++b)
    for (std::size_t i = 0; i < pq; ++i) out[b * pq + i] += sv[i];
  const std::size_t ix = x.id(), is = shared.id();
  return x.tape().record("add_shared", std::move(out), {x, shared},
                         [ix, is, m, pq](Tape& t, std::size_t self) {
    const Tensor& g = t.grad(self);
    accumulate_into(t, ix, [&](Tensor& acc) {
      for (std::size_t i = 0; i < g.size(); ++i) acc[i] += g[i];
    });
    accumulate_into(t, is, [&](Tensor& acc) {
      for (std::size_t b = 0; b < m; ++b)
        for (std::size_t i = 0; i < pq; ++i) acc[i] += g[b * pq + i];
    });
  });
}

Var identity_minus(Var x) {
  require_rank(x, 3, "identity_minus");
  const std::size_t m = x.shape()[0], n = x.shape()[1];
  if (x.shape()[2] != n) throw invalid_argument("identity_minus: batch items must be square");
  Tensor out = x.value();
  for (double& v : out.data()) v = -v;
  for (std::size_t b = 0; b < m; ++b)
    for (std::size_t i = 0; i < n; ++i) out[b * n * n + i * n + i] += 1.0;
  const std::size_t ix = x.id();
  return x.tape().record("identity_minus", std::move(out), {x}, [ix](Tape& t, std::size_t self) {
    const Tensor& g = t.grad(self);
    accumulate_into(t, ix, [&](Tensor& acc) {
      for (std::size_t i = 0; i < g.size(); ++i) acc[i] -= g[i];
    });
  });
}

Var pair_outer(Var a, Var b, const IndexPairs& pairs) {
  require_rank(a, 2, "pair_outer");
  require_rank(b, 2, "pair_outer");
  const std::size_t d = a.shape()[0], h = a.shape()[1], np = pairs.size();
  if (b.shape()[0] != h || b.shape()[1] != d) {
    throw invalid_argument("pair_outer: incompatible shapes " + a.value().shape_string() + " and " +
                           b.value().shape_string());
  }
  for (const auto& [k, j] : pairs)
    if (k >= d || j >= d) throw invalid_argument("pair_outer: pair index out of range");
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  Tensor out({h, np});
  for (std::size_t u = 0; u < h; ++u)
    for (std::size_t p = 0; p < np; ++p) out[u * np + p] = av[pairs[p].first * h + u] * bv[u * d + pairs[p].second];
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape().record("pair_outer", std::move(out), {a, b},
                         [ia, ib, pairs, d, h, np](Tape& t, std::size_t self) {
    const Tensor& g = t.grad(self);
    const Tensor& av = t.value(ia);
    const Tensor& bv = t.value(ib);
    accumulate_into(t, ia, [&](Tensor& acc) {
      for (std::size_t u = 0; u < h; ++u)
        for (std::size_t p = 0; p < np; ++p)
          acc[pairs[p].first * h + u] += g[u * np + p] * bv[u * d + pairs[p].second];
    });
    accumulate_into(t, ib, [&](Tensor& acc) {
      for (std::size_t u = 0; u < h; ++u)
        for (std::size_t p = 0; p < np; ++p)
          acc[u * d + pairs[p].second] += g[u * np + p] * av[pairs[p].first * h + u];
    });
  });
}

Var gather_columns(Var x, const std::vector<std::size_t>& cols) {
  require_rank(x, 2, "gather_columns");
  const std::size_t m = x.shape()[0], q = x.shape()[1], np = cols.size();
  for (std::size_t c : cols)
    if (c >= q) throw invalid_argument("gather_columns: column index out of range");
  const Tensor& xv = x.value();
  Tensor out({m, np});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t p = 0; p < np; ++p) out[i * np + p] = xv[i * q + cols[p]];
  const std::size_t ix = x.id();
  return x.tape().record("gather_columns", std::move(out), {x}, [ix, cols, m, q, np](Tape& t, std::size_t self) {
    const Tensor& g = t.grad(self);
    accumulate_into(t, ix, [&](Tensor& acc) {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t p = 0; p < np; ++p) acc[i * q + cols[p]] += g[i * np + p];
    });
  });
}

Var scatter_pairs(Var x, const IndexPairs& pairs, std::size_t d) {
  require_rank(x, 2, "scatter_pairs");
  const std::size_t m = x.shape()[0], np = pairs.size();
  if (x.shape()[1] != np) throw invalid_argument("scatter_pairs: column count does not match the pairs");
  for (const auto& [k, j] : pairs)
    if (k >= d || j >= d) throw invalid_argument("scatter_pairs: pair index out of range");
  const Tensor& xv = x.value();
  Tensor out({m, d, d});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t p = 0; p < np; ++p)
      out[i * d * d + pairs[p].first * d + pairs[p].second] = xv[i * np + p];
  const std::size_t ix = x.id();
  return x.tape().record("scatter_pairs", std::move(out), {x}, [ix, pairs, m, d, np](Tape& t, std::size_t self) {
    const Tensor& g = t.grad(self);
    accumulate_into(t, ix, [&](Tensor& acc) {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t p = 0; p < np; ++p)
          acc[i * np + p] += g[i * d * d + pairs[p].first * d + pairs[p].second];
    });
  });
}

Var rms_offdiag(Var jacobians, double eps) {
  require_rank(jacobians, 3, "rms_offdiag");
  const std::size_t m = jacobians.shape()[0], d = jacobians.shape()[1];
  if (jacobians.shape()[2] != d) throw invalid_argument("rms_offdiag: batch items must be square");
  if (m == 0) throw invalid_argument("rms_offdiag: empty batch");
  if (!(eps > 0.0)) throw invalid_argument("rms_offdiag: eps must be > 0");
  const Tensor& jv = jacobians.value();
  std::vector<double> mean_sq(d * d, 0.0);
  for (std::size_t b = 0; b < m; ++b)
    for (std::size_t i = 0; i < d * d; ++i) mean_sq[i] += jv[b * d * d + i] * jv[b * d * d + i];
  const double root_eps = std::sqrt(eps);
  Tensor out({d, d});
  auto root = std::make_shared<std::vector<double>>(d * d, 0.0);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t j = 0; j < d; ++j) {
      if (k == j) continue;
      const std::size_t i = k * d + j;
      (*root)[i] = std::sqrt(mean_sq[i] / static_cast<double>(m) + eps);
      out[i] = (*root)[i] - root_eps;
    }
  const std::size_t ij = jacobians.id();
  return jacobians.tape().record("rms_offdiag", std::move(out), {jacobians},
                                 [ij, m, d, root](Tape& t, std::size_t self) {
    const Tensor& g = t.grad(self);
    const Tensor& jv = t.value(ij);
    Tensor& acc = t.accumulate(ij);
    std::vector<double> coef(d * d, 0.0);
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t j = 0; j < d; ++j)
        if (k != j) coef[k * d + j] = g[k * d + j] / (static_cast<double>(m) * (*root)[k * d + j]);
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t i = 0; i < d * d; ++i) acc[b * d * d + i] += coef[i] * jv[b * d * d + i];
  });
}

}  // namespace dagflow::ad
