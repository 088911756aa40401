// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "conformer_forge/ad/tape.hpp"

namespace conformer_forge::ad {

// Dense primitives. Every function records one node on the input's tape and
// throws std::invalid_argument on incompatible shapes. Tensors are read as
// matrices (rows x cols) unless stated otherwise.

Var matmul(Var a, Var b);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var scale(Var a, double factor);
/// x + broadcast(row) where row has x.cols() elements.
Var add_row(Var x, Var row);
/// Column-wise concatenation; all inputs must have the same row count.
Var concat(const std::vector<Var>& parts);
Var reshape(Var x, std::vector<std::size_t> shape);

Var sum(Var x);
Var mean(Var x);
/// Column means, shape 1 x cols.
Var mean_rows(Var x);

Var relu(Var x);
Var leaky_relu(Var x, double slope);
Var tanh(Var x);
Var square(Var x);
/// Row-wise softmax.
Var softmax_rows(Var x);
/// Elementwise Huber: d^2/2 for |d| <= delta, delta*|d| - delta^2/2 otherwise.
Var huber(Var x, double delta);
/// Euclidean norm of every row, shape rows x 1.
Var row_norm(Var x);

// Index primitives used by the graph layers.

/// out[k] = x[index[k]].
Var gather_rows(Var x, std::vector<std::size_t> index);
/// out[s] = sum of x rows whose segment id is s; `segments` has one id per row.
Var segment_sum(Var x, std::vector<std::size_t> segments, std::size_t segment_count);
/// Like segment_sum but averaged; empty segments produce zero rows.
Var segment_mean(Var x, std::vector<std::size_t> segments, std::size_t segment_count);
/// Softmax over the rows of each segment, independently per column.
Var segment_softmax(Var x, std::vector<std::size_t> segments, std::size_t segment_count);

// Multi-head helpers: a row of width heads*d holds `heads` blocks of width d.

/// out[n, h] = <x[n, block h], a[h, :]>, where a is heads x d.
Var head_dot(Var x, Var a);
/// out[dst[e], block h] += alpha[e, h] * values[src[e], block h].
Var attention_aggregate(Var values, Var alpha, std::vector<std::size_t> src,
                        std::vector<std::size_t> dst, std::size_t out_rows);
/// Average of the head blocks, shape rows x d.
Var head_mean(Var x, std::size_t heads);

}  // namespace conformer_forge::ad
