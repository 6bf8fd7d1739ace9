/*
 * Copyright 2026 The msptsne Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <algorithm>
#include <cmath>
#include <vector>

#include "msptsne/neural_net.hpp"

namespace msptsne {
namespace {

namespace ei = Eigen::internal;
using Packet = ei::packet_traits<double>::type;
constexpr int kPacket = ei::unpacket_traits<Packet>::size;
constexpr int kRowTile = 4;  // packet_tile unrolls exactly four rows
constexpr int kWideTile = 4;  // packets per row in the main tile
constexpr Index kDepthBlock = 4096;

// Accumulates a kRowTile x (kCols packets) tile. Rows past the end of the
// batch alias the last valid row so every row runs through identical code.
// Partial sums live in `out` between depth blocks; the chain of fused
// multiply-adds per entry is the same as an unblocked loop over k.
template <int kCols>
void packet_tile(const double* const* rows, Index k_begin, Index k_end, bool last,
                 const double* w, Index ldw, Index col, const double* bias, double* const* out) {
  const double* x0 = rows[0];
  const double* x1 = rows[1];
  const double* x2 = rows[2];
  const double* x3 = rows[3];
  Packet acc0[kCols], acc1[kCols], acc2[kCols], acc3[kCols];
  if (k_begin == 0) {
    for (int c = 0; c < kCols; ++c) acc0[c] = acc1[c] = acc2[c] = acc3[c] = ei::pset1<Packet>(0.0);
  } else {
    for (int c = 0; c < kCols; ++c) {
      acc0[c] = ei::ploadu<Packet>(out[0] + col + c * kPacket);
      acc1[c] = ei::ploadu<Packet>(out[1] + col + c * kPacket);
      acc2[c] = ei::ploadu<Packet>(out[2] + col + c * kPacket);
      acc3[c] = ei::ploadu<Packet>(out[3] + col + c * kPacket);
    }
  }
  for (Index k = k_begin; k < k_end; ++k) {
    const double* wk = w + k * ldw + col;
    const Packet a0 = ei::pset1<Packet>(x0[k]);
    const Packet a1 = ei::pset1<Packet>(x1[k]);
    const Packet a2 = ei::pset1<Packet>(x2[k]);
    const Packet a3 = ei::pset1<Packet>(x3[k]);
    for (int c = 0; c < kCols; ++c) {
      const Packet wv = ei::ploadu<Packet>(wk + c * kPacket);
      acc0[c] = ei::pmadd(a0, wv, acc0[c]);
      acc1[c] = ei::pmadd(a1, wv, acc1[c]);
      acc2[c] = ei::pmadd(a2, wv, acc2[c]);
      acc3[c] = ei::pmadd(a3, wv, acc3[c]);
    }
  }
  for (int c = 0; c < kCols; ++c) {
    const Packet b = last ? ei::ploadu<Packet>(bias + col + c * kPacket) : ei::pset1<Packet>(0.0);
    const Index off = col + c * kPacket;
    ei::pstoreu(out[0] + off, last ? ei::padd(acc0[c], b) : acc0[c]);
    ei::pstoreu(out[1] + off, last ? ei::padd(acc1[c], b) : acc1[c]);
    ei::pstoreu(out[2] + off, last ? ei::padd(acc2[c], b) : acc2[c]);
    ei::pstoreu(out[3] + off, last ? ei::padd(acc3[c], b) : acc3[c]);
  }
}

void scalar_column(const double* const* rows, Index k_begin, Index k_end, bool last,
                   const double* w, Index ldw, Index col, double bias, double* const* out) {
  double acc[kRowTile];
  for (int r = 0; r < kRowTile; ++r) acc[r] = k_begin == 0 ? 0.0 : out[r][col];
  for (Index k = k_begin; k < k_end; ++k) {
    const double wk = w[k * ldw + col];
    for (int r = 0; r < kRowTile; ++r) acc[r] = std::fma(rows[r][k], wk, acc[r]);
  }
  for (int r = 0; r < kRowTile; ++r) out[r][col] = last ? acc[r] + bias : acc[r];
}

}  // namespace

Matrix dense_affine(const Matrix& x, const Matrix& w, const Vector& b) {
  Matrix out;
  dense_affine(x, w, b, out);
  return out;
}

void dense_affine(const Matrix& x, const Matrix& w, const Vector& b, Matrix& out) {
  if (x.cols() != w.rows() || w.cols() != b.size())
    throw Error("dense_affine: shape mismatch");
  if (&out == &x) throw Error("dense_affine: output aliases input");
  const Index n = x.rows();
  const Index depth = w.rows();
  const Index width = w.cols();
  out.resize(n, width);
  if (n == 0) return;

  const Index wide_step = kWideTile * kPacket;
  const Index wide_end = width - width % wide_step;
  const Index packet_end = width - width % kPacket;

  const Index tiles = (n + kRowTile - 1) / kRowTile;
  // Rows past the end of the batch write into scratch rows.
  std::vector<double> scratch(static_cast<std::size_t>(kRowTile * width));
  std::vector<const double*> rows(static_cast<std::size_t>(tiles * kRowTile));
  std::vector<double*> dst(rows.size());
  for (Index t = 0; t < tiles * kRowTile; ++t) {
    rows[t] = x.data() + std::min<Index>(t, n - 1) * depth;
    dst[t] = t < n ? out.data() + t * width : scratch.data() + (t - n) * width;
  }

  for (Index k0 = 0; k0 < depth; k0 += kDepthBlock) {
    const Index k1 = std::min(depth, k0 + kDepthBlock);
    const bool last = k1 == depth;
    // Column stripes outer, row tiles inner.
    for (Index col = 0; col < wide_end; col += wide_step)
      for (Index t = 0; t < tiles; ++t)
        packet_tile<kWideTile>(&rows[t * kRowTile], k0, k1, last, w.data(), width, col, b.data(),
                               &dst[t * kRowTile]);
    for (Index col = wide_end; col < packet_end; col += kPacket)
      for (Index t = 0; t < tiles; ++t)
        packet_tile<1>(&rows[t * kRowTile], k0, k1, last, w.data(), width, col, b.data(),
                       &dst[t * kRowTile]);
    for (Index col = packet_end; col < width; ++col)
      for (Index t = 0; t < tiles; ++t)
        scalar_column(&rows[t * kRowTile], k0, k1, last, w.data(), width, col, b[col],
                      &dst[t * kRowTile]);
  }
}

}  // namespace msptsne
