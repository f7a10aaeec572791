// Copyright 2026 The iraug Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IRAUG_KERNELS_H_
#define IRAUG_KERNELS_H_

// Dense kernels used by the encoder. The default versions are OpenMP
// parallel over output rows; `reference` holds the serial versions kept for
// testing and benchmarking. Both perform the same floating-point operations
// in the same order per output element, so results are bit-identical.

#include "iraug/tensor.h"

namespace iraug::kernels {

// c = a * b            a: n x k, b: k x m
template <typename T>
void MatMul(const Matrix<T>& a, const Matrix<T>& b, Matrix<T>& c);

// c = a * b^T          a: n x k, b: m x k
template <typename T>
void MatMulBt(const Matrix<T>& a, const Matrix<T>& b, Matrix<T>& c);

// c += a^T * b         a: r x n, b: r x m, c: n x m
template <typename T>
void MatMulAtAcc(const Matrix<T>& a, const Matrix<T>& b, Matrix<T>& c);

// Adds `bias` (1 x m) to every row of x.
template <typename T>
void AddRowBias(Matrix<T>& x, const Matrix<T>& bias);

// dst += src elementwise.
template <typename T>
void Accumulate(Matrix<T>& dst, const Matrix<T>& src);

// Below this many multiply-adds the parallel kernels stay serial.
inline constexpr long kParallelThreshold = 1 << 15;

namespace reference {

template <typename T>
void MatMul(const Matrix<T>& a, const Matrix<T>& b, Matrix<T>& c);
template <typename T>
void MatMulBt(const Matrix<T>& a, const Matrix<T>& b, Matrix<T>& c);
template <typename T>
void MatMulAtAcc(const Matrix<T>& a, const Matrix<T>& b, Matrix<T>& c);

}  // namespace reference
}  // namespace iraug::kernels

#endif  // IRAUG_KERNELS_H_
