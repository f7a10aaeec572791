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

#include "iraug/kernels.h"

#include <omp.h>

namespace iraug::kernels {

template <typename T>
void MatMul(const Matrix<T>& a, const Matrix<T>& b, Matrix<T>& c) {
  assert(a.cols == b.rows);
  c.Resize(a.rows, b.cols);
  const int n = a.rows, k = a.cols, m = b.cols;
  const long work = static_cast<long>(n) * k * m;
#pragma omp parallel for schedule(static) if (work > kParallelThreshold)
  for (int i = 0; i < n; ++i) {
    T* ci = c.row(i);
    const T* ai = a.row(i);
    for (int p = 0; p < k; ++p) {
      const T av = ai[p];
      const T* bp = b.row(p);
      for (int j = 0; j < m; ++j) ci[j] += av * bp[j];
    }
  }
}

template <typename T>
void MatMulBt(const Matrix<T>& a, const Matrix<T>& b, Matrix<T>& c) {
  assert(a.cols == b.cols);
  c.Resize(a.rows, b.rows);
  const int n = a.rows, k = a.cols, m = b.rows;
  const long work = static_cast<long>(n) * k * m;
#pragma omp parallel for schedule(static) if (work > kParallelThreshold)
  for (int i = 0; i < n; ++i) {
    const T* ai = a.row(i);
    T* ci = c.row(i);
    for (int j = 0; j < m; ++j) {
      const T* bj = b.row(j);
      T sum = T(0);
      for (int p = 0; p < k; ++p) sum += ai[p] * bj[p];
      ci[j] = sum;
    }
  }
}

template <typename T>
void MatMulAtAcc(const Matrix<T>& a, const Matrix<T>& b, Matrix<T>& c) {
  assert(a.rows == b.rows && c.rows == a.cols && c.cols == b.cols);
  const int r = a.rows, n = a.cols, m = b.cols;
  const long work = static_cast<long>(r) * n * m;
#pragma omp parallel for schedule(static) if (work > kParallelThreshold)
  for (int i = 0; i < n; ++i) {
    T* ci = c.row(i);
    for (int p = 0; p < r; ++p) {
      const T av = a(p, i);
      if (av == T(0)) continue;
      const T* bp = b.row(p);
      for (int j = 0; j < m; ++j) ci[j] += av * bp[j];
    }
  }
}

template <typename T>
void AddRowBias(Matrix<T>& x, const Matrix<T>& bias) {
  for (int i = 0; i < x.rows; ++i) {
    T* xi = x.row(i);
    for (int j = 0; j < x.cols; ++j) xi[j] += bias.data[j];
  }
}

template <typename T>
void Accumulate(Matrix<T>& dst, const Matrix<T>& src) {
  assert(dst.size() == src.size());
  const size_t n = dst.size();
  T* d = dst.data.data();
  const T* s = src.data.data();
  for (size_t i = 0; i < n; ++i) d[i] += s[i];
}

namespace reference {

template <typename T>
void MatMul(const Matrix<T>& a, const Matrix<T>& b, Matrix<T>& c) {
  c.Resize(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    for (int j = 0; j < b.cols; ++j) {
      T sum = T(0);
      for (int p = 0; p < a.cols; ++p) sum += a(i, p) * b(p, j);
      c(i, j) = sum;
    }
  }
}

template <typename T>
void MatMulBt(const Matrix<T>& a, const Matrix<T>& b, Matrix<T>& c) {
  c.Resize(a.rows, b.rows);
  for (int i = 0; i < a.rows; ++i) {
    for (int j = 0; j < b.rows; ++j) {
      T sum = T(0);
      for (int p = 0; p < a.cols; ++p) sum += a(i, p) * b(j, p);
      c(i, j) = sum;
    }
  }
}

template <typename T>
void MatMulAtAcc(const Matrix<T>& a, const Matrix<T>& b, Matrix<T>& c) {
  for (int i = 0; i < a.cols; ++i) {
    for (int j = 0; j < b.cols; ++j) {
      T acc = c(i, j);
      for (int p = 0; p < a.rows; ++p) {
        if (a(p, i) == T(0)) continue;
        acc += a(p, i) * b(p, j);
      }
      c(i, j) = acc;
    }
  }
}

}  // namespace reference

#define IRAUG_INSTANTIATE_KERNELS(T)                                        \
  template void MatMul(const Matrix<T>&, const Matrix<T>&, Matrix<T>&);     \
  template void MatMulBt(const Matrix<T>&, const Matrix<T>&, Matrix<T>&);   \
  template void MatMulAtAcc(const Matrix<T>&, const Matrix<T>&, Matrix<T>&); \
  template void AddRowBias(Matrix<T>&, const Matrix<T>&);                   \
  template void Accumulate(Matrix<T>&, const Matrix<T>&);                   \
  template void reference::MatMul(const Matrix<T>&, const Matrix<T>&,       \
                                  Matrix<T>&);                              \
  template void reference::MatMulBt(const Matrix<T>&, const Matrix<T>&,     \
                                    Matrix<T>&);                            \
  template void reference::MatMulAtAcc(const Matrix<T>&, const Matrix<T>&,  \
                                       Matrix<T>&);

IRAUG_INSTANTIATE_KERNELS(float)
IRAUG_INSTANTIATE_KERNELS(double)

}  // namespace iraug::kernels
