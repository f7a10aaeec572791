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

#ifndef IRAUG_TENSOR_H_
#define IRAUG_TENSOR_H_

#include <algorithm>
#include <cassert>
#include <span>
#include <vector>

namespace iraug {

// Dense row-major matrix. Vectors are 1 x n matrices.
template <typename T>
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<T> data;

  Matrix() = default;
  Matrix(int r, int c, T value = T(0))
      : rows(r), cols(c), data(static_cast<size_t>(r) * c, value) {}

  T& operator()(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  T operator()(int r, int c) const {
    return data[static_cast<size_t>(r) * cols + c];
  }
  T* row(int r) { return data.data() + static_cast<size_t>(r) * cols; }
  const T* row(int r) const {
    return data.data() + static_cast<size_t>(r) * cols;
  }
  std::span<T> row_span(int r) { return {row(r), static_cast<size_t>(cols)}; }
  std::span<const T> row_span(int r) const {
    return {row(r), static_cast<size_t>(cols)};
  }

  size_t size() const { return data.size(); }
  bool empty() const { return data.empty(); }
  void Fill(T value) { std::fill(data.begin(), data.end(), value); }
  void Resize(int r, int c) {
    rows = r;
    cols = c;
    data.assign(static_cast<size_t>(r) * c, T(0));
  }

  bool operator==(const Matrix&) const = default;
};

}  // namespace iraug

#endif  // IRAUG_TENSOR_H_
