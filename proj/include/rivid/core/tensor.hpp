#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rivid {

/// Dense NCHW tensor. Vectors live as (n, d, 1, 1), per-sample scalars as
/// (n, 1, 1, 1). Layout is row-major with w fastest.
template <typename T>
struct Tensor {
  std::array<int, 4> shape{0, 0, 0, 0};
  std::vector<T> data;

  Tensor() = default;
  Tensor(int n, int c, int h, int w)
      : shape{n, c, h, w},
        data(static_cast<std::size_t>(n) * c * h * w, T(0)) {}

  static Tensor zeros(int n, int c, int h, int w) { return Tensor(n, c, h, w); }

  static Tensor full(int n, int c, int h, int w, T value) {
    Tensor t(n, c, h, w);
    std::fill(t.data.begin(), t.data.end(), value);
    return t;
  }

  int n() const { return shape[0]; }
  int c() const { return shape[1]; }
  int h() const { return shape[2]; }
  int w() const { return shape[3]; }

  std::size_t size() const { return data.size(); }
  std::size_t sample_size() const {
    return static_cast<std::size_t>(shape[1]) * shape[2] * shape[3];
  }

  T* ptr() { return data.data(); }
  const T* ptr() const { return data.data(); }
  T* sample_ptr(int i) { return data.data() + sample_size() * i; }
  const T* sample_ptr(int i) const { return data.data() + sample_size() * i; }

  T& at(int i, int ch, int y, int x) {
    return data[((static_cast<std::size_t>(i) * shape[1] + ch) * shape[2] + y) * shape[3] + x];
  }
  const T& at(int i, int ch, int y, int x) const {
    return data[((static_cast<std::size_t>(i) * shape[1] + ch) * shape[2] + y) * shape[3] + x];
  }

  bool same_shape(const Tensor& o) const { return shape == o.shape; }

  void fill(T v) { std::fill(data.begin(), data.end(), v); }

  template <typename U>
  Tensor<U> cast() const {
    Tensor<U> out(shape[0], shape[1], shape[2], shape[3]);
    for (std::size_t i = 0; i < data.size(); ++i) out.data[i] = static_cast<U>(data[i]);
    return out;
  }
};

template <typename T>
void check_same_shape(const Tensor<T>& a, const Tensor<T>& b, const char* what) {
  if (!a.same_shape(b)) throw std::invalid_argument(std::string("shape mismatch in ") + what);
}

}  // namespace rivid
