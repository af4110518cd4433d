// Copyright 2026 The Earshot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EARSHOT_SRC_FFT_HPP_
#define EARSHOT_SRC_FFT_HPP_

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace earshot::detail {

/// fftw_malloc-backed array. FFTW plans are created on buffers of this type,
/// so executing a cached plan on any other instance keeps the alignment
/// assumptions valid.
template <typename T>
class AlignedBuffer {
 public:
  explicit AlignedBuffer(std::size_t n);
  ~AlignedBuffer();
  AlignedBuffer(const AlignedBuffer&) = delete;
  AlignedBuffer& operator=(const AlignedBuffer&) = delete;
  AlignedBuffer(AlignedBuffer&& other) noexcept
      : data_(other.data_), size_(other.size_) {
    other.data_ = nullptr;
    other.size_ = 0;
  }

  T* data() { return data_; }
  const T* data() const { return data_; }
  std::size_t size() const { return size_; }
  std::span<T> span() { return {data_, size_}; }
  std::span<const T> span() const { return {data_, size_}; }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

 private:
  T* data_ = nullptr;
  std::size_t size_ = 0;
};

struct RealPlans;
struct ComplexPlans;

/// Real-to-half-complex transform of a fixed length. Plans are cached per
/// length; execution is thread-safe as long as each thread uses its own
/// Buffers.
class RealFft {
 public:
  explicit RealFft(std::size_t n);

  struct Buffers {
    AlignedBuffer<double> time;
    AlignedBuffer<std::complex<double>> freq;
  };

  std::size_t size() const { return n_; }
  Buffers make_buffers() const;
  /// time -> freq (unnormalised).
  void forward(Buffers& buffers) const;
  /// freq -> time (unnormalised, the result is n times the inverse DFT).
  /// Imaginary parts of the DC and Nyquist bins are ignored.
  void inverse(Buffers& buffers) const;

 private:
  std::size_t n_;
  std::shared_ptr<const RealPlans> plans_;
};

/// Complex DFT of a fixed length, same threading contract as RealFft.
class ComplexFft {
 public:
  explicit ComplexFft(std::size_t n);

  std::size_t size() const { return n_; }
  AlignedBuffer<std::complex<double>> make_buffer() const;
  /// In-place forward transform (unnormalised).
  void forward(AlignedBuffer<std::complex<double>>& data) const;
  /// In-place inverse transform (unnormalised).
  void inverse(AlignedBuffer<std::complex<double>>& data) const;

 private:
  std::size_t n_;
  std::shared_ptr<const ComplexPlans> plans_;
};

}  // namespace earshot::detail

#endif  // EARSHOT_SRC_FFT_HPP_
