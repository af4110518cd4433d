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

#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <new>
#include <stdexcept>

namespace earshot::detail {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::complex<double>* p) {
  return reinterpret_cast<fftw_complex*>(p);
}

}  // namespace

template <typename T>
AlignedBuffer<T>::AlignedBuffer(std::size_t n) : size_(n) {
  data_ = static_cast<T*>(fftw_malloc(sizeof(T) * (n == 0 ? 1 : n)));
  if (data_ == nullptr) throw std::bad_alloc();
  for (std::size_t i = 0; i < n; ++i) data_[i] = T{};
}

template <typename T>
AlignedBuffer<T>::~AlignedBuffer() {
  if (data_ != nullptr) fftw_free(data_);
}

template class AlignedBuffer<double>;
template class AlignedBuffer<std::complex<double>>;

struct RealPlans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
  ~RealPlans() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (inverse) fftw_destroy_plan(inverse);
  }
};

struct ComplexPlans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
  ~ComplexPlans() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (inverse) fftw_destroy_plan(inverse);
  }
};

namespace {

// FFTW_ESTIMATE keeps the chosen algorithm, and therefore the rounding,
// identical from run to run.
std::shared_ptr<const RealPlans> real_plans(std::size_t n) {
  // The mutex is constructed first so it outlives the cache at exit.
  std::mutex& mutex = planner_mutex();
  static std::map<std::size_t, std::shared_ptr<const RealPlans>> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  AlignedBuffer<double> time(n);
  AlignedBuffer<std::complex<double>> freq(n / 2 + 1);
  auto plans = std::make_shared<RealPlans>();
  const int len = static_cast<int>(n);
  plans->forward = fftw_plan_dft_r2c_1d(len, time.data(), as_fftw(freq.data()),
                                        FFTW_ESTIMATE);
  plans->inverse = fftw_plan_dft_c2r_1d(len, as_fftw(freq.data()), time.data(),
                                        FFTW_ESTIMATE);
  if (!plans->forward || !plans->inverse) {
    throw std::runtime_error("fftw planning failed");
  }
  cache.emplace(n, plans);
  return plans;
}

std::shared_ptr<const ComplexPlans> complex_plans(std::size_t n) {
  std::mutex& mutex = planner_mutex();
  static std::map<std::size_t, std::shared_ptr<const ComplexPlans>> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  AlignedBuffer<std::complex<double>> buf(n);
  auto plans = std::make_shared<ComplexPlans>();
  const int len = static_cast<int>(n);
  plans->forward = fftw_plan_dft_1d(len, as_fftw(buf.data()),
                                    as_fftw(buf.data()), FFTW_FORWARD,
                                    FFTW_ESTIMATE);
  plans->inverse = fftw_plan_dft_1d(len, as_fftw(buf.data()),
                                    as_fftw(buf.data()), FFTW_BACKWARD,
                                    FFTW_ESTIMATE);
  if (!plans->forward || !plans->inverse) {
    throw std::runtime_error("fftw planning failed");
  }
  cache.emplace(n, plans);
  return plans;
}

}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("fft length must be positive");
  plans_ = real_plans(n);
}

RealFft::Buffers RealFft::make_buffers() const {
  return Buffers{AlignedBuffer<double>(n_),
                 AlignedBuffer<std::complex<double>>(n_ / 2 + 1)};
}

void RealFft::forward(Buffers& b) const {
  fftw_execute_dft_r2c(plans_->forward, b.time.data(), as_fftw(b.freq.data()));
}

void RealFft::inverse(Buffers& b) const {
  // c2r overwrites its input; callers refill freq before every call.
  fftw_execute_dft_c2r(plans_->inverse, as_fftw(b.freq.data()), b.time.data());
}

ComplexFft::ComplexFft(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("fft length must be positive");
  plans_ = complex_plans(n);
}

AlignedBuffer<std::complex<double>> ComplexFft::make_buffer() const {
  return AlignedBuffer<std::complex<double>>(n_);
}

void ComplexFft::forward(AlignedBuffer<std::complex<double>>& data) const {
  fftw_execute_dft(plans_->forward, as_fftw(data.data()), as_fftw(data.data()));
}

void ComplexFft::inverse(AlignedBuffer<std::complex<double>>& data) const {
  fftw_execute_dft(plans_->inverse, as_fftw(data.data()), as_fftw(data.data()));
}

}  // namespace earshot::detail
