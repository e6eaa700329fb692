// Copyright 2026 The Authors.
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

#ifndef MIVOTE_SRC_PARALLEL_HPP_
#define MIVOTE_SRC_PARALLEL_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mivote::internal {

// Runs body(begin, end) over contiguous chunks of [0, count). Results must be
// written to per-index slots so the outcome does not depend on `workers`.
template <typename Body>
void parallel_chunks(std::size_t count, int workers, Body&& body) {
  if (workers <= 1 || count < 2) {
    body(std::size_t{0}, count);
    return;
  }
  const std::size_t threads =
      std::min<std::size_t>(static_cast<std::size_t>(workers), count);
  const std::size_t chunk = (count + threads - 1) / threads;
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// Neumaier compensated sum.
class StableSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

// Running mean and sample variance in a fixed order.
class Welford {
 public:
  void add(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }
  double mean() const { return mean_; }
  double std_error() const {
    if (count_ < 2) return 0.0;
    const double variance = m2_ / static_cast<double>(count_ - 1);
    return std::sqrt(variance / static_cast<double>(count_));
  }

 private:
  long long count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace mivote::internal

#endif  // MIVOTE_SRC_PARALLEL_HPP_
