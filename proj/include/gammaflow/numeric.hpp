#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gammaflow {

/// Runs fn(i) for i in [0, n) on up to `jobs` threads.  The first exception
/// thrown by any worker is rethrown on the calling thread.
template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (unsigned w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next.store(n);
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (failure) std::rethrow_exception(failure);
}

unsigned default_jobs() noexcept;

struct Derivative {
  double value;
  double step;
  bool richardson;  // true when the extrapolated estimate was used
};

/// Centered difference (F(t+h) - F(t-h)) / 2h with h = rel_step * max(1, |t|).
/// When two step sizes disagree by more than `refine_threshold` (relative),
/// the Richardson combination (4 D(h/2) - D(h)) / 3 is returned instead.
template <class F>
Derivative centered_derivative(F&& fn, double t, double rel_step = 1e-5, double refine_threshold = 1e-6) {
  const double h = rel_step * std::max(1.0, std::abs(t));
  const double coarse = (fn(t + h) - fn(t - h)) / (2.0 * h);
  const double fine = (fn(t + h / 2) - fn(t - h / 2)) / h;
  const double scale = std::max({std::abs(coarse), std::abs(fine), 1e-300});
  if (std::abs(coarse - fine) <= refine_threshold * scale) return {fine, h / 2, false};
  return {(4.0 * fine - coarse) / 3.0, h / 2, true};
}

/// Entrywise centered_derivative for a vector-valued F (an Eigen vector).
template <class F>
auto centered_derivative_vec(F&& fn, double t, double rel_step = 1e-5, double refine_threshold = 1e-6) {
  const double h = rel_step * std::max(1.0, std::abs(t));
  auto coarse = ((fn(t + h) - fn(t - h)) / (2.0 * h)).eval();
  auto fine = ((fn(t + h / 2) - fn(t - h / 2)) / h).eval();
  auto out = fine;
  for (decltype(out.size()) i = 0; i < out.size(); ++i) {
    const double scale = std::max({std::abs(coarse[i]), std::abs(fine[i]), 1e-300});
    if (std::abs(coarse[i] - fine[i]) > refine_threshold * scale) out[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
  }
  return out;
}

}  // namespace gammaflow
