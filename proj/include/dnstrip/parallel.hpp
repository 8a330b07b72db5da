#pragma once

// Data-parallel sweep kernels. Every kernel has a serial reference path
// selected through ExecPolicy; the two paths must produce identical results,
// which the test suite checks bit-for-bit.

#include <cstddef>
#include <exception>
#include <span>
#include <vector>

#include <Eigen/SparseCore>

namespace dnstrip {

enum class ExecPolicy { Serial, Parallel };

// Sets the OpenMP team size; n <= 0 restores the runtime default.
void set_thread_count(int n);
int max_threads();

// Calls f(i) for i in [0, n). Exceptions are collected per index and the one
// with the smallest index is rethrown, so both policies fail identically.
template <class F>
void for_each_index(ExecPolicy policy, std::size_t n, F&& f) {
  std::vector<std::exception_ptr> errors(n);
  auto guarded = [&](std::size_t i) {
    try {
      f(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (policy == ExecPolicy::Serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) guarded(i);
  } else {
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < count; ++i) guarded(static_cast<std::size_t>(i));
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

template <class R, class F>
std::vector<R> map_indices(ExecPolicy policy, std::size_t n, F&& f) {
  std::vector<R> out(n);
  for_each_index(policy, n, [&](std::size_t i) { out[i] = f(i); });
  return out;
}

using RowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// y = A x, row-parallel under ExecPolicy::Parallel.
void spmv(const RowMatrix& a, std::span<const double> x, std::span<double> y, ExecPolicy policy);

}  // namespace dnstrip
