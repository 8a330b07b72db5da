#include "dnstrip/parallel.hpp"

#include <stdexcept>

#include <omp.h>

namespace dnstrip {

void set_thread_count(int n) {
  if (n > 0) {
    omp_set_num_threads(n);
  } else {
    omp_set_num_threads(omp_get_num_procs());
  }
}

int max_threads() { return omp_get_max_threads(); }

void spmv(const RowMatrix& a, std::span<const double> x, std::span<double> y, ExecPolicy policy) {
  if (static_cast<Eigen::Index>(x.size()) != a.cols() || static_cast<Eigen::Index>(y.size()) != a.rows()) {
    throw std::invalid_argument("spmv: dimension mismatch");
  }
  const auto* outer = a.outerIndexPtr();
  const auto* inner = a.innerIndexPtr();
  const auto* vals = a.valuePtr();
  const auto rows = static_cast<long long>(a.rows());

  auto row = [&](long long r) {
    double s = 0.0;
    for (auto k = outer[r]; k < outer[r + 1]; ++k) s += vals[k] * x[static_cast<std::size_t>(inner[k])];
    y[static_cast<std::size_t>(r)] = s;
  };

  if (policy == ExecPolicy::Serial) {
    for (long long r = 0; r < rows; ++r) row(r);
  } else {
#pragma omp parallel for schedule(static)
    for (long long r = 0; r < rows; ++r) row(r);
  }
}

}  // namespace dnstrip
