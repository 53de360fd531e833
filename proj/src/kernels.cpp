#include "pblab/kernels.hpp"

#include <cstdlib>
#include <string>

namespace pblab::kernels {

namespace serial {

void synthesize(const double* table, std::size_t grid, std::size_t modes, const double* coeffs,
                double* values) {
  for (std::size_t i = 0; i < grid; ++i) {
    const double* row = table + i * modes;
    double s = 0.0;
    for (std::size_t j = 0; j < modes; ++j) s += row[j] * coeffs[j];
    values[i] = s;
  }
}

void analyze(const double* table, std::size_t grid, std::size_t modes, double weight,
             const double* values, double* coeffs) {
  for (std::size_t j = 0; j < modes; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < grid; ++i) s += table[i * modes + j] * values[i];
    coeffs[j] = weight * s;
  }
}

}  // namespace serial

namespace parallel {

void synthesize(const double* table, std::size_t grid, std::size_t modes, const double* coeffs,
                double* values) {
  const long n = static_cast<long>(grid);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    const double* row = table + i * modes;
    double s = 0.0;
    for (std::size_t j = 0; j < modes; ++j) s += row[j] * coeffs[j];
    values[i] = s;
  }
}

void analyze(const double* table, std::size_t grid, std::size_t modes, double weight,
             const double* values, double* coeffs) {
  const long n = static_cast<long>(modes);
#pragma omp parallel for schedule(static)
  for (long j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < grid; ++i) s += table[i * modes + j] * values[i];
    coeffs[j] = weight * s;
  }
}

}  // namespace parallel

int thread_cap() {
  const char* env = std::getenv("PULLBACK_LAB_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  try {
    const int n = std::stoi(env);
    return n > 0 ? n : 0;
  } catch (...) {
    return 0;
  }
}

}  // namespace pblab::kernels
