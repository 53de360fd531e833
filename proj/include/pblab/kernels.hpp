#ifndef PBLAB_KERNELS_HPP
#define PBLAB_KERNELS_HPP

// Dense sine-table transforms between mode coefficients and interior grid
// values. `serial` is the reference; `parallel` splits the output index
// across OpenMP threads and performs the same per-entry summation, so both
// produce bit-identical results.
//
// The table is row-major, table[i * modes + j] = omega_{j+1}(x_{i+1}).

#include <cstddef>

namespace pblab::kernels {

namespace serial {
// values[i] = sum_j table[i, j] coeffs[j]
void synthesize(const double* table, std::size_t grid, std::size_t modes, const double* coeffs,
                double* values);
// coeffs[j] = weight * sum_i table[i, j] values[i]
void analyze(const double* table, std::size_t grid, std::size_t modes, double weight,
             const double* values, double* coeffs);
}  // namespace serial

namespace parallel {
void synthesize(const double* table, std::size_t grid, std::size_t modes, const double* coeffs,
                double* values);
void analyze(const double* table, std::size_t grid, std::size_t modes, double weight,
             const double* values, double* coeffs);
}  // namespace parallel

// Thread cap taken from PULLBACK_LAB_THREADS, or 0 when unset.
int thread_cap();

}  // namespace pblab::kernels

#endif  // PBLAB_KERNELS_HPP
