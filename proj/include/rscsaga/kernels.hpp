#pragma once

// Data-parallel sample loops behind loss_value / grad_full.
//
// Every loss handled here is a GLM piece f_i(theta) = g(x_i^T theta; y_i). Two
// implementations are kept side by side: `serial` is the plain reference used
// by tests and benchmarks, `omp` parallelises over rows (margins) and over
// column blocks (X^T d). Both add samples in increasing row order, so their
// results do not depend on the number of threads.

#include "rscsaga/types.hpp"

namespace rscsaga::kernels {

enum class Glm { Squared, Logistic };

// g(u; y)
double glm_value(Glm kind, double margin, double y);
// g'(u; y)
double glm_derivative(Glm kind, double margin, double y);

namespace serial {
void margins(const Matrix& X, const Vector& theta, Vector& out);
double mean_loss(const Matrix& X, const Vector& y, const Vector& theta, Glm kind);
void mean_gradient(const Matrix& X, const Vector& y, const Vector& theta, Glm kind, Vector& out);
}  // namespace serial

namespace omp {
void margins(const Matrix& X, const Vector& theta, Vector& out);
double mean_loss(const Matrix& X, const Vector& y, const Vector& theta, Glm kind);
void mean_gradient(const Matrix& X, const Vector& y, const Vector& theta, Glm kind, Vector& out);
// X^T d with rows added in order; exposed for the benchmark.
void transpose_times(const Matrix& X, const Vector& d, Vector& out);
}  // namespace omp

}  // namespace rscsaga::kernels
