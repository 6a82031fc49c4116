#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>

namespace cubiclab {

using Complex = std::complex<double>;

struct QuadResult {
  Complex value;
  double abs_error = 0;
  std::size_t evaluations = 0;
};

struct AdaptiveOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  std::size_t max_intervals = 20000;
};

/// Adaptive Gauss-Kronrod (7/15) integration of a complex integrand over
/// [a, b], bisecting the interval with the largest error estimate first.
/// Throws ToleranceNotMet when max_intervals is reached first.
QuadResult integrate_adaptive(const std::function<Complex(double)>& f, double a, double b,
                              const AdaptiveOptions& opts);

/// Composite 20-point Gauss-Legendre rule on `panels` equal panels.
double integrate_gl_panels(const std::function<double(double)>& f, double a, double b, std::size_t panels);

/// Nodes and weights of the 20-point Gauss-Legendre rule on [-1, 1].
void gauss_legendre_20(std::span<double, 20> nodes, std::span<double, 20> weights);

struct QmcResult {
  Complex value;
  double std_error = 0;  // over batch means
  std::size_t samples = 0;
};

/// Randomised quasi-Monte Carlo over [0,1)^dim: one Sobol point set shifted
/// by `batches` independent Cranley-Patterson shifts drawn from mt19937_64
/// seeded with `seed`. Deterministic for fixed (dim, samples, seed, batches),
/// independent of the worker count.
QmcResult qmc_integrate(int dim, std::size_t samples, std::uint64_t seed,
                        const std::function<Complex(std::span<const double>)>& f, int batches = 64);

}  // namespace cubiclab
