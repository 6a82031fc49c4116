#include "cubiclab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/random/sobol.hpp>

#include "cubiclab/concurrency.hpp"
#include "cubiclab/errors.hpp"

namespace cubiclab {

namespace {

struct Panel {
  double a, b;
  Complex value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gk15(const std::function<Complex(double)>& f, double a, double b) {
  const auto& xk = boost::math::quadrature::gauss_kronrod<double, 15>::abscissa();
  const auto& wk = boost::math::quadrature::gauss_kronrod<double, 15>::weights();
  const auto& wg = boost::math::quadrature::gauss<double, 7>::weights();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  Complex kron = 0.0, gauss = 0.0;
  for (std::size_t i = 0; i < xk.size(); ++i) {
    Complex fx = i == 0 ? f(c) : f(c - h * xk[i]) + f(c + h * xk[i]);
    kron += wk[i] * fx;
    if (i % 2 == 0) gauss += wg[i / 2] * fx;
  }
  kron *= h;
  gauss *= h;
  return Panel{a, b, kron, std::abs(kron - gauss)};
}

}  // namespace

QuadResult integrate_adaptive(const std::function<Complex(double)>& f, double a, double b,
                              const AdaptiveOptions& opts) {
  std::priority_queue<Panel> heap;
  Panel first = gk15(f, a, b);
  Complex total = first.value;
  double error = first.error;
  heap.push(first);
  std::size_t evals = 15;
  auto target = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };
  while (error > target()) {
    if (heap.size() >= opts.max_intervals)
      throw ToleranceNotMet("adaptive quadrature", error, target());
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left = gk15(f, worst.a, mid), right = gk15(f, mid, worst.b);
    evals += 30;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum from the panels to avoid drift from the incremental updates.
  Complex sum = 0.0;
  double err = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  return QuadResult{sum, err, evals};
}

void gauss_legendre_20(std::span<double, 20> nodes, std::span<double, 20> weights) {
  const auto& x = boost::math::quadrature::gauss<double, 20>::abscissa();
  const auto& w = boost::math::quadrature::gauss<double, 20>::weights();
  for (std::size_t i = 0; i < 10; ++i) {
    nodes[2 * i] = -x[i];
    nodes[2 * i + 1] = x[i];
    weights[2 * i] = w[i];
    weights[2 * i + 1] = w[i];
  }
}

double integrate_gl_panels(const std::function<double(double)>& f, double a, double b, std::size_t panels) {
  std::array<double, 20> x{}, w{};
  gauss_legendre_20(x, w);
  const double width = (b - a) / static_cast<double>(panels);
  double sum = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + width * static_cast<double>(p);
    const double c = lo + 0.5 * width;
    double part = 0.0;
    for (int i = 0; i < 20; ++i) part += w[i] * f(c + 0.5 * width * x[i]);
    sum += 0.5 * width * part;
  }
  return sum;
}

QmcResult qmc_integrate(int dim, std::size_t samples, std::uint64_t seed,
                        const std::function<Complex(std::span<const double>)>& f, int batches) {
  if (dim < 1) throw std::invalid_argument("qmc_integrate: dim must be positive");
  if (batches < 2) throw std::invalid_argument("qmc_integrate: need at least two batches");
  const std::size_t per_batch = std::max<std::size_t>(1, samples / static_cast<std::size_t>(batches));

  boost::random::sobol qrng(static_cast<std::size_t>(dim));
  const double span = static_cast<double>(qrng.max() - qrng.min()) + 1.0;
  std::vector<double> points(per_batch * dim);
  for (auto& p : points) p = static_cast<double>(qrng() - qrng.min()) / span;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> shifts(static_cast<std::size_t>(batches) * dim);
  for (auto& s : shifts) s = unif(rng);

  std::vector<Complex> means(batches);
  parallel_slabs(static_cast<std::size_t>(batches), [&](std::size_t b) {
    std::vector<double> u(dim);
    Complex acc = 0.0;
    for (std::size_t i = 0; i < per_batch; ++i) {
      for (int d = 0; d < dim; ++d) {
        double v = points[i * dim + d] + shifts[b * dim + d];
        u[d] = v >= 1.0 ? v - 1.0 : v;
      }
      acc += f(u);
    }
    means[b] = acc / static_cast<double>(per_batch);
  });

  Complex mean = 0.0;
  for (const auto& m : means) mean += m;
  mean /= static_cast<double>(batches);
  double var = 0.0;
  for (const auto& m : means) var += std::norm(m - mean);
  var /= static_cast<double>(batches - 1);
  return QmcResult{mean, std::sqrt(var / batches), per_batch * static_cast<std::size_t>(batches)};
}

}  // namespace cubiclab
