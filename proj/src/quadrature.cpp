#include "sme/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace sme {

GaussLegendre::GaussLegendre(std::size_t n)
{
  if (n == 0)
    throw std::invalid_argument("GaussLegendre: need at least one node");
  nodes.resize(n);
  weights.resize(n);
  // Newton iteration on Legendre polynomials, symmetric roots.
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15)
        break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

Quadrature Quadrature::gauss_legendre(double a, double b, std::size_t n)
{
  return composite(a, b, 1, n);
}

Quadrature Quadrature::composite(double a, double b, std::size_t panels, std::size_t per_panel)
{
  if (!(b > a))
    throw std::invalid_argument("Quadrature: empty interval");
  if (panels == 0 || per_panel == 0)
    throw std::invalid_argument("Quadrature: need panels and nodes");
  const GaussLegendre base(per_panel);
  Quadrature q;
  q.a_ = a;
  q.b_ = b;
  q.nodes_.reserve(panels * per_panel);
  q.weights_.reserve(panels * per_panel);
  const double width = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + width * static_cast<double>(p);
    for (std::size_t i = 0; i < per_panel; ++i) {
      q.nodes_.push_back(lo + 0.5 * width * (base.nodes[i] + 1.0));
      q.weights_.push_back(0.5 * width * base.weights[i]);
    }
  }
  return q;
}

} // namespace sme
