#pragma once

#include <cstddef>
#include <vector>

namespace sme {

//! Gauss-Legendre rule on [-1, 1].
struct GaussLegendre
{
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendre(std::size_t n);
};

//! Quadrature rule on an interval [a, b]: single-panel or composite
//! Gauss-Legendre. Composite rules subdivide [a, b] into uniform panels,
//! which keeps accuracy for integrands with localized features.
class Quadrature
{
public:
  //! Single panel with n nodes.
  static Quadrature gauss_legendre(double a, double b, std::size_t n);

  //! `panels` uniform panels with `per_panel` nodes each.
  static Quadrature composite(double a, double b, std::size_t panels, std::size_t per_panel);

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return nodes_.size(); }
  double a() const { return a_; }
  double b() const { return b_; }

  template<class F>
  double integrate(F&& f) const
  {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      s += weights_[i] * f(nodes_[i]);
    return s;
  }

private:
  Quadrature() = default;
  double a_{ 0.0 }, b_{ 0.0 };
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

} // namespace sme
