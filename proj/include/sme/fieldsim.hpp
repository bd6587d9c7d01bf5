#pragma once

#include "sme/rng.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sme {

struct Vec2
{
  double x{ 0.0 };
  double y{ 0.0 };
};

//! Parameters of a stationary Gaussian random field on a rectangular grid
//! of unit spacing. `lag1_corr` is the correlation between first-order
//! neighbors; the correlation divides by roughly `corr_decay` per extra
//! unit of distance.
struct FieldSpec
{
  int width{ 130 };
  int height{ 65 };
  double mean{ 3.5 };
  double variance{ 1.0 };
  double lag1_corr{ 0.6 };
  double corr_decay{ 3.0 };

  void validate() const;
};

//! Isotropic moving-average kernel exp(-(d/scale)^shape), calibrated so the
//! induced lattice autocorrelation hits the requested lag-1 and lag-2
//! targets.
struct MaKernel
{
  double scale{ 1.0 };
  double shape{ 2.0 };
  int radius{ 1 };

  double weight(double dist) const;
  //! Lattice autocorrelation of the induced moving-average process at
  //! integer offset (dx, dy).
  double lattice_corr(double dx, double dy) const;

  static MaKernel calibrate(double lag1_corr, double corr_decay);
};

//! Realized Gaussian field. Stores both the node values (width x height) and
//! the generating white-noise lattice, so the same moving-average process can
//! be evaluated at continuous locations with exactly the nominal marginal
//! distribution.
class RandomField
{
public:
  RandomField(FieldSpec spec, std::uint64_t seed);

  const FieldSpec& spec() const { return spec_; }
  std::uint64_t seed() const { return seed_; }
  const MaKernel& kernel() const { return kernel_; }

  double node(int i, int j) const { return values_[idx(i, j)]; }
  const std::vector<double>& values() const { return values_; }

  //! Evaluation of the generating moving-average process at a continuous
  //! location inside the rectangle. Exactly Gaussian with the spec's mean
  //! and variance at every location; coincides with node values on the grid.
  double value_at(Vec2 s) const;

  //! Rectangle on which continuous locations live: [0, width-1] x [0, height-1].
  double max_x() const { return static_cast<double>(spec_.width - 1); }
  double max_y() const { return static_cast<double>(spec_.height - 1); }

private:
  std::size_t idx(int i, int j) const
  {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(spec_.width) +
           static_cast<std::size_t>(i);
  }
  double noise(int i, int j) const;

  FieldSpec spec_;
  std::uint64_t seed_{ 0 };
  MaKernel kernel_;
  std::vector<double> values_;
  std::vector<double> noise_; // extended lattice, margin = kernel radius
  int noise_w_{ 0 }, noise_h_{ 0 }, margin_{ 0 };
};

//! Bilinear interpolation of the four surrounding grid nodes. Node
//! coordinates return the stored node value exactly.
double field_value(const RandomField& field, Vec2 s);

//! n i.i.d. locations, uniform on the continuous rectangle.
std::vector<Vec2> sample_locations(const FieldSpec& spec, std::size_t n, std::uint64_t seed);

enum class OutcomeKind
{
  Linear,
  Poly3,
  Probit
};

//! Outcome equation y = g(x*) + u, with g affine (theta size 2), cubic
//! (size 4), or a probit index model (size 2, u standard normal).
struct OutcomeDesign
{
  OutcomeKind kind{ OutcomeKind::Linear };
  std::vector<double> theta{ -3.5, 2.0 };
  double sigma_u{ 1.3 }; // unused for probit

  void validate() const;
  double g(double x_star) const;
};

enum class ErrorKind
{
  ClassicalGaussian,
  LognormalMedian
};

//! Measurement process x = x* + v (classical) or x lognormal with
//! conditional median x* and log-scale variance `log_var`.
struct ErrorDesign
{
  ErrorKind kind{ ErrorKind::ClassicalGaussian };
  double sigma_v{ 0.8 };
  double log_var{ 1.0 / 25.0 };

  void validate() const;
};

//! Observed sample. Column-oriented; `x_star` is kept only for synthetic
//! data (oracle evaluations and infeasible baselines).
struct Dataset
{
  std::vector<Vec2> loc;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> w;      // empty when the design has no covariate
  std::vector<double> x_star; // empty for non-synthetic data

  std::size_t n() const { return loc.size(); }
  bool has_covariate() const { return !w.empty(); }
  bool has_truth() const { return !x_star.empty(); }
};

//! Builds the synthetic sample at the given locations. The covariate, when
//! requested, is w = (x* + N(0,1))^2 / 20 and enters the outcome additively.
Dataset make_dataset(const RandomField& field,
                     const std::vector<Vec2>& locs,
                     const OutcomeDesign& outcome,
                     const ErrorDesign& error,
                     bool covariate,
                     std::uint64_t seed);

//! CSV export (columns sx, sy, x, y[, w][, x_star]) plus a JSON sidecar with
//! the generating spec and seed.
void write_dataset_csv(const Dataset& data, const std::string& path);
void write_dataset_sidecar(const FieldSpec& spec,
                           const OutcomeDesign& outcome,
                           const ErrorDesign& error,
                           bool covariate,
                           std::uint64_t seed,
                           const std::string& path);
Dataset read_dataset_csv(const std::string& path);

} // namespace sme
