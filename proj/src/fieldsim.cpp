#include "sme/fieldsim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace sme {

void FieldSpec::validate() const
{
  if (width < 2 || height < 2)
    throw std::invalid_argument("FieldSpec: width and height must be >= 2");
  if (!(variance > 0.0))
    throw std::invalid_argument("FieldSpec: variance must be positive");
  if (!(lag1_corr > 0.0 && lag1_corr < 1.0))
    throw std::invalid_argument("FieldSpec: lag1_corr must lie in (0,1)");
  if (!(corr_decay > 1.0))
    throw std::invalid_argument("FieldSpec: corr_decay must exceed 1");
}

double MaKernel::weight(double dist) const
{
  return std::exp(-std::pow(dist / scale, shape));
}

namespace {

int effective_radius(double scale, double shape)
{
  // w(d) < 1e-8 beyond this distance
  const double d = scale * std::pow(std::log(1e8), 1.0 / shape);
  return std::max(1, static_cast<int>(std::ceil(d)));
}

//! Lattice cross-moment sum_u w(u) w(u + delta) for a candidate kernel.
double overlap(double scale, double shape, double dx, double dy)
{
  const int r = effective_radius(scale, shape) + 2;
  double s = 0.0;
  for (int a = -r; a <= r; ++a) {
    for (int b = -r; b <= r; ++b) {
      const double w1 = std::exp(-std::pow(std::hypot(a, b) / scale, shape));
      if (w1 < 1e-12)
        continue;
      const double w2 = std::exp(-std::pow(std::hypot(a + dx, b + dy) / scale, shape));
      s += w1 * w2;
    }
  }
  return s;
}

double corr_at(double scale, double shape, double dx, double dy)
{
  return overlap(scale, shape, dx, dy) / overlap(scale, shape, 0.0, 0.0);
}

//! Scale solving corr_at(scale, shape, 1, 0) = target; corr is increasing
//! in scale.
double solve_scale(double shape, double target)
{
  double lo = 0.02, hi = 60.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (corr_at(mid, shape, 1.0, 0.0) < target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-10)
      break;
  }
  return 0.5 * (lo + hi);
}

struct CalKey
{
  double l1, decay;
  bool operator<(const CalKey& o) const
  {
    return l1 != o.l1 ? l1 < o.l1 : decay < o.decay;
  }
};

} // namespace

MaKernel MaKernel::calibrate(double lag1_corr, double corr_decay)
{
  static std::map<CalKey, MaKernel> cache;
  static std::mutex cache_mutex;
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    const auto it = cache.find({ lag1_corr, corr_decay });
    if (it != cache.end())
      return it->second;
  }

  const double r2_target = lag1_corr / corr_decay;
  // The lag-2/lag-1 ratio decreases in the shape exponent (heavier kernel
  // tails decay slower). Bisect the shape; the scale is re-solved at each
  // trial to keep lag-1 on target.
  double lo = 0.35, hi = 4.0;
  auto ratio_err = [&](double shape) {
    const double sc = solve_scale(shape, lag1_corr);
    return corr_at(sc, shape, 2.0, 0.0) - r2_target;
  };
  const double err_lo = ratio_err(lo);
  const double err_hi = ratio_err(hi);
  double shape;
  if (err_lo <= 0.0)
    shape = lo; // decay too steep to represent; use heaviest tail available
  else if (err_hi >= 0.0)
    shape = hi;
  else {
    for (int it = 0; it < 80; ++it) {
      shape = 0.5 * (lo + hi);
      if (ratio_err(shape) > 0.0)
        lo = shape;
      else
        hi = shape;
      if (hi - lo < 1e-6)
        break;
    }
    shape = 0.5 * (lo + hi);
  }

  MaKernel k;
  k.shape = shape;
  k.scale = solve_scale(shape, lag1_corr);
  k.radius = effective_radius(k.scale, k.shape);
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    cache.emplace(CalKey{ lag1_corr, corr_decay }, k);
  }
  return k;
}

double MaKernel::lattice_corr(double dx, double dy) const
{
  return corr_at(scale, shape, dx, dy);
}

RandomField::RandomField(FieldSpec spec, std::uint64_t seed)
  : spec_(spec)
  , seed_(seed)
{
  spec_.validate();
  kernel_ = MaKernel::calibrate(spec_.lag1_corr, spec_.corr_decay);
  margin_ = kernel_.radius;
  noise_w_ = spec_.width + 2 * margin_;
  noise_h_ = spec_.height + 2 * margin_;
  noise_.resize(static_cast<std::size_t>(noise_w_) * static_cast<std::size_t>(noise_h_));
  Rng rng = Rng(seed).derive(0xF1E1D);
  for (auto& v : noise_)
    v = rng.normal();

  values_.resize(static_cast<std::size_t>(spec_.width) * static_cast<std::size_t>(spec_.height));
  for (int j = 0; j < spec_.height; ++j)
    for (int i = 0; i < spec_.width; ++i)
      values_[idx(i, j)] = value_at({ static_cast<double>(i), static_cast<double>(j) });
}

double RandomField::noise(int i, int j) const
{
  return noise_[static_cast<std::size_t>(j + margin_) * static_cast<std::size_t>(noise_w_) +
                static_cast<std::size_t>(i + margin_)];
}

double RandomField::value_at(Vec2 s) const
{
  if (!(s.x >= 0.0 && s.x <= max_x() && s.y >= 0.0 && s.y <= max_y()))
    throw std::invalid_argument("RandomField::value_at: location outside rectangle");
  const int r = kernel_.radius;
  const int a_lo = static_cast<int>(std::ceil(s.x - r));
  const int a_hi = static_cast<int>(std::floor(s.x + r));
  const int b_lo = static_cast<int>(std::ceil(s.y - r));
  const int b_hi = static_cast<int>(std::floor(s.y + r));
  double acc = 0.0;
  double wsq = 0.0;
  for (int b = b_lo; b <= b_hi; ++b) {
    for (int a = a_lo; a <= a_hi; ++a) {
      const double w = kernel_.weight(std::hypot(s.x - a, s.y - b));
      acc += w * noise(a, b);
      wsq += w * w;
    }
  }
  return spec_.mean + std::sqrt(spec_.variance / wsq) * acc;
}

double field_value(const RandomField& field, Vec2 s)
{
  if (!(s.x >= 0.0 && s.x <= field.max_x() && s.y >= 0.0 && s.y <= field.max_y()))
    throw std::invalid_argument("field_value: location outside rectangle");
  const int iw = field.spec().width, ih = field.spec().height;
  int i0 = static_cast<int>(std::floor(s.x));
  int j0 = static_cast<int>(std::floor(s.y));
  i0 = std::min(i0, iw - 2);
  j0 = std::min(j0, ih - 2);
  const double u = s.x - i0;
  const double v = s.y - j0;
  const double v00 = field.node(i0, j0);
  const double v10 = field.node(i0 + 1, j0);
  const double v01 = field.node(i0, j0 + 1);
  const double v11 = field.node(i0 + 1, j0 + 1);
  return (1 - u) * (1 - v) * v00 + u * (1 - v) * v10 + (1 - u) * v * v01 + u * v * v11;
}

std::vector<Vec2> sample_locations(const FieldSpec& spec, std::size_t n, std::uint64_t seed)
{
  spec.validate();
  if (n == 0)
    throw std::invalid_argument("sample_locations: n must be >= 1");
  Rng rng = Rng(seed).derive(0x10C5);
  std::vector<Vec2> out(n);
  const double mx = static_cast<double>(spec.width - 1);
  const double my = static_cast<double>(spec.height - 1);
  for (auto& s : out) {
    s.x = rng.uniform(0.0, mx);
    s.y = rng.uniform(0.0, my);
  }
  return out;
}

void OutcomeDesign::validate() const
{
  const std::size_t need = kind == OutcomeKind::Poly3 ? 4 : 2;
  if (theta.size() != need)
    throw std::invalid_argument("OutcomeDesign: theta has wrong length");
  if (kind != OutcomeKind::Probit && sigma_u < 0.0)
    throw std::invalid_argument("OutcomeDesign: sigma_u must be >= 0");
}

double OutcomeDesign::g(double x_star) const
{
  switch (kind) {
    case OutcomeKind::Linear:
    case OutcomeKind::Probit:
      return theta[0] + theta[1] * x_star;
    case OutcomeKind::Poly3:
      return theta[0] + x_star * (theta[1] + x_star * (theta[2] + x_star * theta[3]));
  }
  return 0.0;
}

void ErrorDesign::validate() const
{
  if (kind == ErrorKind::ClassicalGaussian && sigma_v < 0.0)
    throw std::invalid_argument("ErrorDesign: sigma_v must be >= 0");
  if (kind == ErrorKind::LognormalMedian && log_var < 0.0)
    throw std::invalid_argument("ErrorDesign: log_var must be >= 0");
}

Dataset make_dataset(const RandomField& field,
                     const std::vector<Vec2>& locs,
                     const OutcomeDesign& outcome,
                     const ErrorDesign& error,
                     bool covariate,
                     std::uint64_t seed)
{
  outcome.validate();
  error.validate();
  const std::size_t n = locs.size();
  Dataset d;
  d.loc = locs;
  d.x.resize(n);
  d.y.resize(n);
  d.x_star.resize(n);
  if (covariate)
    d.w.resize(n);

  Rng r_u = Rng(seed).derive(1);
  Rng r_v = Rng(seed).derive(2);
  Rng r_w = Rng(seed).derive(3);

  for (std::size_t i = 0; i < n; ++i) {
    // Generator-consistent evaluation keeps the marginal law of x* exact at
    // continuous locations (bilinear interpolation of node values shrinks
    // the variance between nodes).
    const double xs = field.value_at(locs[i]);
    d.x_star[i] = xs;

    double wi = 0.0;
    if (covariate) {
      const double t = xs + r_w.normal();
      wi = t * t / 20.0;
      d.w[i] = wi;
    }

    switch (outcome.kind) {
      case OutcomeKind::Linear:
      case OutcomeKind::Poly3:
        d.y[i] = outcome.g(xs) + outcome.sigma_u * r_u.normal() + wi;
        break;
      case OutcomeKind::Probit: {
        const double index = outcome.g(xs) + wi;
        d.y[i] = (index + r_u.normal() > 0.0) ? 1.0 : 0.0;
        break;
      }
    }

    switch (error.kind) {
      case ErrorKind::ClassicalGaussian:
        d.x[i] = xs + error.sigma_v * r_v.normal();
        break;
      case ErrorKind::LognormalMedian: {
        const double mu_log = std::log(std::max(xs, 0.001));
        d.x[i] = std::exp(mu_log + std::sqrt(error.log_var) * r_v.normal());
        break;
      }
    }
  }
  return d;
}

void write_dataset_csv(const Dataset& data, const std::string& path)
{
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("write_dataset_csv: cannot open " + path);
  out.precision(17);
  out << "sx,sy,x,y";
  if (data.has_covariate())
    out << ",w";
  if (data.has_truth())
    out << ",x_star";
  out << "\n";
  for (std::size_t i = 0; i < data.n(); ++i) {
    out << data.loc[i].x << ',' << data.loc[i].y << ',' << data.x[i] << ',' << data.y[i];
    if (data.has_covariate())
      out << ',' << data.w[i];
    if (data.has_truth())
      out << ',' << data.x_star[i];
    out << "\n";
  }
}

void write_dataset_sidecar(const FieldSpec& spec,
                           const OutcomeDesign& outcome,
                           const ErrorDesign& error,
                           bool covariate,
                           std::uint64_t seed,
                           const std::string& path)
{
  nlohmann::json j;
  j["field"] = { { "width", spec.width },       { "height", spec.height },
                 { "mean", spec.mean },         { "variance", spec.variance },
                 { "lag1_corr", spec.lag1_corr }, { "corr_decay", spec.corr_decay } };
  j["outcome"] = { { "kind",
                     outcome.kind == OutcomeKind::Linear  ? "linear"
                     : outcome.kind == OutcomeKind::Poly3 ? "polynomial3"
                                                          : "probit" },
                   { "theta", outcome.theta },
                   { "sigma_u", outcome.sigma_u } };
  j["error"] = { { "kind",
                   error.kind == ErrorKind::ClassicalGaussian ? "classical_gaussian"
                                                              : "lognormal_median" },
                 { "sigma_v", error.sigma_v },
                 { "log_var", error.log_var } };
  j["covariate"] = covariate;
  j["seed"] = seed;
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("write_dataset_sidecar: cannot open " + path);
  out << j.dump(2) << "\n";
}

Dataset read_dataset_csv(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("read_dataset_csv: cannot open " + path);
  std::string header;
  if (!std::getline(in, header))
    throw std::runtime_error("read_dataset_csv: empty file " + path);
  std::vector<std::string> cols;
  {
    std::stringstream ss(header);
    std::string c;
    while (std::getline(ss, c, ','))
      cols.push_back(c);
  }
  const bool has_w = std::find(cols.begin(), cols.end(), "w") != cols.end();
  const bool has_t = std::find(cols.begin(), cols.end(), "x_star") != cols.end();
  if (cols.size() < 4 || cols[0] != "sx" || cols[1] != "sy" || cols[2] != "x" || cols[3] != "y")
    throw std::runtime_error("read_dataset_csv: unexpected header in " + path);

  Dataset d;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    std::stringstream ss(line);
    std::string tok;
    std::vector<double> vals;
    while (std::getline(ss, tok, ','))
      vals.push_back(std::stod(tok));
    if (vals.size() != cols.size())
      throw std::runtime_error("read_dataset_csv: ragged row in " + path);
    d.loc.push_back({ vals[0], vals[1] });
    d.x.push_back(vals[2]);
    d.y.push_back(vals[3]);
    std::size_t k = 4;
    if (has_w)
      d.w.push_back(vals[k++]);
    if (has_t)
      d.x_star.push_back(vals[k++]);
  }
  return d;
}

} // namespace sme
