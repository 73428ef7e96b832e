#pragma once

#include <random>

#include "netputsim/synth.hpp"
#include "netputsim/types.hpp"

namespace netputsim::testing {

// Parameter set with arbitrary dimensions and no industry naming.
inline ParameterSet blank_params(Eigen::Index g, Eigen::Index k, Eigen::Index c = 0) {
  ParameterSet p;
  p.a = Vector::Zero(g);
  p.b = Vector::Zero(k);
  p.C = Matrix::Zero(g, g);
  p.D = Matrix::Zero(k, k);
  p.alpha = Matrix::Zero(g, k);
  p.gamma = Matrix::Zero(g, c);
  p.gamma_m = Vector::Zero(c);
  return p;
}

inline Matrix random_symmetric(Eigen::Index n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      m(i, j) = u(rng);
      m(j, i) = m(i, j);
    }
  }
  return m;
}

inline Vector random_vector(Eigen::Index n, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

inline ParameterSet random_params(Eigen::Index g, Eigen::Index k, Eigen::Index c,
                                  std::mt19937_64& rng) {
  ParameterSet p = blank_params(g, k, c);
  p.a = random_vector(g, rng, -5, 5);
  p.b = random_vector(k, rng, -2, 2);
  p.C = random_symmetric(g, rng, 3.0);
  p.D = random_symmetric(k, rng, 0.5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (Eigen::Index i = 0; i < g; ++i) {
    for (Eigen::Index f = 0; f < k; ++f) p.alpha(i, f) = u(rng);
    for (Eigen::Index q = 0; q < c; ++q) p.gamma(i, q) = u(rng);
  }
  p.gamma_m = random_vector(c, rng, -1, 1);
  p.a_m = u(rng) * 4;
  return p;
}

// Random truth for an industry with a small synthetic-config around it.
// Intercepts are large enough that the noiseless panel stays monotone.
inline SynthIndustryConfig random_synth_industry(IndustryId id, int farms, std::mt19937_64& rng) {
  const IndustrySpec& spec = industry_spec(id);
  SynthIndustryConfig ic;
  ic.industry = id;
  ic.farms = farms;
  ParameterSet p = ParameterSet::zeros(spec);
  const auto g = static_cast<Eigen::Index>(spec.netput_count());
  std::uniform_real_distribution<double> u(-1, 1);
  p.C = random_symmetric(g, rng, 0.05);
  for (Eigen::Index i = 0; i < g; ++i) {
    p.a[i] = spec.sign(static_cast<std::size_t>(i)) * (50.0 + 10 * u(rng));
    for (Eigen::Index f = 0; f < p.alpha.cols(); ++f) p.alpha(i, f) = 0.01 * u(rng);
    for (Eigen::Index c = 0; c < p.gamma.cols(); ++c) p.gamma(i, c) = 0.01 * u(rng);
  }
  p.a_m = -500.0;
  ic.truth = p;
  ic.base_prices.assign(spec.netput_count(), 10.0);
  ic.area = {100.0, 0.3};
  ic.fixed.assign(spec.fixed_column_names().size(), LogNormalSpec{5.0, 0.3});
  ic.controls = {{false, 400.0, 50.0}, {true, 0.2, 0.0}, {false, 55.0, 10.0}};
  ic.noise_sd.assign(spec.netput_count() + 1, 0.0);
  return ic;
}

// A valid farm-year with unit quantities and prices; horticulture gets
// equal planted areas summing to `area`.
inline FarmRecord plain_record(IndustryId id, const std::string& farm, double area,
                               double weight = 1.0, int year = 2015) {
  const IndustrySpec& spec = industry_spec(id);
  FarmRecord r;
  r.farm_id = farm;
  r.year = year;
  r.industry = id;
  r.weight = weight;
  r.region = "murrumbidgee";
  r.area_operated = area;
  if (id == IndustryId::kHorticulture) {
    r.output_areas.assign(spec.output_count(), area / static_cast<double>(spec.output_count()));
  }
  r.quantities.assign(spec.netput_count(), 1.0);
  r.numeraire_quantity = 1.0;
  r.raw_prices.assign(spec.netput_count(), 10.0);
  r.fixed.assign(spec.fixed_column_names().size(), 1.0);
  r.controls = {400.0, 0.0, 50.0};
  return r;
}

}  // namespace netputsim::testing
