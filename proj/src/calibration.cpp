#include "netputsim/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "netputsim/error.hpp"
#include "netputsim/netput.hpp"

namespace netputsim {

namespace {

// Marginal effects, elasticities and their p-values as printed, row-major,
// netputs in model order then materials and services.
constexpr double k_dairy_m[] = {
    -211732.0, 525.0, -30.0, -648556.0, -529.0, 692563.0,
    525.0, 0.0, 0.0, -173.0, 0.0, -130.0,
    30.0, 0.0, 0.0, -83.0, 0.0, -110.0,
    648556.0, 173.0, -83.0, -428940.0, 179.0, -86324.0,
    529.0, 0.0, 0.0, 179.0, -1.0, 59.0,
    692563.0, -130.0, -110.0, -86324.0, 59.0, -64251.0,
};
constexpr double k_dairy_m_p[] = {
    0.87, 0.02, 0.76, 0.07, 0.05, 0.08,
    0.02, 0.4, 0.28, 0.01, 0.23, 0.16,
    0.76, 0.28, 0.32, 0.0, 0.34, 0.02,
    0.07, 0.01, 0.0, 0.0, 0.03, 0.42,
    0.05, 0.23, 0.34, 0.03, 0.0, 0.49,
    0.08, 0.16, 0.02, 0.42, 0.49, 0.73,
};
constexpr double k_rice_m[] = {
    -0.33, 0.07, -0.99, -0.1, -1.83, 1245.0,
    0.07, -0.3, -1.22, -0.06, -1.97, 1348.0,
    -0.99, -1.22, 1.02, 0.1, 2.69, -171.0,
    0.1, 0.06, -0.1, 0.04, -0.09, 69.3,
    1.83, 1.97, -2.69, -0.09, -6.59, -1190.0,
    1245.0, 1348.0, -171.0, 69.3, 1190.0, -1108000.0,
};
constexpr double k_rice_m_p[] = {
    0.2, 0.73, 0.0, 0.0, 0.0, 0.0,
    0.73, 0.37, 0.0, 0.02, 0.0, 0.0,
    0.0, 0.0, 0.28, 0.45, 0.0, 0.69,
    0.0, 0.02, 0.45, 0.64, 0.05, 0.37,
    0.0, 0.0, 0.0, 0.05, 0.0, 0.0,
    0.0, 0.0, 0.69, 0.37, 0.0, 0.0,
};
constexpr double k_nonrice_m[] = {
    -0.21, -0.16, 0.0, -1.15, 427.7,
    -0.16, 1.66, 0.02, 0.85, -849.5,
    0.0, -0.02, 0.0, -0.03, -9.68,
    1.15, -0.85, -0.03, -3.59, -738.5,
    427.7, -849.5, -9.68, -738.5, 358765.0,
};
constexpr double k_nonrice_m_p[] = {
    0.39, 0.36, 0.71, 0.0, 0.0,
    0.36, 0.08, 0.78, 0.03, 0.04,
    0.71, 0.78, 0.96, 0.24, 0.8,
    0.0, 0.03, 0.24, 0.0, 0.0,
    0.0, 0.04, 0.8, 0.0, 0.08,
};
constexpr double k_hort_m[] = {
    -0.02, 0.02, 0.01, 0.0, -0.02, -0.01, 0.0, 0.03, 0.02, -24.45,
    0.02, 0.17, -0.02, -0.01, -0.05, 0.0, 0.0, 0.06, -0.01, -83.76,
    0.01, -0.02, -0.01, 0.0, 0.01, 0.0, 0.0, 0.0, -0.02, 21.06,
    0.0, -0.01, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 9.36,
    -0.02, -0.05, 0.01, 0.0, -0.02, -0.01, 0.0, -0.03, 0.03, 66.27,
    -0.01, 0.0, 0.0, 0.0, -0.01, 0.01, 0.0, -0.02, 0.0, 9.39,
    0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 5.81,
    -0.03, -0.06, 0.0, 0.0, 0.03, 0.02, 0.0, 0.03, 0.07, -85.9,
    -0.02, 0.01, 0.02, 0.0, -0.03, 0.0, 0.0, 0.07, 0.0, -132.6,
    24.45, 83.76, -21.06, -9.36, -66.27, -9.39, -5.81, -85.9, -132.6, 264384.0,
};
constexpr double k_hort_m_p[] = {
    0.16, 0.47, 0.32, 0.11, 0.03, 0.0, 0.76, 0.16, 0.09, 0.46,
    0.47, 0.36, 0.33, 0.2, 0.25, 0.8, 0.84, 0.01, 0.78, 0.06,
    0.32, 0.33, 0.12, 0.45, 0.12, 0.3, 0.31, 0.95, 0.03, 0.35,
    0.11, 0.2, 0.45, 0.69, 0.53, 0.63, 0.11, 0.39, 0.54, 0.16,
    0.03, 0.25, 0.12, 0.53, 0.29, 0.0, 0.67, 0.11, 0.02, 0.02,
    0.0, 0.8, 0.3, 0.63, 0.0, 0.01, 0.66, 0.08, 0.84, 0.58,
    0.76, 0.84, 0.31, 0.11, 0.67, 0.66, 0.67, 0.31, 0.76, 0.51,
    0.16, 0.01, 0.95, 0.39, 0.11, 0.08, 0.31, 0.75, 0.0, 0.49,
    0.09, 0.78, 0.03, 0.54, 0.02, 0.84, 0.76, 0.0, 0.93, 0.0,
    0.46, 0.06, 0.35, 0.16, 0.02, 0.58, 0.51, 0.49, 0.0, 0.23,
};
constexpr double k_dairy_e[] = {
    -0.08, 0.16, -0.04, -0.49, -0.07, 0.55,
    1.36, -0.17, 0.28, -0.87, 0.06, -0.68,
    0.34, -0.33, -0.71, -1.89, -0.05, 2.65,
    2.06, 0.44, -0.81, -2.62, 0.16, 0.59,
    0.71, -0.06, -0.08, 0.47, -0.49, -0.32,
    -1.11, 0.17, 0.56, 0.28, -0.03, 0.0,
};
constexpr double k_dairy_e_p[] = {
    0.87, 0.02, 0.76, 0.07, 0.05, 0.11,
    0.02, 0.4, 0.28, 0.01, 0.23, 0.19,
    0.76, 0.28, 0.32, 0.0, 0.34, 0.02,
    0.07, 0.01, 0.0, 0.0, 0.03, 0.44,
    0.05, 0.23, 0.34, 0.03, 0.0, 0.0,
    0.11, 0.19, 0.02, 0.44, 0.0, 0.76,
};
constexpr double k_rice_e[] = {
    -0.43, 0.11, -0.99, -0.35, -1.51, 3.17,
    0.04, -0.21, -0.54, -0.09, -0.72, 1.51,
    -0.57, -0.84, 0.46, 0.16, 0.98, -0.19,
    1.71, 1.2, -1.38, 1.91, -1.05, -2.41,
    0.97, 1.27, -1.11, -0.14, -2.23, 1.24,
    -1.2, -1.57, 0.13, -0.19, 0.73, 2.09,
};
constexpr double k_rice_e_p[] = {
    0.2, 0.73, 0.0, 0.0, 0.0, 0.0,
    0.73, 0.37, 0.0, 0.02, 0.0, 0.0,
    0.0, 0.0, 0.28, 0.45, 0.0, 0.69,
    0.0, 0.02, 0.45, 0.64, 0.05, 0.37,
    0.0, 0.0, 0.0, 0.05, 0.0, 0.0,
    0.0, 0.0, 0.69, 0.37, 0.0, 0.0,
};
constexpr double k_nonrice_e[] = {
    -0.06, -0.05, 0.0, -0.19, 0.31,
    -0.07, 0.68, 0.03, 0.19, -0.83,
    0.06, -0.27, 0.09, -0.22, 0.34,
    0.7, -0.51, -0.06, -1.18, 1.05,
    -0.37, 0.72, 0.03, 0.35, -0.72,
};
constexpr double k_nonrice_e_p[] = {
    0.39, 0.36, 0.71, 0.0, 0.0,
    0.36, 0.08, 0.78, 0.03, 0.04,
    0.71, 0.78, 0.96, 0.24, 0.8,
    0.0, 0.03, 0.24, 0.0, 0.0,
    0.0, 0.04, 0.8, 0.0, 0.08,
};
constexpr double k_hort_e[] = {
    -1.14, 0.68, 3.7, 1.9, -0.27, -1.18, 0.3, 0.8, 0.08, -0.15,
    1.29, 5.86, -8.35, -3.68, -0.6, 0.16, -0.64, 1.96, -0.02, -0.46,
    0.58, -0.69, -5.52, -0.75, 0.16, 0.26, 0.71, 0.03, -0.08, 0.57,
    0.2, -0.21, -0.51, 0.15, 0.02, 0.04, -0.39, -0.1, -0.01, 0.22,
    -1.54, -1.82, 5.89, 1.0, -0.23, -0.96, 0.55, -0.76, 0.11, 0.36,
    -0.74, 0.05, 1.03, 0.21, -0.1, 1.36, -0.16, -0.6, 0.0, 0.01,
    0.05, -0.05, 0.73, -0.59, 0.02, -0.04, -0.14, -0.15, 0.0, 0.19,
    -1.67, -2.17, -0.35, 1.95, 0.28, 1.99, 1.95, 0.76, 0.25, -3.8,
    -1.4, 0.2, 9.25, 0.98, -0.35, -0.1, 0.33, 2.27, 0.01, -1.75,
    0.28, 0.47, -0.71, -0.21, -0.5, -0.18, -0.26, -1.42, -0.26, 3.01,
};
constexpr double k_hort_e_p[] = {
    0.16, 0.47, 0.32, 0.11, 0.03, 0.0, 0.76, 0.16, 0.09, 0.48,
    0.47, 0.36, 0.33, 0.2, 0.25, 0.8, 0.84, 0.01, 0.78, 0.06,
    0.32, 0.33, 0.12, 0.45, 0.12, 0.3, 0.31, 0.95, 0.03, 0.29,
    0.11, 0.2, 0.45, 0.69, 0.53, 0.63, 0.11, 0.39, 0.54, 0.13,
    0.03, 0.25, 0.12, 0.53, 0.29, 0.0, 0.67, 0.11, 0.02, 0.01,
    0.0, 0.8, 0.3, 0.63, 0.0, 0.01, 0.66, 0.08, 0.84, 0.47,
    0.76, 0.84, 0.31, 0.11, 0.67, 0.66, 0.67, 0.31, 0.76, 0.45,
    0.16, 0.01, 0.95, 0.39, 0.11, 0.08, 0.31, 0.75, 0.0, 0.59,
    0.09, 0.78, 0.03, 0.54, 0.02, 0.84, 0.76, 0.0, 0.93, 0.0,
    0.48, 0.06, 0.34, 0.17, 0.01, 0.43, 0.46, 0.6, 0.0, 0.29,
};

Matrix square(const double* data, Eigen::Index n) {
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = data[i * n + j];
  }
  return m;
}

PublishedEffects make(IndustryId id, const double* m, const double* mp, const double* e,
                      const double* ep, std::vector<double> q, double area, double step) {
  const IndustrySpec& spec = industry_spec(id);
  const auto n = static_cast<Eigen::Index>(spec.netput_count() + 1);
  PublishedEffects fx;
  fx.industry = id;
  fx.labels = spec.netput_names();
  fx.labels.push_back(spec.numeraire_name);
  fx.marginal = square(m, n);
  fx.marginal_p = square(mp, n);
  fx.elasticity = square(e, n);
  fx.elasticity_p = square(ep, n);
  fx.mean_quantity = Eigen::Map<Vector>(q.data(), n);
  fx.mean_area = area;
  fx.print_step = step;
  return fx;
}

const std::map<IndustryId, PublishedEffects>& all_effects() {
  static const std::map<IndustryId, PublishedEffects> effects = {
      {IndustryId::kDairy,
       make(IndustryId::kDairy, k_dairy_m, k_dairy_m_p, k_dairy_e, k_dairy_e_p,
            {2001957, 264, 100, 352380, 530, 796116}, 357, 1.0)},
      {IndustryId::kBroadacreRice,
       make(IndustryId::kBroadacreRice, k_rice_m, k_rice_m_p, k_rice_e, k_rice_e_p,
            {1158, 1281, 1102, 78, 1363, 542933}, 1343, 0.01)},
      {IndustryId::kBroadacreNonRice,
       make(IndustryId::kBroadacreNonRice, k_nonrice_m, k_nonrice_m_p, k_nonrice_e,
            k_nonrice_e_p, {1695, 1270, 80, 1013, 496239}, 1932, 0.01)},
      {IndustryId::kHorticulture,
       make(IndustryId::kHorticulture, k_hort_m, k_hort_m_p, k_hort_e, k_hort_e_p,
            {1082, 833, 369, 312, 1008, 3508, 361, 265, 488, 704020}, 123, 0.01)},
  };
  return effects;
}

}  // namespace

const PublishedEffects& published_effects(IndustryId id) { return all_effects().at(id); }

Matrix filled_marginal_block(const PublishedEffects& fx) {
  const IndustrySpec& spec = industry_spec(fx.industry);
  const auto g = static_cast<Eigen::Index>(spec.netput_count());
  Matrix m(g, g);
  for (Eigen::Index i = 0; i < g; ++i) {
    for (Eigen::Index j = i; j < g; ++j) {
      double v = fx.marginal(i, j);
      if (v == 0.0) v = 0.3 * fx.print_step * (fx.elasticity(i, j) < 0.0 ? -1.0 : 1.0);
      m(i, j) = v;
      m(j, i) = spec.sign(static_cast<std::size_t>(i)) * spec.sign(static_cast<std::size_t>(j)) * v;
    }
  }
  return m;
}

Vector implied_prices(const PublishedEffects& fx) {
  const auto g = fx.marginal.rows() - 1;
  Vector p(g);
  for (Eigen::Index j = 0; j < g; ++j) {
    Eigen::Index row = j;
    if (fx.marginal(j, j) == 0.0) {
      row = g;  // numeraire row when the netput column is all zero
      double best = 0.0;
      for (Eigen::Index i = 0; i < g; ++i) {
        if (std::abs(fx.marginal(i, j)) > best) {
          best = std::abs(fx.marginal(i, j));
          row = i;
        }
      }
    }
    p[j] = fx.elasticity(row, j) * fx.mean_quantity[row] / fx.marginal(row, j);
    if (!(p[j] > 0.0)) {
      throw Error(ErrorCode::kInvalidPrice,
                  "published effects imply a nonpositive price for " + fx.labels[j]);
    }
  }
  return p;
}

namespace {

double area_scale(const IndustrySpec& spec, const PublishedEffects& fx) {
  return spec.per_hectare ? fx.mean_area : 1.0;
}

}  // namespace

ParameterSet fixture_params(IndustryId id, const FixtureOptions& options) {
  const IndustrySpec& spec = industry_spec(id);
  const PublishedEffects& fx = published_effects(id);
  const auto g = static_cast<Eigen::Index>(spec.netput_count());
  const Matrix m = options.fill_zero_cells ? filled_marginal_block(fx)
                                           : Matrix(fx.marginal.topLeftCorner(g, g));
  ParameterSet params = ParameterSet::zeros(spec);
  const double scale = area_scale(spec, fx);
  for (Eigen::Index i = 0; i < g; ++i) {
    for (Eigen::Index j = i; j < g; ++j) {
      params.C(i, j) = spec.sign(static_cast<std::size_t>(i)) * m(i, j) / scale;
      params.C(j, i) = params.C(i, j);
    }
  }
  if (options.flat_horticulture_water && id == IndustryId::kHorticulture) {
    const auto w = static_cast<Eigen::Index>(spec.water_index());
    params.C(w, w) = 0.0;
  }
  return params;
}

std::vector<double> synthetic_base_prices(IndustryId id) {
  switch (id) {
    case IndustryId::kDairy: return {0.45, 800, 1000, 1.0, 80};
    case IndustryId::kBroadacreRice: return {300, 250, 100, 1000, 80};
    case IndustryId::kBroadacreNonRice: return {250, 100, 1000, 80};
    case IndustryId::kHorticulture:
      return {900, 500, 1500, 1800, 500, 600, 1000, 1000, 80};
  }
  return {};
}

namespace {

struct FarmProfile {
  LogNormalSpec area;
  std::vector<LogNormalSpec> fixed;  // z_<name> columns
  std::vector<ControlSpec> controls;
};

// Lognormal matching a published mean and median; a zero median (most farms
// hold none) becomes a wide distribution around 0.6 of the mean.
LogNormalSpec from_mean_median(double mean, double median) {
  if (!(median > 0.0)) return {0.6 * mean, 1.0};
  const double sd = mean > median ? std::sqrt(2.0 * std::log(mean / median)) : 0.0;
  return {median, std::clamp(sd, 0.2, 1.0)};
}

std::vector<ControlSpec> controls(double rainfall, double educated, double age, double age_sd) {
  return {{false, rainfall, 0.25 * rainfall}, {true, educated, 0.0}, {false, age, age_sd}};
}

FarmProfile farm_profile(IndustryId id) {
  switch (id) {
    case IndustryId::kDairy:
      return {from_mean_median(357, 238),
              {from_mean_median(3, 3), from_mean_median(436, 332),
               from_mean_median(565512, 420840), from_mean_median(1068682, 824990)},
              controls(455, 0.1, 55, 11)};
    case IndustryId::kBroadacreRice:
      return {from_mean_median(1343, 669),
              {from_mean_median(3, 2), from_mean_median(77, 0), from_mean_median(1019, 498),
               from_mean_median(617277, 381132), from_mean_median(1864854, 1306127)},
              controls(339, 0.2, 55, 11)};
    case IndustryId::kBroadacreNonRice:
      return {from_mean_median(1932, 800),
              {from_mean_median(3, 2), from_mean_median(79, 0), from_mean_median(1288, 563),
               from_mean_median(605719, 351904), from_mean_median(1246499, 811330)},
              controls(522, 0.2, 55, 11)};
    case IndustryId::kHorticulture:
      return {from_mean_median(123, 20),
              {from_mean_median(2, 2), from_mean_median(5, 0), from_mean_median(25, 0),
               from_mean_median(121154, 68563), from_mean_median(117469, 46615),
               from_mean_median(591804, 274253)},
              controls(342, 0.2, 58, 10)};
  }
  throw Error(ErrorCode::kInvalidArgument, "no farm profile");
}

// Model z at the typical farm: medians of the column draws, the area median
// for broadacre area terms, equal planted-area shares for horticulture.
Vector typical_fixed(const IndustrySpec& spec, const FarmProfile& prof) {
  Vector z(static_cast<Eigen::Index>(spec.fixed_count()));
  std::size_t col = 0;
  for (std::size_t f = 0; f < spec.fixed_count(); ++f) {
    switch (spec.fixed_inputs[f].source) {
      case FixedSource::kColumn: z[f] = prof.fixed.at(col++).median; break;
      case FixedSource::kAreaOperated: z[f] = prof.area.median; break;
      case FixedSource::kAreaShare: z[f] = 1.0 / static_cast<double>(spec.output_count()); break;
    }
  }
  return z;
}

Vector typical_controls(const FarmProfile& prof) {
  Vector w(static_cast<Eigen::Index>(prof.controls.size()));
  for (std::size_t c = 0; c < prof.controls.size(); ++c) w[c] = prof.controls[c].mean;
  return w;
}

// Per-equation targets in model units: signed netputs, then x_m.
Vector model_targets(const IndustrySpec& spec, const PublishedEffects& fx) {
  Vector t = fx.mean_quantity / area_scale(spec, fx);
  for (std::size_t i = 0; i < spec.netput_count(); ++i) t[i] *= spec.sign(i);
  return t;
}

}  // namespace

ParameterSet calibrated_truth(IndustryId id, const FixtureOptions& options) {
  const IndustrySpec& spec = industry_spec(id);
  const PublishedEffects& fx = published_effects(id);
  ParameterSet t = fixture_params(id, options);
  const FarmProfile prof = farm_profile(id);
  const std::vector<double> base = synthetic_base_prices(id);
  const Vector p = Eigen::Map<const Vector>(base.data(), static_cast<Eigen::Index>(base.size()));
  const Vector z = typical_fixed(spec, prof);
  const Vector w = typical_controls(prof);
  const Vector target = model_targets(spec, fx);
  const auto g = p.size();
  const auto k = z.size();
  const auto c = w.size();
  const double kd = static_cast<double>(k);
  const double cd = static_cast<double>(c);

  // Fixed inputs jointly carry 20% of each target at the typical farm,
  // controls 5%; the intercept absorbs the rest.
  for (Eigen::Index i = 0; i < g; ++i) {
    for (Eigen::Index f = 0; f < k; ++f) t.alpha(i, f) = 0.2 * target[i] / (kd * z[f]);
    for (Eigen::Index q = 0; q < c; ++q) t.gamma(i, q) = 0.05 * target[i] / (cd * w[q]);
  }
  t.a = target.head(g) - t.C * p - t.alpha * z - t.gamma * w;

  const double xm = target[g];
  for (Eigen::Index f = 0; f < k; ++f) {
    t.b[f] = -0.2 * xm / (kd * z[f]);
    for (Eigen::Index l = 0; l <= f; ++l) {
      t.D(l, f) = t.D(f, l) = -0.02 * xm / (kd * kd * z[l] * z[f]);
    }
  }
  for (Eigen::Index q = 0; q < c; ++q) t.gamma_m[q] = -0.02 * xm / (cd * w[q]);
  t.a_m = -xm - t.gamma_m.dot(w) - t.b.dot(z) + 0.5 * p.dot(t.C * p) - 0.5 * z.dot(t.D * z);
  t.validate();
  return t;
}

SynthIndustryConfig calibrated_synth_industry(IndustryId id, const CalibratedPanelOptions& o) {
  const IndustrySpec& spec = industry_spec(id);
  const FarmProfile prof = farm_profile(id);
  SynthIndustryConfig ic;
  ic.industry = id;
  ic.farms = o.farms;
  ic.truth = calibrated_truth(id, o.fixture);
  ic.base_prices = synthetic_base_prices(id);
  ic.area = prof.area;
  ic.fixed = prof.fixed;
  ic.controls = prof.controls;
  const Vector target = model_targets(spec, published_effects(id));
  for (Eigen::Index i = 0; i < target.size(); ++i) {
    ic.noise_sd.push_back(o.noise_fraction * std::abs(target[i]));
  }
  return ic;
}

SynthConfig calibrated_synth_config(const CalibratedPanelOptions& options) {
  SynthConfig cfg;
  cfg.seed = options.seed;
  cfg.water_group_sd = 0.15;
  for (IndustryId id : options.industries) {
    cfg.industries.push_back(calibrated_synth_industry(id, options));
  }
  return cfg;
}

PriceVector fixture_point(IndustryId id) {
  return PriceVector(implied_prices(published_effects(id)), 1.0);
}

ElasticityMatrix fixture_elasticities(IndustryId id, const FixtureOptions& options) {
  const auto& fx = published_effects(id);
  const PriceVector p = fixture_point(id);
  MarginalEffectMatrix m = marginal_effects_at(fixture_params(id, options), p,
                                               industry_spec(id).per_hectare ? fx.mean_area : 1.0);
  m.p_value = fx.marginal_p;
  return elasticities(m, p, fx.mean_quantity);
}

}  // namespace netputsim
