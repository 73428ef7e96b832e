#include "netputsim/response.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "netputsim/csv.hpp"
#include "netputsim/error.hpp"
#include "netputsim/estimator.hpp"
#include "netputsim/netput.hpp"

namespace netputsim {

std::string_view to_string(Reduction r) {
  return r == Reduction::kMean ? "mean" : "per-farm-weighted";
}

Reduction parse_reduction(std::string_view name) {
  if (name == "mean") return Reduction::kMean;
  if (name == "per-farm-weighted") return Reduction::kPerFarmWeighted;
  throw Error(ErrorCode::kInvalidArgument, "unknown reduction '" + std::string(name) + "'");
}

bool ElasticityMatrix::defined(Eigen::Index i, Eigen::Index j) const {
  return std::isfinite(value(i, j));
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> labels_of(const IndustrySpec& spec) {
  auto labels = spec.netput_names();
  labels.push_back(spec.numeraire_name);
  return labels;
}

// Covariance entries that belong to C, as (row, col) pairs.
std::vector<std::pair<Eigen::Index, Eigen::Index>> c_slots(const ParameterSet& params) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> slots;
  if (!params.covariance) return slots;
  std::map<std::string, Eigen::Index> idx;
  for (std::size_t i = 0; i < params.netput_names.size(); ++i) {
    idx[params.netput_names[i]] = static_cast<Eigen::Index>(i);
  }
  for (const auto& name : params.covariance->names) {
    std::pair<Eigen::Index, Eigen::Index> slot{-1, -1};
    if (name.size() > 3 && name.rfind("C[", 0) == 0 && name.back() == ']') {
      const auto inner = name.substr(2, name.size() - 3);
      const auto comma = inner.find(',');
      if (comma != std::string::npos) {
        auto a = idx.find(inner.substr(0, comma));
        auto b = idx.find(inner.substr(comma + 1));
        if (a != idx.end() && b != idx.end()) slot = {a->second, b->second};
      }
    }
    slots.push_back(slot);
  }
  return slots;
}

// Effects at one point plus their gradient with respect to every
// covariance parameter (all cells are linear in C).
struct PointEval {
  Matrix value;
  std::vector<Matrix> grad;
};

PointEval eval_point(const ParameterSet& params, const IndustrySpec& spec,
                     const PriceVector& prices, double area,
                     const std::vector<std::pair<Eigen::Index, Eigen::Index>>& slots) {
  const auto g = static_cast<Eigen::Index>(spec.netput_count());
  const ParameterSet withfx = recover_numeraire_effects(params, prices);
  const NumeraireEffects& fx = *withfx.numeraire_effects;
  PointEval out;
  out.value.resize(g + 1, g + 1);
  auto s = [&](Eigen::Index i) { return spec.sign(static_cast<std::size_t>(i)); };
  for (Eigen::Index i = 0; i < g; ++i) {
    for (Eigen::Index j = 0; j < g; ++j) out.value(i, j) = s(i) * params.C(i, j) * area;
    out.value(i, g) = s(i) * fx.netput_wrt_p0[i] * area;
    out.value(g, i) = fx.numeraire_wrt_price[i] * area;
  }
  out.value(g, g) = fx.numeraire_own * area;

  const Vector p = prices.normalized();
  const double p0 = prices.p0();
  for (const auto& [a, b] : slots) {
    Matrix d = Matrix::Zero(g + 1, g + 1);
    if (a >= 0) {
      // d(Cp)_i / d theta for theta filling C(a,b) and C(b,a).
      Vector dcp = Vector::Zero(g);
      dcp[a] += p[b];
      if (a != b) dcp[b] += p[a];
      const double dpcp = a == b ? p[a] * p[a] : 2.0 * p[a] * p[b];
      d(a, b) = s(a) * area;
      d(b, a) = s(b) * area;
      for (Eigen::Index i = 0; i < g; ++i) {
        d(i, g) = -s(i) * dcp[i] / p0 * area;
        d(g, i) = dcp[i] * area;
      }
      d(g, g) = -dpcp / p0 * area;
    }
    out.grad.push_back(std::move(d));
  }
  return out;
}

void attach_se(MarginalEffectMatrix& m, const ParameterSet& params,
               const std::vector<Matrix>& grad) {
  if (!params.covariance || grad.empty()) return;
  const Matrix& cov = params.covariance->matrix;
  const auto n = m.value.rows();
  Matrix se(n, n), pv(n, n);
  Vector gv(static_cast<Eigen::Index>(grad.size()));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      for (std::size_t q = 0; q < grad.size(); ++q) gv[static_cast<Eigen::Index>(q)] = grad[q](i, j);
      se(i, j) = std::sqrt(std::max(0.0, gv.dot(cov * gv)));
      pv(i, j) = two_sided_p(m.value(i, j), se(i, j));
    }
  }
  m.se = std::move(se);
  m.p_value = std::move(pv);
}

const IndustrySpec& single_industry(const FarmPanel& panel, IndustryId expected) {
  if (panel.empty()) throw Error(ErrorCode::kEmptyInput, "panel has no records");
  for (IndustryId id : panel.industries()) {
    if (id != expected) {
      throw Error(ErrorCode::kIndustryMismatch,
                  "panel holds " + std::string(to_string(id)) + " records but parameters are for " +
                      std::string(to_string(expected)));
    }
  }
  return industry_spec(expected);
}

void check_params(const ParameterSet& params, const IndustrySpec& spec) {
  if (params.netput_count() != spec.netput_count() || params.C.rows() != params.C.cols() ||
      static_cast<std::size_t>(params.C.rows()) != spec.netput_count()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "parameter set does not match the " + std::string(to_string(spec.id)) + " system");
  }
}

}  // namespace

MarginalEffectMatrix marginal_effects_at(const ParameterSet& params, const PriceVector& prices,
                                         double area) {
  const IndustrySpec& spec = industry_spec(params.industry);
  check_params(params, spec);
  if (!(area > 0.0)) throw Error(ErrorCode::kInvalidArea, "evaluation area must be positive");
  const auto slots = c_slots(params);
  PointEval e = eval_point(params, spec, prices, area, slots);
  MarginalEffectMatrix m;
  m.industry = params.industry;
  m.labels = labels_of(spec);
  m.value = std::move(e.value);
  m.eval_prices = prices;
  m.eval_area = area;
  m.reduction = Reduction::kMean;
  attach_se(m, params, e.grad);
  return m;
}

PriceVector weighted_mean_prices(const FarmPanel& panel, IndustryId id) {
  const IndustrySpec& spec = single_industry(panel, id);
  const auto g = static_cast<Eigen::Index>(spec.netput_count());
  Vector sum = Vector::Zero(g);
  double p0 = 0.0, wsum = 0.0;
  for (const FarmRecord& r : panel.records()) {
    for (Eigen::Index i = 0; i < g; ++i) sum[i] += r.weight * r.raw_prices[i];
    p0 += r.weight * r.p0;
    wsum += r.weight;
  }
  return PriceVector(sum / wsum, p0 / wsum);
}

Vector weighted_mean_quantities(const FarmPanel& panel, IndustryId id) {
  const IndustrySpec& spec = single_industry(panel, id);
  const auto g = static_cast<Eigen::Index>(spec.netput_count());
  Vector sum = Vector::Zero(g + 1);
  double wsum = 0.0;
  for (const FarmRecord& r : panel.records()) {
    for (Eigen::Index i = 0; i < g; ++i) sum[i] += r.weight * r.quantities[i];
    sum[g] += r.weight * r.numeraire_quantity;
    wsum += r.weight;
  }
  return sum / wsum;
}

MarginalEffectMatrix marginal_effects(const ParameterSet& params, const FarmPanel& panel,
                                      Reduction reduction) {
  const IndustrySpec& spec = single_industry(panel, params.industry);
  check_params(params, spec);
  double wsum = 0.0, area = 0.0;
  for (const FarmRecord& r : panel.records()) {
    wsum += r.weight;
    area += r.weight * area_divisor(spec, r);
  }
  area /= wsum;
  const PriceVector mean_prices = weighted_mean_prices(panel, params.industry);
  if (reduction == Reduction::kMean) {
    MarginalEffectMatrix m = marginal_effects_at(params, mean_prices, area);
    m.reduction = Reduction::kMean;
    return m;
  }

  const auto slots = c_slots(params);
  const auto n = static_cast<Eigen::Index>(spec.netput_count() + 1);
  Matrix value = Matrix::Zero(n, n);
  std::vector<Matrix> grad(slots.size(), Matrix::Zero(n, n));
  for (const FarmRecord& r : panel.records()) {
    const PointEval e = eval_point(params, spec, r.prices(), area_divisor(spec, r), slots);
    value += (r.weight / wsum) * e.value;
    for (std::size_t q = 0; q < slots.size(); ++q) grad[q] += (r.weight / wsum) * e.grad[q];
  }
  MarginalEffectMatrix m;
  m.industry = params.industry;
  m.labels = labels_of(spec);
  m.value = std::move(value);
  m.eval_prices = mean_prices;
  m.eval_area = area;
  m.reduction = Reduction::kPerFarmWeighted;
  attach_se(m, params, grad);
  return m;
}

ElasticityMatrix elasticities(const MarginalEffectMatrix& m, const PriceVector& mean_prices,
                              const Vector& mean_quantity) {
  const auto n = m.value.rows();
  if (static_cast<Eigen::Index>(mean_prices.size()) + 1 != n || mean_quantity.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "evaluation point does not match the marginal-effect matrix");
  }
  ElasticityMatrix e;
  e.industry = m.industry;
  e.labels = m.labels;
  e.eval_prices.resize(n);
  e.eval_prices.head(n - 1) = mean_prices.normalized();
  e.eval_prices[n - 1] = mean_prices.p0();
  e.eval_quantity = mean_quantity;
  e.value.resize(n, n);
  if (m.se) e.se = Matrix(n, n);
  if (m.p_value) e.p_value = m.p_value;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double q = mean_quantity[i];
      e.value(i, j) = q == 0.0 ? kNaN : m.value(i, j) * e.eval_prices[j] / q;
      if (e.se) (*e.se)(i, j) = q == 0.0 ? kNaN : (*m.se)(i, j) * std::abs(e.eval_prices[j] / q);
    }
  }
  return e;
}

std::vector<WaterElasticityRow> own_price_water_table(const std::vector<ElasticityMatrix>& ms) {
  std::vector<WaterElasticityRow> rows;
  std::vector<std::string> missing;
  for (IndustryId id : kAllIndustries) {
    auto it = std::find_if(ms.begin(), ms.end(),
                           [&](const ElasticityMatrix& e) { return e.industry == id; });
    if (it == ms.end()) {
      missing.emplace_back(to_string(id));
      continue;
    }
    auto w = std::find(it->labels.begin(), it->labels.end(), kWaterName);
    if (w == it->labels.end()) {
      throw Error(ErrorCode::kUnknownNetput,
                  std::string(to_string(id)) + " elasticities have no water row");
    }
    const auto k = static_cast<Eigen::Index>(w - it->labels.begin());
    WaterElasticityRow row;
    row.industry = id;
    row.elasticity = it->value(k, k);
    if (it->p_value) row.p_value = (*it->p_value)(k, k);
    rows.push_back(row);
  }
  if (!missing.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "water elasticity table needs every industry",
                missing);
  }
  return rows;
}

std::vector<DemandPoint> DemandCurve::exported() const {
  std::vector<DemandPoint> out = points;
  for (auto& pt : out) pt.quantity = std::max(pt.quantity, 0.0);
  return out;
}

DemandCurve water_demand_curve(const ParameterSet& params, const DemandProfile& profile,
                               const std::vector<double>& price_grid) {
  const IndustrySpec& spec = industry_spec(params.industry);
  check_params(params, spec);
  std::vector<std::string> problems;
  if (profile.prices.size() != spec.netput_count()) problems.push_back("prices");
  if (static_cast<std::size_t>(profile.z.size()) != spec.fixed_count()) problems.push_back("z");
  if (profile.w.size() != 0 && static_cast<std::size_t>(profile.w.size()) != spec.control_count()) {
    problems.push_back("w");
  }
  if (!problems.empty()) {
    throw Error(ErrorCode::kDimensionMismatch, "demand profile is missing required fields",
                problems);
  }
  if (spec.per_hectare && !(profile.area > 0.0)) {
    throw Error(ErrorCode::kInvalidArea, "demand profile needs a positive area");
  }
  if (price_grid.empty()) throw Error(ErrorCode::kInvalidArgument, "empty price grid");
  for (std::size_t i = 0; i < price_grid.size(); ++i) {
    if (!(price_grid[i] > 0.0) || (i > 0 && !(price_grid[i] > price_grid[i - 1]))) {
      throw Error(ErrorCode::kInvalidArgument, "price grid must be positive and ascending");
    }
  }

  const std::size_t water = spec.water_index();
  const auto wi = static_cast<Eigen::Index>(water);
  const double scale = spec.per_hectare ? profile.area : 1.0;
  DemandCurve curve;
  curve.profile = profile;
  for (double price : price_grid) {
    const NetputVector n = predict_netputs(params, profile.prices.with_price(water, price),
                                           profile.z, profile.w);
    curve.points.push_back({price, -n.values[wi] * scale});
  }
  // The water netput is affine in its own normalised price.
  const double slope = params.C(wi, wi);
  if (slope != 0.0) {
    Vector p = profile.prices.normalized();
    p[wi] = 0.0;
    const double intercept = netput_values(params, p, profile.z, profile.w)[wi];
    const double choke = -intercept * profile.prices.p0() / slope;
    if (choke > 0.0) curve.choke_price = choke;
  }
  return curve;
}

std::vector<DemandProfile> quartile_profiles(const FarmPanel& panel) {
  if (panel.empty()) throw Error(ErrorCode::kEmptyInput, "panel has no records");
  const IndustryId id = panel.records().front().industry;
  const IndustrySpec& spec = single_industry(panel, id);
  const auto& recs = panel.records();
  if (recs.size() < 4) {
    throw Error(ErrorCode::kInvalidArgument, "quartile profiles need at least 4 farm-years");
  }
  std::vector<std::size_t> order(recs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return recs[a].area_operated < recs[b].area_operated;
  });
  double total = 0.0;
  for (const auto& r : recs) total += r.weight;

  const auto g = static_cast<Eigen::Index>(spec.netput_count());
  const auto k = static_cast<Eigen::Index>(spec.fixed_count());
  const auto c = static_cast<Eigen::Index>(spec.control_count());
  struct Acc {
    double w = 0, area_op = 0, area = 0, p0 = 0;
    Vector prices, z, ctl;
  };
  std::vector<Acc> acc(4);
  for (auto& a : acc) {
    a.prices = Vector::Zero(g);
    a.z = Vector::Zero(k);
    a.ctl = Vector::Zero(c);
  }
  double cum = 0.0;
  for (std::size_t idx : order) {
    const FarmRecord& r = recs[idx];
    const double mid = cum + 0.5 * r.weight;
    cum += r.weight;
    const auto q = std::min<std::size_t>(3, static_cast<std::size_t>(std::floor(4.0 * mid / total)));
    Acc& a = acc[q];
    a.w += r.weight;
    a.area_op += r.weight * r.area_operated;
    a.area += r.weight * area_divisor(spec, r);
    a.p0 += r.weight * r.p0;
    for (Eigen::Index i = 0; i < g; ++i) a.prices[i] += r.weight * r.raw_prices[i];
    a.z += r.weight * model_fixed_inputs(spec, r);
    a.ctl += r.weight * model_controls(r);
  }
  std::vector<DemandProfile> out;
  for (std::size_t q = 0; q < 4; ++q) {
    const Acc& a = acc[q];
    if (a.w == 0.0) {
      throw Error(ErrorCode::kEmptyInput,
                  "area quartile " + std::to_string(q + 1) + " holds no weight");
    }
    DemandProfile p;
    p.label = "Q" + std::to_string(q + 1);
    p.area_operated = a.area_op / a.w;
    p.area = a.area / a.w;
    p.prices = PriceVector(a.prices / a.w, a.p0 / a.w);
    p.z = a.z / a.w;
    p.w = a.ctl / a.w;
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<double> linear_grid(double lo, double hi, int points) {
  if (points < 2 || !(hi > lo)) throw Error(ErrorCode::kInvalidArgument, "bad price grid");
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
  return grid;
}

// ---------------------------------------------------------------------------

namespace {

std::string cell(double v, bool pretty) {
  return std::isfinite(v) ? csv::format_number(v, pretty) : "undefined";
}

Json cell_json(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(cell_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string matrix_csv(const std::vector<std::string>& labels, const Matrix& value,
                       const std::optional<Matrix>& se, const std::optional<Matrix>& p,
                       bool pretty) {
  std::ostringstream out;
  std::vector<std::string> header{"quantity"};
  for (const auto& l : labels) {
    header.push_back(l);
    header.push_back(l + "_se");
    header.push_back(l + "_p");
  }
  csv::write_row(out, header);
  for (Eigen::Index i = 0; i < value.rows(); ++i) {
    std::vector<std::string> row{labels[static_cast<std::size_t>(i)]};
    for (Eigen::Index j = 0; j < value.cols(); ++j) {
      row.push_back(cell(value(i, j), pretty));
      row.push_back(se ? cell((*se)(i, j), pretty) : "");
      row.push_back(p ? cell((*p)(i, j), pretty) : "");
    }
    csv::write_row(out, row);
  }
  return out.str();
}

std::string marginal_effects_csv(const MarginalEffectMatrix& m, bool pretty) {
  return matrix_csv(m.labels, m.value, m.se, m.p_value, pretty);
}

std::string elasticities_csv(const ElasticityMatrix& e, bool pretty) {
  return matrix_csv(e.labels, e.value, e.se, e.p_value, pretty);
}

Json to_json(const MarginalEffectMatrix& m) {
  Json j;
  j["industry"] = std::string(to_string(m.industry));
  j["sign_convention"] = "quantity";
  j["labels"] = m.labels;
  j["value"] = matrix_json(m.value);
  if (m.se) j["se"] = matrix_json(*m.se);
  if (m.p_value) j["p_value"] = matrix_json(*m.p_value);
  j["reduction"] = std::string(to_string(m.reduction));
  j["eval_raw_prices"] = to_json(m.eval_prices.raw());
  j["eval_p0"] = m.eval_prices.p0();
  j["eval_area"] = m.eval_area;
  return j;
}

Json to_json(const ElasticityMatrix& e) {
  Json j;
  j["industry"] = std::string(to_string(e.industry));
  j["labels"] = e.labels;
  j["value"] = matrix_json(e.value);
  if (e.se) j["se"] = matrix_json(*e.se);
  if (e.p_value) j["p_value"] = matrix_json(*e.p_value);
  j["eval_prices"] = to_json(e.eval_prices);
  j["eval_quantity"] = to_json(e.eval_quantity);
  return j;
}

std::string water_table_csv(const std::vector<WaterElasticityRow>& rows, bool pretty) {
  std::ostringstream out;
  csv::write_row(out, {"industry", "own_price_elasticity", "p_value"});
  for (const auto& r : rows) {
    csv::write_row(out, {std::string(to_string(r.industry)), cell(r.elasticity, pretty),
                         r.p_value ? cell(*r.p_value, pretty) : ""});
  }
  return out.str();
}

std::string demand_curves_csv(const std::vector<DemandCurve>& curves, bool pretty) {
  std::ostringstream out;
  csv::write_row(out, {"price", "quantity", "quartile"});
  for (const auto& c : curves) {
    for (const auto& pt : c.exported()) {
      csv::write_row(out, {csv::format_number(pt.price, pretty),
                           csv::format_number(pt.quantity, pretty), c.profile.label});
    }
  }
  return out.str();
}

}  // namespace netputsim
