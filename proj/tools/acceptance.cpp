// Acceptance run: one PASS/FAIL line per criterion, exit status = number of
// failures.

#include <Eigen/QR>
#include <fmt/core.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "netputsim/calibration.hpp"
#include "netputsim/error.hpp"
#include "netputsim/estimator.hpp"
#include "netputsim/netput.hpp"
#include "netputsim/response.hpp"
#include "netputsim/shock.hpp"
#include "netputsim/synth.hpp"
#include "netputsim/validator.hpp"

using namespace netputsim;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Collects the first few failure notes of one criterion.
struct Verdict {
  bool ok = true;
  std::vector<std::string> notes;
  void expect(bool cond, const std::string& what) {
    if (cond) return;
    ok = false;
    if (notes.size() < 5) notes.push_back(what);
  }
};

double rel(double est, double truth) {
  return truth == 0.0 ? std::abs(est) : std::abs(est - truth) / std::abs(truth);
}

double worst_rel(const Matrix& est, const Matrix& truth) {
  double w = 0.0;
  for (Eigen::Index i = 0; i < truth.rows(); ++i) {
    for (Eigen::Index j = 0; j < truth.cols(); ++j) w = std::max(w, rel(est(i, j), truth(i, j)));
  }
  return w;
}

// Every free parameter of both equations blocks, relative to the truth.
double worst_free_rel(const ParameterSet& e, const ParameterSet& t) {
  double w = std::max({worst_rel(e.a, t.a), worst_rel(e.C, t.C), worst_rel(e.alpha, t.alpha),
                       worst_rel(e.gamma, t.gamma), worst_rel(e.b, t.b), worst_rel(e.gamma_m, t.gamma_m)});
  for (Eigen::Index l = 0; l < t.D.rows(); ++l) {
    for (Eigen::Index f = l; f < t.D.cols(); ++f) w = std::max(w, rel(e.D(l, f), t.D(l, f)));
  }
  return std::max(w, rel(e.a_m, t.a_m));
}

Verdict recovery(std::string& detail) {
  Verdict v;
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (IndustryId id : kAllIndustries) {
    const ParameterSet truth = calibrated_truth(id);
    const auto sys = free_parameter_map(truth.netput_names, truth.fixed_names, truth.control_names).size();
    const auto k = truth.fixed_count(), c = truth.control_count();
    const std::size_t num = 1 + k + k * (k + 1) / 2 + c;
    const int years = 9;
    const int farms = static_cast<int>((10 * std::max(sys, num) + years - 1) / years);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      CalibratedPanelOptions o;
      o.farms = farms;
      o.seed = seed;
      o.industries = {id};
      const FarmPanel panel = synth_panel(calibrated_synth_config(o));
      const SystemDesign d = build_design(panel, industry_spec(id));
      v.expect(d.observations() >= static_cast<Eigen::Index>(10 * sys), "too few observations");
      const EstimateReport rep = estimate(d);
      const double w = worst_free_rel(rep.params, truth);
      worst = std::max(worst, w);
      v.expect(w < 1e-6, fmt::format("{} seed {}: worst relative error {:.3g}", to_string(id), seed, w));
    }
  }
  const double secs = seconds_since(t0);
  v.expect(secs < 30.0, fmt::format("took {:.1f} s", secs));
  detail = fmt::format("worst relative error {:.2g} over 4 industries x 5 seeds, {:.2f} s", worst, secs);
  return v;
}

Verdict symmetry_homogeneity(std::string& detail) {
  Verdict v;
  CalibratedPanelOptions o;
  o.farms = 40;
  o.seed = 7;
  o.noise_fraction = 0.05;
  const FarmPanel panel = synth_panel(calibrated_synth_config(o));
  double worst = 0.0;
  for (IndustryId id : kAllIndustries) {
    const FarmPanel sub = panel.subset(id);
    std::vector<FarmRecord> scaled = sub.records();
    for (FarmRecord& r : scaled) {
      for (double& p : r.raw_prices) p *= 7.0;
      r.p0 *= 7.0;
    }
    const IndustrySpec& spec = industry_spec(id);
    const EstimateReport a = estimate(build_design(sub, spec));
    const EstimateReport b = estimate(build_design(FarmPanel(scaled), spec));
    v.expect(a.params.C == a.params.C.transpose(), std::string(to_string(id)) + ": C not symmetric");
    v.expect(b.params.C == b.params.C.transpose(), std::string(to_string(id)) + ": scaled C not symmetric");
    for (std::size_t q = 0; q < a.system.size(); ++q) {
      const double d = std::abs(b.system[q].value - a.system[q].value) / std::max(1.0, std::abs(a.system[q].value));
      worst = std::max(worst, d);
    }
    for (std::size_t q = 0; q < a.numeraire.size(); ++q) {
      const double d =
          std::abs(b.numeraire[q].value - a.numeraire[q].value) / std::max(1.0, std::abs(a.numeraire[q].value));
      worst = std::max(worst, d);
    }
  }
  v.expect(worst <= 1e-12, fmt::format("lambda = 7 changes estimates by {:.3g}", worst));
  detail = fmt::format("C exactly symmetric; lambda = 7 max change {:.2g}", worst);
  return v;
}

Verdict duality_gradients(std::string& detail) {
  Verdict v;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1, 1), pos(0.2, 5.0);
  double worst_dual = 0.0, worst_grad = 0.0, worst_p0 = 0.0;
  for (int draw = 0; draw < 1000; ++draw) {
    const Eigen::Index g = 2 + draw % 8, k = 1 + draw % 5, c = draw % 4;
    ParameterSet p;
    p.a = Vector::NullaryExpr(g, [&] { return 5 * u(rng); });
    Matrix cm = Matrix::NullaryExpr(g, g, [&] { return 3 * u(rng); });
    p.C = 0.5 * (cm + cm.transpose());
    Matrix dm = Matrix::NullaryExpr(k, k, [&] { return 0.5 * u(rng); });
    p.D = 0.5 * (dm + dm.transpose());
    p.b = Vector::NullaryExpr(k, [&] { return 2 * u(rng); });
    p.alpha = Matrix::NullaryExpr(g, k, [&] { return u(rng); });
    p.gamma = Matrix::NullaryExpr(g, c, [&] { return u(rng); });
    p.gamma_m = Vector::NullaryExpr(c, [&] { return u(rng); });
    p.a_m = 4 * u(rng);
    const Vector raw = Vector::NullaryExpr(g, [&] { return pos(rng); });
    const double p0 = 0.5 + pos(rng) / 2;
    const Vector z = Vector::NullaryExpr(k, [&] { return 3 * u(rng); });
    const Vector w = Vector::NullaryExpr(c, [&] { return u(rng); });
    const PriceVector at(raw, p0);
    const Vector x = at.normalized();

    // profit = netput'p - x_m
    const double pi = normalized_profit(p, x, z, w);
    const double dual = netput_values(p, x, z, w).dot(x) - numeraire_quantity(p, x, z, w);
    worst_dual = std::max(worst_dual, std::abs(pi - dual) / (1 + std::abs(pi)));

    // netputs (and x_m) as price derivatives
    const Vector q = netput_values(p, x, z, w);
    const Vector dxm = p.C * x;  // d x_m / d p
    for (Eigen::Index i = 0; i < g; ++i) {
      const double h = 1e-5 * (1 + std::abs(x[i]));
      Vector up = x, dn = x;
      up[i] += h;
      dn[i] -= h;
      const double fd = (normalized_profit(p, up, z, w) - normalized_profit(p, dn, z, w)) / (2 * h);
      worst_grad = std::max(worst_grad, std::abs(fd - q[i]) / (1 + std::abs(q[i])));
      const double fdm = (numeraire_quantity(p, up, z, w) - numeraire_quantity(p, dn, z, w)) / (2 * h);
      worst_grad = std::max(worst_grad, std::abs(fdm - dxm[i]) / (1 + std::abs(dxm[i])));
    }

    // numeraire-price effects
    const auto fx = *recover_numeraire_effects(p, at).numeraire_effects;
    const double h = 1e-5 * p0;
    const Vector nu = predict_netputs(p, at.with_p0(p0 + h), z, w).values;
    const Vector nd = predict_netputs(p, at.with_p0(p0 - h), z, w).values;
    for (Eigen::Index i = 0; i < g; ++i) {
      const double fd = (nu[i] - nd[i]) / (2 * h);
      worst_p0 = std::max(worst_p0, std::abs(fd - fx.netput_wrt_p0[i]) / (1 + std::abs(fx.netput_wrt_p0[i])));
      // x_m with respect to raw P_j is (Cp)_j / P0
      const double hj = 1e-5 * raw[i];
      const double fdj = (predict_numeraire(p, at.with_price(static_cast<std::size_t>(i), raw[i] + hj), z, w) -
                          predict_numeraire(p, at.with_price(static_cast<std::size_t>(i), raw[i] - hj), z, w)) /
                         (2 * hj);
      const double want = fx.numeraire_wrt_price[i] / p0;
      worst_p0 = std::max(worst_p0, std::abs(fdj - want) / (1 + std::abs(want)));
    }
    const double fdo = (predict_numeraire(p, at.with_p0(p0 + h), z, w) -
                        predict_numeraire(p, at.with_p0(p0 - h), z, w)) / (2 * h);
    worst_p0 = std::max(worst_p0, std::abs(fdo - fx.numeraire_own) / (1 + std::abs(fx.numeraire_own)));
  }
  v.expect(worst_dual <= 1e-9, fmt::format("duality gap {:.3g}", worst_dual));
  v.expect(worst_grad <= 1e-6, fmt::format("price gradient error {:.3g}", worst_grad));
  v.expect(worst_p0 <= 1e-6, fmt::format("numeraire-price derivative error {:.3g}", worst_p0));
  detail = fmt::format("1000 draws: duality {:.1g}, price gradients {:.1g}, numeraire price {:.1g}", worst_dual,
                       worst_grad, worst_p0);
  return v;
}

Verdict elasticity_fidelity(std::string& detail) {
  Verdict v;
  double worst_identity = 0.0;
  std::vector<ElasticityMatrix> es;
  for (IndustryId id : kAllIndustries) {
    const auto& fx = published_effects(id);
    const PriceVector at = fixture_point(id);
    const double area = industry_spec(id).per_hectare ? fx.mean_area : 1.0;
    const auto m = marginal_effects_at(fixture_params(id), at, area);
    const auto e = elasticities(m, at, fx.mean_quantity);
    for (Eigen::Index i = 0; i < e.value.rows(); ++i) {
      for (Eigen::Index j = 0; j < e.value.cols(); ++j) {
        const double mp = m.value(i, j) * e.eval_prices[j];
        const double d = std::abs(e.value(i, j) * fx.mean_quantity[i] - mp) / std::max(1e-300, std::abs(mp));
        if (mp != 0.0) worst_identity = std::max(worst_identity, d);
        else v.expect(e.value(i, j) == 0.0, "zero cell with nonzero elasticity");
      }
    }
    es.push_back(fixture_elasticities(id));
  }
  // Rounding: e = m p / q, then e q differs from m p by at most a few ulps.
  v.expect(worst_identity <= 4 * std::numeric_limits<double>::epsilon(),
           fmt::format("identity off by {:.3g} relative", worst_identity));
  const auto rows = own_price_water_table(es);
  const double expect[] = {-0.49, -2.23, -1.18, 0.01};
  std::string diag;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    v.expect(std::abs(rows[i].elasticity - expect[i]) <= 0.005,
             fmt::format("{} water elasticity {:.4f}", to_string(rows[i].industry), rows[i].elasticity));
    diag += fmt::format("{}{:.3f}", i ? ", " : "", rows[i].elasticity);
  }
  detail = fmt::format("identity within {:.1g} relative; water diagonal ({})", worst_identity, diag);
  return v;
}

std::map<IndustryId, ParameterSet> truths(const FixtureOptions& fo = {}) {
  std::map<IndustryId, ParameterSet> m;
  for (IndustryId id : kAllIndustries) m[id] = calibrated_truth(id, fo);
  return m;
}

double direct_profit(const FarmDelta& d, const Vector& q, const PriceVector& p) {
  const IndustrySpec& spec = industry_spec(d.industry);
  double pi = 0.0;
  const Eigen::Index g = q.size() - 1;
  for (Eigen::Index i = 0; i < g; ++i) {
    pi += spec.sign(static_cast<std::size_t>(i)) * q[i] * p.raw()[i];
  }
  return pi - q[g] * p.p0();
}

Verdict accounting(std::string& detail) {
  Verdict v;
  CalibratedPanelOptions o;
  o.farms = 50;
  o.seed = 12;
  o.noise_fraction = 0.05;
  const FarmPanel panel = synth_panel(calibrated_synth_config(o));
  const auto params = truths();
  const SimulationResult r = simulate(params, panel, price_factor_scenario("water", 1.3));
  double worst = 0.0;
  for (const FarmDelta& d : r.farms) {
    const double direct = direct_profit(d, d.q1, d.p1) - direct_profit(d, d.q0, d.p0);
    worst = std::max(worst, std::abs(d.dprofit - direct) / (1 + std::abs(d.profit0)));
  }
  v.expect(worst <= 1e-9, fmt::format("profit change off by {:.3g}", worst));

  double agg = 0.0;
  for (const auto& a : r.by_industry) {
    double sum = 0.0, sum_w = 0.0;
    for (const FarmDelta& d : r.farms) {
      if (std::string(to_string(d.industry)) != a.key) continue;
      sum += d.weight * d.dprofit;
      sum_w += d.weight * d.dq[d.dq.size() - 1];
    }
    agg = std::max(agg, std::abs(a.dprofit - sum) / std::max(1.0, std::abs(sum)));
    const auto& nm = a.netputs.back();
    agg = std::max(agg, std::abs(nm.change - sum_w) / std::max(1.0, std::abs(sum_w)));
  }
  v.expect(agg <= 1e-12, fmt::format("aggregate differs from weighted farm sum by {:.3g}", agg));

  const SimulationResult zero = simulate(params, panel, price_factor_scenario("water", 1.0));
  bool exact = true;
  for (const FarmDelta& d : zero.farms) exact = exact && d.dq.isZero(0) && d.dprofit == 0.0;
  for (const auto& t : zero.decomposition) {
    for (const auto& l : t.lines) exact = exact && l.change == 0.0;
  }
  exact = exact && zero.whole.dprofit == 0.0;
  v.expect(exact, "zero shock is not exactly zero");
  detail = fmt::format("{} farms; farm profit {:.1g}, aggregates {:.1g}, zero shock exact", r.farms.size(), worst, agg);
  return v;
}

Verdict directionality(std::string& detail) {
  Verdict v;
  const auto t0 = Clock::now();
  CalibratedPanelOptions o;
  o.farms = 60;
  o.seed = 21;
  o.fixture.flat_horticulture_water = true;
  const FarmPanel panel = synth_panel(calibrated_synth_config(o));
  const SimulationResult r = simulate(truths(o.fixture), panel, price_factor_scenario("water", 1.3));
  auto netput_change = [&](std::string_view ind, std::string_view name) {
    for (const auto& a : r.by_industry) {
      if (a.key != ind) continue;
      for (const auto& n : a.netputs) {
        if (n.name == name) return n.change;
      }
    }
    throw Error(ErrorCode::kInvalidArgument, "missing aggregate " + std::string(ind) + "/" + std::string(name));
  };
  auto line_change = [&](IndustryId id, std::string_view item) {
    for (const auto& t : r.decomposition) {
      if (t.industry != id) continue;
      for (const auto& l : t.lines) {
        if (l.item == item) return l.change;
      }
    }
    throw Error(ErrorCode::kInvalidArgument, "missing line " + std::string(item));
  };
  std::string notes;
  for (IndustryId id : {IndustryId::kDairy, IndustryId::kBroadacreRice, IndustryId::kBroadacreNonRice}) {
    const std::string n(to_string(id));
    const double dw = netput_change(n, "water");
    const double dc = line_change(id, "water cost");
    const double dp = line_change(id, "profit");
    v.expect(dw < 0, n + ": water use does not fall");
    v.expect(dc > 0, n + ": water cost does not rise");
    v.expect(dp < 0, n + ": profit does not fall");
    notes += fmt::format("{} water {:+.3g}, profit {:+.3g}; ", n, dw, dp);
  }
  const double fodder = netput_change("dairy", "fodder");
  v.expect(fodder > 0, "dairy fodder use does not rise");
  double hort = 0.0;
  for (const FarmDelta& d : r.farms) {
    if (d.industry != IndustryId::kHorticulture) continue;
    hort = std::max(hort, std::abs(d.dq[static_cast<Eigen::Index>(industry_spec(d.industry).water_index())]));
  }
  v.expect(hort == 0.0, fmt::format("horticulture water moves by {:.3g}", hort));
  const double secs = seconds_since(t0);
  v.expect(secs < 10.0, fmt::format("took {:.1f} s", secs));
  detail = notes + fmt::format("dairy fodder {:+.3g}; horticulture water unchanged; {:.2f} s", fodder, secs);
  return v;
}

Verdict validator_cases(std::string& detail) {
  Verdict v;
  auto vec = [](std::initializer_list<double> xs) {
    Vector out(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) out[i++] = x;
    return out;
  };
  v.expect(monotonicity_share(vec({1, 2, 3}), NetputRole::kOutput) == 1.0, "all-positive outputs");
  v.expect(monotonicity_share(vec({1, -1, 1, 1}), NetputRole::kOutput) == 0.75, "outputs (+,-,+,+)");
  v.expect(monotonicity_share(vec({0, 1}), NetputRole::kOutput) == 0.5, "zero prediction counts as violation");
  v.expect(monotonicity_share(vec({-1, -2, 0}), NetputRole::kInput) == 2.0 / 3.0, "input netputs");
  v.expect(r_squared(vec({1, 2, 3}), vec({1, 2, 4})) == 0.5, "R^2 hand example");

  const auto id = convexity_check(Matrix::Identity(4, 4));
  v.expect(id.psd && id.cholesky_psd && std::abs(id.min_eigenvalue - 1) < 1e-15, "identity");
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1;
  d(1, 1) = -0.5;
  const auto dv = convexity_check(d);
  v.expect(!dv.psd && !dv.cholesky_psd && std::abs(dv.min_eigenvalue + 0.5) < 1e-15, "diag(1, -0.5)");
  v.expect(dv.failing_direction.size() == 2 && std::abs(dv.failing_direction[1] - 1) < 1e-15 &&
               std::abs(dv.failing_direction[0]) < 1e-15,
           "failing direction of diag(1, -0.5) is not e2");
  const Vector u = vec({1, -2, 0.5});
  const auto r1 = convexity_check(u * u.transpose());
  v.expect(r1.psd && r1.cholesky_psd && std::abs(r1.min_eigenvalue) <= r1.tolerance, "rank-1 vv'");

  // A fixture with exactly one negative eigenvalue behind a positive diagonal.
  Matrix q = Matrix::Identity(4, 4);
  q << 1, 2, 0, 1, 0, 1, 3, 0, 2, 0, 1, 1, 1, 1, 0, 2;
  const Matrix basis = Eigen::HouseholderQR<Matrix>(q).householderQ();
  const Matrix bad = basis * vec({3, 2, 1, -0.25}).asDiagonal() * basis.transpose();
  const auto bv = convexity_check(0.5 * (bad + bad.transpose()));
  v.expect(!bv.psd && !bv.cholesky_psd && std::abs(bv.min_eigenvalue + 0.25) < 1e-12, "non-PSD fixture not flagged");
  v.expect((bad.diagonal().array() > 0).all(), "fixture diagonal should be positive");

  int non_psd = 0;
  for (IndustryId i : kAllIndustries) non_psd += convexity_check(fixture_params(i).C).psd ? 0 : 1;
  detail = fmt::format("constructed cases reproduced; non-PSD fixture flagged (min eigenvalue {:.3g}); "
                       "{} of 4 transcribed price blocks are not PSD",
                       bv.min_eigenvalue, non_psd);
  return v;
}

DemandProfile toy_profile(const ParameterSet& p, double area) {
  const IndustrySpec& spec = industry_spec(p.industry);
  DemandProfile d;
  d.label = "toy";
  d.area = area;
  d.area_operated = area;
  d.prices = PriceVector(Vector::Constant(static_cast<Eigen::Index>(spec.netput_count()), 5.0), 1.0);
  d.z = Vector::Zero(static_cast<Eigen::Index>(spec.fixed_count()));
  d.w = Vector::Zero(static_cast<Eigen::Index>(spec.control_count()));
  return d;
}

Verdict demand_geometry(std::string& detail) {
  Verdict v;
  const auto grid = linear_grid(20, 900, 45);
  for (IndustryId id : {IndustryId::kDairy, IndustryId::kHorticulture}) {
    const IndustrySpec& spec = industry_spec(id);
    ParameterSet p = ParameterSet::zeros(spec);
    const auto w = static_cast<Eigen::Index>(spec.water_index());
    p.a[w] = -7.5;
    p.C(w, w) = 0.015;
    const auto small = water_demand_curve(p, toy_profile(p, 40), grid);
    const auto large = water_demand_curve(p, toy_profile(p, 130), grid);
    v.expect(small.choke_price && large.choke_price && *small.choke_price == *large.choke_price,
             std::string(to_string(id)) + ": choke prices differ");
    v.expect(small.choke_price && std::abs(*small.choke_price - 500) <= 1e-9 * 500, "choke price is not 500");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double want = small.points[i].quantity * 130.0 / 40.0;
      v.expect(std::abs(large.points[i].quantity - want) <= 1e-9 * (1 + std::abs(want)),
               std::string(to_string(id)) + ": curves not area-proportional");
    }
  }
  for (IndustryId id : {IndustryId::kBroadacreRice, IndustryId::kBroadacreNonRice}) {
    const IndustrySpec& spec = industry_spec(id);
    ParameterSet p = ParameterSet::zeros(spec);
    const auto w = static_cast<Eigen::Index>(spec.water_index());
    p.a[w] = -100;
    p.C(w, w) = 0.5;
    p.alpha(w, 0) = -0.8;
    auto d1 = toy_profile(p, 1), d2 = toy_profile(p, 1);
    d1.z[0] = 200;
    d2.z[0] = 900;
    const auto c1 = water_demand_curve(p, d1, grid);
    const auto c2 = water_demand_curve(p, d2, grid);
    for (std::size_t i = 1; i < grid.size(); ++i) {
      const double dp = grid[i] - grid[i - 1];
      const double s1 = (c1.points[i].quantity - c1.points[i - 1].quantity) / dp;
      const double s2 = (c2.points[i].quantity - c2.points[i - 1].quantity) / dp;
      v.expect(std::abs(s1 - s2) <= 1e-9 && std::abs(s1 + 0.5) <= 1e-9,
               std::string(to_string(id)) + ": slope changes with area");
    }
    const double shift = c2.points[0].quantity - c1.points[0].quantity;
    v.expect(std::abs(shift - 0.8 * 700) <= 1e-9 * 560, std::string(to_string(id)) + ": intercept shift");
  }
  detail = "per-hectare curves scale with area at a common choke price; broadacre area shifts the intercept only";
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    std::function<Verdict(std::string&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "oracle parameter recovery", recovery},
      {2, "symmetry and homogeneity", symmetry_homogeneity},
      {3, "duality and gradient checks", duality_gradients},
      {4, "elasticity fidelity", elasticity_fidelity},
      {5, "simulation accounting", accounting},
      {6, "water-price directionality", directionality},
      {7, "validator correctness", validator_cases},
      {8, "demand-curve geometry", demand_geometry},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    std::string detail;
    Verdict v;
    try {
      v = c.run(detail);
    } catch (const std::exception& e) {
      v.ok = false;
      v.notes.push_back(std::string("exception: ") + e.what());
    }
    std::string line = fmt::format("[{}] {}. {}", v.ok ? "PASS" : "FAIL", c.number, c.name);
    if (!detail.empty()) line += " -- " + detail;
    for (const auto& n : v.notes) line += " | " + n;
    fmt::print("{}\n", line);
    failed += v.ok ? 0 : 1;
  }
  return failed;
}
