#include <doctest.h>

#include <cmath>
#include <random>

#include "netputsim/error.hpp"
#include "netputsim/estimator.hpp"
#include "netputsim/netput.hpp"
#include "netputsim/synth.hpp"
#include "test_support.hpp"

using namespace netputsim;

namespace {

FarmPanel synth_one(IndustryId id, int farms, std::uint64_t seed, double noise = 0.0,
                    std::mt19937_64* truth_rng = nullptr) {
  std::mt19937_64 local(1234);
  SynthConfig cfg;
  cfg.seed = seed;
  auto ic = testing::random_synth_industry(id, farms, truth_rng ? *truth_rng : local);
  std::fill(ic.noise_sd.begin(), ic.noise_sd.end(), noise);
  cfg.industries.push_back(ic);
  return synth_panel(cfg);
}

ParameterSet truth_of(IndustryId id) {
  std::mt19937_64 local(1234);
  return testing::random_synth_industry(id, 1, local).truth;
}

double rel_err(double est, double truth, double scale) {
  return std::abs(est - truth) / std::max(std::abs(truth), scale);
}

double max_free_rel_err(const ParameterSet& est, const ParameterSet& truth) {
  double worst = 0.0;
  auto upd = [&](const Matrix& a, const Matrix& b) {
    const double scale = 1e-6 * std::max(b.cwiseAbs().maxCoeff(), 1e-300);
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j) worst = std::max(worst, rel_err(a(i, j), b(i, j), scale));
  };
  upd(est.a, truth.a);
  upd(est.C, truth.C);
  upd(est.alpha, truth.alpha);
  upd(est.gamma, truth.gamma);
  return worst;
}

}  // namespace

TEST_CASE("design divides per-hectare industries by area and normalises prices") {
  FarmRecord r;
  r.farm_id = "d";
  r.year = 2015;
  r.industry = IndustryId::kDairy;
  r.region = "vic_murray";
  r.area_operated = 100;
  r.quantities = {1000000, 10, 5, 3, 50};
  r.numeraire_quantity = 2000;
  r.raw_prices = {0.5, 800, 1000, 1.2, 300};
  r.p0 = 1.2;
  r.fixed = {3, 300, 100000, 100000};
  r.controls = {400, 0, 50};
  SystemDesign d = build_design(FarmPanel({r}), industry_spec(IndustryId::kDairy));
  CHECK(d.Y(0, 0) == 10000);
  CHECK(d.Y(0, 4) == -0.5);  // inputs enter as negative netputs
  CHECK(d.X(0, d.price_column(4)) == 250);
  CHECK(d.numeraire[0] == 20);
  CHECK(d.regressor_names[d.price_column(4)] == "p_water");

  FarmRecord b;
  b.farm_id = "b";
  b.industry = IndustryId::kBroadacreNonRice;
  b.region = "vic_murray";
  b.area_operated = 800;
  b.quantities = {500, 200, 30, 700};
  b.raw_prices = {250, 100, 1000, 150};
  b.p0 = 1.0;
  b.fixed = {2, 10, 500, 400000, 500000};
  b.controls = {400, 1, 50};
  SystemDesign db = build_design(FarmPanel({b}), industry_spec(IndustryId::kBroadacreNonRice));
  CHECK(db.Y(0, 0) == 500);
  CHECK(db.Y(0, 3) == -700);
  CHECK(db.X(0, db.fixed_column(0)) == 800);  // scale proxy in z

  r.area_operated = 0;
  try {
    build_design(FarmPanel({r}), industry_spec(IndustryId::kDairy));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidArea);
    CHECK(e.details()[0].find("d 2015") != std::string::npos);
  }
  CHECK_THROWS_AS(build_design(FarmPanel({b}), industry_spec(IndustryId::kDairy)), Error);
  CHECK_THROWS_AS(build_design(FarmPanel(), industry_spec(IndustryId::kDairy)), Error);
}

TEST_CASE("horticulture design carries planted-area shares") {
  FarmPanel panel = synth_one(IndustryId::kHorticulture, 3, 1);
  SystemDesign d = build_design(panel, industry_spec(IndustryId::kHorticulture));
  const FarmRecord& r = panel.records()[0];
  double total = 0;
  for (double a : r.output_areas) total += a;
  const auto idx = std::find(d.fixed_names.begin(), d.fixed_names.end(), "share_citrus") - d.fixed_names.begin();
  CHECK(d.X(0, d.fixed_column(idx)) == doctest::Approx(r.output_areas[1] / total).epsilon(1e-15));
  CHECK(d.area[0] == doctest::Approx(total).epsilon(1e-15));
}

TEST_CASE("noiseless panels recover the truth") {
  for (IndustryId id : kAllIndustries) {
    CAPTURE(to_string(id));
    const ParameterSet truth = truth_of(id);
    const auto free = free_parameter_map(truth.netput_names, truth.fixed_names, truth.control_names).size();
    // 9 years per farm; at least ten observations per free parameter
    const int farms = static_cast<int>((10 * free) / 9 + 1);
    FarmPanel panel = synth_one(id, farms, 3);
    EstimateReport rep = estimate(build_design(panel, industry_spec(id)));
    CHECK(rep.converged);
    CHECK(rep.exact_fit);
    CHECK(max_free_rel_err(rep.params, truth) < 1e-6);
    CHECK(rep.params.C == rep.params.C.transpose());
    // noiseless limit: standard errors vanish
    for (const auto& e : rep.system) CHECK(e.se <= 1e-8 * std::max(1.0, std::abs(e.value)));
    // numeraire equation recovers a_m (truth has b = D = 0)
    CHECK(rep.params.a_m == doctest::Approx(truth.a_m).epsilon(1e-6));
    CHECK(rep.params.b.cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("single equation reduces to OLS") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n01;
  const Eigen::Index t = 60;
  SystemDesign d;
  d.industry = IndustryId::kBroadacreNonRice;
  d.equation_names = {"x"};
  d.fixed_names = {"z1", "z2"};
  d.control_names = {"w1"};
  d.regressor_names = {"const", "p_x", "z_z1", "z_z2", "w_w1"};
  d.free_parameters = free_parameter_map(d.equation_names, d.fixed_names, d.control_names);
  d.X.resize(t, 5);
  d.Y.resize(t, 1);
  d.numeraire = Vector::Zero(t);
  d.area = Vector::Ones(t);
  for (Eigen::Index r = 0; r < t; ++r) {
    d.X.row(r) << 1.0, 1 + std::abs(n01(rng)), n01(rng), 3 * n01(rng), n01(rng);
    d.Y(r, 0) = 2 - 0.5 * d.X(r, 1) + 0.3 * d.X(r, 2) + 0.1 * d.X(r, 3) - d.X(r, 4) + 0.4 * n01(rng);
  }
  d.mean_raw_prices = Vector::Ones(1);
  EstimateOptions opt;
  opt.numeraire_equation = false;
  EstimateReport rep = estimate(d, opt);

  // Closed-form oracle: normal equations.
  const Matrix xtx = d.X.transpose() * d.X;
  const Vector beta = xtx.ldlt().solve(d.X.transpose() * d.Y.col(0));
  const Vector resid = d.Y.col(0) - d.X * beta;
  const double s2 = resid.squaredNorm() / static_cast<double>(t - 5);
  const Matrix inv = xtx.inverse();
  // free order: a, alpha(z1, z2), gamma(w1), C
  const int map[] = {0, 2, 3, 4, 1};
  for (int q = 0; q < 5; ++q) {
    CHECK(rep.system[static_cast<std::size_t>(q)].value ==
          doctest::Approx(beta[map[q]]).epsilon(1e-10));
    CHECK(rep.system[static_cast<std::size_t>(q)].se ==
          doctest::Approx(std::sqrt(s2 * inv(map[q], map[q]))).epsilon(1e-10));
  }
  CHECK(rep.residual_covariance(0, 0) == doctest::Approx(s2).epsilon(1e-10));
  const auto& c = rep.system.back();
  CHECK(c.p_value == doctest::Approx(std::erfc(std::abs(c.value / c.se) / std::sqrt(2.0))));
}

TEST_CASE("duplicated observations give the same estimates") {
  FarmPanel panel = synth_one(IndustryId::kBroadacreRice, 40, 5, 2.0);
  std::vector<FarmRecord> twice = panel.records();
  for (FarmRecord r : panel.records()) {
    r.farm_id += "_dup";
    twice.push_back(r);
  }
  const IndustrySpec& spec = industry_spec(IndustryId::kBroadacreRice);
  EstimateReport a = estimate(build_design(panel, spec));
  EstimateReport b = estimate(build_design(FarmPanel(twice), spec));
  CHECK(a.converged);
  CHECK(!a.exact_fit);
  for (std::size_t q = 0; q < a.system.size(); ++q) {
    CHECK(b.system[q].value == doctest::Approx(a.system[q].value).epsilon(1e-9));
  }
}

TEST_CASE("homogeneity: scaling all raw prices and P0 leaves estimates unchanged") {
  FarmPanel panel = synth_one(IndustryId::kDairy, 30, 8, 1.0);
  std::vector<FarmRecord> scaled = panel.records();
  for (FarmRecord& r : scaled) {
    for (double& p : r.raw_prices) p *= 7.0;
    r.p0 *= 7.0;
  }
  const IndustrySpec& spec = industry_spec(IndustryId::kDairy);
  EstimateReport a = estimate(build_design(panel, spec));
  EstimateReport b = estimate(build_design(FarmPanel(scaled), spec));
  for (std::size_t q = 0; q < a.system.size(); ++q) {
    CHECK(std::abs(b.system[q].value - a.system[q].value) <= 1e-12 * std::max(1.0, std::abs(a.system[q].value)));
  }
}

TEST_CASE("numeraire effects") {
  ParameterSet p = testing::blank_params(1, 1);
  p.C(0, 0) = 2.0;
  Vector raw(1);
  raw << 3.0;
  ParameterSet r = recover_numeraire_effects(p, PriceVector(raw, 1.0));
  const NumeraireEffects& fx = *r.numeraire_effects;
  CHECK(fx.netput_wrt_p0[0] == -6.0);
  CHECK(fx.numeraire_wrt_price[0] == 6.0);
  CHECK(fx.numeraire_own == -18.0);

  ParameterSet zero = testing::blank_params(3, 1);
  ParameterSet rz = recover_numeraire_effects(zero, PriceVector(Vector::Constant(3, 2.0), 1.3));
  CHECK(rz.numeraire_effects->netput_wrt_p0.isZero(0));
  CHECK(rz.numeraire_effects->numeraire_wrt_price.isZero(0));
  CHECK(rz.numeraire_effects->numeraire_own == 0.0);

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    ParameterSet q = testing::random_params(5, 2, 1, rng);
    const Vector rawp = testing::random_vector(5, rng, 0.5, 5.0);
    const double p0 = testing::random_vector(1, rng, 0.5, 2.0)[0];
    const Vector z = testing::random_vector(2, rng, -1, 1);
    const Vector w = testing::random_vector(1, rng, -1, 1);
    const PriceVector at(rawp, p0);
    ParameterSet e = recover_numeraire_effects(q, at);
    const auto& f = *e.numeraire_effects;
    // central differences in the raw numeraire price
    const double h = 1e-5 * p0;
    const Vector up = predict_netputs(q, at.with_p0(p0 + h), z, w).values;
    const Vector dn = predict_netputs(q, at.with_p0(p0 - h), z, w).values;
    for (int i = 0; i < 5; ++i) {
      const double fd = (up[i] - dn[i]) / (2 * h);
      CHECK(std::abs(fd - f.netput_wrt_p0[i]) <= 1e-6 * (1 + std::abs(f.netput_wrt_p0[i])));
    }
    const double fdm = (predict_numeraire(q, at.with_p0(p0 + h), z, w) -
                        predict_numeraire(q, at.with_p0(p0 - h), z, w)) / (2 * h);
    CHECK(std::abs(fdm - f.numeraire_own) <= 1e-6 * (1 + std::abs(f.numeraire_own)));
    // derivative of x_m in normalised netput prices
    const Vector pn = at.normalized();
    for (int i = 0; i < 5; ++i) {
      Vector a = pn, b = pn;
      a[i] += 1e-6;
      b[i] -= 1e-6;
      const double fd = (numeraire_quantity(q, a, z, w) - numeraire_quantity(q, b, z, w)) / 2e-6;
      CHECK(std::abs(fd - f.numeraire_wrt_price[i]) <= 1e-6 * (1 + std::abs(f.numeraire_wrt_price[i])));
    }
    // adding-up identity
    const double lhs = f.numeraire_wrt_price.dot(pn);
    CHECK(std::abs(lhs + p0 * f.numeraire_own) <= 1e-12 * (1 + std::abs(lhs)));
  }
}

TEST_CASE("estimate reports symmetric C with one standard error per pair") {
  FarmPanel panel = synth_one(IndustryId::kBroadacreNonRice, 30, 2, 1.0);
  EstimateReport rep = estimate(build_design(panel, industry_spec(IndustryId::kBroadacreNonRice)));
  CHECK(rep.params.C == rep.params.C.transpose());
  int pairs = 0;
  for (const auto& e : rep.system) {
    if (e.name == "C[labour,water]") ++pairs;
    CHECK(e.name != "C[water,labour]");
    CHECK(e.se >= 0.0);
    CHECK(e.p_value >= 0.0);
    CHECK(e.p_value <= 1.0);
  }
  CHECK(pairs == 1);
  SystemDesign d = build_design(panel, industry_spec(IndustryId::kBroadacreNonRice));
  auto se = standard_errors(d, rep.params);
  for (std::size_t q = 0; q < se.size(); ++q) {
    CHECK(se[q].se == rep.system[q].se);
    CHECK(se[q].value == rep.system[q].value);
  }
  CHECK(rep.params.numeraire_effects.has_value());
}

TEST_CASE("equal survey weights match unweighted estimation") {
  FarmPanel panel = synth_one(IndustryId::kBroadacreNonRice, 20, 4, 1.0);
  std::vector<FarmRecord> recs = panel.records();
  for (auto& r : recs) r.weight = 3.0;
  const IndustrySpec& spec = industry_spec(IndustryId::kBroadacreNonRice);
  EstimateReport a = estimate(build_design(FarmPanel(recs), spec));
  EstimateReport b = estimate(build_design(FarmPanel(recs), spec, {true}));
  CHECK(b.weighted);
  for (std::size_t q = 0; q < a.system.size(); ++q) {
    CHECK(b.system[q].value == doctest::Approx(a.system[q].value).epsilon(1e-10));
  }
  // unequal weights change the estimates
  EstimateReport c = estimate(build_design(panel, spec, {true}));
  bool differs = false;
  for (std::size_t q = 0; q < a.system.size(); ++q) differs |= c.system[q].value != a.system[q].value;
  CHECK(differs);
}

TEST_CASE("rank deficiency names the collinear columns") {
  FarmPanel panel = synth_one(IndustryId::kBroadacreNonRice, 20, 4, 1.0);
  std::vector<FarmRecord> recs = panel.records();
  for (auto& r : recs) r.fixed[3] = 2.0 * r.fixed[2];  // capital = 2 x sheep_open
  try {
    estimate(build_design(FarmPanel(recs), industry_spec(IndustryId::kBroadacreNonRice)));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kRankDeficient);
    REQUIRE(e.details().size() == 1);
    const std::string col = e.details()[0];
    CHECK((col == "z_capital" || col == "z_sheep_open"));
  }
}

TEST_CASE("non-convergence carries the iteration trace") {
  FarmPanel panel = synth_one(IndustryId::kBroadacreRice, 20, 4, 3.0);
  EstimateOptions opt;
  opt.max_iterations = 2;
  opt.tolerance = 1e-300;
  try {
    estimate(build_design(panel, industry_spec(IndustryId::kBroadacreRice)), opt);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotConverged);
    CHECK(e.details().size() == 2);
  }
}

TEST_CASE("too few observations is rejected") {
  FarmPanel panel = synth_one(IndustryId::kHorticulture, 1, 4);
  CHECK_THROWS_AS(estimate(build_design(panel, industry_spec(IndustryId::kHorticulture))), Error);
}

TEST_CASE("parameter RMSE falls as the sample grows") {
  const IndustryId id = IndustryId::kBroadacreNonRice;
  const ParameterSet truth = truth_of(id);
  auto rmse = [&](int farms) {
    double total = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      EstimateReport rep = estimate(build_design(synth_one(id, farms, 100 + seed, 2.0), industry_spec(id)));
      total += (rep.params.C - truth.C).squaredNorm();
    }
    return std::sqrt(total / 20.0);
  };
  // 9 years per farm: ~500, ~1,500 and ~5,000 observations
  const double small = rmse(56), mid = rmse(167), large = rmse(556);
  CHECK(mid < small);
  CHECK(large < mid);
}

TEST_CASE("report serialisation") {
  FarmPanel panel = synth_one(IndustryId::kBroadacreNonRice, 12, 4, 1.0);
  EstimateReport rep = estimate(build_design(panel, industry_spec(IndustryId::kBroadacreNonRice)));
  Json j = report_to_json(rep);
  CHECK(j["converged"] == true);
  CHECK(j["system"].size() == rep.system.size());
  ParameterSet back = params_from_json(j["params"]);
  CHECK(back.C == rep.params.C);
  CHECK(back.covariance->matrix == rep.params.covariance->matrix);
  const std::string csv = parameters_csv(rep);
  CHECK(csv.rfind("equation,name,value,se,p_value\n", 0) == 0);
  CHECK(csv.find("system,\"C[labour,water]\"") != std::string::npos);
  CHECK(csv.find("numeraire,\"D[area_operated,family_labour]\"") != std::string::npos);
}
