#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "netputsim/calibration.hpp"
#include "netputsim/csv.hpp"
#include "netputsim/error.hpp"
#include "netputsim/synth.hpp"
#include "netputsim/validator.hpp"
#include "test_support.hpp"

using namespace netputsim;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

}  // namespace

TEST_CASE("r squared") {
  CHECK(r_squared(vec({1, 2, 3}), vec({1, 2, 4})) == 0.5);
  CHECK(r_squared(vec({1, 2, 3}), vec({1, 2, 3})) == 1.0);
  CHECK(r_squared(vec({1, 2, 3}), vec({2, 2, 2})) == 0.0);
  CHECK(r_squared(vec({0, 0, 10}), vec({10, 0, 0})) == doctest::Approx(1.0 - 200.0 / (200.0 / 3.0)));
  try {
    r_squared(vec({4, 4, 4}), vec({1, 2, 3}));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidArgument);
  }
  CHECK_THROWS_AS(r_squared(vec({1, 2}), vec({1, 2, 3})), Error);
  CHECK_THROWS_AS(r_squared(vec({1}), vec({1})), Error);
}

TEST_CASE("monotonicity share") {
  CHECK(monotonicity_share(vec({1, 2, 3}), NetputRole::kOutput) == 1.0);
  CHECK(monotonicity_share(vec({1, -1, 1, 1}), NetputRole::kOutput) == 0.75);
  CHECK(monotonicity_share(vec({-1, -1, 0, -2}), NetputRole::kInput) == 0.75);
  CHECK(monotonicity_share(vec({0}), NetputRole::kOutput) == 0.0);
  CHECK(monotonicity_share(vec({0}), NetputRole::kInput) == 0.0);
  CHECK_THROWS_AS(monotonicity_share(Vector(), NetputRole::kOutput), Error);

  std::mt19937_64 rng(5);
  const Vector v = testing::random_vector(40, rng, -1, 3);
  for (double k : {1e-6, 0.5, 7.0, 1e9}) {
    CHECK(monotonicity_share(k * v, NetputRole::kOutput) == monotonicity_share(v, NetputRole::kOutput));
    CHECK(monotonicity_share(k * v, NetputRole::kInput) == monotonicity_share(v, NetputRole::kInput));
  }

  const IndustrySpec& spec = industry_spec(IndustryId::kBroadacreNonRice);
  Matrix m(2, 4);
  m << 1, 1, -1, -1,
       -1, 2, 3, -1;
  const auto shares = monotonicity_shares(m, spec);
  CHECK(shares == std::vector<double>{0.5, 1.0, 0.5, 1.0});
}

TEST_CASE("convexity constructed cases") {
  const auto id = convexity_check(Matrix::Identity(3, 3));
  CHECK(id.psd);
  CHECK(id.cholesky_psd);
  CHECK(id.criteria_agree);
  CHECK(id.min_eigenvalue == doctest::Approx(1.0));
  CHECK(id.failing_direction.size() == 0);
  CHECK(id.cholesky_rank == 3);

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1;
  d(1, 1) = -0.5;
  const auto v = convexity_check(d);
  CHECK_FALSE(v.psd);
  CHECK_FALSE(v.cholesky_psd);
  CHECK(v.min_eigenvalue == doctest::Approx(-0.5));
  REQUIRE(v.failing_direction.size() == 2);
  CHECK(v.failing_direction[0] == doctest::Approx(0.0));
  CHECK(v.failing_direction[1] == doctest::Approx(1.0));

  const Vector u = vec({1, 2, -2});
  const auto r1 = convexity_check(u * u.transpose());
  CHECK(r1.psd);
  CHECK(r1.cholesky_psd);
  CHECK(std::abs(r1.min_eigenvalue) <= r1.tolerance);
  CHECK(r1.tolerance == doctest::Approx(9e-8));
  CHECK(r1.cholesky_rank == 1);

  // One negative eigenvalue hidden behind positive diagonals.
  Matrix h(3, 3);
  h << 2, 3, 0,
       3, 2, 0,
       0, 0, 1;
  const auto hv = convexity_check(h);
  CHECK_FALSE(hv.psd);
  CHECK_FALSE(hv.cholesky_psd);
  CHECK(hv.min_eigenvalue == doctest::Approx(-1.0));
  CHECK(std::abs(hv.failing_direction[0] + hv.failing_direction[1]) < 1e-12);
  CHECK(std::abs(hv.failing_direction[2]) < 1e-12);

  CHECK(convexity_check(Matrix::Zero(2, 2)).psd);
  CHECK(convexity_check(Matrix::Zero(2, 2), 0.0).cholesky_psd);

  Matrix a = Matrix::Identity(2, 2);
  a(0, 1) = 1e-6;
  try {
    convexity_check(a);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kAsymmetric);
  }
  a(0, 1) = 1e-12;
  CHECK(convexity_check(a).psd);
}

TEST_CASE("convexity criteria agree away from the boundary") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n01;
  int compared = 0;
  for (int draw = 0; draw < 500; ++draw) {
    const Eigen::Index n = 1 + draw % 9;
    Matrix q = Matrix::NullaryExpr(n, n, [&] { return n01(rng); });
    Eigen::HouseholderQR<Matrix> qr(q);
    const Matrix basis = qr.householderQ();
    Vector lambda(n);
    for (Eigen::Index i = 0; i < n; ++i) lambda[i] = n01(rng) * 3;
    if (draw % 3 == 0) lambda = lambda.cwiseAbs();          // PSD
    if (draw % 5 == 0) lambda[draw % n] = 0.0;                // boundary
    Matrix c = basis * lambda.asDiagonal() * basis.transpose();
    c = 0.5 * (c + c.transpose());
    const auto v = convexity_check(c);
    if (std::abs(v.min_eigenvalue) > 10 * v.tolerance) {
      CHECK(v.criteria_agree);
      ++compared;
    }
    // Oracle: eigenvalues of the constructed matrix.
    CHECK(std::abs(v.min_eigenvalue - lambda.minCoeff()) <= 1e-9 * lambda.cwiseAbs().maxCoeff());
    if (lambda.minCoeff() > 0) CHECK_FALSE(convexity_check(-c).psd);
  }
  CHECK(compared > 300);
}

TEST_CASE("fit export") {
  const std::vector<std::string> ids{"a", "b", "c,d"};
  const auto rows = fit_rows(ids, "water", vec({1.0 / 3.0, 2, 3}), vec({1, 2.5e-300, -7}));
  const std::string text = fit_export_csv(rows);
  const auto t = csv::parse(text);
  CHECK(t.header == std::vector<std::string>{"farm_id", "equation", "actual", "predicted"});
  CHECK(t.rows.size() == 3);
  const auto back = parse_fit_export(text);
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back[i].farm_id == rows[i].farm_id);
    CHECK(back[i].equation == "water");
    CHECK(back[i].actual == rows[i].actual);
    CHECK(back[i].predicted == rows[i].predicted);
  }
  CHECK(fit_export_csv({}) == "farm_id,equation,actual,predicted\n");
  CHECK(parse_fit_export(fit_export_csv({})).empty());
  CHECK_THROWS_AS(fit_rows(ids, "water", vec({1, 2}), vec({1, 2, 3})), Error);
}

TEST_CASE("oracle fit report") {
  CalibratedPanelOptions o;
  o.farms = 30;
  o.seed = 8;
  const FarmPanel panel = synth_panel(calibrated_synth_config(o));
  ValidationReport report;
  for (IndustryId id : kAllIndustries) {
    report.industries.push_back(validate_industry(calibrated_truth(id), panel.subset(id)));
  }
  for (const auto& ind : report.industries) {
    const IndustrySpec& spec = industry_spec(ind.industry);
    REQUIRE(ind.equations.size() == spec.netput_count());
    for (const auto& e : ind.equations) {
      CHECK(e.r2_level >= 1 - 1e-9);
      CHECK(e.r2_per_hectare.has_value() == spec.per_hectare);
      if (e.r2_per_hectare) CHECK(*e.r2_per_hectare >= 1 - 1e-9);
      CHECK(e.monotonicity >= 0.0);
      CHECK(e.monotonicity <= 1.0);
    }
    CHECK(ind.fit.size() == spec.netput_count() * static_cast<std::size_t>(ind.equations[0].observations));
    CHECK(ind.convexity.criteria_agree);
  }
  const auto r2 = csv::parse(r_squared_csv(report));
  CHECK(r2.header == std::vector<std::string>{"industry", "equation", "per_hectare_r2", "level_r2"});
  CHECK(r2.rows.size() == 5 + 5 + 4 + 9);
  CHECK(r2.rows[5][2].empty());
  CHECK_FALSE(r2.rows[0][2].empty());
  const auto mono = csv::parse(monotonicity_csv(report));
  CHECK(mono.rows.size() == 23);
  const Json j = validation_to_json(report);
  CHECK(j["industries"].size() == 4);
  CHECK(j["industries"][1]["equations"][0]["per_hectare_r2"].is_null());
  CHECK(j["industries"][0]["convexity"].contains("min_eigenvalue"));

  // A prediction that misses: scramble the intercepts.
  ParameterSet off = calibrated_truth(IndustryId::kDairy);
  off.a *= -1.0;
  const auto bad = validate_industry(off, panel.subset(IndustryId::kDairy));
  CHECK(bad.equations[0].r2_level < 0.9);
  CHECK_THROWS_AS(validate_industry(off, panel.subset(IndustryId::kHorticulture)), Error);
}
