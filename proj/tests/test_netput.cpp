#include <doctest.h>

#include <cmath>
#include <random>

#include "netputsim/error.hpp"
#include "netputsim/netput.hpp"
#include "test_support.hpp"

using namespace netputsim;
using netputsim::testing::blank_params;
using netputsim::testing::random_params;
using netputsim::testing::random_vector;

namespace {

ParameterSet toy() {
  ParameterSet p = blank_params(2, 1);
  p.a << 1.0, -1.0;
  p.C << 2.0, 0.5, 0.5, -3.0;
  return p;
}

// Direct element-by-element evaluation, independent of the Eigen path.
double scalar_quadratic(const Matrix& c, const Vector& p) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    for (Eigen::Index j = 0; j < p.size(); ++j) s += c(i, j) * p[i] * p[j];
  return s;
}

}  // namespace

TEST_CASE("predict_netputs at the origin returns the intercepts") {
  std::mt19937_64 rng(7);
  ParameterSet p = random_params(4, 3, 0, rng);
  Vector q = netput_values(p, Vector::Zero(4), Vector::Zero(3));
  for (int i = 0; i < 4; ++i) CHECK(q[i] == p.a[i]);
}

TEST_CASE("two-netput toy matches scalar recomputation") {
  ParameterSet p = toy();
  Vector price(2);
  price << 1.0, 2.0;
  Vector q = netput_values(p, price, Vector::Zero(1));
  // a_i + sum_j C_ij p_j, written out by hand.
  CHECK(q[0] == doctest::Approx(1.0 + 2.0 * 1.0 + 0.5 * 2.0).epsilon(1e-15));
  CHECK(q[1] == doctest::Approx(-1.0 + 0.5 * 1.0 - 3.0 * 2.0).epsilon(1e-15));
  CHECK(q[0] == 4.0);
  CHECK(q[1] == -6.5);

  const double xm = numeraire_quantity(p, price, Vector::Zero(1));
  CHECK(xm == doctest::Approx(0.5 * scalar_quadratic(p.C, price)));
  CHECK(xm == doctest::Approx(-4.0));

  const double profit = normalized_profit(p, price, Vector::Zero(1));
  CHECK(profit == doctest::Approx(4.0 * 1.0 + (-6.5) * 2.0 - (-4.0)));
  CHECK(profit == doctest::Approx(-5.0));
}

TEST_CASE("numeraire at the origin is minus a_m and profit vanishes when a_m is zero") {
  ParameterSet p = toy();
  p.a_m = 2.5;
  CHECK(numeraire_quantity(p, Vector::Zero(2), Vector::Zero(1)) == -2.5);
  p.a_m = 0.0;
  CHECK(normalized_profit(p, Vector::Zero(2), Vector::Zero(1)) == 0.0);
}

TEST_CASE("price-vector entry points reject bad input") {
  ParameterSet p = toy();
  CHECK_THROWS_AS(PriceVector(Vector::Constant(2, 1.0), 0.0), Error);
  Vector bad(2);
  bad << 1.0, -3.0;
  try {
    PriceVector pv(bad, 1.0);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidPrice);
  }
  PriceVector three(Vector::Constant(3, 1.0), 1.0);
  try {
    predict_netputs(p, three, Vector::Zero(1));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDimensionMismatch);
  }
}

TEST_CASE("homogeneity of degree zero in raw prices") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    ParameterSet p = random_params(5, 3, 2, rng);
    Vector raw = random_vector(5, rng, 0.1, 10.0);
    const double p0 = random_vector(1, rng, 0.5, 2.0)[0];
    Vector z = random_vector(3, rng, -2, 2);
    Vector w = random_vector(2, rng, -1, 1);
    for (double lambda : {10.0, 7.0, 0.3}) {
      PriceVector base(raw, p0);
      PriceVector scaled(raw * lambda, p0 * lambda);
      Vector q0 = predict_netputs(p, base, z, w).values;
      Vector q1 = predict_netputs(p, scaled, z, w).values;
      for (int i = 0; i < 5; ++i) {
        CHECK(std::abs(q1[i] - q0[i]) <= 1e-12 * (1.0 + std::abs(q0[i])));
      }
      const double x0 = predict_numeraire(p, base, z, w);
      const double x1 = predict_numeraire(p, scaled, z, w);
      CHECK(std::abs(x1 - x0) <= 1e-12 * (1.0 + std::abs(x0)));
      const double r0 = restricted_profit(p, base, z, w);
      const double r1 = restricted_profit(p, scaled, z, w);
      CHECK(std::abs(r1 - r0) <= 1e-12 * (1.0 + std::abs(r0)));
    }
  }
}

TEST_CASE("duality identity: profit equals netput value minus numeraire") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    ParameterSet p = random_params(6, 4, 3, rng);
    Vector price = random_vector(6, rng, 0.05, 5.0);
    Vector z = random_vector(4, rng, -3, 3);
    Vector w = random_vector(3, rng, -1, 1);
    const double profit = normalized_profit(p, price, z, w);
    const double identity = netput_values(p, price, z, w).dot(price) - numeraire_quantity(p, price, z, w);
    CHECK(std::abs(profit - identity) <= 1e-9 * (1.0 + std::abs(profit)));
  }
}

TEST_CASE("netputs are the price gradient of restricted profit") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    ParameterSet p = random_params(5, 3, 0, rng);
    Vector price = random_vector(5, rng, 0.5, 4.0);
    Vector z = random_vector(3, rng, -2, 2);
    Vector q = netput_values(p, price, z);
    for (int i = 0; i < 5; ++i) {
      const double h = 1e-5 * (1.0 + std::abs(price[i]));
      Vector up = price, dn = price;
      up[i] += h;
      dn[i] -= h;
      const double fd = (normalized_profit(p, up, z) - normalized_profit(p, dn, z)) / (2 * h);
      CHECK(std::abs(fd - q[i]) <= 1e-6 * (1.0 + std::abs(q[i])));
    }
  }
}

TEST_CASE("netputs are affine: superposition in prices and fixed inputs") {
  std::mt19937_64 rng(9);
  ParameterSet p = random_params(4, 2, 0, rng);
  Vector p1 = random_vector(4, rng, 0, 3), p2 = random_vector(4, rng, 0, 3);
  Vector z1 = random_vector(2, rng, 0, 3), z2 = random_vector(2, rng, 0, 3);
  Vector lhs = netput_values(p, p1 + p2, z1 + z2);
  Vector rhs = netput_values(p, p1, z1) + netput_values(p, p2, z2) - p.a;
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + lhs.cwiseAbs().maxCoeff()));
}

TEST_CASE("scale_to_level multiplies per-hectare vectors by area") {
  const IndustrySpec& dairy = industry_spec(IndustryId::kDairy);
  NetputVector v{Vector(2), 3.0};
  v.values << 2.0, -1.0;
  NetputVector s = scale_to_level(dairy, v, 100.0);
  CHECK(s.values[0] == 200.0);
  CHECK(s.values[1] == -100.0);
  CHECK(*s.numeraire == 300.0);
  CHECK(scale_to_level(dairy, v, 1.0).values == v.values);
  CHECK_THROWS_AS(scale_to_level(dairy, v, 0.0), Error);
  CHECK_THROWS_AS(scale_to_level(dairy, v, -5.0), Error);

  const IndustrySpec& rice = industry_spec(IndustryId::kBroadacreRice);
  CHECK(scale_to_level(rice, v, 100.0).values == v.values);
}

TEST_CASE("standard industry specs satisfy their invariants") {
  for (IndustryId id : kAllIndustries) {
    const IndustrySpec& spec = industry_spec(id);
    CHECK_NOTHROW(spec.validate());
    CHECK(!spec.netput_index(spec.numeraire_name).has_value());
    CHECK(spec.netput_index("water").has_value());
    CHECK(parse_industry(to_string(id)) == id);
  }
  CHECK(industry_spec(IndustryId::kDairy).per_hectare);
  CHECK(industry_spec(IndustryId::kHorticulture).per_hectare);
  CHECK(!industry_spec(IndustryId::kBroadacreRice).per_hectare);
  CHECK(!industry_spec(IndustryId::kBroadacreNonRice).per_hectare);

  IndustrySpec broken = industry_spec(IndustryId::kBroadacreRice);
  broken.per_hectare = true;
  broken.area_rule = AreaRule::kTotalAreaOperated;
  CHECK_THROWS_AS(broken.validate(), Error);
}

TEST_CASE("shared allocation-price groups") {
  const auto& g = standard_region_price_groups();
  CHECK(g.at("adelaide_mt_lofty") == g.at("nsw_murray"));
  CHECK(g.at("nsw_murray") == g.at("vic_murray"));
  CHECK(g.at("goulburn_broken") == g.at("loddon_campaspe"));
  CHECK(g.at("murrumbidgee") != g.at("lower_darling"));
  CHECK(g.at("murrumbidgee") != g.at("vic_murray"));
}

TEST_CASE("parameter set validation") {
  ParameterSet p = toy();
  CHECK_NOTHROW(p.validate());
  p.C(0, 1) += 1e-15;
  CHECK_THROWS_AS(p.validate(), Error);
}
