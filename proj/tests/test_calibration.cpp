#include <doctest.h>

#include <cmath>

#include "netputsim/calibration.hpp"
#include "netputsim/error.hpp"
#include "netputsim/estimator.hpp"
#include "netputsim/netput.hpp"

using namespace netputsim;

TEST_CASE("published marginal effects are netput-symmetric as printed") {
  for (IndustryId id : kAllIndustries) {
    const IndustrySpec& spec = industry_spec(id);
    const PublishedEffects& fx = published_effects(id);
    const auto g = static_cast<Eigen::Index>(spec.netput_count());
    REQUIRE(fx.marginal.rows() == g + 1);
    REQUIRE(fx.labels.back() == "materials_services");
    for (Eigen::Index i = 0; i < g; ++i) {
      for (Eigen::Index j = 0; j < g; ++j) {
        const double s = spec.sign(static_cast<std::size_t>(i)) * spec.sign(static_cast<std::size_t>(j));
        CAPTURE(fx.labels[i]);
        CAPTURE(fx.labels[j]);
        CHECK(fx.marginal(j, i) == s * fx.marginal(i, j));
      }
    }
    const Matrix filled = filled_marginal_block(fx);
    for (Eigen::Index i = 0; i < g; ++i) {
      for (Eigen::Index j = 0; j < g; ++j) {
        CHECK(filled(i, j) != 0.0);
        if (fx.marginal(i, j) != 0.0) CHECK(filled(i, j) == fx.marginal(i, j));
      }
    }
  }
}

TEST_CASE("published cells used elsewhere") {
  const auto& rice = published_effects(IndustryId::kBroadacreRice);
  CHECK(rice.marginal(0, 4) == -1.83);
  CHECK(rice.marginal(4, 0) == 1.83);
  CHECK(rice.elasticity(0, 4) == -1.51);
  CHECK(rice.mean_quantity[0] == 1158);
  const auto& dairy = published_effects(IndustryId::kDairy);
  CHECK(dairy.marginal(4, 3) == 179);
  CHECK(dairy.marginal(3, 4) == 179);
  CHECK(dairy.elasticity(4, 3) == 0.47);  // fodder-water substitution
  const double diag[] = {-0.49, -2.23, -1.18, 0.01};
  int n = 0;
  for (IndustryId id : kAllIndustries) {
    const auto& fx = published_effects(id);
    const auto w = static_cast<Eigen::Index>(industry_spec(id).water_index());
    CHECK(fx.elasticity(w, w) == diag[n++]);
  }
  const auto& hort = published_effects(IndustryId::kHorticulture);
  CHECK(hort.marginal(8, 8) == 0.0);
  CHECK(hort.elasticity_p(8, 8) == 0.93);
}

TEST_CASE("implied prices reproduce the elasticities they were taken from") {
  for (IndustryId id : kAllIndustries) {
    const auto& fx = published_effects(id);
    const Vector p = implied_prices(fx);
    CHECK((p.array() > 0).all());
    for (Eigen::Index j = 0; j < p.size(); ++j) {
      if (fx.marginal(j, j) == 0.0) continue;
      const double e = fx.marginal(j, j) * p[j] / fx.mean_quantity[j];
      CHECK(e == doctest::Approx(fx.elasticity(j, j)).epsilon(1e-14));
    }
  }
  // Rice water from its own cell: -2.23 * 1363 / -6.59.
  CHECK(implied_prices(published_effects(IndustryId::kBroadacreRice))[4] ==
        doctest::Approx(2.23 * 1363 / 6.59).epsilon(1e-14));
  // Horticulture water has a printed zero own effect; labour row is the largest.
  CHECK(implied_prices(published_effects(IndustryId::kHorticulture))[8] ==
        doctest::Approx(0.25 * 265 / 0.07).epsilon(1e-14));
  // Other horticulture: whole netput column printed zero, numeraire row used.
  CHECK(implied_prices(published_effects(IndustryId::kHorticulture))[6] ==
        doctest::Approx(0.26 * 704020 / 5.81).epsilon(1e-14));
}

TEST_CASE("fixture parameter sets") {
  const ParameterSet rice = fixture_params(IndustryId::kBroadacreRice);
  CHECK(rice.C == rice.C.transpose());
  CHECK(rice.C(0, 4) == -1.83);  // output row: quantity and netput agree
  CHECK(rice.C(4, 4) == 6.59);   // input row: sign flips
  CHECK(rice.a.isZero(0));
  const ParameterSet dairy = fixture_params(IndustryId::kDairy);
  CHECK(dairy.C(4, 3) == doctest::Approx(-179.0 / 357).epsilon(1e-15));
  CHECK(dairy.C(1, 1) == doctest::Approx(-0.3 / 357).epsilon(1e-15));  // filled, elasticity -0.17
  const ParameterSet unfilled = fixture_params(IndustryId::kDairy, {false, false});
  CHECK(unfilled.C(1, 1) == 0.0);
  const ParameterSet flat = fixture_params(IndustryId::kHorticulture, {true, true});
  CHECK(flat.C(8, 8) == 0.0);
  CHECK(flat.C(7, 8) != 0.0);
  CHECK(fixture_params(IndustryId::kHorticulture).C(8, 8) == doctest::Approx(-0.003 / 123));
}

TEST_CASE("calibrated truth reproduces published means at the typical farm") {
  for (IndustryId id : kAllIndustries) {
    const IndustrySpec& spec = industry_spec(id);
    const auto& fx = published_effects(id);
    const ParameterSet t = calibrated_truth(id);
    const SynthIndustryConfig ic = calibrated_synth_industry(id, {});
    const Vector p = Eigen::Map<const Vector>(ic.base_prices.data(),
                                              static_cast<Eigen::Index>(ic.base_prices.size()));
    Vector z(static_cast<Eigen::Index>(spec.fixed_count()));
    std::size_t col = 0;
    for (std::size_t f = 0; f < spec.fixed_count(); ++f) {
      switch (spec.fixed_inputs[f].source) {
        case FixedSource::kColumn: z[f] = ic.fixed[col++].median; break;
        case FixedSource::kAreaOperated: z[f] = ic.area.median; break;
        case FixedSource::kAreaShare: z[f] = 1.0 / spec.output_count(); break;
      }
    }
    Vector w(3);
    for (int c = 0; c < 3; ++c) w[c] = ic.controls[c].mean;
    const double scale = spec.per_hectare ? fx.mean_area : 1.0;
    const Vector q = to_quantities(spec, netput_values(t, p, z, w)) * scale;
    for (Eigen::Index i = 0; i < q.size(); ++i) {
      CHECK(q[i] == doctest::Approx(fx.mean_quantity[i]).epsilon(1e-9));
    }
    CHECK(numeraire_quantity(t, p, z, w) * scale ==
          doctest::Approx(fx.mean_quantity[q.size()]).epsilon(1e-9));
    CHECK(t.C == fixture_params(id).C);
    CHECK((t.alpha.array() != 0).all());
    CHECK((t.gamma.array() != 0).all());
  }
}

TEST_CASE("noiseless calibrated panels recover every free parameter") {
  CalibratedPanelOptions o;
  o.farms = 220;
  o.seed = 3;
  const FarmPanel panel = synth_panel(calibrated_synth_config(o));
  for (IndustryId id : kAllIndustries) {
    CAPTURE(to_string(id));
    const SystemDesign d = build_design(panel.subset(id), industry_spec(id));
    REQUIRE(d.observations() >= 10 * static_cast<Eigen::Index>(d.free_parameters.size()));
    const EstimateReport rep = estimate(d);
    const ParameterSet t = calibrated_truth(id);
    double worst = 0.0;
    for (const FreeParameter& fp : d.free_parameters) {
      double est = 0.0, truth = 0.0;
      const auto f = fp.column;
      switch (fp.block) {
        case ParamBlock::kIntercept: est = rep.params.a[fp.equation]; truth = t.a[fp.equation]; break;
        case ParamBlock::kPrice:
          est = rep.params.C(fp.equation, f - d.price_column(0));
          truth = t.C(fp.equation, f - d.price_column(0));
          break;
        case ParamBlock::kFixed:
          est = rep.params.alpha(fp.equation, f - d.fixed_column(0));
          truth = t.alpha(fp.equation, f - d.fixed_column(0));
          break;
        case ParamBlock::kControl:
          est = rep.params.gamma(fp.equation, f - d.control_column(0));
          truth = t.gamma(fp.equation, f - d.control_column(0));
          break;
      }
      worst = std::max(worst, std::abs(est - truth) / std::abs(truth));
    }
    CHECK(worst < 1e-6);
  }
}
