#pragma once

// Published southern-basin estimates used as fixtures, and ground-truth
// parameter sets calibrated from them for synthetic panels.

#include <string>
#include <vector>

#include "netputsim/response.hpp"
#include "netputsim/synth.hpp"
#include "netputsim/types.hpp"

namespace netputsim {

// Mean marginal effects and elasticities as published, over netputs then
// the numeraire, in quantity sign convention (rows = quantity, cols = price).
struct PublishedEffects {
  IndustryId industry = IndustryId::kDairy;
  std::vector<std::string> labels;
  Matrix marginal;
  Matrix marginal_p;
  Matrix elasticity;
  Matrix elasticity_p;
  Vector mean_quantity;     // farm-level means, netputs then numeraire
  double mean_area = 0.0;   // mean area operated (ha)
  double print_step = 0.01; // resolution of the printed marginal effects
};

const PublishedEffects& published_effects(IndustryId id);

// G x G netput block of the marginal effects with printed zeros replaced by
// 0.3 * print_step, signed like the matching elasticity. Lower triangle is
// rebuilt from the upper so the block is exactly netput-symmetric.
Matrix filled_marginal_block(const PublishedEffects& fx);

// Mean prices that make the published elasticities consistent with the
// published marginal effects: p_j = e_ij q_i / m_ij using the own cell when
// it is printed nonzero, else the netput row with the largest printed
// |m_ij| (the numeraire row when the whole netput column is zero).
Vector implied_prices(const PublishedEffects& fx);

struct FixtureOptions {
  bool fill_zero_cells = true;      // otherwise printed zeros stay zero
  bool flat_horticulture_water = false;  // force C[water,water] = 0
};

// C transcribed from the published marginal effects (per hectare for
// per-hectare industries, using the mean area); all other blocks zero.
ParameterSet fixture_params(IndustryId id, const FixtureOptions& options = {});

// Evaluation point of the published tables: implied prices with P0 = 1.
PriceVector fixture_point(IndustryId id);
// Elasticities of the fixture parameters at the fixture point and published
// mean quantities, carrying the published marginal-effect p-values.
ElasticityMatrix fixture_elasticities(IndustryId id, const FixtureOptions& options = {});

// Raw $/unit prices for synthetic panels, in model netput order.
std::vector<double> synthetic_base_prices(IndustryId id);

// Full ground truth: C as in fixture_params, with a, alpha, gamma, b, D,
// gamma_m and a_m chosen so the typical synthetic farm (median fixed inputs,
// mean controls, base prices) reproduces the published mean quantities.
ParameterSet calibrated_truth(IndustryId id, const FixtureOptions& options = {});

struct CalibratedPanelOptions {
  int farms = 60;
  std::uint64_t seed = 1;
  double noise_fraction = 0.0;  // noise sd as a fraction of each target
  FixtureOptions fixture;
  std::vector<IndustryId> industries{std::begin(kAllIndustries), std::end(kAllIndustries)};
};

SynthIndustryConfig calibrated_synth_industry(IndustryId id, const CalibratedPanelOptions& o);
SynthConfig calibrated_synth_config(const CalibratedPanelOptions& options = {});

}  // namespace netputsim
