#pragma once

// Restricted normalised-quadratic profit function and its netput system.
//
//   pi*(p, z, w) = a_m + gamma_m'w + (a + Gamma w)'p + b'z
//                  + 1/2 p'Cp + 1/2 z'Dz + p' alpha z
//   netput(p)    = d pi*/dp = a + Gamma w + C p + alpha z
//   -x_m         = pi* - netput'p = a_m + gamma_m'w + b'z - 1/2 p'Cp + 1/2 z'Dz
//
// Prices are normalised by the numeraire price P0; netputs are signed
// (outputs positive, inputs negative).

#include <optional>

#include "netputsim/types.hpp"

namespace netputsim {

// Normalised-price entry points. No positivity check on p, so they accept
// the degenerate p = 0 point; w may be empty when the set has no controls.
Vector netput_values(const ParameterSet& params, const Vector& p, const Vector& z,
                     const Vector& w = Vector());
double numeraire_quantity(const ParameterSet& params, const Vector& p, const Vector& z,
                          const Vector& w = Vector());
double normalized_profit(const ParameterSet& params, const Vector& p, const Vector& z,
                         const Vector& w = Vector());

NetputVector predict_netputs(const ParameterSet& params, const PriceVector& prices,
                             const Vector& z, const Vector& w = Vector());
double predict_numeraire(const ParameterSet& params, const PriceVector& prices,
                         const Vector& z, const Vector& w = Vector());
double restricted_profit(const ParameterSet& params, const PriceVector& prices,
                         const Vector& z, const Vector& w = Vector());

// Multiplies every slot (and the numeraire, when present) by the farm's
// area divisor for per-hectare industries; broadacre vectors pass through.
NetputVector scale_to_level(const IndustrySpec& spec, NetputVector per_ha, double area);

// Quantities (natural units, inputs positive) from signed netputs.
Vector to_quantities(const IndustrySpec& spec, const Vector& netputs);

}  // namespace netputsim
