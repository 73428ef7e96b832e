#include "netputsim/netput.hpp"

#include "netputsim/error.hpp"

namespace netputsim {

namespace {

void check_dims(const ParameterSet& params, const Vector& p, const Vector& z,
                const Vector& w) {
  std::vector<std::string> problems;
  if (static_cast<std::size_t>(p.size()) != params.netput_count()) {
    problems.push_back("price vector has " + std::to_string(p.size()) + " entries, expected " +
                       std::to_string(params.netput_count()));
  }
  if (static_cast<std::size_t>(z.size()) != params.fixed_count()) {
    problems.push_back("fixed-input vector has " + std::to_string(z.size()) +
                       " entries, expected " + std::to_string(params.fixed_count()));
  }
  if (w.size() != 0 && static_cast<std::size_t>(w.size()) != params.control_count()) {
    problems.push_back("control vector has " + std::to_string(w.size()) + " entries, expected " +
                       std::to_string(params.control_count()));
  }
  if (!problems.empty()) {
    throw Error(ErrorCode::kDimensionMismatch, "input does not match parameter set", problems);
  }
}

double control_shift(const Vector& coef, const Vector& w) {
  return w.size() == 0 ? 0.0 : coef.dot(w);
}

}  // namespace

Vector netput_values(const ParameterSet& params, const Vector& p, const Vector& z,
                     const Vector& w) {
  check_dims(params, p, z, w);
  Vector q = params.a + params.C * p + params.alpha * z;
  if (w.size() != 0) q += params.gamma * w;
  return q;
}

double numeraire_quantity(const ParameterSet& params, const Vector& p, const Vector& z,
                          const Vector& w) {
  check_dims(params, p, z, w);
  const double minus_xm = params.a_m + control_shift(params.gamma_m, w) + params.b.dot(z) -
                          0.5 * p.dot(params.C * p) + 0.5 * z.dot(params.D * z);
  return -minus_xm;
}

double normalized_profit(const ParameterSet& params, const Vector& p, const Vector& z,
                         const Vector& w) {
  check_dims(params, p, z, w);
  Vector intercept = params.a;
  if (w.size() != 0) intercept += params.gamma * w;
  return params.a_m + control_shift(params.gamma_m, w) + intercept.dot(p) + params.b.dot(z) +
         0.5 * p.dot(params.C * p) + 0.5 * z.dot(params.D * z) + p.dot(params.alpha * z);
}

NetputVector predict_netputs(const ParameterSet& params, const PriceVector& prices,
                             const Vector& z, const Vector& w) {
  return NetputVector{netput_values(params, prices.normalized(), z, w), std::nullopt};
}

double predict_numeraire(const ParameterSet& params, const PriceVector& prices,
                         const Vector& z, const Vector& w) {
  return numeraire_quantity(params, prices.normalized(), z, w);
}

double restricted_profit(const ParameterSet& params, const PriceVector& prices,
                         const Vector& z, const Vector& w) {
  return normalized_profit(params, prices.normalized(), z, w);
}

NetputVector scale_to_level(const IndustrySpec& spec, NetputVector per_ha, double area) {
  if (!spec.per_hectare) return per_ha;
  if (!(area > 0.0)) {
    throw Error(ErrorCode::kInvalidArea, "area divisor must be positive, got " +
                                             std::to_string(area));
  }
  per_ha.values *= area;
  if (per_ha.numeraire) *per_ha.numeraire *= area;
  return per_ha;
}

Vector to_quantities(const IndustrySpec& spec, const Vector& netputs) {
  Vector q = netputs;
  for (std::size_t i = spec.output_count(); i < spec.netput_count(); ++i) {
    q[static_cast<Eigen::Index>(i)] = -q[static_cast<Eigen::Index>(i)];
  }
  return q;
}

}  // namespace netputsim
