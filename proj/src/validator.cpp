#include "netputsim/validator.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <sstream>

#include "netputsim/csv.hpp"
#include "netputsim/error.hpp"
#include "netputsim/estimator.hpp"
#include "netputsim/netput.hpp"

namespace netputsim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string cell(double v, bool pretty) {
  return std::isfinite(v) ? csv::format_number(v, pretty) : "undefined";
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

// R^2 that reports a constant actual as NaN instead of throwing.
double r_squared_or_nan(const Vector& actual, const Vector& predicted) {
  try {
    return r_squared(actual, predicted);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvalidArgument) return kNaN;
    throw;
  }
}

}  // namespace

double r_squared(const Vector& actual, const Vector& predicted) {
  if (actual.size() != predicted.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "r_squared: " + std::to_string(actual.size()) + " actual vs " +
                    std::to_string(predicted.size()) + " predicted values");
  }
  if (actual.size() < 2) throw Error(ErrorCode::kDimensionMismatch, "r_squared needs at least 2 values");
  const double mean = actual.mean();
  const double ss_tot = (actual.array() - mean).square().sum();
  if (ss_tot == 0.0) throw Error(ErrorCode::kInvalidArgument, "r_squared: actual values are constant");
  const double ss_res = (actual - predicted).squaredNorm();
  return 1.0 - ss_res / ss_tot;
}

double monotonicity_share(const Vector& predicted_netputs, NetputRole role) {
  if (predicted_netputs.size() == 0) throw Error(ErrorCode::kEmptyInput, "monotonicity_share: no predictions");
  Eigen::Index ok = 0;
  for (double v : predicted_netputs) {
    if (role == NetputRole::kOutput ? v > 0.0 : v < 0.0) ++ok;
  }
  return static_cast<double>(ok) / static_cast<double>(predicted_netputs.size());
}

std::vector<double> monotonicity_shares(const Matrix& predicted_netputs, const IndustrySpec& spec) {
  if (predicted_netputs.cols() != static_cast<Eigen::Index>(spec.netput_count())) {
    throw Error(ErrorCode::kDimensionMismatch, "monotonicity_shares: column count differs from netput count");
  }
  std::vector<double> out;
  for (Eigen::Index j = 0; j < predicted_netputs.cols(); ++j) {
    out.push_back(monotonicity_share(predicted_netputs.col(j), spec.role(static_cast<std::size_t>(j))));
  }
  return out;
}

bool pivoted_cholesky_psd(const Matrix& c, double tolerance, Eigen::Index* rank) {
  Matrix s = c;  // Schur complement, updated in place
  const Eigen::Index n = s.rows();
  std::vector<bool> done(static_cast<std::size_t>(n), false);
  Eigen::Index k = 0;
  for (; k < n; ++k) {
    Eigen::Index piv = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!done[static_cast<std::size_t>(i)] && (piv < 0 || s(i, i) > s(piv, piv))) piv = i;
    }
    const double d = s(piv, piv);
    if (d <= tolerance) break;
    done[static_cast<std::size_t>(piv)] = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (done[static_cast<std::size_t>(i)]) continue;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (!done[static_cast<std::size_t>(j)]) s(i, j) -= s(i, piv) * s(piv, j) / d;
      }
    }
  }
  if (rank) *rank = k;
  // Whatever is left must be numerically zero: a PSD remainder with every
  // diagonal at most tol has every entry at most tol.
  for (Eigen::Index i = 0; i < n; ++i) {
    if (done[static_cast<std::size_t>(i)]) continue;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!done[static_cast<std::size_t>(j)] && std::abs(s(i, j)) > tolerance) return false;
    }
  }
  return true;
}

ConvexityVerdict convexity_check(const Matrix& c, std::optional<double> tolerance) {
  if (c.rows() != c.cols()) throw Error(ErrorCode::kDimensionMismatch, "convexity_check needs a square matrix");
  const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
  const double asym = c.rows() ? (c - c.transpose()).cwiseAbs().maxCoeff() : 0.0;
  if (asym > 1e-10 * scale) {
    throw Error(ErrorCode::kAsymmetric, "convexity_check: matrix is not symmetric (max |C - C'| = " +
                                            std::to_string(asym) + ")");
  }
  ConvexityVerdict v;
  if (c.rows() == 0) {
    v.psd = v.cholesky_psd = v.criteria_agree = true;
    return v;
  }
  const Matrix sym = 0.5 * (c + c.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  v.eigenvalues = es.eigenvalues();
  v.min_eigenvalue = v.eigenvalues[0];
  const double spectral = v.eigenvalues.cwiseAbs().maxCoeff();
  v.tolerance = tolerance.value_or(1e-8 * spectral);
  v.psd = v.min_eigenvalue >= -v.tolerance;
  if (!v.psd) {
    Vector dir = es.eigenvectors().col(0);
    Eigen::Index big = 0;
    dir.cwiseAbs().maxCoeff(&big);
    if (dir[big] < 0) dir = -dir;
    v.failing_direction = dir;
  }
  v.cholesky_psd = pivoted_cholesky_psd(sym, v.tolerance, &v.cholesky_rank);
  v.criteria_agree = v.psd == v.cholesky_psd;
  return v;
}

std::vector<FitRow> fit_rows(const std::vector<std::string>& farm_ids, const std::string& equation,
                             const Vector& actual, const Vector& predicted) {
  const auto n = static_cast<Eigen::Index>(farm_ids.size());
  if (actual.size() != n || predicted.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "fit export for '" + equation + "': " + std::to_string(n) + " ids, " +
                    std::to_string(actual.size()) + " actual, " + std::to_string(predicted.size()) +
                    " predicted");
  }
  std::vector<FitRow> rows;
  rows.reserve(farm_ids.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    rows.push_back({farm_ids[static_cast<std::size_t>(i)], equation, actual[i], predicted[i]});
  }
  return rows;
}

std::string fit_export_csv(const std::vector<FitRow>& rows, bool pretty) {
  std::ostringstream out;
  csv::write_row(out, {"farm_id", "equation", "actual", "predicted"});
  for (const auto& r : rows) {
    csv::write_row(out, {r.farm_id, r.equation, csv::format_number(r.actual, pretty),
                         csv::format_number(r.predicted, pretty)});
  }
  return out.str();
}

std::vector<FitRow> parse_fit_export(std::string_view text) {
  const csv::Table t = csv::parse(text);
  const std::vector<std::string> expected{"farm_id", "equation", "actual", "predicted"};
  if (t.header != expected) {
    throw Error(ErrorCode::kMissingColumn, "fit export header must be farm_id,equation,actual,predicted");
  }
  std::vector<FitRow> rows;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    const auto a = r.size() == 4 ? csv::parse_number(r[2]) : std::nullopt;
    const auto p = r.size() == 4 ? csv::parse_number(r[3]) : std::nullopt;
    if (!a || !p) {
      throw Error(ErrorCode::kParse, "bad fit export row", {"line " + std::to_string(t.line_numbers[i])});
    }
    rows.push_back({r[0], r[1], *a, *p});
  }
  return rows;
}

IndustryValidation validate_industry(const ParameterSet& params, const FarmPanel& panel) {
  const IndustrySpec& spec = industry_spec(params.industry);
  params.validate();
  for (IndustryId id : panel.industries()) {
    if (id != params.industry) {
      throw Error(ErrorCode::kIndustryMismatch, "panel holds " + std::string(to_string(id)) +
                                                    " records; parameters are for " +
                                                    std::string(to_string(params.industry)));
    }
  }
  const SystemDesign d = build_design(panel, spec);
  const Eigen::Index g = d.netput_count();
  if (static_cast<Eigen::Index>(params.netput_count()) != g ||
      static_cast<Eigen::Index>(params.fixed_count()) != d.fixed_count() ||
      static_cast<Eigen::Index>(params.control_count()) != d.control_count()) {
    throw Error(ErrorCode::kDimensionMismatch, "parameters do not match the panel design");
  }
  const Eigen::Index t_count = d.observations();
  Matrix predicted(t_count, g);
  for (Eigen::Index t = 0; t < t_count; ++t) {
    const Vector x = d.X.row(t).transpose();
    predicted.row(t) = netput_values(params, x.segment(1, g), x.segment(1 + g, d.fixed_count()),
                                     x.segment(1 + g + d.fixed_count(), d.control_count()))
                           .transpose();
  }
  const auto shares = monotonicity_shares(predicted, spec);
  std::vector<std::string> ids;
  for (Eigen::Index t = 0; t < t_count; ++t) {
    ids.push_back(d.farm_ids[static_cast<std::size_t>(t)] + " " + std::to_string(d.years[static_cast<std::size_t>(t)]));
  }

  IndustryValidation out;
  out.industry = params.industry;
  for (Eigen::Index j = 0; j < g; ++j) {
    const double s = spec.sign(static_cast<std::size_t>(j));
    const Vector actual = s * d.Y.col(j);
    const Vector pred = s * predicted.col(j);
    const Vector actual_level = actual.cwiseProduct(d.area);
    const Vector pred_level = pred.cwiseProduct(d.area);
    EquationFit f;
    f.equation = d.equation_names[static_cast<std::size_t>(j)];
    if (spec.per_hectare) f.r2_per_hectare = r_squared_or_nan(actual, pred);
    f.r2_level = r_squared_or_nan(actual_level, pred_level);
    f.monotonicity = shares[static_cast<std::size_t>(j)];
    f.own_price_expected_sign = params.C(j, j) >= 0.0;
    f.observations = t_count;
    out.equations.push_back(f);
    auto rows = fit_rows(ids, f.equation, actual_level, pred_level);
    out.fit.insert(out.fit.end(), rows.begin(), rows.end());
  }
  out.convexity = convexity_check(params.C);
  out.convexity.matrix = "C: netput price block in normalised prices";
  return out;
}

std::string r_squared_csv(const ValidationReport& report, bool pretty) {
  std::ostringstream out;
  csv::write_row(out, {"industry", "equation", "per_hectare_r2", "level_r2"});
  for (const auto& ind : report.industries) {
    for (const auto& e : ind.equations) {
      csv::write_row(out, {std::string(to_string(ind.industry)), e.equation,
                           e.r2_per_hectare ? cell(*e.r2_per_hectare, pretty) : "",
                           cell(e.r2_level, pretty)});
    }
  }
  return out.str();
}

std::string monotonicity_csv(const ValidationReport& report, bool pretty) {
  std::ostringstream out;
  csv::write_row(out, {"industry", "equation", "monotonicity"});
  for (const auto& ind : report.industries) {
    for (const auto& e : ind.equations) {
      csv::write_row(out, {std::string(to_string(ind.industry)), e.equation,
                           csv::format_number(e.monotonicity, pretty)});
    }
  }
  return out.str();
}

Json validation_to_json(const ValidationReport& report) {
  Json j;
  j["r_squared_definition"] = "1 - SS_res/SS_tot per equation, about the mean of actual";
  j["monotonicity_rule"] = "outputs > 0, input netputs < 0; zero counts as a violation";
  j["industries"] = Json::array();
  for (const auto& ind : report.industries) {
    Json ji;
    ji["industry"] = to_string(ind.industry);
    ji["equations"] = Json::array();
    for (const auto& e : ind.equations) {
      Json je;
      je["equation"] = e.equation;
      je["per_hectare_r2"] = e.r2_per_hectare ? number_or_null(*e.r2_per_hectare) : Json(nullptr);
      je["level_r2"] = number_or_null(e.r2_level);
      je["monotonicity"] = e.monotonicity;
      je["own_price_expected_sign"] = e.own_price_expected_sign;
      je["observations"] = e.observations;
      ji["equations"].push_back(je);
    }
    const auto& c = ind.convexity;
    Json jc;
    jc["matrix"] = c.matrix;
    jc["psd"] = c.psd;
    jc["cholesky_psd"] = c.cholesky_psd;
    jc["criteria_agree"] = c.criteria_agree;
    jc["min_eigenvalue"] = c.min_eigenvalue;
    jc["tolerance"] = c.tolerance;
    jc["eigenvalues"] = to_json(c.eigenvalues);
    jc["failing_direction"] = c.failing_direction.size() ? to_json(c.failing_direction) : Json(nullptr);
    jc["cholesky_rank"] = c.cholesky_rank;
    ji["convexity"] = jc;
    if (!ind.fit_file.empty()) ji["fit_file"] = ind.fit_file;
    j["industries"].push_back(ji);
  }
  return j;
}

}  // namespace netputsim
