#include "netputsim/estimator.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "netputsim/csv.hpp"
#include "netputsim/error.hpp"
#include "netputsim/kernels.hpp"

namespace netputsim {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::string row_id(const FarmRecord& r) { return fmt::format("{} {}", r.farm_id, r.year); }

}  // namespace

std::vector<FreeParameter> free_parameter_map(const std::vector<std::string>& netputs,
                                              const std::vector<std::string>& fixed,
                                              const std::vector<std::string>& controls) {
  const int g = static_cast<int>(netputs.size());
  const int k = static_cast<int>(fixed.size());
  const int c = static_cast<int>(controls.size());
  std::vector<FreeParameter> out;
  for (int i = 0; i < g; ++i) {
    const std::string& n = netputs[static_cast<std::size_t>(i)];
    out.push_back({"a[" + n + "]", ParamBlock::kIntercept, i, 0});
    for (int f = 0; f < k; ++f) {
      out.push_back({fmt::format("alpha[{},{}]", n, fixed[static_cast<std::size_t>(f)]),
                     ParamBlock::kFixed, i, 1 + g + f});
    }
    for (int q = 0; q < c; ++q) {
      out.push_back({fmt::format("gamma[{},{}]", n, controls[static_cast<std::size_t>(q)]),
                     ParamBlock::kControl, i, 1 + g + k + q});
    }
  }
  for (int i = 0; i < g; ++i) {
    for (int j = i; j < g; ++j) {
      FreeParameter p{fmt::format("C[{},{}]", netputs[static_cast<std::size_t>(i)],
                                  netputs[static_cast<std::size_t>(j)]),
                      ParamBlock::kPrice, i, 1 + j};
      if (j != i) {
        p.partner = j;
        p.partner_column = 1 + i;
      }
      out.push_back(p);
    }
  }
  return out;
}

SystemDesign build_design(const FarmPanel& panel, const IndustrySpec& spec,
                          const DesignOptions& options) {
  if (panel.empty()) throw Error(ErrorCode::kEmptyInput, "cannot build a design from an empty panel");
  const auto ids = panel.industries();
  if (ids.size() != 1 || ids.front() != spec.id) {
    throw Error(ErrorCode::kIndustryMismatch,
                "design needs a panel holding only " + std::string(to_string(spec.id)));
  }
  const auto t = static_cast<Eigen::Index>(panel.size());
  const auto g = static_cast<Eigen::Index>(spec.netput_count());
  const auto k = static_cast<Eigen::Index>(spec.fixed_count());
  const auto c = static_cast<Eigen::Index>(spec.control_count());

  SystemDesign d;
  d.industry = spec.id;
  d.equation_names = spec.netput_names();
  d.fixed_names = spec.fixed_input_names();
  d.control_names = spec.control_names;
  d.regressor_names.push_back("const");
  for (const auto& n : d.equation_names) d.regressor_names.push_back("p_" + n);
  for (const auto& n : d.fixed_names) d.regressor_names.push_back("z_" + n);
  for (const auto& n : d.control_names) d.regressor_names.push_back("w_" + n);
  d.free_parameters = free_parameter_map(d.equation_names, d.fixed_names, d.control_names);

  d.X.resize(t, 1 + g + k + c);
  d.Y.resize(t, g);
  d.numeraire.resize(t);
  d.area.resize(t);
  Vector weight(t);
  std::vector<std::string> problems;
  ErrorCode code = ErrorCode::kValidation;
  for (Eigen::Index r = 0; r < t; ++r) {
    const FarmRecord& rec = panel.records()[static_cast<std::size_t>(r)];
    d.farm_ids.push_back(rec.farm_id);
    d.years.push_back(rec.year);
    weight[r] = rec.weight;
    const double area = area_divisor(spec, rec);
    if (!(area > 0.0)) {
      problems.push_back(row_id(rec) + ": area divisor must be positive");
      code = ErrorCode::kInvalidArea;
      continue;
    }
    Vector p;
    try {
      p = rec.prices().normalized();
    } catch (const Error& e) {
      problems.push_back(row_id(rec) + ": " + e.what());
      code = ErrorCode::kInvalidPrice;
      continue;
    }
    d.area[r] = area;
    d.X(r, 0) = 1.0;
    d.X.row(r).segment(1, g) = p.transpose();
    d.X.row(r).segment(1 + g, k) = model_fixed_inputs(spec, rec).transpose();
    d.X.row(r).segment(1 + g + k, c) = model_controls(rec).transpose();
    for (Eigen::Index i = 0; i < g; ++i) {
      d.Y(r, i) = spec.sign(static_cast<std::size_t>(i)) * rec.quantities[static_cast<std::size_t>(i)] / area;
    }
    d.numeraire[r] = rec.numeraire_quantity / area;
  }
  if (!problems.empty()) {
    throw Error(code,
                fmt::format("{} record(s) cannot enter the design", problems.size()), problems);
  }

  const double wsum = weight.sum();
  d.mean_raw_prices = Vector::Zero(g);
  d.mean_p0 = 0.0;
  for (Eigen::Index r = 0; r < t; ++r) {
    const FarmRecord& rec = panel.records()[static_cast<std::size_t>(r)];
    for (Eigen::Index i = 0; i < g; ++i) d.mean_raw_prices[i] += weight[r] * rec.raw_prices[static_cast<std::size_t>(i)];
    d.mean_p0 += weight[r] * rec.p0;
  }
  d.mean_raw_prices /= wsum;
  d.mean_p0 /= wsum;
  if (options.weighted) d.weights = weight * (static_cast<double>(t) / wsum);
  return d;
}

double two_sided_p(double value, double se) {
  if (!(se > 0.0)) return value == 0.0 ? 1.0 : 0.0;
  return std::erfc(std::abs(value / se) / std::sqrt(2.0));
}

ParameterSet recover_numeraire_effects(ParameterSet params, const PriceVector& mean_prices) {
  if (static_cast<Eigen::Index>(mean_prices.size()) != params.C.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "price vector length differs from C");
  }
  const Vector p = mean_prices.normalized();
  const Vector cp = params.C * p;
  NumeraireEffects fx;
  fx.eval_raw_prices = mean_prices.raw();
  fx.eval_p0 = mean_prices.p0();
  fx.netput_wrt_p0 = -cp / mean_prices.p0();
  fx.numeraire_wrt_price = cp;
  fx.numeraire_own = -p.dot(cp) / mean_prices.p0();
  params.numeraire_effects = std::move(fx);
  return params;
}

namespace {

// Least-squares solve with column equilibration and a rank-revealing QR.
// Returns the solution and (Z'Z)^-1, both in the caller's units.
struct LsSolution {
  Vector x;
  Matrix inverse_gram;
};

LsSolution solve_ls(const Matrix& z, const Vector& y, double rank_tol,
                    const std::vector<std::string>& column_names, const char* what) {
  const Eigen::Index n = z.cols();
  Vector scale(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double norm = z.col(j).norm();
    scale[j] = norm > 0.0 ? 1.0 / norm : 1.0;
  }
  const Matrix ze = z * scale.asDiagonal();
  Eigen::ColPivHouseholderQR<Matrix> qr(ze);
  qr.setThreshold(rank_tol);
  if (qr.rank() < n) {
    std::vector<std::string> cols;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index i = qr.rank(); i < n; ++i) {
      cols.push_back(column_names.at(static_cast<std::size_t>(perm[i])));
    }
    std::string joined;
    for (const auto& s : cols) joined += (joined.empty() ? "" : ", ") + s;
    throw Error(ErrorCode::kRankDeficient,
                fmt::format("{} is rank deficient ({} of {}); collinear: {}", what, qr.rank(), n, joined),
                cols);
  }
  LsSolution out;
  out.x = scale.asDiagonal() * qr.solve(y);
  const Matrix r = qr.matrixR().topLeftCorner(n, n).triangularView<Eigen::Upper>();
  const Matrix rinv = r.triangularView<Eigen::Upper>().solve(Matrix::Identity(n, n));
  const Matrix inv_perm = rinv * rinv.transpose();  // permuted (Ze'Ze)^-1
  const Matrix unperm = qr.colsPermutation() * inv_perm * qr.colsPermutation().transpose();
  out.inverse_gram = scale.asDiagonal() * unperm * scale.asDiagonal();
  return out;
}

// Lower Cholesky factor of sigma, ridged when sigma is numerically singular.
Matrix stable_cholesky(const Matrix& sigma) {
  double ridge = 0.0;
  const double base = std::max(sigma.diagonal().maxCoeff(), std::numeric_limits<double>::min());
  for (int attempt = 0; attempt < 40; ++attempt) {
    Matrix s = sigma;
    s.diagonal().array() += ridge;
    Eigen::LLT<Matrix> llt(s);
    if (llt.info() == Eigen::Success) {
      const Matrix l = llt.matrixL();
      if (l.diagonal().minCoeff() > 1e-9 * std::sqrt(base)) return l;
    }
    ridge = ridge == 0.0 ? 1e-12 * base : ridge * 10.0;
  }
  throw Error(ErrorCode::kSingularMatrix, "residual covariance could not be factorised");
}

}  // namespace

EstimateReport estimate(const SystemDesign& design, const EstimateOptions& options) {
  const Eigen::Index t = design.X.rows();
  const Eigen::Index kx = design.X.cols();
  const Eigen::Index g = design.Y.cols();
  const auto& fp = design.free_parameters;
  const auto np = static_cast<Eigen::Index>(fp.size());
  if (design.Y.rows() != t || (design.weights && design.weights->size() != t)) {
    throw Error(ErrorCode::kDimensionMismatch, "design matrices disagree on observation count");
  }
  if (t <= kx || t * g <= np) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("{} observations cannot identify {} regressors / {} free parameters", t, kx, np));
  }

  // Survey weights enter as row scaling by sqrt(w).
  Matrix xw = design.X, yw = design.Y;
  if (design.weights) {
    const Vector sw = design.weights->cwiseSqrt();
    xw = sw.asDiagonal() * xw;
    yw = sw.asDiagonal() * yw;
  }

  // One QR of the equilibrated regressors reduces every GLS step to K
  // pseudo-observations per equation: Ytilde = Q'Y, X = Q Rx.
  Vector xscale(kx);
  for (Eigen::Index j = 0; j < kx; ++j) {
    const double norm = xw.col(j).norm();
    if (norm == 0.0) {
      throw Error(ErrorCode::kRankDeficient,
                  "regressor " + design.regressor_names[static_cast<std::size_t>(j)] + " is identically zero",
                  {design.regressor_names[static_cast<std::size_t>(j)]});
    }
    xscale[j] = 1.0 / norm;
  }
  Eigen::ColPivHouseholderQR<Matrix> xqr(xw * xscale.asDiagonal());
  xqr.setThreshold(options.rank_tolerance);
  if (xqr.rank() < kx) {
    std::vector<std::string> cols;
    const auto& perm = xqr.colsPermutation().indices();
    for (Eigen::Index i = xqr.rank(); i < kx; ++i) {
      cols.push_back(design.regressor_names[static_cast<std::size_t>(perm[i])]);
    }
    std::string joined;
    for (const auto& s : cols) joined += (joined.empty() ? "" : ", ") + s;
    throw Error(ErrorCode::kRankDeficient, "regressor matrix is rank deficient; collinear: " + joined, cols);
  }
  const Matrix rt = xqr.matrixR().topLeftCorner(kx, kx).triangularView<Eigen::Upper>();
  const Matrix rx = rt * xqr.colsPermutation().transpose() * xscale.cwiseInverse().asDiagonal();
  const Matrix ytilde = (xqr.householderQ().adjoint() * yw).topRows(kx);

  std::vector<std::string> free_names;
  for (const auto& p : fp) free_names.push_back(p.name);

  // Unwhitened restricted design: block g of rows holds Rx times the
  // coefficient vector of equation g.
  Matrix z0 = Matrix::Zero(g * kx, np);
  for (Eigen::Index q = 0; q < np; ++q) {
    const FreeParameter& p = fp[static_cast<std::size_t>(q)];
    z0.block(p.equation * kx, q, kx, 1) += rx.col(p.column);
    if (p.partner >= 0) z0.block(p.partner * kx, q, kx, 1) += rx.col(p.partner_column);
  }
  Vector y0(g * kx);
  for (Eigen::Index i = 0; i < g; ++i) y0.segment(i * kx, kx) = ytilde.col(i);

  auto whiten = [&](const Matrix& lower, Matrix& z, Vector& y) {
    // (L^-1 (x) I_K) applied block-wise.
    const Matrix linv = lower.triangularView<Eigen::Lower>().solve(Matrix::Identity(g, g));
    z = Matrix::Zero(g * kx, np);
    y = Vector::Zero(g * kx);
    for (Eigen::Index i = 0; i < g; ++i) {
      for (Eigen::Index h = 0; h <= i; ++h) {
        z.middleRows(i * kx, kx) += linv(i, h) * z0.middleRows(h * kx, kx);
        y.segment(i * kx, kx) += linv(i, h) * y0.segment(h * kx, kx);
      }
    }
  };

  auto coefficients = [&](const Vector& theta) {
    RowMatrix b = RowMatrix::Zero(g, kx);
    for (Eigen::Index q = 0; q < np; ++q) {
      const FreeParameter& p = fp[static_cast<std::size_t>(q)];
      b(p.equation, p.column) = theta[q];
      if (p.partner >= 0) b(p.partner, p.partner_column) = theta[q];
    }
    return b;
  };

  const RowMatrix xrow = xw;
  const RowMatrix yrow = yw;
  auto residual_cov = [&](const RowMatrix& b) {
    RowMatrix fitted(t, g);
    const auto& kt = kernels::active();
    kt.affine_rows(b.data(), static_cast<std::size_t>(g), static_cast<std::size_t>(kx), xrow.data(),
                   static_cast<std::size_t>(t), fitted.data());
    const RowMatrix e = yrow - fitted;
    RowMatrix s(g, g);
    kt.weighted_cross(e.data(), nullptr, static_cast<std::size_t>(t), static_cast<std::size_t>(g), s.data());
    return Matrix(s / static_cast<double>(t - kx));
  };

  Vector yvar(g), ysq(g);
  for (Eigen::Index i = 0; i < g; ++i) {
    ysq[i] = std::max(yw.col(i).squaredNorm() / static_cast<double>(t), std::numeric_limits<double>::min());
    const double mean = yw.col(i).mean();
    yvar[i] = (yw.col(i).array() - mean).square().sum() / static_cast<double>(t - 1);
    if (!(yvar[i] > 0.0)) yvar[i] = std::max(yw.col(i).squaredNorm() / static_cast<double>(t), 1.0);
  }

  EstimateReport report;
  report.observations = t;
  report.weighted = design.weights.has_value();
  Matrix sigma = yvar.asDiagonal();
  Vector theta, theta_scale;
  Matrix zw;
  Vector yz;
  for (int it = 1; it <= options.max_iterations; ++it) {
    whiten(stable_cholesky(sigma), zw, yz);
    LsSolution sol = solve_ls(zw, yz, options.rank_tolerance, free_names, "restricted system");
    if (it == 1) {
      theta_scale.resize(np);
      for (Eigen::Index q = 0; q < np; ++q) {
        const double norm = zw.col(q).norm();
        theta_scale[q] = norm > 0.0 ? norm : 1.0;
      }
    }
    double change = 1.0;
    if (it > 1) {
      const Vector diff = (sol.x - theta).cwiseProduct(theta_scale);
      const Vector ref = theta.cwiseProduct(theta_scale);
      change = diff.norm() / std::max(ref.norm(), std::numeric_limits<double>::min());
    }
    theta = std::move(sol.x);
    const Matrix s = residual_cov(coefficients(theta));
    report.iterations.push_back({it, it > 1 ? change : std::nan("")});
    report.residual_covariance = s;

    // Residuals at rounding level (relative to the size of y, not its
    // spread): the fit is exact and reweighting only amplifies noise.
    bool exact = true;
    for (Eigen::Index i = 0; i < g; ++i) {
      if (s(i, i) > 1e-22 * ysq[i]) exact = false;
    }
    if (exact) {
      report.exact_fit = true;
      report.converged = true;
      break;
    }
    if (it > 1 && change < options.tolerance) {
      report.converged = true;
      break;
    }
    sigma = s;
  }
  if (!report.converged) {
    std::vector<std::string> trace;
    for (const auto& r : report.iterations) trace.push_back(fmt::format("iteration {}: {:.3e}", r.iteration, r.relative_change));
    throw Error(ErrorCode::kNotConverged,
                fmt::format("feasible GLS did not converge in {} iterations", options.max_iterations), trace);
  }

  // Covariance at the final residual covariance.
  Matrix cov_sigma = report.residual_covariance;
  if (report.exact_fit) {
    Vector d = cov_sigma.diagonal().cwiseMax(std::numeric_limits<double>::min());
    cov_sigma = d.asDiagonal();
  }
  whiten(stable_cholesky(cov_sigma), zw, yz);
  LsSolution final_sol = solve_ls(zw, yz, options.rank_tolerance, free_names, "restricted system");
  Matrix cov = final_sol.inverse_gram;
  cov = 0.5 * (cov + cov.transpose());

  // Assemble the parameter set.
  const IndustrySpec& spec = industry_spec(design.industry);
  ParameterSet params = ParameterSet::zeros(spec);
  params.netput_names = design.equation_names;
  params.fixed_names = design.fixed_names;
  params.control_names = design.control_names;
  const Eigen::Index k = design.fixed_count();
  const Eigen::Index c = design.control_count();
  params.a = Vector::Zero(g);
  params.C = Matrix::Zero(g, g);
  params.alpha = Matrix::Zero(g, k);
  params.gamma = Matrix::Zero(g, c);
  params.b = Vector::Zero(k);
  params.D = Matrix::Zero(k, k);
  params.gamma_m = Vector::Zero(c);
  for (Eigen::Index q = 0; q < np; ++q) {
    const FreeParameter& p = fp[static_cast<std::size_t>(q)];
    const double v = theta[q];
    switch (p.block) {
      case ParamBlock::kIntercept: params.a[p.equation] = v; break;
      case ParamBlock::kFixed: params.alpha(p.equation, p.column - 1 - g) = v; break;
      case ParamBlock::kControl: params.gamma(p.equation, p.column - 1 - g - k) = v; break;
      case ParamBlock::kPrice:
        params.C(p.equation, p.column - 1) = v;
        params.C(p.column - 1, p.equation) = v;
        break;
    }
  }
  params.covariance = ParameterCovariance{free_names, cov};
  for (Eigen::Index q = 0; q < np; ++q) {
    const double se = std::sqrt(std::max(cov(q, q), 0.0));
    report.system.push_back({free_names[static_cast<std::size_t>(q)], theta[q], se, two_sided_p(theta[q], se)});
  }

  if (options.numeraire_equation) {
    // -x_m + 1/2 p'Cp = a_m + b'z + 1/2 z'Dz + gamma_m'w
    const Eigen::Index nq = k * (k + 1) / 2;
    const Eigen::Index km = 1 + k + nq + c;
    if (t <= km) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("{} observations cannot identify the {}-regressor numeraire equation", t, km));
    }
    Matrix xm(t, km);
    Vector ym(t);
    std::vector<std::string> names{"a_m"};
    for (const auto& n : design.fixed_names) names.push_back("b[" + n + "]");
    for (Eigen::Index l = 0; l < k; ++l)
      for (Eigen::Index f = l; f < k; ++f)
        names.push_back(fmt::format("D[{},{}]", design.fixed_names[static_cast<std::size_t>(l)],
                                    design.fixed_names[static_cast<std::size_t>(f)]));
    for (const auto& n : design.control_names) names.push_back("gamma_m[" + n + "]");
    for (Eigen::Index r = 0; r < t; ++r) {
      const Vector p = design.X.row(r).segment(1, g).transpose();
      const Vector zr = design.X.row(r).segment(1 + g, k).transpose();
      ym[r] = -design.numeraire[r] + 0.5 * p.dot(params.C * p);
      xm(r, 0) = 1.0;
      xm.row(r).segment(1, k) = zr.transpose();
      Eigen::Index col = 1 + k;
      for (Eigen::Index l = 0; l < k; ++l)
        for (Eigen::Index f = l; f < k; ++f) xm(r, col++) = l == f ? 0.5 * zr[l] * zr[l] : zr[l] * zr[f];
      xm.row(r).segment(1 + k + nq, c) = design.X.row(r).segment(1 + g + k, c);
    }
    if (design.weights) {
      const Vector sw = design.weights->cwiseSqrt();
      xm = sw.asDiagonal() * xm;
      ym = sw.asDiagonal() * ym;
    }
    LsSolution sol = solve_ls(xm, ym, options.rank_tolerance, names, "numeraire equation");
    const Vector resid = ym - xm * sol.x;
    const double s2 = resid.squaredNorm() / static_cast<double>(t - km);
    params.a_m = sol.x[0];
    params.b = sol.x.segment(1, k);
    Eigen::Index col = 1 + k;
    for (Eigen::Index l = 0; l < k; ++l)
      for (Eigen::Index f = l; f < k; ++f) {
        params.D(l, f) = sol.x[col];
        params.D(f, l) = sol.x[col];
        ++col;
      }
    params.gamma_m = sol.x.segment(1 + k + nq, c);
    for (Eigen::Index q = 0; q < km; ++q) {
      const double se = std::sqrt(std::max(s2 * sol.inverse_gram(q, q), 0.0));
      report.numeraire.push_back({names[static_cast<std::size_t>(q)], sol.x[q], se, two_sided_p(sol.x[q], se)});
    }
  }

  params.validate();
  report.params = recover_numeraire_effects(std::move(params), PriceVector(design.mean_raw_prices, design.mean_p0));
  return report;
}

std::vector<ParameterEstimate> standard_errors(const SystemDesign& design, const ParameterSet& params) {
  if (!params.covariance) {
    throw Error(ErrorCode::kInvalidArgument, "parameter set carries no covariance; estimate first");
  }
  const auto& cov = *params.covariance;
  if (cov.names.size() != design.free_parameters.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "covariance does not match the design's free parameters");
  }
  const auto g = static_cast<Eigen::Index>(params.netput_count());
  const auto k = static_cast<Eigen::Index>(params.fixed_count());
  std::vector<ParameterEstimate> out;
  for (std::size_t q = 0; q < design.free_parameters.size(); ++q) {
    const FreeParameter& p = design.free_parameters[q];
    double v = 0.0;
    switch (p.block) {
      case ParamBlock::kIntercept: v = params.a[p.equation]; break;
      case ParamBlock::kFixed: v = params.alpha(p.equation, p.column - 1 - g); break;
      case ParamBlock::kControl: v = params.gamma(p.equation, p.column - 1 - g - k); break;
      case ParamBlock::kPrice: v = params.C(p.equation, p.column - 1); break;
    }
    const auto qi = static_cast<Eigen::Index>(q);
    const double var = cov.matrix(qi, qi);
    if (!std::isfinite(var) || var < 0.0) {
      throw Error(ErrorCode::kSingularMatrix, "information matrix is singular at " + p.name);
    }
    const double se = std::sqrt(var);
    out.push_back({p.name, v, se, two_sided_p(v, se)});
  }
  return out;
}

namespace {

Json estimates_json(const std::vector<ParameterEstimate>& v) {
  Json arr = Json::array();
  for (const auto& e : v) {
    arr.push_back({{"name", e.name}, {"value", e.value}, {"se", e.se}, {"p_value", e.p_value}});
  }
  return arr;
}

}  // namespace

Json report_to_json(const EstimateReport& report) {
  Json j;
  j["estimator"] = "restricted_sur_iterated_fgls";
  j["params"] = params_to_json(report.params);
  j["system"] = estimates_json(report.system);
  j["numeraire_equation"] = estimates_json(report.numeraire);
  j["residual_covariance"] = to_json(report.residual_covariance);
  Json iters = Json::array();
  for (const auto& r : report.iterations) {
    iters.push_back({{"iteration", r.iteration},
                     {"relative_change", std::isnan(r.relative_change) ? Json(nullptr) : Json(r.relative_change)}});
  }
  j["iterations"] = iters;
  j["converged"] = report.converged;
  j["exact_fit"] = report.exact_fit;
  j["observations"] = report.observations;
  j["weighted"] = report.weighted;
  return j;
}

std::string parameters_csv(const EstimateReport& report, bool pretty) {
  std::ostringstream out;
  csv::write_row(out, {"equation", "name", "value", "se", "p_value"});
  for (const auto& e : report.system) {
    csv::write_row(out, {"system", e.name, csv::format_number(e.value, pretty),
                         csv::format_number(e.se, pretty), csv::format_number(e.p_value, pretty)});
  }
  for (const auto& e : report.numeraire) {
    csv::write_row(out, {"numeraire", e.name, csv::format_number(e.value, pretty),
                         csv::format_number(e.se, pretty), csv::format_number(e.p_value, pretty)});
  }
  return out.str();
}

}  // namespace netputsim
