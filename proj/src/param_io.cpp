#include "netputsim/param_io.hpp"

#include <fstream>

#include "netputsim/error.hpp"

namespace netputsim {

Json to_json(const Vector& v) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

Json to_json(const Matrix& m) {
  Json j = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    j.push_back(std::move(row));
  }
  return j;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::kParse, "expected a JSON array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::kParse, "expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorCode::kParse, "ragged matrix row " + std::to_string(r));
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

Json params_to_json(const ParameterSet& p) {
  Json j;
  j["industry_id"] = std::string(to_string(p.industry));
  j["per_hectare"] = p.per_hectare;
  j["scale_note"] = p.scale_note;
  j["netput_names"] = p.netput_names;
  j["fixed_names"] = p.fixed_names;
  j["control_names"] = p.control_names;
  j["a"] = to_json(p.a);
  j["b"] = to_json(p.b);
  j["C"] = to_json(p.C);
  j["D"] = to_json(p.D);
  j["alpha"] = to_json(p.alpha);
  j["gamma"] = to_json(p.gamma);
  j["gamma_m"] = to_json(p.gamma_m);
  j["a_m"] = p.a_m;
  if (p.numeraire_effects) {
    const NumeraireEffects& ne = *p.numeraire_effects;
    j["numeraire_effects"] = {{"eval_raw_prices", to_json(ne.eval_raw_prices)},
                              {"eval_p0", ne.eval_p0},
                              {"netput_wrt_p0", to_json(ne.netput_wrt_p0)},
                              {"numeraire_wrt_price", to_json(ne.numeraire_wrt_price)},
                              {"numeraire_own", ne.numeraire_own}};
  } else {
    j["numeraire_effects"] = nullptr;
  }
  if (p.covariance) {
    j["covariance"] = {{"names", p.covariance->names}, {"matrix", to_json(p.covariance->matrix)}};
  } else {
    j["covariance"] = nullptr;
  }
  return j;
}

ParameterSet params_from_json(const Json& j) {
  try {
    ParameterSet p;
    p.industry = parse_industry(j.at("industry_id").get<std::string>());
    p.per_hectare = j.at("per_hectare").get<bool>();
    p.scale_note = j.value("scale_note", std::string(p.per_hectare ? "per_hectare" : "level"));
    p.netput_names = j.value("netput_names", std::vector<std::string>{});
    p.fixed_names = j.value("fixed_names", std::vector<std::string>{});
    p.control_names = j.value("control_names", std::vector<std::string>{});
    p.a = vector_from_json(j.at("a"));
    p.b = vector_from_json(j.at("b"));
    p.C = matrix_from_json(j.at("C"));
    p.D = matrix_from_json(j.at("D"));
    if (p.D.size() == 0) p.D = Matrix::Zero(p.b.size(), p.b.size());
    p.alpha = matrix_from_json(j.at("alpha"));
    if (p.alpha.size() == 0) p.alpha = Matrix::Zero(p.a.size(), p.b.size());
    p.a_m = j.at("a_m").get<double>();
    if (j.contains("gamma") && !j["gamma"].empty()) {
      p.gamma = matrix_from_json(j["gamma"]);
    } else {
      p.gamma = Matrix::Zero(p.a.size(), 0);
    }
    p.gamma_m = j.contains("gamma_m") ? vector_from_json(j["gamma_m"]) : Vector::Zero(p.gamma.cols());
    if (j.contains("numeraire_effects") && !j["numeraire_effects"].is_null()) {
      const Json& ne = j["numeraire_effects"];
      NumeraireEffects e;
      e.eval_raw_prices = vector_from_json(ne.at("eval_raw_prices"));
      e.eval_p0 = ne.at("eval_p0").get<double>();
      e.netput_wrt_p0 = vector_from_json(ne.at("netput_wrt_p0"));
      e.numeraire_wrt_price = vector_from_json(ne.at("numeraire_wrt_price"));
      e.numeraire_own = ne.at("numeraire_own").get<double>();
      p.numeraire_effects = std::move(e);
    }
    if (j.contains("covariance") && !j["covariance"].is_null()) {
      ParameterCovariance cov;
      cov.names = j["covariance"].at("names").get<std::vector<std::string>>();
      cov.matrix = matrix_from_json(j["covariance"].at("matrix"));
      p.covariance = std::move(cov);
    }
    p.validate();
    return p;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed parameter JSON: ") + e.what());
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

void write_json_file(const Json& j, const std::filesystem::path& path, bool pretty) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << (pretty ? j.dump(2) : j.dump()) << '\n';
}

ParameterSet load_params(const std::filesystem::path& path) {
  Json j = read_json_file(path);
  // Estimate reports wrap the parameter set under "params".
  if (j.contains("params") && j["params"].is_object()) return params_from_json(j["params"]);
  return params_from_json(j);
}

void save_params(const ParameterSet& params, const std::filesystem::path& path,
                 const Json& metadata, bool pretty) {
  Json j = params_to_json(params);
  if (!metadata.empty()) j["metadata"] = metadata;
  write_json_file(j, path, pretty);
}

}  // namespace netputsim
