#include "candual/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace candual {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw std::runtime_error("problem file: " + path + " " + what);
}

const json& field(const json& j, const std::string& key) {
  auto it = j.find(key);
  if (it == j.end()) schema_error(key, "is missing");
  return *it;
}

int int_field(const json& j, const std::string& key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) schema_error(key, "must be an integer");
  return v.get<int>();
}

std::vector<double> number_array(const json& v, const std::string& path, std::size_t expect) {
  if (!v.is_array()) schema_error(path, "must be an array");
  if (v.size() != expect) {
    std::ostringstream os;
    os << "must have " << expect << " entries, got " << v.size();
    schema_error(path, os.str());
  }
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!v[k].is_number()) schema_error(path + "[" + std::to_string(k) + "]", "must be a number");
    out.push_back(v[k].get<double>());
  }
  return out;
}

Matrix matrix_from_row_major(const std::vector<double>& entries, int n) {
  Matrix M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = entries[static_cast<std::size_t>(i) * n + j];
  return M;
}

std::vector<double> row_major_entries(const Matrix& M) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(M.rows()) * M.cols());
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j) out.push_back(M(i, j));
  return out;
}

void apply_config_overrides(const json& j, SolveConfig& cfg) {
  if (!j.is_object()) schema_error("config", "must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "grad_tol") cfg.grad_tol = value.get<double>();
    else if (key == "max_iter") cfg.max_iter = value.get<int>();
    else if (key == "cone_margin") cfg.cone_margin = value.get<double>();
    else if (key == "multistart_count") cfg.multistart_count = value.get<int>();
    else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
    else if (key == "tau_floor") cfg.tau_floor = value.get<double>();
    else if (key == "singular_tol") cfg.singular_tol = value.get<double>();
    else if (key == "gap_tol") cfg.gap_tol = value.get<double>();
    else schema_error("config." + key, "is not a recognized setting");
  }
  cfg.validate();
}

json vector_to_json(const Vector& v) {
  json a = json::array();
  for (int k = 0; k < v.size(); ++k) a.push_back(v[k]);
  return a;
}

void write_csv_value(std::ostream& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

}  // namespace

LoadedProblem read_problem_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("problem file: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) schema_error("document", "must be a JSON object");

  const int n = int_field(j, "n");
  const int p = int_field(j, "p");
  const int r = int_field(j, "r");
  if (n < 1) schema_error("n", "must be at least 1");
  if (p < 0 || r < 0) schema_error("p/r", "must be non-negative");

  const auto read_matrices = [&](const char* key, int count) {
    const json& arr = field(j, key);
    if (!arr.is_array()) schema_error(key, "must be an array");
    if (static_cast<int>(arr.size()) != count) {
      std::ostringstream os;
      os << "must list " << count << " matrices, got " << arr.size();
      schema_error(key, os.str());
    }
    std::vector<Matrix> out;
    for (int k = 0; k < count; ++k) {
      const std::string path = std::string(key) + "[" + std::to_string(k) + "]";
      out.push_back(matrix_from_row_major(
          number_array(arr[k], path, static_cast<std::size_t>(n) * n), n));
    }
    return out;
  };

  std::vector<Matrix> A = read_matrices("A", p);
  std::vector<double> alpha = number_array(field(j, "alpha"), "alpha", p);
  std::vector<Matrix> B = read_matrices("B", r);
  std::vector<double> beta = number_array(field(j, "beta"), "beta", r);
  Matrix C = matrix_from_row_major(
      number_array(field(j, "C"), "C", static_cast<std::size_t>(n) * n), n);
  std::vector<double> fv = number_array(field(j, "f"), "f", n);
  Vector f = Eigen::Map<const Vector>(fv.data(), n);

  LoadedProblem loaded{PrimalProblem(std::move(A), std::move(alpha), std::move(B),
                                     std::move(beta), std::move(C), std::move(f)),
                       SolveConfig{}};
  if (auto it = j.find("config"); it != j.end()) apply_config_overrides(*it, loaded.config);
  return loaded;
}

LoadedProblem read_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open problem file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return read_problem_json(buffer.str());
}

std::string problem_to_json(const PrimalProblem& prob) {
  json j;
  j["n"] = prob.n();
  j["p"] = prob.p();
  j["r"] = prob.r();
  j["A"] = json::array();
  for (const auto& M : prob.A()) j["A"].push_back(row_major_entries(M));
  j["alpha"] = prob.alpha();
  j["B"] = json::array();
  for (const auto& M : prob.B()) j["B"].push_back(row_major_entries(M));
  j["beta"] = prob.beta();
  j["C"] = row_major_entries(prob.C());
  j["f"] = vector_to_json(prob.f());
  return j.dump(2) + "\n";
}

void write_problem_file(const std::string& path, const PrimalProblem& prob) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write problem file: " + path);
  out << problem_to_json(prob);
}

std::string reports_to_json(const std::vector<CriticalPointReport>& reports) {
  json arr = json::array();
  for (const auto& rep : reports) {
    json j;
    j["tau"] = vector_to_json(rep.zeta.tau);
    j["sigma"] = vector_to_json(rep.zeta.sigma);
    j["x"] = vector_to_json(rep.x);
    j["domain"] = to_string(rep.domain);
    j["triality"] = to_string(rep.triality);
    j["primal_value"] = rep.primal_value;
    j["dual_value"] = rep.dual_value;
    j["gap_residual"] = rep.gap_residual;
    j["delta"] = rep.delta;
    j["grad_norm_dual"] = rep.grad_norm_dual;
    j["grad_norm_primal"] = rep.grad_norm_primal;
    j["converged"] = rep.converged;
    j["iterations"] = rep.iterations;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

void write_primal_contour(std::ostream& out, const PrimalProblem& prob,
                          double lo1, double hi1, double lo2, double hi2, int res) {
  if (prob.n() != 2)
    throw std::invalid_argument("primal contour requires n == 2");
  if (res < 2) throw std::invalid_argument("resolution must be at least 2");
  out << "x1,x2,pi\n";
  Vector x(2);
  for (int i = 0; i < res; ++i) {
    x[0] = lo1 + i * (hi1 - lo1) / (res - 1);
    for (int j = 0; j < res; ++j) {
      x[1] = lo2 + j * (hi2 - lo2) / (res - 1);
      write_csv_value(out, x[0]);
      out << ',';
      write_csv_value(out, x[1]);
      out << ',';
      write_csv_value(out, eval_primal(prob, x));
      out << '\n';
    }
  }
}

void write_dual_contour(std::ostream& out, const PrimalProblem& prob,
                        double lo1, double hi1, double lo2, double hi2, int res,
                        double singular_tol) {
  if (prob.m() != 2)
    throw std::invalid_argument("dual contour requires p + r == 2");
  if (res < 2) throw std::invalid_argument("resolution must be at least 2");
  out << (prob.p() == 2 ? "tau1,tau2,pid\n"
          : prob.p() == 1 ? "tau,sigma,pid\n"
                          : "sigma1,sigma2,pid\n");
  for (int i = 0; i < res; ++i) {
    const double z1 = lo1 + i * (hi1 - lo1) / (res - 1);
    for (int j = 0; j < res; ++j) {
      const double z2 = lo2 + j * (hi2 - lo2) / (res - 1);
      write_csv_value(out, z1);
      out << ',';
      write_csv_value(out, z2);
      out << ',';
      Vector z(2);
      z << z1, z2;
      DualPoint zeta = DualPoint::from_stacked(prob.p(), z);
      bool ok = true;
      for (int k = 0; k < zeta.tau.size(); ++k)
        if (!(zeta.tau[k] > 0.0)) ok = false;
      if (ok) {
        try {
          write_csv_value(out, eval_dual(prob, zeta, singular_tol));
        } catch (const SingularGError&) {
          ok = false;
        }
      }
      if (!ok) out << "NA";
      out << '\n';
    }
  }
}

}  // namespace candual
