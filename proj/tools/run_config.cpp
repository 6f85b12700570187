#include "run_config.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cholesteric/energy.hpp"
#include "cholesteric/errors.hpp"
#include "cholesteric/fields.hpp"
#include "cholesteric/kernel_io.hpp"
#include "cholesteric/kernels.hpp"
#include "cholesteric/minimize.hpp"
#include "cholesteric/oflimit.hpp"
#include "cholesteric/version.hpp"

namespace chol::cli {
namespace {

using nlohmann::json;

const std::set<std::string> kCommands{"bulk-solve", "bulk-map", "frank", "gamma", "minimize", "validate-kernels"};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double parse_double(const std::string& s, const std::string& key) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError(key, "not a number: '" + s + "'");
  }
  if (pos != s.size() || !std::isfinite(v)) throw ConfigError(key, "not a finite number: '" + s + "'");
  return v;
}

std::optional<double> helix_wavenumber(const std::string& init) {
  if (init.rfind("helix:", 0) != 0) return std::nullopt;
  return parse_double(init.substr(6), "init");
}

struct Model {
  KernelSet kernels;
  double rho0 = 0.0;
};

Model load_model(const RunConfig& cfg) {
  Model m;
  if (cfg.kernel.empty()) {
    m.kernels = KernelSet::demo();
    m.rho0 = kDemoRho0;
  } else {
    const KernelConfig kc = load_kernel_config(cfg.kernel);
    m.kernels = kc.kernels;
    m.rho0 = kc.rho0.value_or(0.0);
  }
  if (cfg.rho0) m.rho0 = *cfg.rho0;
  if (cfg.tau || cfg.alpha) {
    const ModelParams p = derive_params(m.kernels, m.rho0, cfg.eps);
    m.kernels = m.kernels.rescaled_to(cfg.tau.value_or(p.tau), cfg.alpha.value_or(p.alpha));
  }
  return m;
}

json derived_constants(const Model& m, double eps) {
  const ModelParams p = derive_params(m.kernels, m.rho0, eps);
  const LimitCoefficients c = limit_coefficients(m.kernels, p);
  return {{"tau", p.tau},   {"alpha", p.alpha}, {"rho0", m.rho0},
          {"k0_HH", p.kHH0()}, {"k0_HD", p.kHD0()}, {"k0_DD", p.kDD0},
          {"beta", c.beta}, {"K11", c.K11},     {"K22", c.K22},
          {"K33", c.K33},   {"s0", c.s0},       {"sc", c.sc},
          {"htp_dimensionless", c.sc / c.s0},   {"q", c.q},
          {"m_star", quantize_wavenumber(c.q)}};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path);
}

class Manifest {
 public:
  explicit Manifest(const RunConfig& cfg) : start_(std::chrono::steady_clock::now()) {
    doc_["tool"] = "cholesteric";
    doc_["version"] = version();
    doc_["command"] = cfg.command;
    doc_["config"] = cfg.to_json();
    doc_["derived"] = json::object();
    doc_["outputs"] = json::array();
  }
  json& derived() { return doc_["derived"]; }
  void output(const std::string& path) { doc_["outputs"].push_back(path); }
  void write(const std::string& path) {
    doc_["wall_time_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    write_text(path, doc_.dump(2) + "\n");
  }

 private:
  json doc_;
  std::chrono::steady_clock::time_point start_;
};

TorusGrid make_grid(const RunConfig& cfg) { return cfg.full3d ? TorusGrid(cfg.grid) : TorusGrid::thin(cfg.grid); }

int cmd_bulk_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (!cfg.tau || !cfg.alpha) throw ConfigError("tau", "bulk solve needs --tau and --alpha");
  const BulkSolution b = solve_bulk(*cfg.tau);
  if (!(b.s0 > 0.0)) {
    err << "isotropic phase at tau=" << fmt(*cfg.tau) << ": no nematic order, HTP undefined\n";
    return kNumericalFailure;
  }
  const double sc = solve_sc(*cfg.tau, *cfg.alpha);
  out << "tau=" << fmt(*cfg.tau) << " alpha=" << fmt(*cfg.alpha) << " s0=" << fmt(b.s0) << " sc=" << fmt(sc)
      << " htp=" << fmt(sc / b.s0) << " coexistence=" << (b.coexistence ? 1 : 0) << '\n';
  if (!cfg.out.empty()) {
    Manifest man(cfg);
    man.derived() = {{"s0", b.s0}, {"sc", sc}, {"htp_dimensionless", sc / b.s0}, {"mu0", b.mu0}};
    man.write(cfg.out + ".manifest.json");
  }
  return kOk;
}

int cmd_bulk_map(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const HtpMap map = htp_map(cfg.tau_range.values(), cfg.alpha_range.values());
  bool any = false;
  for (Eigen::Index i = 0; i < map.htp.size(); ++i) any = any || std::isfinite(map.htp.data()[i]);
  if (!any) {
    err << "empty nematic range: every tau in [" << fmt(cfg.tau_range.start) << ", " << fmt(cfg.tau_range.stop)
        << "] is isotropic (critical 1/tau = " << fmt(critical_coupling()) << ")\n";
    return kNumericalFailure;
  }
  if (cfg.out.empty()) {
    write_htp_csv(map, out);
    return kOk;
  }
  Manifest man(cfg);
  for (const auto& p : emit_plotdata(map, cfg.out)) man.output(p);
  man.derived() = {{"critical_coupling", critical_coupling()}};
  man.write(cfg.out + ".manifest.json");
  return kOk;
}

int cmd_frank(const RunConfig& cfg, std::ostream& out) {
  const Model m = load_model(cfg);
  const json d = derived_constants(m, cfg.eps);
  out << "K11,K22,K33,beta,q\n";
  const char* sep = "";
  for (const char* k : {"K11", "K22", "K33", "beta", "q"}) {
    out << sep << fmt(d[k].get<double>());
    sep = ",";
  }
  out << '\n';
  if (!cfg.out.empty()) {
    Manifest man(cfg);
    man.derived() = d;
    man.write(cfg.out + ".manifest.json");
  }
  return kOk;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  const Model m = load_model(cfg);
  const AssumptionReport r = validate_assumptions(m.kernels);
  out << "C1=" << fmt(r.C1) << " C2=" << fmt(r.C2) << " C_chiral=" << fmt(r.C_chiral) << " g_min=" << fmt(r.g_min)
      << " samples=" << r.samples << '\n';
  for (const auto& v : r.violations) out << "violation: " << v << '\n';
  out << (r.pass() ? "PASS" : "FAIL") << '\n';
  return r.pass() ? kOk : kAssumptionViolation;
}

int cmd_minimize(const RunConfig& cfg, std::ostream& out) {
  const Model m = load_model(cfg);
  const TorusGrid g = make_grid(cfg);
  const EnergyModel model(m.kernels, m.rho0, cfg.eps, g, Periodization::Spectral,
                          SphereQuadrature::with_degree(cfg.quad_degree));
  const ModelParams& p = model.params();
  const LimitCoefficients c = limit_coefficients(m.kernels, p);

  MinimizeOptions opt;
  opt.method = cfg.method == "gd" ? DescentMethod::GradientDescent : DescentMethod::LBFGS;
  opt.max_iterations = cfg.max_iterations;
  opt.gradient_tol = cfg.gradient_tol;
  opt.slab = !cfg.full3d;

  Manifest man(cfg);
  man.derived() = derived_constants(m, cfg.eps);
  std::optional<MinimizeResult> res;
  if (cfg.init == "random") {
    MultiStartResult ms = minimize_random_starts(model, cfg.seed, cfg.starts, opt);
    man.derived()["start_seeds"] = ms.seeds;
    man.derived()["start_energies"] = ms.energies;
    man.derived()["best_start"] = ms.best_index;
    res.emplace(std::move(ms.best));
  } else if (cfg.init == "constant") {
    res.emplace(minimize(constant_field(c.s0, c.sc, g), model, opt));
  } else {
    res.emplace(minimize(helical_ansatz(*helix_wavenumber(cfg.init), c.s0, c.sc, g), model, opt));
  }

  const WavenumberFit fit = extract_wavenumber(res->field);
  const double energy = res->energy_trace.back();
  out << "iterations=" << res->iterations << " converged=" << (res->converged ? 1 : 0)
      << " energy=" << fmt(energy) << " m=" << fmt(fit.m) << " fit_degraded=" << (fit.degraded ? 1 : 0)
      << " xi_lock=" << fmt(res->xi_lock / res->q_norm) << " max_biaxiality=" << fmt(res->max_biaxiality) << '\n';
  if (!std::isfinite(energy)) return kNumericalFailure;

  if (!cfg.out.empty()) {
    write_field(cfg.out, res->field, {cfg.eps, p});
    man.output(cfg.out + ".json");
    man.output(cfg.out + ".bin");
    std::ostringstream trace;
    trace << "iteration,energy\n" << std::setprecision(17);
    for (std::size_t i = 0; i < res->energy_trace.size(); ++i) trace << i << ',' << res->energy_trace[i] << '\n';
    write_text(cfg.out + ".trace.csv", trace.str());
    man.output(cfg.out + ".trace.csv");
    man.derived()["energy"] = energy;
    man.derived()["m_extracted"] = fit.m;
    man.derived()["converged"] = res->converged;
    man.write(cfg.out + ".manifest.json");
  }
  return kOk;
}

int cmd_gamma(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Model m = load_model(cfg);
  const AssumptionReport rep = validate_assumptions(m.kernels);
  if (!rep.pass()) {
    for (const auto& v : rep.violations) err << "kernel assumption violated: " << v << '\n';
    return kAssumptionViolation;
  }
  GammaOptions opt;
  opt.run_minimizer = cfg.run_minimizer;
  opt.seed = cfg.seed;
  opt.starts = cfg.starts;
  opt.max_iterations = cfg.max_iterations;
  opt.quad_degree = cfg.quad_degree;
  const auto rows = gamma_gap(m.kernels, m.rho0, cfg.eps_list, make_grid(cfg), opt);
  std::ostringstream csv;
  write_gamma_csv(rows, csv);
  if (cfg.out.empty()) {
    out << csv.str();
  } else {
    Manifest man(cfg);
    man.derived() = derived_constants(m, cfg.eps_list.back());
    write_text(cfg.out + ".csv", csv.str());
    man.output(cfg.out + ".csv");
    man.write(cfg.out + ".manifest.json");
  }
  int code = kOk;
  for (const auto& r : rows) {
    if (r.status != "ok") {
      err << "eps=" << fmt(r.eps) << ": " << r.status << '\n';
      code = kNumericalFailure;
    }
  }
  return code;
}

}  // namespace

std::vector<double> Range::values() const {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = count == 1 ? start : start + (stop - start) * i / (count - 1);
  return v;
}

Range parse_range(const std::string& text, const std::string& key) {
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? a : text.find(':', a + 1);
  if (a == std::string::npos || b == std::string::npos) throw ConfigError(key, "expected start:stop:count");
  Range r;
  r.start = parse_double(text.substr(0, a), key);
  r.stop = parse_double(text.substr(a + 1, b - a - 1), key);
  const double n = parse_double(text.substr(b + 1), key);
  if (n < 1 || n != std::floor(n) || n > 1e6) throw ConfigError(key, "count must be a positive integer");
  r.count = static_cast<int>(n);
  return r;
}

void RunConfig::validate() const {
  if (!kCommands.count(command)) throw ConfigError("command", "unknown command '" + command + "'");
  if (tau && !(*tau > 0.0)) throw ConfigError("tau", "must be positive");
  if (alpha && !std::isfinite(*alpha)) throw ConfigError("alpha", "must be finite");
  if (rho0 && !(*rho0 >= 0.0)) throw ConfigError("rho0", "must be nonnegative");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ConfigError("eps", "must be positive");
  if (eps_list.empty()) throw ConfigError("eps_list", "must not be empty");
  for (double e : eps_list)
    if (!(e > 0.0) || !std::isfinite(e)) throw ConfigError("eps_list", "entries must be positive");
  if (grid < 4 || grid % 2 != 0) throw ConfigError("grid", "must be even and at least 4");
  if (init != "random" && init != "constant") {
    const auto m = helix_wavenumber(init);
    if (!m) throw ConfigError("init", "expected random, constant or helix:M");
    if (2.0 * *m != std::round(2.0 * *m)) throw ConfigError("init", "helix wavenumber must be a multiple of 1/2");
  }
  if (starts < 1) throw ConfigError("starts", "must be at least 1");
  if (max_iterations < 0) throw ConfigError("max_iterations", "must be nonnegative");
  if (!(gradient_tol > 0.0)) throw ConfigError("gradient_tol", "must be positive");
  if (quad_degree < 7 || quad_degree > 511) throw ConfigError("quad_degree", "must lie in [7, 511]");
  if (method != "lbfgs" && method != "gd") throw ConfigError("method", "expected lbfgs or gd");
  for (const auto* r : {&tau_range, &alpha_range}) {
    const std::string key = r == &tau_range ? "tau_range" : "alpha_range";
    if (r->count < 1) throw ConfigError(key, "count must be positive");
  }
  if (!(tau_range.start > 0.0 && tau_range.stop > 0.0)) throw ConfigError("tau_range", "taus must be positive");
}

json RunConfig::to_json() const {
  json j{{"command", command},
         {"kernel", kernel},
         {"eps", eps},
         {"eps_list", eps_list},
         {"grid", grid},
         {"full3d", full3d},
         {"init", init},
         {"seed", seed},
         {"starts", starts},
         {"max_iterations", max_iterations},
         {"gradient_tol", gradient_tol},
         {"quad_degree", quad_degree},
         {"method", method},
         {"minimize", run_minimizer},
         {"tau_range", fmt(tau_range.start) + ":" + fmt(tau_range.stop) + ":" + std::to_string(tau_range.count)},
         {"alpha_range",
          fmt(alpha_range.start) + ":" + fmt(alpha_range.stop) + ":" + std::to_string(alpha_range.count)},
         {"out", out}};
  if (tau) j["tau"] = *tau;
  if (alpha) j["alpha"] = *alpha;
  if (rho0) j["rho0"] = *rho0;
  return j;
}

RunConfig parse_run_config(const json& j) {
  if (!j.is_object()) throw ConfigError("", "run config must be a JSON object");
  RunConfig c;
  auto num = [&](const std::string& k) {
    if (!j.at(k).is_number()) throw ConfigError(k, "expected a number");
    return j.at(k).get<double>();
  };
  auto integer = [&](const std::string& k) {
    if (!j.at(k).is_number_integer()) throw ConfigError(k, "expected an integer");
    return j.at(k).get<long long>();
  };
  auto str = [&](const std::string& k) {
    if (!j.at(k).is_string()) throw ConfigError(k, "expected a string");
    return j.at(k).get<std::string>();
  };
  auto boolean = [&](const std::string& k) {
    if (!j.at(k).is_boolean()) throw ConfigError(k, "expected true or false");
    return j.at(k).get<bool>();
  };
  for (const auto& [k, v] : j.items()) {
    if (k == "command") c.command = str(k);
    else if (k == "kernel") c.kernel = str(k);
    else if (k == "tau") c.tau = num(k);
    else if (k == "alpha") c.alpha = num(k);
    else if (k == "rho0") c.rho0 = num(k);
    else if (k == "eps") c.eps = num(k);
    else if (k == "eps_list") {
      if (!v.is_array()) throw ConfigError(k, "expected an array");
      c.eps_list.clear();
      for (const auto& e : v) {
        if (!e.is_number()) throw ConfigError(k, "expected numbers");
        c.eps_list.push_back(e.get<double>());
      }
    } else if (k == "grid") c.grid = static_cast<int>(integer(k));
    else if (k == "full3d") c.full3d = boolean(k);
    else if (k == "init") c.init = str(k);
    else if (k == "seed") {
      if (!v.is_number_unsigned()) throw ConfigError(k, "expected a nonnegative integer");
      c.seed = v.get<std::uint64_t>();
    } else if (k == "starts") c.starts = static_cast<int>(integer(k));
    else if (k == "max_iterations") c.max_iterations = static_cast<int>(integer(k));
    else if (k == "gradient_tol") c.gradient_tol = num(k);
    else if (k == "quad_degree") c.quad_degree = static_cast<int>(integer(k));
    else if (k == "method") c.method = str(k);
    else if (k == "minimize") c.run_minimizer = boolean(k);
    else if (k == "tau_range") c.tau_range = parse_range(str(k), k);
    else if (k == "alpha_range") c.alpha_range = parse_range(str(k), k);
    else if (k == "out") c.out = str(k);
    else throw ConfigError(k, "unknown key");
  }
  if (c.command.empty()) throw ConfigError("command", "missing");
  c.validate();
  return c;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
    if (cfg.command == "bulk-solve") return cmd_bulk_solve(cfg, out, err);
    if (cfg.command == "bulk-map") return cmd_bulk_map(cfg, out, err);
    if (cfg.command == "frank") return cmd_frank(cfg, out);
    if (cfg.command == "validate-kernels") return cmd_validate(cfg, out);
    if (cfg.command == "minimize") return cmd_minimize(cfg, out);
    return cmd_gamma(cfg, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ConvergenceError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

void write_htp_matrix(const HtpMap& map, std::ostream& os) {
  os << std::setprecision(17) << map.taus.size();
  for (double t : map.taus) os << ' ' << t;
  os << '\n';
  for (std::size_t i = 0; i < map.alphas.size(); ++i) {
    os << map.alphas[i];
    for (std::size_t j = 0; j < map.taus.size(); ++j)
      os << ' ' << map.htp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    os << '\n';
  }
}

namespace {

double read_value(const std::string& tok) {
  if (tok == "nan" || tok == "NaN" || tok == "-nan") return std::numeric_limits<double>::quiet_NaN();
  return std::stod(tok);
}

}  // namespace

HtpMap read_htp_matrix(std::istream& is) {
  HtpMap m;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("matrix: empty input");
  std::istringstream head(line);
  std::string tok;
  head >> tok;
  const auto nt = static_cast<std::size_t>(read_value(tok));
  while (head >> tok) m.taus.push_back(read_value(tok));
  if (m.taus.size() != nt) throw std::runtime_error("matrix: column count does not match header");
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    row >> tok;
    m.alphas.push_back(read_value(tok));
    rows.emplace_back();
    while (row >> tok) rows.back().push_back(read_value(tok));
    if (rows.back().size() != nt) throw std::runtime_error("matrix: ragged row");
  }
  m.htp.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(nt));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < nt; ++j) m.htp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

HtpMap read_htp_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "tau,alpha,s0,sc,htp") throw std::runtime_error("csv: unexpected header");
  struct Cell {
    double tau, alpha, s0, sc, htp;
  };
  std::vector<Cell> cells;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string f[5];
    for (auto& s : f)
      if (!std::getline(row, s, ',')) throw std::runtime_error("csv: short row");
    cells.push_back({read_value(f[0]), read_value(f[1]), read_value(f[2]), read_value(f[3]), read_value(f[4])});
  }
  HtpMap m;
  for (const auto& c : cells) {
    if (m.alphas.empty() || c.alpha != m.alphas.back()) m.alphas.push_back(c.alpha);
    if (m.alphas.size() == 1) m.taus.push_back(c.tau);
  }
  if (m.taus.empty() || cells.size() != m.taus.size() * m.alphas.size()) throw std::runtime_error("csv: ragged table");
  const auto na = static_cast<Eigen::Index>(m.alphas.size()), nt = static_cast<Eigen::Index>(m.taus.size());
  m.s0.resize(na, nt);
  m.sc.resize(na, nt);
  m.htp.resize(na, nt);
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(k / m.taus.size()), j = static_cast<Eigen::Index>(k % m.taus.size());
    m.s0(i, j) = cells[k].s0;
    m.sc(i, j) = cells[k].sc;
    m.htp(i, j) = cells[k].htp;
  }
  return m;
}

std::vector<std::string> emit_plotdata(const HtpMap& map, const std::string& csv_path) {
  if (map.taus.empty() || map.alphas.empty()) throw std::invalid_argument("emit_plotdata: empty table");
  std::string matrix_path = csv_path;
  const auto dot = matrix_path.find_last_of('.');
  const auto slash = matrix_path.find_last_of('/');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) matrix_path.erase(dot);
  matrix_path += ".matrix";
  std::ostringstream csv, mat;
  write_htp_csv(map, csv);
  write_htp_matrix(map, mat);
  write_text(csv_path, csv.str());
  write_text(matrix_path, mat.str());
  return {csv_path, matrix_path};
}

}  // namespace chol::cli
