#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <sstream>

#include "qnm/biorthogonal.hpp"
#include "qnm/dynamics.hpp"
#include "qnm/error.hpp"
#include "qnm/model_io.hpp"
#include "qnm/perturb.hpp"
#include "qnm/report.hpp"
#include "qnm/spectrum.hpp"

namespace qnm::cli {

namespace {

using ojson = nlohmann::ordered_json;

ojson to_json(cplx z) {
  ojson j;
  j["re"] = z.real();
  j["im"] = z.imag();
  return j;
}

// CSV rows joined with ',' and formatted without locale dependence.
class Csv {
 public:
  explicit Csv(const std::string& header) { text_ = header + "\n"; }
  template <typename... T>
  void row(const T&... cells) {
    std::string line;
    ((line += (line.empty() ? "" : ",") + cell(cells)), ...);
    text_ += line + "\n";
  }
  const std::string& text() const { return text_; }

 private:
  static std::string cell(double v) { return format_double(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  std::string text_;
};

struct Output {
  ojson result;
  std::string csv;
  std::vector<std::string> warnings;
};

struct Loaded {
  DensityProfile model;
  std::string sha256;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::InvalidConfig, what);
}

std::vector<QnmMode> normalized(const std::vector<QnmMode>& modes, const DensityProfile& model) {
  std::vector<QnmMode> out;
  out.reserve(modes.size());
  for (const auto& m : modes) out.push_back(normalize_mode(m, model));
  return out;
}

SearchRegion region_of(const RunConfig& c) { return {c.re_min, c.re_max, c.im_min, c.im_max, c.tol}; }

// Position after the first `pairs` pair groups of a paired spectrum.
std::size_t prefix_for_pairs(const std::vector<QnmMode>& modes, int pairs) {
  int seen = 0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (modes[i].omega.real() >= 0.0) {
      if (seen == pairs) return i;
      ++seen;
    }
  }
  return modes.size();
}

Output run_solve(const RunConfig& c, const DensityProfile& model) {
  auto modes = find_modes(model, region_of(c));
  if (c.n_modes && static_cast<std::size_t>(*c.n_modes) < modes.size()) modes.resize(*c.n_modes);
  const auto norm = normalized(modes, model);
  Output out;
  out.result["count"] = norm.size();
  auto list = ojson::array();
  Csv csv("index,omega_re,omega_im,residual,partner_abs_W");
  for (std::size_t i = 0; i < norm.size(); ++i) {
    const cplx w = norm[i].omega;
    const double partner = std::abs(characteristic(model, -std::conj(w)).value);
    ojson e;
    e["index"] = i;
    e["omega"] = to_json(w);
    e["re_omega"] = w.real();
    e["im_omega"] = w.imag();
    e["residual"] = norm[i].residual;
    e["partner_abs_W"] = partner;
    e["f_prime_0"] = to_json(norm[i].df(0.0, Side::Right));
    list.push_back(e);
    csv.row(i, w.real(), w.imag(), norm[i].residual, partner);
  }
  out.result["modes"] = list;
  out.csv = csv.text();
  return out;
}

std::vector<cplx> omegas_from_report(const std::string& path) {
  ojson doc;
  try {
    doc = ojson::parse(read_file(path));
  } catch (const ojson::exception& e) {
    throw Error(ErrorKind::ParseError, "modes file: " + std::string(e.what()));
  }
  if (!doc.contains("result") || !doc["result"].contains("modes") || !doc["result"]["modes"].is_array())
    throw Error(ErrorKind::ParseError, "modes file is not a solve report");
  std::vector<cplx> out;
  for (const auto& m : doc["result"]["modes"]) {
    try {
      out.emplace_back(m.at("omega").at("re").get<double>(), m.at("omega").at("im").get<double>());
    } catch (const ojson::exception& e) {
      throw Error(ErrorKind::ParseError, "modes file: " + std::string(e.what()));
    }
  }
  return out;
}

Output run_gram(const RunConfig& c, const DensityProfile& model) {
  std::vector<QnmMode> modes;
  if (!c.modes_path.empty()) {
    for (cplx w : omegas_from_report(c.modes_path)) modes.push_back(build_eigenfunction(model, w));
  } else {
    modes = find_modes(model, region_of(c));
    const std::size_t n = static_cast<std::size_t>(c.n_modes.value_or(10));
    if (n < modes.size()) modes.resize(n);
  }
  const auto norm = normalized(modes, model);
  const auto g = gram_matrix(norm, model);
  Output out;
  auto omegas = ojson::array();
  for (cplx w : g.omegas) omegas.push_back(to_json(w));
  out.result["omegas"] = omegas;
  auto rows = ojson::array();
  Csv csv("n,m,re,im");
  for (std::size_t n = 0; n < g.gram.size(); ++n) {
    auto row = ojson::array();
    for (std::size_t m = 0; m < g.gram[n].size(); ++m) {
      row.push_back(to_json(g.gram[n][m]));
      csv.row(n, m, g.gram[n][m].real(), g.gram[n][m].imag());
    }
    rows.push_back(row);
  }
  out.result["gram"] = rows;
  out.result["offdiag_max"] = g.offdiag_max;
  out.result["diag_max_deviation"] = g.diag_max_deviation;
  out.csv = csv.text();
  return out;
}

Output run_sumrule(const RunConfig& c, const DensityProfile& model) {
  require(c.min_modes >= 1 && c.max_modes >= c.min_modes, "need 1 <= --min-modes <= --max-modes");
  const double width = c.testwidth.value_or(0.1 * model.a());
  const auto modes = normalized(paired_spectrum(model, c.max_modes, -3.0, 0.5, c.tol), model);
  std::vector<int> counts;
  for (int n = c.min_modes; n <= c.max_modes; ++n) counts.push_back(static_cast<int>(prefix_for_pairs(modes, n)));
  const auto sweep = sum_rule_sweep(modes, c.x, c.y, width, model, counts);
  Output out;
  auto table = ojson::array();
  Csv csv("pairs,modes,s1_re,s1_im,s1_abs,s2_re,s2_im,s2_abs");
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const int pairs = c.min_modes + static_cast<int>(i);
    ojson e;
    e["pairs"] = pairs;
    e["modes"] = counts[i];
    e["s1"] = to_json(sweep[i].s1);
    e["s1_abs"] = std::abs(sweep[i].s1);
    e["s2_smeared"] = to_json(sweep[i].s2_smeared);
    e["s2_abs"] = std::abs(sweep[i].s2_smeared);
    table.push_back(e);
    csv.row(pairs, counts[i], sweep[i].s1.real(), sweep[i].s1.imag(), std::abs(sweep[i].s1),
            sweep[i].s2_smeared.real(), sweep[i].s2_smeared.imag(), std::abs(sweep[i].s2_smeared));
  }
  out.result["testwidth"] = width;
  out.result["table"] = table;
  out.result["s1_reduction"] = std::abs(sweep.front().s1) / std::abs(sweep.back().s1);
  out.result["s2_reduction"] = std::abs(sweep.front().s2_smeared) / std::abs(sweep.back().s2_smeared);
  out.csv = csv.text();
  return out;
}

Output run_evolve(const RunConfig& c, const DensityProfile& model) {
  const double a = model.a();
  const double t_end = c.t_end.value_or(6.0 * a), dx = c.dx.value_or(a / 2000.0);
  const double center = c.center.value_or(0.5 * a), width = c.width.value_or(0.1 * a);
  const double x_probe = c.probe.value_or(0.7 * a);
  require(t_end > 0.0 && c.samples >= 2, "need --t-end > 0 and --samples >= 2");
  require(x_probe >= 0.0 && x_probe <= a, "--probe must lie in [0, a]");
  const int pairs = c.n_modes.value_or(30);
  require(pairs >= 1, "--n-modes must be positive");

  std::vector<double> times;
  for (int k = 0; k < c.samples; ++k) times.push_back(t_end * k / (c.samples - 1));
  FdtdOptions opts;
  opts.record_times = times;
  const auto grid = make_grid(model, dx);
  const auto state0 = gaussian_state(model, grid, center, width);
  const auto fdtd = evolve_fdtd(state0, model, t_end, dx, opts);
  const auto modes = normalized(paired_spectrum(model, pairs, -3.0, 0.5, c.tol), model);
  const auto expansion = evolve_qnm(state0, modes, times, model);
  const auto errors = compare_evolutions(expansion, fdtd);
  const auto probe_q = probe(expansion, x_probe), probe_f = probe(fdtd, x_probe);

  Output out;
  out.warnings = expansion.warnings;
  out.result["modes"] = modes.size();
  out.result["fdtd_dt"] = fdtd_time_step(model, a / std::round(a / dx), opts.cfl);
  auto rows = ojson::array();
  Csv csv("t,relative_l2,energy_qnm,energy_fdtd,probe_qnm_re,probe_qnm_im,probe_fdtd_re,probe_fdtd_im");
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double eq = interior_energy(expansion.states[i], model), ef = interior_energy(fdtd.states[i], model);
    ojson e;
    e["t"] = times[i];
    e["relative_l2"] = errors[i].relative_l2;
    e["energy_qnm"] = eq;
    e["energy_fdtd"] = ef;
    e["probe_qnm"] = to_json(probe_q[i]);
    e["probe_fdtd"] = to_json(probe_f[i]);
    e["imag_ratio"] = expansion.imag_ratio[i];
    rows.push_back(e);
    csv.row(times[i], errors[i].relative_l2, eq, ef, probe_q[i].real(), probe_q[i].imag(), probe_f[i].real(),
            probe_f[i].imag());
  }
  out.result["samples"] = rows;
  out.result["max_error_after_a"] = max_error(errors, a, t_end);
  out.csv = csv.text();
  return out;
}

PerturbationSpec perturbation_of(const RunConfig& c, const DensityProfile& model) {
  PerturbationSpec spec;
  if (!c.perturbation_path.empty()) {
    ojson doc;
    try {
      doc = ojson::parse(read_file(c.perturbation_path));
      for (const auto& [key, _] : doc.items())
        if (key != "v") throw Error(ErrorKind::ParseError, "unknown key '" + key + "' in perturbation");
      for (const auto& s : doc.at("v")) {
        for (const auto& [key, _] : s.items())
          if (key != "x_left" && key != "x_right" && key != "value")
            throw Error(ErrorKind::ParseError, "unknown key '" + key + "' in perturbation piece");
        spec.v.push_back({s.at("x_left").get<double>(), s.at("x_right").get<double>(), s.at("value").get<double>()});
      }
    } catch (const ojson::exception& e) {
      throw Error(ErrorKind::ParseError, "perturbation file: " + std::string(e.what()));
    }
  } else {
    spec.v.push_back({c.v_left.value_or(0.2 * model.a()), c.v_right.value_or(0.4 * model.a()), c.v_value});
  }
  return spec;
}

Output run_perturb(const RunConfig& c, const DensityProfile& model) {
  require(c.mode_index >= 0 && c.truncation >= 0, "--mode-index and --truncation must be non-negative");
  auto spec = perturbation_of(c, model);
  std::vector<double> mus = c.mu.empty() ? std::vector<double>{1e-2, 1e-3, 1e-4} : c.mu;
  spec.mu = 0.0;
  validate_perturbation(spec, model);
  for (double mu : mus) {
    auto s = spec;
    s.mu = mu;
    validate_perturbation(s, model);
  }

  const int pairs = std::max(c.mode_index + 1, (c.truncation + 1) / 2);
  const auto modes = normalized(paired_spectrum(model, pairs, -3.0, 0.5, c.tol), model);
  const std::size_t n = prefix_for_pairs(modes, c.mode_index);
  require(n < modes.size(), "--mode-index beyond the computed spectrum");
  const cplx w0 = modes[n].omega;
  const cplx first = first_order_shift(n, modes, spec, model);
  const auto second = second_order_shift(n, modes, spec, model, c.truncation);

  Output out;
  out.warnings = second.warnings;
  out.result["mode_index"] = c.mode_index;
  out.result["omega0"] = to_json(w0);
  out.result["first_order"] = to_json(first);
  ojson so;
  so["value"] = to_json(second.value);
  so["tail_estimate"] = second.tail_estimate;
  so["terms"] = second.terms;
  out.result["second_order"] = so;

  auto exact = ojson::array();
  Csv csv("mu,omega_re,omega_im,residual_re,residual_im,slope_re,slope_im");
  std::vector<double> scaled;
  for (double mu : mus) {
    auto plus = spec, minus = spec;
    plus.mu = mu;
    minus.mu = -mu;
    const cplx wp = exact_shift_oracle(w0, plus, model);
    const cplx residual = wp - w0 - mu * first;
    ojson e;
    e["mu"] = mu;
    e["omega"] = to_json(wp);
    e["residual"] = to_json(residual);
    cplx slope{NAN, NAN};
    if (mu != 0.0) {
      e["residual_over_mu2"] = to_json(residual / (mu * mu));
      scaled.push_back(std::abs(residual) / (mu * mu));
      // -mu may be outside the admissible range; the slope is then omitted
      try {
        slope = (wp - exact_shift_oracle(w0, minus, model)) / (2.0 * mu);
      } catch (const Error&) {
      }
      e["central_slope"] = to_json(slope);
    }
    exact.push_back(e);
    csv.row(mu, wp.real(), wp.imag(), residual.real(), residual.imag(), slope.real(), slope.imag());
  }
  out.result["exact"] = exact;
  auto ratios = ojson::array();
  for (std::size_t i = 0; i + 1 < scaled.size(); ++i) ratios.push_back(scaled[i] / scaled[i + 1]);
  ojson scaling;
  scaling["abs_residual_over_mu2"] = scaled;
  scaling["consecutive_ratios"] = ratios;
  out.result["residual_scaling"] = scaling;
  out.csv = csv.text();
  return out;
}

ojson config_json(const RunConfig& c) {
  ojson j;
  j["command"] = c.command;
  j["model_path"] = c.model_path;
  j["format"] = c.format;
  j["tol"] = c.tol;
  if (c.command == "solve" || c.command == "gram") {
    j["re_min"] = c.re_min;
    j["re_max"] = c.re_max;
    j["im_min"] = c.im_min;
    j["im_max"] = c.im_max;
    if (c.n_modes) j["n_modes"] = *c.n_modes;
    if (!c.modes_path.empty()) j["modes_path"] = c.modes_path;
  } else if (c.command == "sumrule") {
    j["x"] = c.x;
    j["y"] = c.y;
    j["testwidth"] = c.testwidth ? ojson(*c.testwidth) : ojson("0.1a");
    j["min_modes"] = c.min_modes;
    j["max_modes"] = c.max_modes;
  } else if (c.command == "evolve") {
    j["t_end"] = c.t_end ? ojson(*c.t_end) : ojson("6a");
    j["dx"] = c.dx ? ojson(*c.dx) : ojson("a/2000");
    j["n_modes"] = c.n_modes.value_or(30);
    j["center"] = c.center ? ojson(*c.center) : ojson("0.5a");
    j["width"] = c.width ? ojson(*c.width) : ojson("0.1a");
    j["probe"] = c.probe ? ojson(*c.probe) : ojson("0.7a");
    j["samples"] = c.samples;
  } else if (c.command == "perturb") {
    j["mode_index"] = c.mode_index;
    if (!c.perturbation_path.empty()) j["perturbation_path"] = c.perturbation_path;
    else {
      j["v_left"] = c.v_left ? ojson(*c.v_left) : ojson("0.2a");
      j["v_right"] = c.v_right ? ojson(*c.v_right) : ojson("0.4a");
      j["v_value"] = c.v_value;
    }
    j["mu"] = c.mu;
    j["truncation"] = c.truncation;
  }
  return j;
}

}  // namespace

RunResult run(const RunConfig& c) {
  ojson report;
  report["tool"] = kToolName;
  report["version"] = kToolVersion;
  report["command"] = c.command;
  report["config"] = config_json(c);
  RunResult rr;
  try {
    require(c.format == "json" || c.format == "csv", "--format must be json or csv");
    require(c.tol > 0.0 && c.tol < 1e-2, "--tol must lie in (0, 1e-2)");
    require(c.re_min < c.re_max && c.im_min < c.im_max, "empty search rectangle");
    require(!c.model_path.empty(), "--model is required");
    std::string text;
    try {
      text = read_file(c.model_path);
    } catch (const Error&) {
      throw Error(ErrorKind::InvalidConfig, "cannot read model file '" + c.model_path + "'");
    }
    const auto model = parse_model(text);
    ojson m;
    m["sha256"] = sha256_hex(text);
    m["family"] = to_string(model.family());
    m["a"] = model.a();
    m["completeness_eligible"] = model.completeness_eligible();
    report["model"] = m;

    Output out;
    if (c.command == "solve") out = run_solve(c, model);
    else if (c.command == "gram") out = run_gram(c, model);
    else if (c.command == "sumrule") out = run_sumrule(c, model);
    else if (c.command == "evolve") out = run_evolve(c, model);
    else if (c.command == "perturb") out = run_perturb(c, model);
    else throw Error(ErrorKind::InvalidConfig, "unknown command '" + c.command + "'");

    std::vector<std::string> warnings = model.warnings();
    warnings.insert(warnings.end(), out.warnings.begin(), out.warnings.end());
    report["status"] = "ok";
    report["warnings"] = warnings;
    report["result"] = out.result;
    if (c.format == "csv") {
      rr.report = "# " + std::string(kToolName) + " " + kToolVersion + " " + c.command + " sha256=" +
                  m["sha256"].get<std::string>() + "\n" + out.csv;
    } else {
      rr.report = dump_json(report);
    }
    rr.exit_code = 0;
  } catch (const Error& e) {
    report["status"] = "error";
    ojson err;
    err["kind"] = std::string(to_string(e.kind()));
    err["message"] = e.what();
    report["error"] = err;
    rr.report = dump_json(report);
    rr.exit_code = exit_code(e.kind());
  }
  return rr;
}

int main(int argc, char** argv) {
  CLI::App app{"Quasinormal modes of one-dimensional open cavities"};
  app.require_subcommand(1);
  RunConfig c;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--model", c.model_path, "Model JSON file")->required();
    sub->add_option("--out", c.output_path, "Report path (stdout if omitted)");
    sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--tol", c.tol, "Root tolerance");
  };
  auto rect = [&](CLI::App* sub) {
    sub->add_option("--re-min", c.re_min);
    sub->add_option("--re-max", c.re_max);
    sub->add_option("--im-min", c.im_min);
    sub->add_option("--im-max", c.im_max);
    sub->add_option("--n-modes", c.n_modes);
  };

  auto* solve = app.add_subcommand("solve", "QNM frequencies in a rectangle");
  common(solve);
  rect(solve);
  auto* gram = app.add_subcommand("gram", "Gram matrix under the bilinear map");
  common(gram);
  rect(gram);
  gram->add_option("--modes", c.modes_path, "solve report to take frequencies from");
  auto* sumrule = app.add_subcommand("sumrule", "Completeness sum rules against mode count");
  common(sumrule);
  sumrule->add_option("--x", c.x);
  sumrule->add_option("--y", c.y);
  sumrule->add_option("--testwidth", c.testwidth, "FWHM of the Gaussian test function");
  sumrule->add_option("--min-modes", c.min_modes, "Smallest number of conjugate pairs");
  sumrule->add_option("--max-modes", c.max_modes, "Largest number of conjugate pairs");
  auto* evolve = app.add_subcommand("evolve", "QNM expansion against finite differences");
  common(evolve);
  evolve->add_option("--t-end", c.t_end);
  evolve->add_option("--dx", c.dx);
  evolve->add_option("--n-modes", c.n_modes, "Conjugate pairs in the expansion");
  evolve->add_option("--center", c.center);
  evolve->add_option("--width", c.width, "Gaussian sigma");
  evolve->add_option("--probe", c.probe);
  evolve->add_option("--samples", c.samples);
  auto* perturb = app.add_subcommand("perturb", "Perturbative frequency shifts");
  common(perturb);
  perturb->add_option("--mode-index", c.mode_index);
  perturb->add_option("--perturbation", c.perturbation_path, "JSON file {\"v\": [{x_left, x_right, value}]}");
  perturb->add_option("--v-left", c.v_left);
  perturb->add_option("--v-right", c.v_right);
  perturb->add_option("--v-value", c.v_value);
  perturb->add_option("--mu", c.mu, "Perturbation strength (repeatable)")->allow_extra_args(false);
  perturb->add_option("--truncation", c.truncation, "Modes kept in the second-order sum");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_code(ErrorKind::InvalidConfig);
  }
  for (auto* sub : app.get_subcommands()) c.command = sub->get_name();

  const auto result = run(c);
  if (c.output_path.empty()) {
    std::cout << result.report;
  } else {
    try {
      write_file(c.output_path, result.report);
    } catch (const Error& e) {
      std::cerr << e.what() << "\n";
      return exit_code(e.kind());
    }
  }
  if (result.exit_code != 0) std::cerr << "qnm: " << (result.exit_code == 2 ? "validation" : "numerical")
                                       << " error, see report\n";
  return result.exit_code;
}

}  // namespace qnm::cli
