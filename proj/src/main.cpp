#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fhkin/analysis.hpp"
#include "fhkin/dynamics.hpp"
#include "fhkin/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string timestamp_utc() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Options {
  int M = 30;
  double k = 0.0;       // 0 means unset; defaults to 0.5 when period is unset too
  double period = 0.0;  // 0 means unset; derived from k
  double epsilon = -1.0;
  int m_c = 3;
  double cfl_c = 0.5;
  double t_end = -1.0;
  std::string filter_name = "hou-li";
  bool no_filter = false;
  double alpha = 36.0;
  double p = 36.0;
  double threshold = 2.0 / 3.0;
  double dt_ref = 0.0;
  int protected_band = 0;
  std::vector<double> t_F;
  std::string out_dir = ".";
  std::string config_path;
  int sample_every = 1;
  bool linearized = false;
  int m = 1;
  bool with_g = false;
  std::string sweep;
  double force_gamma = 0.15336;
  double force_omega = 1.416;
};

void add_shared(CLI::App* sub, Options& o) {
  sub->add_option("--M", o.M, "Highest retained Hermite index");
  sub->add_option("--k", o.k, "Base wavenumber (default 0.5)");
  sub->add_option("--period", o.period, "Spatial period, k * period = 2*pi");
  sub->add_option("--epsilon", o.epsilon, "Perturbation amplitude");
  sub->add_option("--mc", o.m_c, "Fourier cutoff, modes |m| <= mc");
  sub->add_option("--cfl-c", o.cfl_c, "Time step constant, dt = cfl_c/sqrt(M)");
  sub->add_option("--t-end", o.t_end, "Final time");
  sub->add_option("--filter", o.filter_name,
                  "Filter variant: none|hou-li|threshold|cutoff|timestep");
  sub->add_flag("--no-filter", o.no_filter, "Shorthand for --filter none");
  sub->add_option("--alpha", o.alpha, "Filter strength");
  sub->add_option("--p", o.p, "Filter order");
  sub->add_option("--dt-ref", o.dt_ref, "Reference step for the timestep filter");
  sub->add_option("--tF", o.t_F, "Decay-fit horizon, repeatable");
  sub->add_option("--out", o.out_dir, "Output directory");
  sub->add_option("--config", o.config_path, "JSON config or summary file to load");
  sub->add_option("--sample-every", o.sample_every, "Steps between recorded samples");
}

void apply_config(const json& root, CLI::App* sub, Options& o) {
  const json& j = root.contains("config") ? root.at("config") : root;
  auto unset = [&](const std::string& flag) {
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    return opt != nullptr && opt->count() == 0;
  };
  auto seti = [&](const json& src, const char* key, const char* flag, int& slot) {
    if (src.contains(key) && unset(flag)) slot = src.at(key).get<int>();
  };
  auto setd = [&](const json& src, const char* key, const char* flag, double& slot) {
    if (src.contains(key) && unset(flag)) slot = src.at(key).get<double>();
  };

  seti(j, "M", "--M", o.M);
  setd(j, "k", "--k", o.k);
  setd(j, "period", "--period", o.period);
  setd(j, "epsilon", "--epsilon", o.epsilon);
  seti(j, "m_c", "--mc", o.m_c);
  setd(j, "cfl_c", "--cfl-c", o.cfl_c);
  setd(j, "t_end", "--t-end", o.t_end);
  seti(j, "sample_every", "--sample-every", o.sample_every);
  if (j.contains("filter")) {
    const json& f = j.at("filter");
    if (f.contains("variant") && unset("--filter") && !o.no_filter)
      o.filter_name = f.at("variant").get<std::string>();
    setd(f, "alpha", "--alpha", o.alpha);
    setd(f, "p", "--p", o.p);
    setd(f, "dt_ref", "--dt-ref", o.dt_ref);
    if (f.contains("threshold")) o.threshold = f.at("threshold").get<double>();
    if (f.contains("protected_band")) o.protected_band = f.at("protected_band").get<int>();
  }
  if (j.contains("t_F") && unset("--tF")) o.t_F = j.at("t_F").get<std::vector<double>>();
  if (j.contains("model") && unset("--linearized"))
    o.linearized = j.at("model").get<std::string>() == "linearized-landau";
  seti(j, "m", "--m", o.m);
  if (j.contains("with_g") && unset("--with-g")) o.with_g = j.at("with_g").get<bool>();
  if (j.contains("sweep") && unset("--sweep")) o.sweep = j.at("sweep").get<std::string>();
  if (j.contains("force")) {
    const json& f = j.at("force");
    if (f.contains("gamma")) o.force_gamma = f.at("gamma").get<double>();
    if (f.contains("omega")) o.force_omega = f.at("omega").get<double>();
  }
}

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config file " + path + " is not valid JSON: " + e.what());
  }
}

fhkin::FilterSpec make_filter(const Options& o) {
  fhkin::FilterSpec f;
  f.variant = o.no_filter ? fhkin::FilterVariant::none
                          : fhkin::parse_filter_variant(o.filter_name);
  f.alpha = o.alpha;
  f.p = o.p;
  f.threshold = o.threshold;
  f.dt_ref = o.dt_ref;
  f.protected_band = o.protected_band;
  return f;
}

double model_default_epsilon(fhkin::Model model) {
  switch (model) {
    case fhkin::Model::forced: return 0.9;
    case fhkin::Model::vlasov_poisson:
    case fhkin::Model::linearized_landau: return 0.001;
    default: return 0.01;
  }
}

double model_default_t_end(fhkin::Model model) {
  switch (model) {
    case fhkin::Model::forced: return 80.0;
    case fhkin::Model::vlasov_poisson:
    case fhkin::Model::linearized_landau: return 60.0;
    default: return 50.0;
  }
}

std::string model_name(fhkin::Model model) {
  switch (model) {
    case fhkin::Model::advection: return "advection";
    case fhkin::Model::forced: return "forced";
    case fhkin::Model::vlasov_poisson: return "vlasov-poisson";
    default: return "linearized-landau";
  }
}

fhkin::SimConfig make_sim_config(fhkin::Model model, const Options& o) {
  fhkin::SimConfig c;
  c.model = model;
  c.params.M = o.M;
  c.params.k = (o.k == 0.0 && o.period == 0.0) ? 0.5 : o.k;
  c.params.D = o.period;
  c.filter = make_filter(o);
  c.epsilon = o.epsilon < 0.0 ? model_default_epsilon(model) : o.epsilon;
  c.m_c = o.m_c;
  c.cfl_c = o.cfl_c;
  c.t_end = o.t_end < 0.0 ? model_default_t_end(model) : o.t_end;
  c.sample_every = o.sample_every;
  c.force.gamma = o.force_gamma;
  c.force.omega = o.force_omega;
  c.params = fhkin::validate_params(c.params, c.filter.variant != fhkin::FilterVariant::none);
  return c;
}

json filter_echo(const fhkin::FilterSpec& f) {
  return json{{"variant", fhkin::filter_variant_name(f.variant)},
              {"alpha", f.alpha},
              {"p", f.p},
              {"threshold", f.threshold},
              {"dt_ref", f.dt_ref},
              {"protected_band", f.protected_band}};
}

json sim_config_echo(const fhkin::SimConfig& c, const std::vector<double>& t_F) {
  return json{{"model", model_name(c.model)},
              {"M", c.params.M},
              {"k", c.params.k},
              {"period", c.params.D},
              {"epsilon", c.epsilon},
              {"m_c", c.m_c},
              {"cfl_c", c.cfl_c},
              {"t_end", c.t_end},
              {"sample_every", c.sample_every},
              {"filter", filter_echo(c.filter)},
              {"force", json{{"gamma", c.force.gamma}, {"omega", c.force.omega}}},
              {"t_F", t_F}};
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

void write_summary_json(const fs::path& path, const json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

int run_model(const std::string& command, fhkin::Model model, const Options& o) {
  fhkin::SimConfig c = make_sim_config(model, o);
  std::string started = timestamp_utc();
  fhkin::TimeSeries series = fhkin::run_simulation(c);

  fs::path dir(o.out_dir);
  fs::create_directories(dir);
  bool scaled = model == fhkin::Model::linearized_landau;
  double norm_scale = scaled && c.epsilon > 0.0 ? 1.0 / c.epsilon : 1.0;

  std::string csv = "t,E,logE,mass";
  for (int m = 0; m <= c.m_c; ++m) csv += ",mode_norm_" + std::to_string(m);
  csv += "\n";
  for (const fhkin::Sample& s : series.samples) {
    csv += fmt17(s.t) + "," + fmt17(s.energy) + "," + fmt17(std::log(s.energy)) + "," +
           fmt17(s.mass);
    for (double nrm : s.mode_norms) csv += "," + fmt17(nrm * norm_scale);
    csv += "\n";
  }
  fs::path energy_path = dir / "energy.csv";
  write_text(energy_path, csv);

  json outputs{{"energy_csv", energy_path.string()}};
  if (model == fhkin::Model::advection) {
    double amp = (c.epsilon / c.params.k) * std::sqrt(c.params.D / 2.0);
    std::string exact = "t,E_exact\n";
    for (const fhkin::Sample& s : series.samples) {
      double k2 = c.params.k * c.params.k;
      exact += fmt17(s.t) + "," + fmt17(amp * std::exp(-0.5 * k2 * s.t * s.t)) + "\n";
    }
    fs::path exact_path = dir / "exact.csv";
    write_text(exact_path, exact);
    outputs["exact_csv"] = exact_path.string();
  }

  double dt = c.cfl_c / std::sqrt(static_cast<double>(c.params.M));
  json summary;
  summary["dt"] = dt;
  summary["n_samples"] = series.samples.size();
  summary["E0"] = series.samples.front().energy;
  summary["E_final"] = series.samples.back().energy;
  summary["mass_initial"] = series.samples.front().mass;
  double drift = 0.0;
  for (const fhkin::Sample& s : series.samples)
    drift = std::max(drift, std::abs(s.mass - series.samples.front().mass));
  summary["mass_drift"] = drift;
  double t_min = 0.5 * c.t_end;
  if (series.samples.back().t >= t_min && series.samples.front().energy > 0.0) {
    summary["recurrence_t_min"] = t_min;
    summary["recurrence_metric"] = fhkin::recurrence_metric(series, t_min);
  }
  json fits = json::array();
  for (double tf : o.t_F) {
    try {
      fhkin::DecayFit fit = fhkin::fit_decay_rate(series, tf);
      fits.push_back(json{{"t_F", tf},
                          {"rate", fit.rate},
                          {"slope", fit.slope},
                          {"n_peaks", fit.n_peaks}});
    } catch (const std::exception& e) {
      fits.push_back(json{{"t_F", tf}, {"error", e.what()}});
    }
  }
  summary["fitted_rates"] = fits;

  json doc{{"command", command},
           {"version", fhkin::version_string},
           {"started", started},
           {"finished", timestamp_utc()},
           {"config", sim_config_echo(c, o.t_F)},
           {"outputs", outputs},
           {"summary", summary}};
  fs::path summary_path = dir / "summary.json";
  write_summary_json(summary_path, doc);

  std::cout << command << ": " << series.samples.size() << " samples, E0 = "
            << fmt17(series.samples.front().energy) << ", E_final = "
            << fmt17(series.samples.back().energy) << "\n";
  for (const json& fit : fits) {
    if (fit.contains("rate"))
      std::cout << "  decay rate (tF = " << fit["t_F"].get<double>()
                << "): " << fmt17(fit["rate"].get<double>()) << "\n";
    else
      std::cout << "  decay fit (tF = " << fit["t_F"].get<double>()
                << ") failed: " << fit["error"].get<std::string>() << "\n";
  }
  std::cout << "  wrote " << summary_path.string() << "\n";
  return 0;
}

int run_eigen(const Options& o) {
  fhkin::FilterSpec filter = make_filter(o);
  fhkin::HermiteParams params;
  params.M = o.M;
  params.k = (o.k == 0.0 && o.period == 0.0) ? 0.5 : o.k;
  params.D = o.period;
  params = fhkin::validate_params(params, filter.variant != fhkin::FilterVariant::none);
  if (!(o.cfl_c > 0.0)) throw std::invalid_argument("cfl_c must be positive");
  double dt = o.cfl_c / std::sqrt(static_cast<double>(params.M));

  std::string started = timestamp_utc();
  fhkin::EigenReport report =
      fhkin::eigen_report_filtered(params, filter, dt, o.m, o.with_g);

  fs::path dir(o.out_dir);
  fs::create_directories(dir);
  std::string txt;
  for (const fhkin::cplx& ev : report.eigenvalues)
    txt += fmt17(ev.real()) + " " + fmt17(ev.imag()) + "\n";
  fs::path eig_path = dir / "eigenvalues.txt";
  write_text(eig_path, txt);

  json doc{{"command", "eigen"},
           {"version", fhkin::version_string},
           {"started", started},
           {"finished", timestamp_utc()},
           {"config",
            json{{"M", params.M},
                 {"k", params.k},
                 {"period", params.D},
                 {"cfl_c", o.cfl_c},
                 {"m", o.m},
                 {"with_g", o.with_g},
                 {"filter", filter_echo(filter)}}},
           {"outputs", json{{"eigenvalues_txt", eig_path.string()}}},
           {"summary",
            json{{"spectral_abscissa", report.spectral_abscissa},
                 {"n_eigenvalues", report.eigenvalues.size()},
                 {"qr_sweeps", report.iterations},
                 {"dt", dt}}}};
  fs::path summary_path = dir / "summary.json";
  write_summary_json(summary_path, doc);

  std::cout << "eigen: " << report.eigenvalues.size()
            << " eigenvalues, spectral abscissa = " << fmt17(report.spectral_abscissa)
            << "\n  wrote " << eig_path.string() << "\n";
  return 0;
}

int run_dispersion(const Options& o) {
  std::vector<double> ks;
  if (!o.sweep.empty()) {
    double a = 0.0, b = 0.0, step = 0.0;
    if (std::sscanf(o.sweep.c_str(), "%lf:%lf:%lf", &a, &b, &step) != 3 ||
        !(step > 0.0) || a > b + 1e-12)
      throw std::invalid_argument("--sweep expects a:b:step with step > 0 and a <= b");
    for (int i = 0;; ++i) {
      double x = a + i * step;
      if (x > b + 1e-9) break;
      ks.push_back(x);
    }
  } else {
    ks.push_back(o.k == 0.0 ? 0.5 : o.k);
  }

  std::string started = timestamp_utc();
  std::vector<fhkin::DispersionRoot> roots;
  roots.reserve(ks.size());
  for (double k : ks) roots.push_back(fhkin::solve_dispersion(k));

  fs::path dir(o.out_dir);
  fs::create_directories(dir);
  std::string csv = "k,omega_p,gamma,residual\n";
  json jroots = json::array();
  for (const fhkin::DispersionRoot& r : roots) {
    csv += fmt17(r.k) + "," + fmt17(r.omega_p) + "," + fmt17(r.gamma) + "," +
           fmt17(r.residual) + "\n";
    jroots.push_back(json{{"k", r.k},
                          {"omega_p", r.omega_p},
                          {"gamma", r.gamma},
                          {"residual", r.residual}});
    std::cout << "k = " << fmt17(r.k) << "  omega_p = " << fmt17(r.omega_p)
              << "  gamma = " << fmt17(r.gamma) << "  residual = " << fmt17(r.residual)
              << "\n";
  }
  fs::path csv_path = dir / "dispersion.csv";
  write_text(csv_path, csv);

  json doc{{"command", "dispersion"},
           {"version", fhkin::version_string},
           {"started", started},
           {"finished", timestamp_utc()},
           {"config", json{{"k", ks.front()}, {"sweep", o.sweep}}},
           {"outputs", json{{"dispersion_csv", csv_path.string()}}},
           {"summary", json{{"roots", jroots}}}};
  write_summary_json(dir / "summary.json", doc);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Filtered Fourier-Hermite solver for 1D kinetic transport equations"};
  app.set_version_flag("--version", std::string(fhkin::version_string));
  app.require_subcommand(1);
  Options o;

  CLI::App* adv = app.add_subcommand("advection", "Free transport with a cosine perturbation");
  CLI::App* frc = app.add_subcommand("forced", "Transport driven by a decaying oscillating force");
  CLI::App* lan = app.add_subcommand("landau", "Vlasov-Poisson Landau damping");
  CLI::App* eig = app.add_subcommand("eigen", "Eigenvalues of one mode's drift matrix");
  CLI::App* dis = app.add_subcommand("dispersion", "Landau roots of the kinetic dispersion relation");

  for (CLI::App* sub : {adv, frc, lan}) add_shared(sub, o);
  lan->add_flag("--linearized", o.linearized, "Run the single-mode linearized system");
  add_shared(eig, o);
  eig->add_option("--m", o.m, "Fourier mode of the drift matrix");
  eig->add_flag("--with-g", o.with_g, "Include the Poisson coupling term");
  dis->add_option("--k", o.k, "Wavenumber (default 0.5)");
  dis->add_option("--sweep", o.sweep, "Wavenumber sweep a:b:step");
  dis->add_option("--out", o.out_dir, "Output directory");
  dis->add_option("--config", o.config_path, "JSON config or summary file to load");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    if (!o.config_path.empty()) apply_config(load_config_file(o.config_path), sub, o);
    if (sub == adv) return run_model("advection", fhkin::Model::advection, o);
    if (sub == frc) return run_model("forced", fhkin::Model::forced, o);
    if (sub == lan)
      return run_model("landau",
                       o.linearized ? fhkin::Model::linearized_landau
                                    : fhkin::Model::vlasov_poisson,
                       o);
    if (sub == eig) return run_eigen(o);
    return run_dispersion(o);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
}
