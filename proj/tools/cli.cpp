#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace pvortex::cli {

using nlohmann::json;

namespace {

const std::vector<std::string> kScenarios = {"trace-level", "period-function", "twist-cert",
                                             "find-orbit",  "sweep",           "verify"};

json config_json(const RunConfig& c) {
  return json{{"scenario", c.scenario},
              {"domain", c.domain},
              {"p", c.p},
              {"user_model", c.user_model},
              {"shift", c.shift},
              {"kappa1", c.kappa1},
              {"kappa2", c.kappa2},
              {"c", c.c},
              {"c1", c.c1},
              {"d1", c.d1},
              {"nu", c.nu},
              {"nu_list", c.nu_list},
              {"c_grid", c.c_grid},
              {"n_samples", c.n_samples},
              {"n_boundary", c.n_boundary},
              {"n_theta", c.n_theta},
              {"n_radius", c.n_radius},
              {"rel_tol", c.rel_tol},
              {"abs_tol", c.abs_tol},
              {"orbit_tol", c.orbit_tol},
              {"seed", c.seed}};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
  out << text;
}

void write_json(const RunConfig& config, const std::string& name, const json& result) {
  json doc{{"schema_version", kSchemaVersion},
           {"scenario", config.scenario},
           {"config", config_json(config)},
           {"result", result}};
  write_file(config.out / name, doc.dump(2) + "\n");
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::NotNormalized:
      return kInvalidInput;
    case ErrorKind::CannotCertify:
      return kCertificationFailure;
    default:
      return kSolverFailure;
  }
}

LevelOptions level_options(const RunConfig& c) {
  LevelOptions o;
  o.n_samples = c.n_samples;
  return o;
}

TwistOptions twist_options(const RunConfig& c) {
  TwistOptions o;
  o.n_boundary = c.n_boundary;
  o.n_theta = c.n_theta;
  o.n_radius = c.n_radius;
  o.seed = c.seed;
  o.integrator = IntegratorSettings{c.rel_tol, c.abs_tol};
  o.level = level_options(c);
  return o;
}

RefineOptions refine_options(const RunConfig& c) {
  RefineOptions o;
  o.tol = c.orbit_tol;
  return o;
}

std::vector<int> family_indices(const RunConfig& c, int nu0) {
  if (!c.nu_list.empty()) return c.nu_list;
  return {nu0, 3 * nu0, 9 * nu0, 27 * nu0};
}

std::string family_csv(const FamilyReport& family) {
  std::ostringstream out;
  out << "nu,converged,residual,d0,r1,rot1,action,energy_drift\n" << std::setprecision(17);
  for (const FamilyMember& m : family.members) {
    out << m.nu << ',' << (m.converged ? 1 : 0);
    if (m.orbit) {
      const PeriodicOrbit& o = *m.orbit;
      out << ',' << o.residual << ',' << o.d0 << ',' << o.r1 << ',' << o.rot1 << ',' << o.action
          << ',' << o.energy_drift;
    } else {
      out << ",,,,,,";
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  std::istringstream in(spec);
  double a = 0.0, b = 0.0;
  int n = 0;
  char s1 = 0, s2 = 0;
  if (!(in >> a >> s1 >> b >> s2 >> n) || s1 != ':' || s2 != ':' || !in.eof() || n < 2) {
    throw Error(ErrorKind::InvalidArgument, "grid must read a:b:n with n >= 2, got '" + spec + "'");
  }
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
  return out;
}

void validate(const RunConfig& c) {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidArgument, msg); };
  if (std::find(kScenarios.begin(), kScenarios.end(), c.scenario) == kScenarios.end()) {
    fail("unknown scenario '" + c.scenario + "'");
  }
  // Rejects kappa1 + kappa2 = 0 with the hypothesis in the message.
  VortexConfig::create(c.kappa1, c.kappa2);
  const bool twist = c.scenario != "trace-level" && c.scenario != "period-function";
  if (twist && !(c.c1 < c.c && c.c < c.d1)) fail("levels must satisfy c1 < c < d1");
  if (!(c.rel_tol > 0.0) || !(c.abs_tol > 0.0) || !(c.orbit_tol > 0.0)) {
    fail("tolerances must be positive");
  }
  if (c.n_samples < 8 || c.n_boundary < 1 || c.n_theta < 1 || c.n_radius < 2) {
    fail("grid sizes too small");
  }
  if (c.shift.size() != 2) fail("--shift takes two numbers");
  if (c.scenario == "period-function") parse_grid(c.c_grid);
}

DomainModel make_model(const RunConfig& c) {
  if (c.domain == "disk") return DomainModel::unit_disk();
  if (c.domain == "radial_power") return DomainModel::radial_power(c.p);
  if (c.domain == "user") {
    if (c.user_model == "zero") return user_models::zero();
    if (c.user_model == "bilinear") return user_models::bilinear();
    if (c.user_model == "isochronous") return user_models::isochronous();
    if (c.user_model == "shifted_paraboloid") {
      return user_models::shifted_paraboloid({c.shift[0], c.shift[1]});
    }
    throw Error(ErrorKind::InvalidArgument, "unknown user model '" + c.user_model + "'");
  }
  throw Error(ErrorKind::InvalidArgument, "unknown domain '" + c.domain + "'");
}

int run(const RunConfig& config, std::ostream& log) {
  try {
    validate(config);
    const DomainModel model = make_model(config);
    const VortexConfig kappas = VortexConfig::create(config.kappa1, config.kappa2);
    const VortexConfig normalized = kappas.normalized();
    std::filesystem::create_directories(config.out);
    const std::string& s = config.scenario;

    if (s == "trace-level") {
      const LevelOrbit level = trace_level(model, kappas, config.c, {}, level_options(config));
      std::ostringstream csv;
      write_level_csv(csv, level);
      write_json(config, "level.json", level);
      write_file(config.out / "level.csv", csv.str());
      log << "T(" << config.c << ") = " << std::setprecision(12) << level.period << '\n';
      return kOk;
    }
    if (s == "period-function") {
      const PeriodTable table =
          period_function(model, kappas, parse_grid(config.c_grid), {}, level_options(config));
      std::ostringstream csv;
      csv << "c,T\n" << std::setprecision(17);
      for (std::size_t i = 0; i < table.c.size(); ++i) csv << table.c[i] << ',' << table.period[i] << '\n';
      write_json(config, "period.json", table);
      write_file(config.out / "period.csv", csv.str());
      log << (table.monotone ? "monotone" : "NonMonotone") << " period function on "
          << table.c.size() << " levels\n";
      return kOk;
    }

    const LevelSetup levels = prepare_levels(model, kappas, config.c, config.c1, config.d1, {},
                                             level_options(config));
    const TwistCertificate cert = certify_twist(model, kappas, levels, twist_options(config));
    if (s == "twist-cert") {
      write_json(config, "twist.json", cert);
      log << "twist certified: nu = " << cert.nu << ", a1 = " << cert.a1 << ", b1 = " << cert.b1
          << '\n';
      return kOk;
    }
    if (s == "find-orbit") {
      const int nu = config.nu != 0 ? config.nu : cert.nu;
      const double T = levels.period();
      const WState seed = seed_orbit(model, normalized, cert, levels.orbit_c, nu);
      const WState locked = lock_seed_index(model, normalized, seed, T, nu);
      const PeriodicOrbit orbit = refine_orbit(model, normalized, locked, T,
                                               levels.orbit_c.star_center, refine_options(config));
      std::ostringstream csv;
      write_trajectory_csv(csv, model, normalized, orbit.trajectory, orbit.star_center);
      write_json(config, "orbit.json",
                 json{{"certificate", cert}, {"seed", seed}, {"locked_seed", locked},
                      {"orbit", orbit}});
      write_file(config.out / "orbit.csv", csv.str());
      log << "orbit nu = " << orbit.nu_measured << ", residual = " << orbit.residual << '\n';
      return kOk;
    }

    const FamilyReport family = sweep_family(model, normalized, cert, levels.orbit_c,
                                             family_indices(config, cert.nu),
                                             refine_options(config));
    write_file(config.out / "family.csv", family_csv(family));
    if (s == "sweep") {
      write_json(config, "family.json", json{{"certificate", cert}, {"family", family}});
      log << family.converged().size() << " of " << family.members.size()
          << " members converged\n";
      return family.converged().empty() ? kSolverFailure : kOk;
    }
    const VerificationReport report = verify_theorem(family, levels.orbit_c);
    write_json(config, "verify.json",
               json{{"certificate", cert}, {"family", family}, {"report", report}});
    log << "verified on " << report.nu.size() << " orbits\n";
    return kOk;
  } catch (const Error& e) {
    log << "error: " << e.what();
    if (!e.stage().empty()) log << " (stage " << e.stage() << ')';
    log << " [value " << e.value() << "]\n";
    std::error_code ec;
    std::filesystem::create_directories(config.out, ec);
    if (!ec) {
      json err{{"kind", std::string(to_string(e.kind()))},
               {"message", e.what()},
               {"stage", e.stage()},
               {"value", e.value()}};
      std::ofstream out(config.out / "error.json", std::ios::binary);
      out << json{{"schema_version", kSchemaVersion},
                  {"scenario", config.scenario},
                  {"config", config_json(config)},
                  {"error", err}}
                 .dump(2)
          << '\n';
    }
    return exit_code(e.kind());
  }
}

int main(int argc, const char* const* argv, std::ostream& log) {
  RunConfig config;
  CLI::App app{"Two-vortex periodic orbits near level lines of the Robin function", "pvortex"};
  app.set_config("--config", "", "key = value file; flags given on the command line win");
  app.require_subcommand(1);

  app.add_option("--out", config.out, "Output directory");
  app.add_option("--domain", config.domain, "disk | radial_power | user")->capture_default_str();
  app.add_option("--p", config.p, "Exponent of the radial_power model")->capture_default_str();
  app.add_option("--user-model", config.user_model,
                 "zero | bilinear | isochronous | shifted_paraboloid")
      ->capture_default_str();
  app.add_option("--shift", config.shift, "Minimum of shifted_paraboloid")->delimiter(',');
  app.add_option("--kappa1", config.kappa1)->capture_default_str();
  app.add_option("--kappa2", config.kappa2)->capture_default_str();
  app.add_option("--c", config.c, "Level of h")->capture_default_str();
  app.add_option("--c1", config.c1)->capture_default_str();
  app.add_option("--d1", config.d1)->capture_default_str();
  app.add_option("--nu", config.nu, "Fast rotation index (0: certified)");
  app.add_option("--nu-list", config.nu_list, "Family indices, comma separated")->delimiter(',');
  app.add_option("--c-grid", config.c_grid, "a:b:n")->capture_default_str();
  app.add_option("--n-samples", config.n_samples, "Ray samples per level")->capture_default_str();
  app.add_option("--n-boundary", config.n_boundary)->capture_default_str();
  app.add_option("--n-theta", config.n_theta)->capture_default_str();
  app.add_option("--n-radius", config.n_radius)->capture_default_str();
  app.add_option("--rel-tol", config.rel_tol, "Twist integrator")->capture_default_str();
  app.add_option("--abs-tol", config.abs_tol, "Twist integrator")->capture_default_str();
  app.add_option("--orbit-tol", config.orbit_tol, "Shooting residual")->capture_default_str();
  app.add_option("--seed", config.seed, "Jitter of the sampling grids")->capture_default_str();

  for (const std::string& name : kScenarios) {
    app.add_subcommand(name)->fallthrough()->callback([&config, name] { config.scenario = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out, err;
    const int code = app.exit(e, out, err);
    log << out.str() << err.str();
    return code == 0 ? kOk : kInvalidInput;
  }
  return run(config, log);
}

}  // namespace pvortex::cli
