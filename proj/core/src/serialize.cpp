#include "pvortex/serialize.hpp"

#include <iomanip>

namespace pvortex {

using nlohmann::json;

namespace {

json points(const std::vector<Point2>& pts) {
  json out = json::array();
  for (const Point2& p : pts) out.push_back(p);
  return out;
}

}  // namespace

void to_json(json& j, const Point2& p) { j = json::array({p.x, p.y}); }

void to_json(json& j, const WState& w) { j = json{{"w1", w.w1}, {"w2", w.w2}}; }

void to_json(json& j, const IntegratorSettings& s) {
  j = json{{"method", "DOP853"},
           {"rel_tol", s.rel_tol},
           {"abs_tol", s.abs_tol},
           {"max_step", std::isfinite(s.max_step) ? json(s.max_step) : json("inf")},
           {"max_steps", s.max_steps}};
}

void to_json(json& j, const LevelOrbit& o) {
  j = json{{"c", o.c},
           {"kappa", o.kappa},
           {"star_center", o.star_center},
           {"period", o.period},
           {"orientation", o.orientation},
           {"winding", o.winding},
           {"star_margin", o.star_margin},
           {"sample_level_error", o.sample_level_error},
           {"orbit_level_error", o.orbit_level_error},
           {"n_samples", o.samples.size()},
           {"tolerances",
            {{"integrator", o.integrator},
             {"ray_root_relative", 1e-15},
             {"section_time", 1e-13},
             {"gradient_floor", 1e-10}}}};
}

void to_json(json& j, const PeriodTable& t) {
  json rows = json::array();
  for (std::size_t i = 0; i < t.c.size(); ++i) rows.push_back({{"c", t.c[i]}, {"T", t.period[i]}});
  j = json{{"rows", rows},
           {"monotone", t.monotone},
           {"direction", t.direction},
           {"status", t.monotone ? "Monotone" : "NonMonotone"},
           {"tolerances", {{"integrator", t.integrator}, {"monotone_threshold", 1e-10}}}};
}

void to_json(json& j, const AssumptionCertificate& a) {
  j = json{{"c", a.c},
           {"c0", a.c0},
           {"d0", a.d0},
           {"star_center", a.star_center},
           {"grid", a.grid},
           {"T", a.period},
           {"star_margin", a.star_margin},
           {"monotone", a.monotone},
           {"direction", a.direction},
           {"min_margin", a.min_margin},
           {"positive", a.positive},
           {"status", !a.monotone ? "NonMonotone" : a.positive ? "Positive" : "MarginTooSmall"},
           {"tolerances",
            {{"integrator", a.integrator},
             {"margin_floor", a.margin_floor},
             {"monotone_threshold", 1e-10}}}};
}

void to_json(json& j, const TwistCertificate& c) {
  j = json{{"kappa1", c.kappa1},
           {"kappa2", c.kappa2},
           {"sigma", c.sigma},
           {"c", c.c},
           {"c1", c.c1},
           {"d1", c.d1},
           {"T", c.period},
           {"period_direction", c.period_direction},
           {"a1", c.a1},
           {"b1", c.b1},
           {"nu", c.nu},
           {"rot1_inner", {c.rot1_inner_min, c.rot1_inner_max}},
           {"rot1_outer", {c.rot1_outer_min, c.rot1_outer_max}},
           {"rot2_on_C_c1", {c.rot2_c1_min, c.rot2_c1_max}},
           {"rot2_on_C_d1", {c.rot2_d1_min, c.rot2_d1_max}},
           {"margins",
            {{"rot1_inner", c.margin_rot1_inner},
             {"rot1_outer", c.margin_rot1_outer},
             {"rot2_c1", c.margin_rot2_c1},
             {"rot2_d1", c.margin_rot2_d1}}},
           {"positive", c.positive()},
           {"f_inner_min", c.f_inner_min},
           {"f_bound", c.period > 0.0 ? 2.0 * kPi * std::abs(c.nu) / c.period : 0.0},
           {"grid",
            {{"boundary", c.n_boundary}, {"theta", c.n_theta}, {"radius", c.n_radius}}},
           {"seed", c.seed},
           {"b1_halvings", c.b1_halvings},
           {"a1_halvings", c.a1_halvings},
           {"integrations", c.integrations},
           {"tolerances",
            {{"integrator", c.integrator},
             {"nu_margin", c.nu_margin},
             {"max_fast_turns", c.max_fast_turns}}}};
}

void to_json(json& j, const PeriodicOrbit& o) {
  json diag{{"t", o.diagnostics.t},
            {"center", points(o.diagnostics.center)},
            {"difference", points(o.diagnostics.difference)},
            {"theta", o.diagnostics.theta},
            {"scaled_rate", o.diagnostics.scaled_rate}};
  j = json{{"kappa1", o.kappa1},
           {"kappa2", o.kappa2},
           {"sigma", o.sigma},
           {"c", o.c},
           {"T", o.period},
           {"w0", o.w0},
           {"residual", o.residual},
           {"iterations", o.iterations},
           {"energy", o.energy},
           {"energy_drift", o.energy_drift},
           {"rot1", o.rot1},
           {"rot2", o.rot2},
           {"nu_measured", o.nu_measured},
           {"center_winding", o.center_winding},
           {"d0", o.d0},
           {"r1", o.r1},
           {"action", o.action},
           {"action_coarse", o.action_coarse},
           {"subperiod_distance", o.subperiod_distance},
           {"min_subperiod_distance", o.min_subperiod_distance},
           {"star_center", o.star_center},
           {"diagnostics", diag},
           {"tolerances",
            {{"integrator", o.integrator},
             {"residual_tol", o.tolerance},
             {"jacobian_fd_step", "1e-6*(1+|w_i|)"},
             {"action_quadrature", "Gauss-Legendre 8 vs 4 nodes per step"}}}};
}

void to_json(json& j, const FamilyReport& f) {
  json members = json::array();
  for (const FamilyMember& m : f.members) {
    json item{{"nu", m.nu},
              {"converged", m.converged},
              {"seed", m.seed},
              {"locked_seed", m.locked_seed},
              {"seed_residual", m.seed_residual}};
    if (!m.error.empty()) item["error"] = m.error;
    if (m.orbit) item["orbit"] = *m.orbit;
    members.push_back(item);
  }
  j = json{{"c", f.c}, {"T", f.period}, {"members", members}};
}

void to_json(json& j, const VerificationReport& r) {
  j = json{{"sigma", r.sigma},
           {"kappa_product", r.kappa_product},
           {"nu", r.nu},
           {"d0", r.d0},
           {"r1", r.r1},
           {"center_error", r.center_error},
           {"separation_sup", r.separation_sup},
           {"rate_error", r.rate_error},
           {"rate_error_z", r.rate_error_z},
           {"rot1", r.rot1},
           {"rot1_leading", r.rot1_leading},
           {"action", r.action},
           {"u_deviation", r.u_deviation},
           {"center_decreasing", r.center_decreasing},
           {"separation_decreasing", r.separation_decreasing},
           {"rate_decreasing", r.rate_decreasing},
           {"rate_final_relative", r.rate_final_relative},
           {"center_ratio", r.center_ratio},
           {"separation_ratio", r.separation_ratio},
           {"rot1_max_relative_error", r.rot1_max_relative_error},
           {"action_monotone_from", r.action_monotone_from},
           {"action_divergence_sign", r.action_divergence_sign},
           {"u_deviation_smallest", r.u_deviation_smallest},
           {"tolerances",
            {{"sampling", "step nodes plus 3 interior points per step"},
             {"phase_alignment", "2048-point scan then golden section"},
             {"rate_limit", r.kappa_product / kPi}}}};
}

void write_level_csv(std::ostream& out, const LevelOrbit& orbit) {
  out << "theta,r\n" << std::setprecision(17);
  for (std::size_t i = 0; i < orbit.angles.size(); ++i) {
    out << orbit.angles[i] << ',' << orbit.radii[i] << '\n';
  }
}

void write_trajectory_csv(std::ostream& out, const DomainModel& model, const VortexConfig& config,
                          const Trajectory<4>& traj, Point2 star_center) {
  const WLifts lifts = lift_angles(traj, star_center);
  out << "t,z1x,z1y,z2x,z2y,H,I,Theta1,Theta2\n" << std::setprecision(17);
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const PairState z = from_w(config, unpack_w(traj.states[i]));
    out << traj.times[i] << ',' << z.z1.x << ',' << z.z1.y << ',' << z.z2.x << ',' << z.z2.y
        << ',' << eval_H(model, config, z) << ',' << angular_impulse(config, z) << ','
        << lifts.theta1.theta[i] << ',' << lifts.theta2.theta[i] << '\n';
  }
}

}  // namespace pvortex
