#pragma once

#include <nlohmann/json.hpp>
#include <ostream>

#include "pvortex/orbits.hpp"

namespace pvortex {

inline constexpr int kSchemaVersion = 1;

// Every result object carries a "tolerances" block naming the settings its
// numbers were computed under.
void to_json(nlohmann::json& j, const Point2& p);
void to_json(nlohmann::json& j, const WState& w);
void to_json(nlohmann::json& j, const IntegratorSettings& s);
void to_json(nlohmann::json& j, const LevelOrbit& orbit);
void to_json(nlohmann::json& j, const PeriodTable& table);
void to_json(nlohmann::json& j, const AssumptionCertificate& cert);
void to_json(nlohmann::json& j, const TwistCertificate& cert);
void to_json(nlohmann::json& j, const PeriodicOrbit& orbit);
void to_json(nlohmann::json& j, const FamilyReport& family);
void to_json(nlohmann::json& j, const VerificationReport& report);

/// Columns theta, r.
void write_level_csv(std::ostream& out, const LevelOrbit& orbit);

/// Columns t, z1x, z1y, z2x, z2y, H, I, Theta1, Theta2 at the nodes of a
/// w-trajectory; Theta2 is the argument of w2 around `star_center`.
void write_trajectory_csv(std::ostream& out, const DomainModel& model, const VortexConfig& config,
                          const Trajectory<4>& traj, Point2 star_center);

}  // namespace pvortex
