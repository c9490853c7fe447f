// Copyright 2026 The levelk Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "levelk/airspace/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace levelk::airspace {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

Vec2 perpendicular_left(Vec2 v) { return {-v.y, v.x}; }

// Closest point on a segment, with the segment parameter in [0, 1].
std::pair<Vec2, double> project_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = ab.norm2();
  const double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
  return {a + ab * t, t};
}

}  // namespace

double normalize_heading(double degrees) {
  double h = std::fmod(degrees, 360.0);
  if (h < 0.0) h += 360.0;
  if (h >= 360.0) h -= 360.0;
  return h;
}

double heading_difference(double a, double b) {
  double d = std::fmod(a - b, 360.0);
  if (d <= -180.0) d += 360.0;
  if (d > 180.0) d -= 360.0;
  return d;
}

double step_heading(double heading, double desired, double dt) {
  return normalize_heading(heading - 0.1 * heading_difference(heading, desired) * dt);
}

Vec2 velocity_components(double heading, double speed) {
  const double rad = heading * kDegToRad;
  return {speed * std::sin(rad), speed * std::cos(rad)};
}

double heading_of(Vec2 velocity) {
  return normalize_heading(std::atan2(velocity.x, velocity.y) / kDegToRad);
}

Vec2 step_uas_velocity(Vec2 v, Vec2 v_desired, double dt) { return v - (v - v_desired) * dt; }

Vec2 velocity_of(const AircraftState& a) {
  return a.kind == AircraftKind::kUnmanned ? a.velocity : velocity_components(a.heading, a.speed);
}

std::optional<Conflict> detect_conflict(const AircraftState& ego, const AircraftState& intruder,
                                        const SaaConfig& saa) {
  if (!saa.enabled()) return std::nullopt;
  const Vec2 r0 = intruder.position - ego.position;
  if (r0.norm() > saa.distance_horizon) return std::nullopt;
  const Vec2 v = (velocity_of(intruder) - velocity_of(ego)) / kSecondsPerHour;  // km/s
  const double v2 = v.norm2();
  double t = v2 > 0.0 ? -dot(r0, v) / v2 : 0.0;
  t = std::clamp(t, 0.0, saa.time_horizon);
  const Vec2 rm = r0 + v * t;
  const double d = rm.norm();
  if (d >= saa.threshold) return std::nullopt;
  return Conflict{t, d, r0, rm};
}

Vec2 saa1_command(Vec2 ego_position, Vec2 ego_velocity, Vec2 intruder_position, Vec2 intruder_velocity,
                  double R, double fallback_speed) {
  const Vec2 r = intruder_position - ego_position;
  const double range = r.norm();
  if (range <= R) return unit(-r) * fallback_speed;
  const Vec2 v_ei = ego_velocity - intruder_velocity;
  const double speed_rel = v_ei.norm();
  if (speed_rel == 0.0) return ego_velocity;
  const Vec2 r_hat = r / range;
  const Vec2 u = v_ei / speed_rel;
  const double cone = std::asin(R / range);
  const double bearing = angle_between(r, v_ei);
  // Opening geometry: nothing to resolve.
  if (bearing >= std::numbers::pi / 2) return ego_velocity;
  if (std::sin(bearing) < 1e-12) {
    // Dead on the line of sight: either edge is equally near, take the left.
    const Vec2 edge = r_hat * std::cos(cone) + perpendicular_left(r_hat) * std::sin(cone);
    return edge * (speed_rel * std::cos(cone)) + intruder_velocity;
  }
  const Vec2 edge_rel = (std::sin(cone) * u - std::sin(cone - bearing) * r_hat) *
                        (speed_rel * std::cos(cone - bearing) / std::sin(bearing));
  return edge_rel + intruder_velocity;
}

Vec2 saa2_command(Vec2 ego_velocity, Vec2 intruder_velocity, Vec2 r0, Vec2 rm, double R) {
  const Vec2 v_e = ego_velocity / kSecondsPerHour;
  const Vec2 v_ei = (intruder_velocity - ego_velocity) / kSecondsPerHour;
  const double rm_norm = rm.norm();
  const double closing = v_ei.norm() > 0.0 ? dot(r0, v_ei) / v_ei.norm() : 0.0;
  Vec2 escape;
  if (rm_norm < 1e-12) {
    // Predicted direct hit: leave perpendicular to the relative motion, to
    // the side away from the intruder's current offset (left if none).
    Vec2 side = perpendicular_left(unit(v_ei.norm() > 0.0 ? v_ei : ego_velocity));
    if (dot(side, r0) > 0.0) side = -side;
    escape = side * R;
  } else {
    escape = -(rm / rm_norm) * (R - rm_norm);
  }
  const Vec2 command = -v_e * closing + escape;
  if (command.norm() == 0.0) return unit(-r0);
  return unit(command);
}

double distance_to_polyline(Vec2 p, std::span<const Vec2> polyline) {
  if (polyline.empty()) return 0.0;
  if (polyline.size() == 1) return (p - polyline[0]).norm();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
    best = std::min(best, (p - project_segment(p, polyline[i], polyline[i + 1]).first).norm());
  }
  return best;
}

Vec2 lookahead_point(Vec2 p, std::span<const Vec2> polyline, double ahead) {
  if (polyline.size() < 2) return polyline.empty() ? p : polyline[0];
  double best = std::numeric_limits<double>::infinity();
  std::size_t seg = 0;
  double t_best = 0.0;
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
    const auto [q, t] = project_segment(p, polyline[i], polyline[i + 1]);
    const double d = (p - q).norm();
    if (d < best) {
      best = d;
      seg = i;
      t_best = t;
    }
  }
  double remaining = ahead;
  Vec2 at = polyline[seg] + (polyline[seg + 1] - polyline[seg]) * t_best;
  for (std::size_t i = seg; i + 1 < polyline.size(); ++i) {
    const Vec2 end = polyline[i + 1];
    const double len = (end - at).norm();
    if (len >= remaining) return at + unit(end - at) * remaining;
    remaining -= len;
    at = end;
  }
  return polyline.back();
}

}  // namespace levelk::airspace
