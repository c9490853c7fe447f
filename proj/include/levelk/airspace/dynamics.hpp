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

#pragma once

#include <optional>
#include <span>

#include "levelk/airspace/types.hpp"
#include "levelk/common/vec2.hpp"

namespace levelk::airspace {

/// Wraps to [0, 360).
double normalize_heading(double degrees);
/// Shortest signed difference a - b in (-180, 180].
double heading_difference(double a, double b);

/// Euler step of dPsi/dt = -0.1 (Psi - Psi_d) on the shortest angular error.
double step_heading(double heading, double desired, double dt);

/// (|v| sin Psi, |v| cos Psi).
Vec2 velocity_components(double heading, double speed);

/// Heading of a velocity vector, [0, 360).
double heading_of(Vec2 velocity);

/// Euler step of dv/dt = -(v - v_d) (time constant 1 s).
Vec2 step_uas_velocity(Vec2 v, Vec2 v_desired, double dt);

/// Current velocity vector in km/h.
Vec2 velocity_of(const AircraftState& a);

struct Conflict {
  double time = 0.0;       // s until closest approach, within [0, time_horizon]
  double distance = 0.0;   // km at closest approach
  Vec2 r0;                 // intruder - ego position now, km
  Vec2 rm;                 // intruder - ego position at closest approach, km
};

/// Straight-line constant-velocity projection of both aircraft over the
/// time horizon. Returns the closest approach if the intruder is inside the
/// distance horizon and the minimum distance is below the threshold.
std::optional<Conflict> detect_conflict(const AircraftState& ego, const AircraftState& intruder,
                                        const SaaConfig& saa);

/// Collision-cone resolution. r = intruder - ego, v_ei = v_e - v_i; the
/// relative velocity is replaced by its projection onto the nearer edge of
/// the cone of half-angle asin(R/|r|) and the intruder velocity is added
/// back. Inputs and result in km and km/h. Inside the protected zone
/// (|r| <= R) it flies directly away at `fallback_speed`.
Vec2 saa1_command(Vec2 ego_position, Vec2 ego_velocity, Vec2 intruder_position, Vec2 intruder_velocity,
                  double R, double fallback_speed);

/// Unit-vector command from the initial and closest-approach relative
/// positions (r = intruder - ego, v_ei = v_i - v_e):
///   normalize(-v_e (r0 . v_ei / |v_ei|) - (R - |r_m|) r_m / |r_m|),
/// evaluated with positions in km and velocities in km/s. When r_m = 0
/// it escapes perpendicular to the relative velocity.
Vec2 saa2_command(Vec2 ego_velocity, Vec2 intruder_velocity, Vec2 r0, Vec2 rm, double R);

/// Perpendicular distance from p to a polyline (km).
double distance_to_polyline(Vec2 p, std::span<const Vec2> polyline);
/// Point `ahead` km further along the polyline than p's projection.
Vec2 lookahead_point(Vec2 p, std::span<const Vec2> polyline, double ahead);

}  // namespace levelk::airspace
