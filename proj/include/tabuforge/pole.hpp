#pragma once

#include <iosfwd>
#include <vector>

#include "tabuforge/problem.hpp"

namespace tabuforge::pole {

// Geometry and discretization of the surrogate field model. Two mirror-image
// pole faces close on a gap of half-width `gap_half`; the face at radius r
// sits at z = +-(gap_half - height(r)), so positive height moves material
// into the gap. Faces carry uniform surface charge of opposite sign (+sigma
// on top, -sigma below) in units where a point charge q contributes
// q/(4 pi d^2); each face is discretized into concentric annular rings and
// the axial field is the analytic ring field summed over rings. Field
// uniformity is scored over a 9x9 (r,z) grid in the region of interest.
struct FieldModel {
  double pole_radius = 16.0;     // cm
  double gap_half = 10.0;        // cm
  double height_max = 6.0;       // cm, |height| bound
  double ramp_width = 0.8;       // cm (5% of the pole radius)
  double roi_radius = 6.0;       // cm
  double roi_half_height = 4.0;  // cm
  int grid_r = 9;
  int grid_z = 9;
  int n_ring = 200;              // rings per face
  double sigma = 1.0;            // surface charge density
};

// One ramp of the piecewise-linear face profile: the face rises (or falls)
// from the previous plateau to plateau_height over a fixed-width ramp that
// starts at break_radius.
struct Ramp {
  double break_radius = 0.0;    // cm
  double plateau_height = 0.0;  // cm
};

struct PoleProfile {
  std::vector<Ramp> ramps;   // 1..4, break radii strictly increasing
  double pole_radius = 16.0;
  double ramp_width = 0.8;

  // Throws std::invalid_argument unless 0 < r_1 < ... < r_k < pole_radius
  // and |h_j| <= height_max. Heights need not be monotone.
  void validate(double height_max) const;
};

// Interleaved (r_1, h_1, ..., r_k, h_k) parameters to a profile. Performs no
// validation or reordering: out-of-order radii stay out of order and are
// reported through the problem's ordering constraint instead.
PoleProfile profile_from_params(const std::vector<double>& params,
                                const FieldModel& fm);

// Piecewise-linear face height. 0 on [0, r_1); from each break radius the
// profile ramps linearly to that ramp's plateau over ramp_width (truncated
// so a ramp never overlaps the next break), then holds the plateau. Throws
// std::domain_error for r outside [0, pole_radius].
double height_at(const PoleProfile& profile, double r);

// Axial field component at (r, z) inside the gap; throws std::domain_error
// when the point lies outside the gap region or beyond the pole radius.
double field_at(const PoleProfile& profile, const FieldModel& fm, double r,
                double z);

// Sum of squared deviations of the axial field from its grid mean, scaled by
// 1e6 / mean^2 (dimensionless, lower is better). Throws std::domain_error
// when the mean field is zero (degenerate configuration).
double uniformity_objective(const PoleProfile& profile, const FieldModel& fm);

// The scale-invariant core of the objective, exposed for direct testing.
double uniformity_from_samples(const std::vector<double>& samples);

// (r, h) polyline of the face profile, CSV with header, `samples` rows.
void write_profile_csv(const PoleProfile& profile, std::ostream& out,
                       int samples = 161);

// Ramp-count schemes 1..4 -> 2k-dimensional problem: per ramp a break radius
// in [0.5, R-0.5] and a plateau height in [-h_max, h_max], both on 0.1-cm
// grids; one ordering constraint sum_j max(0, r_j - r_{j+1} + 0.1). Random
// start. Throws std::invalid_argument for other scheme values.
ProblemDefinition make_pole_problem(int ramp_count, const FieldModel& fm = {});

PenaltyConfig pole_penalty();

namespace detail {

// Complete elliptic integral of the second kind as a function of the
// parameter m = k^2, via the Abramowitz-Stegun 17.3.36 polynomial
// (absolute error ~2e-8); m must lie in [0, 1].
double ellint_e_param(double m);

// Axial field at (r, z) of a circular ring of total charge `charge`, radius
// `ring_radius`, in the plane z = ring_z.
double ring_axial_field(double charge, double ring_radius, double ring_z,
                        double r, double z);

struct RingSource {
  double radius = 0.0;
  double z = 0.0;
  double charge = 0.0;
};

// The annular-ring discretization of one face; sign +1 for the top face
// (z > 0), -1 for the mirror face. The bottom face carries +sigma and the
// top -sigma, so the gap field points along +z and in-gap samples are
// positive.
std::vector<RingSource> face_rings(const PoleProfile& profile,
                                   const FieldModel& fm, int sign);

}  // namespace detail

}  // namespace tabuforge::pole
