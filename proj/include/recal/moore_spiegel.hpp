#pragma once

#include <vector>

namespace recal {

/// Moore-Spiegel state with its dynamical parameters:
///   x' = y,  y' = -y + R x - Gamma (x + z) - R x z^2,  z' = x.
/// Chaotic at R = 10, Gamma = 3.6.
struct MooreSpiegelState {
  double x = 0.0, y = 0.0, z = 0.0;
  double R = 10.0;
  double Gamma = 3.6;
};

/// Time derivatives (dx, dy, dz) at the given state.
void ms_derivatives(const MooreSpiegelState& s, double out[3]);

/// One classical fourth-order Runge-Kutta step. Requires dt in (0, 0.05].
MooreSpiegelState ms_step(const MooreSpiegelState& state, double dt);

/// steps iterated RK4 states, starting with state0 itself (steps+1 entries).
/// Throws (with the step index in the message) if the state diverges.
std::vector<MooreSpiegelState> ms_trajectory(const MooreSpiegelState& state0,
                                             double dt, long steps);

}  // namespace recal
