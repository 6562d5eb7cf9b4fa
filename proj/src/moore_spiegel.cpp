#include "recal/moore_spiegel.hpp"

#include <cmath>
#include <sstream>

#include "recal/math.hpp"

namespace recal {

void ms_derivatives(const MooreSpiegelState& s, double out[3]) {
  out[0] = s.y;
  out[1] = -s.y + s.R * s.x - s.Gamma * (s.x + s.z) - s.R * s.x * s.z * s.z;
  out[2] = s.x;
}

MooreSpiegelState ms_step(const MooreSpiegelState& state, double dt) {
  if (!(dt > 0.0 && dt <= 0.05)) throw Error("ms_step: dt must be in (0, 0.05]");
  auto shifted = [&](const double k[3], double h) {
    MooreSpiegelState s = state;
    s.x += h * k[0];
    s.y += h * k[1];
    s.z += h * k[2];
    return s;
  };
  double k1[3], k2[3], k3[3], k4[3];
  ms_derivatives(state, k1);
  ms_derivatives(shifted(k1, 0.5 * dt), k2);
  ms_derivatives(shifted(k2, 0.5 * dt), k3);
  ms_derivatives(shifted(k3, dt), k4);

  MooreSpiegelState out = state;
  out.x += dt / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
  out.y += dt / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
  out.z += dt / 6.0 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2]);
  return out;
}

std::vector<MooreSpiegelState> ms_trajectory(const MooreSpiegelState& state0,
                                             double dt, long steps) {
  if (steps < 0) throw Error("ms_trajectory: steps must be >= 0");
  std::vector<MooreSpiegelState> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back(state0);
  for (long i = 0; i < steps; ++i) {
    MooreSpiegelState next = ms_step(out.back(), dt);
    if (!std::isfinite(next.x) || !std::isfinite(next.y) || !std::isfinite(next.z)) {
      std::ostringstream os;
      os << "ms_trajectory: state diverged at step " << (i + 1);
      throw Error(os.str());
    }
    out.push_back(next);
  }
  return out;
}

}  // namespace recal
