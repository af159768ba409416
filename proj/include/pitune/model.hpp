#pragma once

#include <cmath>
#include <stdexcept>

namespace pitune {

/*! \brief First-order-plus-dead-time process K·e^{−L·s}/(1 + T_p·s).

  Physical units are seconds throughout; the dimensionless forms below refer
  time to the delay L (delay systems) or to the time constant T_p (delay-free
  systems).
*/
struct PlantModel {
  double gain_K = 1.0;          //!< steady-state gain (output/input)
  double time_constant_Tp = 1.0; //!< seconds, > 0
  double delay_L = 1.0;          //!< seconds, > 0 for delayed plants

  [[nodiscard]] bool valid() const {
    return gain_K != 0.0 && time_constant_Tp > 0.0 && delay_L >= 0.0;
  }
};

/*! \brief PI controller K_p + K_i/s, equivalently K_p(1 + 1/(T_i·s)).

  Both parameterizations are carried; they must agree (K_i·T_i = K_p).
*/
struct PiController {
  double kp = 0.0; //!< proportional gain
  double ki = 0.0; //!< integral gain, 1/seconds
  double ti = 0.0; //!< integral time, seconds

  static PiController from_kp_ti(double kp, double ti) {
    if (ti <= 0.0) throw std::invalid_argument("PiController: T_i must be > 0");
    return {kp, kp / ti, ti};
  }
  static PiController from_kp_ki(double kp, double ki) {
    if (ki == 0.0) throw std::invalid_argument("PiController: K_i must be nonzero");
    return {kp, ki, kp / ki};
  }

  //! K_i·T_i = K_p consistency, relative tolerance 1e-12.
  [[nodiscard]] bool consistent() const {
    const double lhs = ki * ti;
    return std::abs(lhs - kp) <= 1e-12 * std::max(std::abs(lhs), std::abs(kp));
  }
};

/*! \brief Dimensionless plant for the delay loop: t_p = T_p/L. */
struct NormalizedPlant {
  double tp; //!< > 0
};

/*! \brief Dimensionless controller for the delay loop: h = K·K_p, h_i = K·K_i·L. */
struct Gains {
  double h;
  double hi;
};

/*! \brief Dimensionless controller for the delay-free loop: h = K·K_p, t_i = T_i/T_p. */
struct NoDelayGains {
  double h;
  double ti;
};

/*! \brief Map physical plant + controller to the delay-loop gains (h, h_i). */
[[nodiscard]] inline Gains normalize(const PlantModel& plant, const PiController& c) {
  if (!plant.valid()) throw std::invalid_argument("normalize: invalid plant");
  if (plant.delay_L <= 0.0) throw std::invalid_argument("normalize: delay L must be > 0");
  double ki = c.ki;
  if (ki == 0.0) {
    if (c.ti <= 0.0) throw std::invalid_argument("normalize: T_i must be > 0");
    ki = c.kp / c.ti;
  }
  return {plant.gain_K * c.kp, plant.gain_K * ki * plant.delay_L};
}

/*! \brief Inverse of normalize: recover the physical PI controller. */
[[nodiscard]] inline PiController denormalize(const Gains& g, const PlantModel& plant) {
  if (plant.gain_K == 0.0) throw std::invalid_argument("denormalize: plant gain K must be nonzero");
  if (plant.delay_L <= 0.0) throw std::invalid_argument("denormalize: delay L must be > 0");
  if (g.hi == 0.0) throw std::invalid_argument("denormalize: h_i must be nonzero");
  const double kp = g.h / plant.gain_K;
  const double ki = g.hi / (plant.gain_K * plant.delay_L);
  return {kp, ki, kp / ki};
}

/*! \brief t_p = T_p/L of a physical plant. */
[[nodiscard]] inline NormalizedPlant normalized(const PlantModel& plant) {
  if (plant.delay_L <= 0.0) throw std::invalid_argument("normalized: delay L must be > 0");
  return {plant.time_constant_Tp / plant.delay_L};
}

/*! \brief Map physical plant + controller to the delay-free gains (h, t_i). */
[[nodiscard]] inline NoDelayGains normalize_nodelay(const PlantModel& plant,
                                                    const PiController& c) {
  if (!plant.valid()) throw std::invalid_argument("normalize_nodelay: invalid plant");
  double ti = c.ti;
  if (ti <= 0.0) {
    if (c.ki == 0.0) throw std::invalid_argument("normalize_nodelay: need T_i or K_i");
    ti = c.kp / c.ki;
  }
  if (ti <= 0.0) throw std::invalid_argument("normalize_nodelay: T_i must be > 0");
  return {plant.gain_K * c.kp, ti / plant.time_constant_Tp};
}

} // namespace pitune
