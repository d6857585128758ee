#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "morsecone/errors.hpp"

namespace morsecone::ode {

struct Tolerances {
  double relative = 1e-12;
  double absolute = 1e-14;
};

// Adaptive Runge-Kutta-Fehlberg 7(8) driver. Every caller in the library
// integrates forward in its independent variable and needs step-level access
// (sign-change detection, exact landing on sample points), so this wraps the
// odeint controlled stepper instead of the integrate_* convenience loops.
template <std::size_t Dim>
class Integrator {
 public:
  using state_type = std::array<double, Dim>;
  using error_stepper = boost::numeric::odeint::runge_kutta_fehlberg78<state_type>;

  explicit Integrator(Tolerances tol = {}, double initial_step = 1e-3,
                      double max_step = std::numeric_limits<double>::infinity())
      : stepper_(boost::numeric::odeint::make_controlled(tol.absolute, tol.relative,
                                                         error_stepper())),
        dt_(initial_step),
        max_step_(max_step) {}

  // Advances (x, t) to t_end. `observe(t_prev, x_prev, t, x)` runs after each
  // accepted step; returning true stops early, leaving (x, t) at that step.
  // Returns true when stopped early.
  template <class System, class Observer>
  bool advance(System& system, state_type& x, double& t, double t_end, Observer&& observe) {
    namespace odeint = boost::numeric::odeint;
    std::size_t steps = 0;
    while (t < t_end) {
      double dt = std::min({dt_, t_end - t, max_step_});
      const bool clipped = dt >= t_end - t;
      const double t_prev = t;
      const state_type x_prev = x;
      auto sys = [&system](const state_type& y, state_type& dy, double s) { system(y, dy, s); };
      const auto result = stepper_.try_step(sys, x, t, dt);
      if (result == odeint::success) {
        // A step clipped to land on t_end says nothing about the natural
        // step size, so the previous proposal is kept in that case.
        dt_ = clipped ? std::max(dt_, dt) : dt;
        if (clipped) t = t_end;
        if (observe(t_prev, x_prev, t, x)) return true;
      } else {
        dt_ = dt;
      }
      if (dt_ < 1e-14 * std::max(1.0, std::abs(t))) {
        throw Error(ErrorKind::StepSizeUnderflow, "ode",
                    "step size underflow at t = " + std::to_string(t),
                    {{"t", std::to_string(t)}, {"dt", std::to_string(dt_)}});
      }
      if (++steps > max_steps_) {
        throw Error(ErrorKind::StepSizeUnderflow, "ode", "step budget exhausted",
                    {{"t", std::to_string(t)}});
      }
    }
    return false;
  }

  template <class System>
  void advance(System& system, state_type& x, double& t, double t_end) {
    advance(system, x, t, t_end, [](double, const state_type&, double, const state_type&) {
      return false;
    });
  }

  // One fixed step of size h from (x, t); used to place events inside an
  // accepted step at the integrator's own order.
  template <class System>
  static state_type single_step(System& system, state_type x, double t, double h) {
    error_stepper stepper;
    auto sys = [&system](const state_type& y, state_type& dy, double s) { system(y, dy, s); };
    stepper.do_step(sys, x, t, h);
    return x;
  }

  double step() const noexcept { return dt_; }

 private:
  boost::numeric::odeint::controlled_runge_kutta<error_stepper> stepper_;
  double dt_;
  double max_step_;
  std::size_t max_steps_ = 50'000'000;
};

}  // namespace morsecone::ode
