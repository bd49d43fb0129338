#pragma once

#include <cmath>
#include <complex>
#include <string_view>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "qopt/errors.hpp"

namespace qopt::detail {

/// Integrates x' = rhs(x, t) with adaptive Dormand-Prince (abs = rel = tol),
/// recording the state at each of `times` (ascending, times[0] is the start).
/// Step-size failures and non-finite states become ErrorCode::step_underflow.
template <class State, class Rhs>
std::vector<State> integrate_at_times(Rhs rhs, State x, const std::vector<double>& times,
                                      double tol, std::string_view module,
                                      std::string_view operation) {
  namespace odeint = boost::numeric::odeint;
  std::vector<State> out;
  out.reserve(times.size());
  if (times.size() < 2) {
    out.push_back(x);
    return out;
  }
  auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_dopri5<State>());
  const double span = times.back() - times.front();
  const double dt0 = std::min(1e-3, span / 10.0);
  try {
    odeint::integrate_times(
        stepper,
        [&](const State& s, State& ds, double t) { rhs(s, ds, t); }, x, times.begin(),
        times.end(), dt0, [&](const State& s, double) { out.push_back(s); },
        odeint::max_step_checker(1000000));
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    raise(ErrorCode::step_underflow, module, operation,
          std::string("adaptive integrator failed: ") + e.what());
  }
  for (const State& s : out) {
    for (const auto& v : s) {
      if (!std::isfinite(std::abs(v))) {
        raise(ErrorCode::step_underflow, module, operation,
              "integration produced non-finite values");
      }
    }
  }
  return out;
}

}  // namespace qopt::detail
