#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "pitune/model.hpp"
#include "pitune/response.hpp"

namespace pitune {

/*! \brief Coefficients of one unit-interval segment of the closed-loop response.

  Segment n (1-based) is  y_n(τ) = Σ_i poly[i]·τ^i + e^{−τ/t_p}·Σ_j exp_poly[j]·τ^j
  with local time τ ∈ [0, 1]; the polynomial part has n coefficients and the
  exponential part n−1 (segment 1 is the constant 1 with no exponential part).

  Coefficients are kept in extended precision: they grow like t_p^k·k! with
  alternating signs while the solution itself stays O(1), so for slow plants
  with strong integral action (t_p·h_i beyond ~20) double-precision Horner
  evaluation cancels down to ~1e-4 absolute by the seventh segment.  The
  extra mantissa bits of long double keep the sampled response good to
  better than 1e-6 everywhere the published tables reach.
*/
struct SegmentCoeffs {
  std::vector<long double> poly;
  std::vector<long double> exp_poly;
};

namespace detail {

//! Horner evaluation; empty vector is the zero polynomial.
inline long double poly_eval(const std::vector<long double>& c, long double x) {
  long double r = 0.0L;
  for (std::size_t i = c.size(); i-- > 0;) r = r * x + c[i];
  return r;
}

inline std::vector<long double> poly_deriv(const std::vector<long double>& c) {
  std::vector<long double> d;
  if (c.size() > 1) {
    d.resize(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = static_cast<long double>(i) * c[i];
  }
  return d;
}

} // namespace detail

/*! \brief Piecewise-exponential-polynomial solution of the delayed loop.

  Built interval by interval: on each unit interval the delayed controller
  output is a known exponential polynomial, so the plant equation
  t_p·y′ + y = v(t−1) integrates in closed form.  The controller output at
  time t is recovered by inverting the plant one delay ahead,
  v(t) = y(t+1) + t_p·y′(t+1), which is why a solution covering v on
  [0, n] carries n+1 y-segments.
*/
class PiecewiseSolution {
public:
  PiecewiseSolution(double tp, Gains g, int n_intervals, StepMode mode,
                    std::vector<SegmentCoeffs> segments)
      : tp_(tp), gains_(g), n_intervals_(n_intervals), mode_(mode),
        segments_(std::move(segments)) {}

  [[nodiscard]] double tp() const { return tp_; }
  [[nodiscard]] Gains gains() const { return gains_; }
  [[nodiscard]] int n_intervals() const { return n_intervals_; }
  [[nodiscard]] StepMode mode() const { return mode_; }
  [[nodiscard]] const std::vector<SegmentCoeffs>& segments() const { return segments_; }

  /*! \brief y(t); valid on [0, #segments].  Right-continuous segment pick at knots. */
  [[nodiscard]] double eval_y(double t) const {
    const auto [seg, tau] = locate(t);
    return static_cast<double>(value_at(segments_[seg], tau));
  }

  /*! \brief dy/dt at t (one-sided from the right at knots). */
  [[nodiscard]] double eval_y_deriv(double t) const {
    const auto [seg, tau] = locate(t);
    return static_cast<double>(deriv_at(segments_[seg], tau));
  }

  /*! \brief Controller output (scaled by the plant gain) via plant inversion:
    v(t) = y(t+1) + t_p·y′(t+1).  Valid on [0, #segments − 1]. */
  [[nodiscard]] double eval_v(double t) const {
    if (t < 0.0 || t > static_cast<double>(segments_.size()) - 1.0)
      throw std::out_of_range("eval_v: t outside solved horizon");
    return eval_y(t + 1.0) + tp_ * eval_y_deriv(t + 1.0);
  }

  //! Segment-local evaluation by integer index (1-based segment, τ ∈ [0,1]).
  [[nodiscard]] double eval_segment(int n, double tau) const {
    return static_cast<double>(value_at(segments_.at(static_cast<std::size_t>(n - 1)), tau));
  }

  [[nodiscard]] double eval_segment_deriv(int n, double tau) const {
    return static_cast<double>(deriv_at(segments_.at(static_cast<std::size_t>(n - 1)), tau));
  }

private:
  [[nodiscard]] long double value_at(const SegmentCoeffs& s, long double tau) const {
    long double r = detail::poly_eval(s.poly, tau);
    if (!s.exp_poly.empty())
      r += std::exp(-tau / static_cast<long double>(tp_)) * detail::poly_eval(s.exp_poly, tau);
    return r;
  }

  [[nodiscard]] long double deriv_at(const SegmentCoeffs& s, long double tau) const {
    const long double ltp = static_cast<long double>(tp_);
    long double r = detail::poly_eval(detail::poly_deriv(s.poly), tau);
    if (!s.exp_poly.empty()) {
      const long double e = detail::poly_eval(s.exp_poly, tau);
      const long double ep = detail::poly_eval(detail::poly_deriv(s.exp_poly), tau);
      r += std::exp(-tau / ltp) * (ep - e / ltp);
    }
    return r;
  }

  [[nodiscard]] std::pair<std::size_t, double> locate(double t) const {
    const auto nseg = static_cast<double>(segments_.size());
    if (t < 0.0 || t > nseg)
      throw std::out_of_range("eval_y: t outside solved horizon");
    std::size_t seg = (t >= nseg) ? segments_.size() - 1
                                  : static_cast<std::size_t>(std::floor(t));
    if (seg >= segments_.size()) seg = segments_.size() - 1;
    return {seg, t - static_cast<double>(seg)};
  }

  double tp_;
  Gains gains_;
  int n_intervals_;
  StepMode mode_;
  std::vector<SegmentCoeffs> segments_;
};

/*! \brief Integrate the delayed loop exactly, one unit interval at a time.

  Works on the state form of the loop: within segment m the controller output
  is v_m(τ) = bias − h·y_m(τ) − h_i·(I_m + ∫₀^τ y_m), where I_m is the error
  integral accumulated over the previous segments and bias is 1+h when the
  setpoint acts through the integral term only (continuous v) or 1 when the
  proportional term sees the full error (setpoint kick).  The next segment
  then solves t_p·y′ + y = v_m(τ) in closed form:

    * the polynomial particular solution comes from back-substitution,
    * the e^{−τ/t_p} forcing is resonant with the plant pole, raising the
      exponential polynomial degree by one,
    * the free exponential constant restores continuity at the knot.

  Degrees grow by one per segment, giving segment n a degree-(n−1) polynomial
  and a degree-(n−2) exponential polynomial.  n_intervals is the span on
  which the controller output is needed; one extra y-segment is built so that
  the plant inversion v(t) = y(t+1) + t_p·y′(t+1) covers all of it.
*/
[[nodiscard]] inline PiecewiseSolution solve_steps(double tp, Gains g, int n_intervals = 7,
                                                   StepMode mode = StepMode::integral_only) {
  if (tp <= 0.0) throw std::invalid_argument("solve_steps: singular model, tp must be > 0");
  if (n_intervals < 1) throw std::invalid_argument("solve_steps: n_intervals must be >= 1");

  const long double ltp = tp;
  const long double h = g.h, hi = g.hi;
  const long double bias = (mode == StepMode::integral_only) ? 1.0L + h : 1.0L;
  const int n_segments = n_intervals + 1;

  std::vector<SegmentCoeffs> segs;
  segs.reserve(static_cast<std::size_t>(n_segments));
  segs.push_back({{1.0L}, {}}); // pre-step steady state propagates one delay

  long double integral_sum = 0.0L; // ∫ y over the completed segments
  for (int m = 1; m < n_segments; ++m) {
    const SegmentCoeffs& cur = segs.back();
    const std::vector<long double>& P = cur.poly;
    const std::vector<long double>& E = cur.exp_poly;

    // ∫₀^τ y_m = Pint(τ) + G(τ)e^{−τ/t_p} − G(0), with G′ − G/t_p = E.
    std::vector<long double> Pint(P.size() + 1, 0.0L);
    for (std::size_t i = 0; i < P.size(); ++i)
      Pint[i + 1] = P[i] / static_cast<long double>(i + 1);
    std::vector<long double> G(E.size(), 0.0L);
    for (std::size_t k = E.size(); k-- > 0;) {
      const long double gk1 = (k + 1 < G.size()) ? G[k + 1] : 0.0L;
      G[k] = ltp * (static_cast<long double>(k + 1) * gk1 - E[k]);
    }
    const long double G0 = G.empty() ? 0.0L : G[0];

    // Drive D(τ) = bias − h·y_m − h_i·(I_m + ∫₀^τ y_m), split into
    // polynomial and exponential parts.
    std::vector<long double> PD(std::max(P.size() + 1, std::size_t{1}), 0.0L);
    for (std::size_t i = 0; i < P.size(); ++i) PD[i] -= h * P[i];
    for (std::size_t i = 0; i < Pint.size(); ++i) PD[i] -= hi * Pint[i];
    PD[0] += bias - hi * integral_sum + hi * G0;
    std::vector<long double> ED(std::max(E.size(), G.size()), 0.0L);
    for (std::size_t i = 0; i < E.size(); ++i) ED[i] -= h * E[i];
    for (std::size_t i = 0; i < G.size(); ++i) ED[i] -= hi * G[i];

    // Particular polynomial Φ: t_p·Φ′ + Φ = PD (back-substitution, top down).
    std::vector<long double> Phi(PD.size(), 0.0L);
    for (std::size_t k = PD.size(); k-- > 0;) {
      const long double up = (k + 1 < Phi.size()) ? Phi[k + 1] : 0.0L;
      Phi[k] = PD[k] - ltp * static_cast<long double>(k + 1) * up;
    }

    // Resonant exponential particular: t_p·S′ = ED, i.e. S = ∫ED/t_p, plus
    // the homogeneous constant that makes y continuous at the knot.
    std::vector<long double> S(ED.size() + 1, 0.0L);
    for (std::size_t k = 0; k < ED.size(); ++k)
      S[k + 1] = ED[k] / (ltp * static_cast<long double>(k + 1));
    const long double ym_end =
        detail::poly_eval(P, 1.0L) +
        (E.empty() ? 0.0L : std::exp(-1.0L / ltp) * detail::poly_eval(E, 1.0L));
    S[0] = ym_end - Phi[0];

    segs.push_back({std::move(Phi), std::move(S)});

    // Advance the accumulated error integral with ∫₀¹ y_m.
    integral_sum += detail::poly_eval(Pint, 1.0L) +
                    (G.empty() ? 0.0L : std::exp(-1.0L / ltp) * detail::poly_eval(G, 1.0L)) - G0;
  }

  return PiecewiseSolution(tp, g, n_intervals, mode, std::move(segs));
}

/*! \brief Sample y and v on the canonical grid (default step 0.01).

  Grid indexing is done in integers so knots are hit exactly; at a knot the
  right-hand segment is used (continuity of y makes the choice invisible
  for y; v follows the same convention).
*/
[[nodiscard]] inline SampledResponse sample_response(const PiecewiseSolution& sol,
                                                     int samples_per_unit = 100) {
  if (samples_per_unit < 1)
    throw std::invalid_argument("sample_response: samples_per_unit must be >= 1");
  const int H = sol.n_intervals();
  const int nseg = static_cast<int>(sol.segments().size());
  const int n = H * samples_per_unit;
  const double dt = 1.0 / static_cast<double>(samples_per_unit);

  SampledResponse out;
  out.t.resize(n + 1);
  out.y.resize(n + 1);
  out.v.resize(n + 1);
  const auto at = [&](int k) { // (segment, τ) for grid index k, right-continuous
    int seg = k / samples_per_unit;
    if (seg >= nseg) seg = nseg - 1;
    const double tau = dt * static_cast<double>(k - seg * samples_per_unit);
    return std::pair<int, double>{seg + 1, tau};
  };
  for (int k = 0; k <= n; ++k) {
    out.t[k] = dt * static_cast<double>(k);
    const auto [ny, tau_y] = at(k);
    out.y[k] = sol.eval_segment(ny, tau_y);
    const auto [nv, tau_v] = at(k + samples_per_unit); // one delay ahead
    out.v[k] = sol.eval_segment(nv, tau_v) + sol.tp() * sol.eval_segment_deriv(nv, tau_v);
  }
  return out;
}

/*! \brief Performance indexes on the canonical 701-point grid (span [0,7]). */
[[nodiscard]] inline PerformanceIndexes indexes(const PiecewiseSolution& sol) {
  if (sol.n_intervals() < 7)
    throw std::logic_error("indexes: solution horizon shorter than 7 delays");
  return indexes_from_samples(sample_response(sol));
}

/*! \brief Convenience: solve and evaluate the index triple for one gain point. */
[[nodiscard]] inline PerformanceIndexes delay_indexes(double tp, Gains g,
                                                      StepMode mode = StepMode::integral_only) {
  return indexes(solve_steps(tp, g, 7, mode));
}

} // namespace pitune
