#pragma once

#include "svcmisc/motion_data.hpp"
#include "svcmisc/vec3.hpp"

namespace svcmisc {

// Fixed gains of the In-1 subjective-vertical observer.
struct SvcParams {
  double k_a = 0.1;    // efference gain on true acceleration
  double k_w = 0.1;    // efference gain on true angular velocity
  double k_ac = 0.5;   // acceleration-conflict feedback
  double k_wc = 10.0;  // angular-velocity-conflict feedback
  double k_vc = 5.0;   // integral gain on vertical conflict
  double tau = 2.0;    // Mayne low-pass time constant, s
  double tau_d = 7.0;  // canal time constant, s
  double g0 = kDefaultGravity;

  // Throws std::invalid_argument unless every gain and time constant is
  // positive and finite. g0 may be zero (weightless configuration).
  void validate() const;
};

// 15 observer states.
struct SvcState {
  Vec3 x_scc = Vec3::Zero();      // canal low-pass state, rad/s
  Vec3 x_scc_hat = Vec3::Zero();  // internal-model canal state, rad/s
  Vec3 v_s = Vec3::Zero();        // sensed vertical, m/s^2
  Vec3 v_s_hat = Vec3::Zero();    // expected vertical, m/s^2
  Vec3 i_dv = Vec3::Zero();       // integral of vertical conflict, m/s

  static constexpr int kSize = 15;

  double operator[](int i) const;
  bool all_finite() const;
  // Index of the first non-finite scalar, or -1.
  int first_non_finite() const;

  SvcState& operator+=(const SvcState& o);
  friend SvcState operator+(SvcState a, const SvcState& b) { return a += b; }
  friend SvcState operator*(SvcState a, double k);
  friend SvcState operator*(double k, const SvcState& a) { return a * k; }
};

// Signals of one observer evaluation, with both algebraic loops closed.
struct FeedbackSolution {
  Vec3 omega_s;      // sensed angular velocity
  Vec3 omega_hat;    // internal-model angular velocity input
  Vec3 omega_s_hat;  // expected sensed angular velocity
  Vec3 f_hat;        // internal-model specific force input
  Vec3 a_s;          // sensed linear acceleration
  Vec3 a_s_hat;      // expected linear acceleration
  Vec3 delta_a;
  Vec3 delta_omega;
  Vec3 delta_v;
};

// Rest equilibrium: filters at zero, both verticals at (0,0,g0) and the
// conflict integral at (0,0,g0/k_vc), so a stationary upright head produces
// zero conflict from t = 0.
SvcState initial_state(const SvcParams& params);

// Closed-form solution of the canal and otolith feedback loops.
FeedbackSolution resolve_feedback(const SvcState& state, const MotionSample& input,
                                  const SvcParams& params);

// State derivative. When fb is non-null it receives the feedback solution
// used to build the derivative.
SvcState derivatives(const SvcState& state, const MotionSample& input, const SvcParams& params,
                     FeedbackSolution* fb = nullptr);

inline double conflict_norm(const FeedbackSolution& fb) { return fb.delta_v.norm(); }

}  // namespace svcmisc
