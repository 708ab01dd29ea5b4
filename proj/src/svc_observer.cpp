#include "svcmisc/svc_observer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace svcmisc {

void SvcParams::validate() const {
  const auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument(std::string("SVC parameter ") + name + " must be positive");
  };
  positive(k_a, "K_a");
  positive(k_w, "K_w");
  positive(k_ac, "K_ac");
  positive(k_wc, "K_wc");
  positive(k_vc, "K_vc");
  positive(tau, "tau");
  positive(tau_d, "tau_d");
  if (!(g0 >= 0.0) || !std::isfinite(g0))
    throw std::invalid_argument("SVC parameter g0 must be non-negative");
}

double SvcState::operator[](int i) const {
  const Vec3* blocks[] = {&x_scc, &x_scc_hat, &v_s, &v_s_hat, &i_dv};
  return (*blocks[i / 3])[i % 3];
}

bool SvcState::all_finite() const {
  return first_non_finite() < 0;
}

int SvcState::first_non_finite() const {
  for (int i = 0; i < kSize; ++i)
    if (!std::isfinite((*this)[i])) return i;
  return -1;
}

SvcState& SvcState::operator+=(const SvcState& o) {
  x_scc += o.x_scc;
  x_scc_hat += o.x_scc_hat;
  v_s += o.v_s;
  v_s_hat += o.v_s_hat;
  i_dv += o.i_dv;
  return *this;
}

SvcState operator*(SvcState a, double k) {
  a.x_scc *= k;
  a.x_scc_hat *= k;
  a.v_s *= k;
  a.v_s_hat *= k;
  a.i_dv *= k;
  return a;
}

SvcState initial_state(const SvcParams& params) {
  SvcState s;
  const Vec3 up(0.0, 0.0, params.g0);
  s.v_s = up;
  s.v_s_hat = up;
  s.i_dv = up / params.k_vc;
  return s;
}

FeedbackSolution resolve_feedback(const SvcState& state, const MotionSample& input,
                                  const SvcParams& p) {
  FeedbackSolution fb;

  // Canal loop: omega_hat = K_w*omega + K_wc*(omega_s - omega_s_hat), with
  // omega_s_hat = omega_hat - x_scc_hat.
  fb.omega_s = input.omega - state.x_scc;
  fb.omega_hat = (p.k_w * input.omega + p.k_wc * (fb.omega_s + state.x_scc_hat)) / (1.0 + p.k_wc);
  fb.omega_s_hat = fb.omega_hat - state.x_scc_hat;

  // Otolith loop: f_hat = K_a*a + K_ac*(a_s - a_s_hat) + K_vc*I, with
  // a_s_hat = f_hat - v_s_hat.
  fb.a_s = input.f - state.v_s;
  fb.f_hat = (p.k_a * input.a + p.k_ac * (fb.a_s + state.v_s_hat) + p.k_vc * state.i_dv) /
             (1.0 + p.k_ac);
  fb.a_s_hat = fb.f_hat - state.v_s_hat;

  fb.delta_omega = fb.omega_s - fb.omega_s_hat;
  fb.delta_a = fb.a_s - fb.a_s_hat;
  fb.delta_v = state.v_s - state.v_s_hat;
  return fb;
}

SvcState derivatives(const SvcState& state, const MotionSample& input, const SvcParams& p,
                     FeedbackSolution* out) {
  const FeedbackSolution fb = resolve_feedback(state, input, p);
  SvcState d;
  d.x_scc = (input.omega - state.x_scc) / p.tau_d;
  d.x_scc_hat = (fb.omega_hat - state.x_scc_hat) / p.tau_d;
  d.v_s = (input.f - state.v_s) / p.tau - fb.omega_s.cross(state.v_s);
  d.v_s_hat = (fb.f_hat - state.v_s_hat) / p.tau - fb.omega_s_hat.cross(state.v_s_hat);
  d.i_dv = fb.delta_v;
  if (out) *out = fb;
  return d;
}

}  // namespace svcmisc
