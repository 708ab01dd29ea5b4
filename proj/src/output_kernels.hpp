#pragma once

// Per-variant inline kernels shared by the public output functions and the
// simulator's inner loops. Reciprocals of the time constants are taken once
// per kernel. Every kernel works on plain doubles and on Pack, two
// independent lanes stepped together; lanewise results are identical.

#include <cmath>

#include "svcmisc/misc_output.hpp"

namespace svcmisc::detail {

typedef double Pack __attribute__((vector_size(16)));

template <class T>
struct State {
  T s1{}, s2{}, f1{}, f2{};
};

inline State<double> to_state(const OutputState& x) { return {x.s1, x.s2, x.f1, x.f2}; }
inline OutputState from_state(const State<double>& x) { return {x.s1, x.s2, x.f1, x.f2}; }

template <class T>
T splat(double v) {
  if constexpr (std::is_same_v<T, Pack>) {
    return Pack{v, v};
  } else {
    return v;
  }
}

template <class T>
T hill_unchecked(T x) {
  const T x2 = x * x;
  return x2 / (1.0 + x2);
}

template <class T>
T pow_lanes(T x, double e) {
  if constexpr (std::is_same_v<T, Pack>) {
    return Pack{std::pow(x[0], e), std::pow(x[1], e)};
  } else {
    return std::pow(x, e);
  }
}

template <class T>
State<T> axpy(const State<T>& x, T h, const State<T>& d) {
  return {x.s1 + h * d.s1, x.s2 + h * d.s2, x.f1 + h * d.f1, x.f2 + h * d.f2};
}

// Slow cascade 1/(beta2 s + 1)^2 on u; fast cascade 1/(beta1 s + 1)^2 on
// u_s * u.
struct OmanPathways {
  double inv_beta1;
  double inv_beta2;

  OmanPathways(double beta1, double beta2) : inv_beta1(1.0 / beta1), inv_beta2(1.0 / beta2) {}

  template <class T>
  State<T> derivatives(const State<T>& x, T u) const {
    return {(u - x.s1) * inv_beta2, (x.s1 - x.s2) * inv_beta2, (x.s2 * u - x.f1) * inv_beta1,
            (x.f1 - x.f2) * inv_beta1};
  }
  template <class T>
  static T pathway_output(const State<T>& x) {
    return x.s2 + x.f2;
  }
};

template <class P>
struct Kernel;

template <>
struct Kernel<MsiBaseParams> {
  double inv_b, inv_tau, gain;
  explicit Kernel(const MsiBaseParams& p) : inv_b(1.0 / p.b), inv_tau(1.0 / p.tau_i), gain(p.gain) {}
  template <class T>
  T input(T dv) const {
    return hill_unchecked<T>(dv * inv_b);
  }
  template <class T>
  State<T> derivatives(const State<T>& x, T u) const {
    return {(u - x.s1) * inv_tau, (x.s1 - x.s2) * inv_tau, T{}, T{}};
  }
  template <class T>
  static T pathway_output(const State<T>& x) {
    return x.s2;
  }
  double post_map(double u_o) const { return gain * u_o; }
};

template <>
struct Kernel<OmanApParams> : OmanPathways {
  double exponent;
  explicit Kernel(const OmanApParams& p) : OmanPathways(p.beta1, p.beta2), exponent(p.exponent) {}
  template <class T>
  static T input(T dv) {
    return dv;
  }
  double post_map(double u_o) const { return std::pow(u_o, exponent); }
};

template <>
struct Kernel<OmanBpParams> : OmanPathways {
  double exponent;
  explicit Kernel(const OmanBpParams& p) : OmanPathways(p.beta1, p.beta2), exponent(p.exponent) {}
  template <class T>
  T input(T dv) const {
    return pow_lanes(dv, exponent);
  }
  static double post_map(double u_o) { return u_o; }
};

template <>
struct Kernel<OmanHillParams> : OmanPathways {
  double inv_b, gain;
  explicit Kernel(const OmanHillParams& p) : OmanPathways(p.beta1, p.beta2), inv_b(1.0 / p.b), gain(p.gain) {}
  template <class T>
  T input(T dv) const {
    return hill_unchecked<T>(dv * inv_b);
  }
  double post_map(double u_o) const { return gain * u_o; }
};

// One classical RK4 step given the filter inputs at the four stages.
template <class K, class T>
State<T> rk4_step(const K& k, const State<T>& x, double h, T u1, T u2, T u3, T u4) {
  const T half = splat<T>(0.5 * h);
  const T full = splat<T>(h);
  const State<T> k1 = k.derivatives(x, u1);
  const State<T> k2 = k.derivatives(axpy(x, half, k1), u2);
  const State<T> k3 = k.derivatives(axpy(x, half, k2), u3);
  const State<T> k4 = k.derivatives(axpy(x, full, k3), u4);
  const double w = h / 6.0;
  return {x.s1 + w * (k1.s1 + 2.0 * k2.s1 + 2.0 * k3.s1 + k4.s1),
          x.s2 + w * (k1.s2 + 2.0 * k2.s2 + 2.0 * k3.s2 + k4.s2),
          x.f1 + w * (k1.f1 + 2.0 * k2.f1 + 2.0 * k3.f1 + k4.f1),
          x.f2 + w * (k1.f2 + 2.0 * k2.f2 + 2.0 * k3.f2 + k4.f2)};
}

}  // namespace svcmisc::detail
