#pragma once

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace svcmisc {

// Conflict-to-MISC output dynamics.
enum class OutputVariant { MsiBase, OmanAP, OmanBP, OmanHill };

inline constexpr OutputVariant kAllVariants[] = {OutputVariant::MsiBase, OutputVariant::OmanAP,
                                                 OutputVariant::OmanBP, OutputVariant::OmanHill};

std::string_view to_string(OutputVariant v);
// Accepts msibase|omanap|omanbp|omanhill (case-insensitive).
OutputVariant parse_variant(std::string_view name);

// Hill map, critically damped second-order filter, output gain.
struct MsiBaseParams {
  double b = 1.0;       // half-saturation conflict, m/s^2
  double tau_i = 600.0; // filter time constant, s
  double gain = 10.0;   // P
};

// Fast/slow pathways on |dv|, power law after the pathways.
struct OmanApParams {
  double beta1 = 60.0;   // fast time constant, s
  double beta2 = 600.0;  // slow time constant, s
  double exponent = 1.0; // M_AP
};

// Power law on |dv| before the fast/slow pathways.
struct OmanBpParams {
  double beta1 = 60.0;
  double beta2 = 600.0;
  double exponent = 1.0; // M_BP
};

// Hill map before the fast/slow pathways, output gain after.
struct OmanHillParams {
  double beta1 = 60.0;
  double beta2 = 600.0;
  double b = 0.5;     // half-saturation conflict, m/s^2
  double gain = 8.0;  // G
};

using OutputParams = std::variant<MsiBaseParams, OmanApParams, OmanBpParams, OmanHillParams>;

OutputVariant variant_of(const OutputParams& params);
OutputParams default_params(OutputVariant v);

// Throws std::invalid_argument unless every parameter is positive and
// finite and beta1 < beta2 where both exist.
void validate(const OutputParams& params);

// Parameter names in vector order: msibase {b, tau_i, P}; omanap
// {beta1, beta2, M_AP}; omanbp {beta1, beta2, M_BP}; omanhill
// {beta1, beta2, b, G}.
std::vector<std::string> parameter_names(OutputVariant v);
std::vector<double> to_vector(const OutputParams& params);
OutputParams from_vector(OutputVariant v, std::span<const double> values);

// Filter state. Oman variants: slow cascade (s1, s2) and fast cascade
// (f1, f2). MsiBase uses (s1, s2) as its single cascade (z1, z2); f1 and f2
// stay at zero.
struct OutputState {
  double s1 = 0.0;
  double s2 = 0.0;
  double f1 = 0.0;
  double f2 = 0.0;

  static constexpr int kSize = 4;
};

// x^2 / (1 + x^2). Throws std::domain_error for negative x.
double hill(double x);

// Filter input u_i for a conflict magnitude |dv| (numeric value in m/s^2).
double output_input(const OutputParams& params, double dv_norm);

OutputState output_derivatives(const OutputParams& params, const OutputState& state, double u_i);

// Raw (unclamped) MISC from the filter state. Throws std::logic_error if the
// combined pathway output is negative.
double output_misc(const OutputParams& params, const OutputState& state);

// Analytic MISC reached under a constant conflict magnitude.
double steady_state_misc(const OutputParams& params, double dv_norm);

inline double clamp_misc(double misc) {
  return misc < 0.0 ? 0.0 : (misc > 10.0 ? 10.0 : misc);
}

}  // namespace svcmisc
