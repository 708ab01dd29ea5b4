#include "svcmisc/misc_output.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

#include "output_kernels.hpp"

namespace svcmisc {

std::string_view to_string(OutputVariant v) {
  switch (v) {
    case OutputVariant::MsiBase: return "msibase";
    case OutputVariant::OmanAP: return "omanap";
    case OutputVariant::OmanBP: return "omanbp";
    case OutputVariant::OmanHill: return "omanhill";
  }
  return "unknown";
}

OutputVariant parse_variant(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (auto v : kAllVariants)
    if (to_string(v) == lower) return v;
  throw std::invalid_argument("unknown output variant '" + std::string(name) +
                              "' (expected msibase|omanap|omanbp|omanhill)");
}

OutputVariant variant_of(const OutputParams& params) {
  return static_cast<OutputVariant>(params.index());
}

OutputParams default_params(OutputVariant v) {
  switch (v) {
    case OutputVariant::MsiBase: return MsiBaseParams{};
    case OutputVariant::OmanAP: return OmanApParams{};
    case OutputVariant::OmanBP: return OmanBpParams{};
    case OutputVariant::OmanHill: return OmanHillParams{};
  }
  throw std::invalid_argument("unknown output variant");
}

std::vector<std::string> parameter_names(OutputVariant v) {
  switch (v) {
    case OutputVariant::MsiBase: return {"b", "tau_i", "P"};
    case OutputVariant::OmanAP: return {"beta1", "beta2", "M_AP"};
    case OutputVariant::OmanBP: return {"beta1", "beta2", "M_BP"};
    case OutputVariant::OmanHill: return {"beta1", "beta2", "b", "G"};
  }
  return {};
}

std::vector<double> to_vector(const OutputParams& params) {
  return std::visit(
      [](const auto& p) -> std::vector<double> {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, MsiBaseParams>) return {p.b, p.tau_i, p.gain};
        else if constexpr (std::is_same_v<P, OmanHillParams>) return {p.beta1, p.beta2, p.b, p.gain};
        else return {p.beta1, p.beta2, p.exponent};
      },
      params);
}

OutputParams from_vector(OutputVariant v, std::span<const double> x) {
  if (x.size() != parameter_names(v).size())
    throw std::invalid_argument("wrong parameter count for variant " + std::string(to_string(v)));
  switch (v) {
    case OutputVariant::MsiBase: return MsiBaseParams{x[0], x[1], x[2]};
    case OutputVariant::OmanAP: return OmanApParams{x[0], x[1], x[2]};
    case OutputVariant::OmanBP: return OmanBpParams{x[0], x[1], x[2]};
    case OutputVariant::OmanHill: return OmanHillParams{x[0], x[1], x[2], x[3]};
  }
  throw std::invalid_argument("unknown output variant");
}

void validate(const OutputParams& params) {
  const auto names = parameter_names(variant_of(params));
  const auto values = to_vector(params);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i]))
      throw std::invalid_argument("output parameter " + names[i] + " must be positive");
  }
  if (variant_of(params) != OutputVariant::MsiBase && !(values[0] < values[1]))
    throw std::invalid_argument("output parameters require beta1 < beta2");
}

double hill(double x) {
  if (x < 0.0) throw std::domain_error("hill: negative argument");
  return detail::hill_unchecked<double>(x);
}

namespace {

template <class P>
detail::Kernel<P> kernel(const P& p) {
  return detail::Kernel<P>(p);
}

}  // namespace

double output_input(const OutputParams& params, double dv_norm) {
  return std::visit([dv_norm](const auto& p) { return kernel(p).template input<double>(dv_norm); }, params);
}

OutputState output_derivatives(const OutputParams& params, const OutputState& state, double u_i) {
  return std::visit([&](const auto& p) { return detail::from_state(kernel(p).derivatives(detail::to_state(state), u_i)); }, params);
}

double output_misc(const OutputParams& params, const OutputState& state) {
  return std::visit(
      [&](const auto& p) {
        const auto k = kernel(p);
        const double u_o = k.pathway_output(detail::to_state(state));
        if (u_o < 0.0) throw std::logic_error("negative pathway output; state not reachable");
        return k.post_map(u_o);
      },
      params);
}

double steady_state_misc(const OutputParams& params, double dv_norm) {
  if (dv_norm < 0.0) throw std::domain_error("steady_state_misc: negative conflict");
  return std::visit(
      [dv_norm](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        const auto k = kernel(p);
        const double c = k.template input<double>(dv_norm);
        if constexpr (std::is_same_v<P, MsiBaseParams>) return k.post_map(c);
        else return k.post_map(c + c * c);
      },
      params);
}

}  // namespace svcmisc
