#include "search.hpp"

#include <fmt/format.h>

namespace exptest::app {

PaymentWindow payment_window(const ValueFunction& vf, const CostModel& model, std::span<const Belief> priors,
                             const UninformedKind& uninformed, const EnvelopeOptions& envelope) {
  ScreeningOptions options;
  options.envelope = envelope;
  const auto report = screens(vf, model, priors, uninformed, options);
  return {vf.payment() - report.informed_min_net_value, vf.payment() - report.uninformed_value};
}

ValueFunction place_payment(const ValueFunction& vf, const CostModel& model, std::span<const Belief> priors,
                            const UninformedKind& uninformed, const EnvelopeOptions& envelope, double depth,
                            PaymentWindow* window) {
  const auto w = payment_window(vf, model, priors, uninformed, envelope);
  if (window != nullptr) *window = w;
  const double u = w.below_break_even(depth);
  if (!w.open() || !(u > 0.0)) {
    throw NoFeasibleU(fmt::format("no payment screens: informed types need u >= {}, the uninformed expert accepts "
                                  "from u = {}",
                                  w.informed_threshold, w.break_even));
  }
  return vf.with_payment(u);
}

}  // namespace exptest::app
