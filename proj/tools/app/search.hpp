#pragma once

#include <span>

#include "exptest/cost.hpp"
#include "exptest/screening.hpp"
#include "exptest/value.hpp"

namespace exptest::app {

/// Payments between which a contract with fixed fines screens. Both
/// informed and uninformed values move one for one with u, so one sweep at
/// any payment locates both ends.
struct PaymentWindow {
  double informed_threshold;  // smallest u at which every informed type accepts
  double break_even;          // u at which the uninformed value is zero
  bool open() const { return informed_threshold < break_even; }
  /// Payment a fraction `depth` of the way down from break_even.
  double below_break_even(double depth) const { return break_even - depth * (break_even - informed_threshold); }
};

PaymentWindow payment_window(const ValueFunction& vf, const CostModel& model, std::span<const Belief> priors,
                             const UninformedKind& uninformed, const EnvelopeOptions& envelope);

/// Places u inside the window, `depth` of its width below break_even (0.5 is
/// the middle). Throws NoFeasibleU when the window is empty.
ValueFunction place_payment(const ValueFunction& vf, const CostModel& model, std::span<const Belief> priors,
                            const UninformedKind& uninformed, const EnvelopeOptions& envelope, double depth = 0.5,
                            PaymentWindow* window = nullptr);

}  // namespace exptest::app
