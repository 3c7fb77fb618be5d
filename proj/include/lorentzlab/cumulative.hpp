// W(t) = int_0^t w, stored exactly as piecewise linear/power/log pieces,
// with the closed-form companions the weight conditions need.
#pragma once

#include <vector>

#include "lorentzlab/fn.hpp"

namespace lorentz {

/// A nonnegative quantity that may be flagged divergent.
struct Flagged {
    double value = 0.0;
    bool divergent = false;

    static Flagged inf() { return {0.0, true}; }
    static Flagged of(double v) { return {v, false}; }
};

class CumulativeWeight {
  public:
    explicit CumulativeWeight(Weight w);

    const Weight& weight() const { return w_; }

    /// W(t); exact.
    double operator()(double t) const;
    /// W^{-1}(s) on the increasing range.
    double inverse(double s) const;

    /// int_0^r W(t)/t dt (divergent only if W fails W(t) <= C t^delta at 0,
    /// which cannot happen for the representable families; exact for
    /// step/power, dilogarithm for the rational family).
    double log_primitive(double r) const;

    /// int_r^inf w(t)/t^p dt under the tail policy.
    Flagged tail_p(double r, double p) const;

    /// int_0^s W(t)^{-1/p} dt; divergent when W^{-1/p} is not integrable at 0.
    Flagged assoc_primitive(double s, double p) const;

  private:
    Weight w_;
    // prefix sums for step weights: prefix_[k] = W(breakpoints[k])
    std::vector<double> prefix_;
};

}  // namespace lorentz
