#pragma once

// Tail estimate for a series of nonnegative masses p_0, p_1, ... that
// eventually decays geometrically. The estimate p q/(1-q) is trusted only
// after two consecutive ratios below one that agree within a factor 2, which
// rules out a spurious small ratio at an isolated zero of p_k.

namespace hypcs::detail {

class GeometricTail {
 public:
  /// Feeds the next mass; returns the geometric tail estimate, or a negative
  /// value while the decay is not established.
  double push(double p) {
    const double q = prev_ > 0.0 ? p / prev_ : -1.0;
    double estimate = -1.0;
    if (q >= 0.0 && q < 1.0 && prev_q_ >= 0.0 && prev_q_ < 1.0 && q <= 2.0 * prev_q_ &&
        prev_q_ <= 2.0 * q) {
      estimate = p * q / (1.0 - q);
    }
    prev_q_ = q;
    prev_ = p;
    return estimate;
  }

 private:
  double prev_ = 0.0;
  double prev_q_ = -1.0;
};

}  // namespace hypcs::detail
