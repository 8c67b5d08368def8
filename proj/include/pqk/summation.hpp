#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace pqk {

/// Compensated (Kahan-Babuska-Neumaier) accumulator.
class NeumaierSum {
 public:
  void add(double term) {
    const double t = sum_ + term;
    if (std::abs(sum_) >= std::abs(term)) {
      comp_ += (sum_ - t) + term;
    } else {
      comp_ += (term - t) + sum_;
    }
    sum_ = t;
  }

  /// Multiplies the running total by `factor` (used when rescaling a
  /// log-sum-exp accumulator to a new running maximum).
  void scale(double factor) {
    sum_ *= factor;
    comp_ *= factor;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Formats a number with 15 significant digits, the precision used by every
/// report this library writes.
inline std::string format15(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

/// Rounds `v` to the value its 15-significant-digit text form parses back to.
inline double round15(double v) {
  if (!std::isfinite(v)) return v;
  return std::stod(format15(v));
}

}  // namespace pqk
