#ifndef CHARGEMETER_LOGNUMBER_HPP
#define CHARGEMETER_LOGNUMBER_HPP

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace cm {

// Numerical failure distinct from bad input: callers map it to its own
// process exit code.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// Signed log-domain scalar: value = sign * exp(log_abs), sign in {-1,0,+1}.
// Zero is canonical: sign == 0 and log_abs == -inf.
class LogNumber {
 public:
  LogNumber() : sign_(0), log_abs_(-std::numeric_limits<double>::infinity()) {}

  static LogNumber from_value(double v) {
    LogNumber r;
    if (v == 0.0) return r;
    r.sign_ = v > 0.0 ? 1 : -1;
    r.log_abs_ = std::log(std::abs(v));
    return r;
  }

  static LogNumber from_log(int sign, double log_abs) {
    LogNumber r;
    if (sign == 0) return r;
    if (sign != 1 && sign != -1)
      throw std::invalid_argument("LogNumber sign must be -1, 0 or +1");
    r.sign_ = sign;
    r.log_abs_ = log_abs;
    return r;
  }

  static LogNumber one() { return from_log(1, 0.0); }

  int sign() const { return sign_; }
  double log_abs() const { return log_abs_; }
  double log10_abs() const { return log_abs_ / std::log(10.0); }
  bool is_zero() const { return sign_ == 0; }

  // May overflow/underflow the double range; intended for small magnitudes.
  double value() const {
    return sign_ == 0 ? 0.0 : sign_ * std::exp(log_abs_);
  }

  LogNumber operator-() const {
    LogNumber r = *this;
    r.sign_ = -r.sign_;
    return r;
  }

  LogNumber& operator*=(const LogNumber& o) {
    sign_ *= o.sign_;
    if (sign_ == 0) {
      log_abs_ = -std::numeric_limits<double>::infinity();
    } else {
      log_abs_ += o.log_abs_;
    }
    return *this;
  }

  LogNumber& operator/=(const LogNumber& o) {
    if (o.sign_ == 0) throw numeric_error("LogNumber division by zero");
    sign_ *= o.sign_;
    if (sign_ == 0) {
      log_abs_ = -std::numeric_limits<double>::infinity();
    } else {
      log_abs_ -= o.log_abs_;
    }
    return *this;
  }

  // Signed addition.  Same signs: max + log1p(exp(min-max)).  Opposite
  // signs: the larger magnitude wins, max + log1p(-exp(min-max)); exact
  // cancellation collapses to zero.
  LogNumber& operator+=(const LogNumber& o) {
    if (o.sign_ == 0) return *this;
    if (sign_ == 0) {
      *this = o;
      return *this;
    }
    if (log_abs_ == o.log_abs_ && sign_ != o.sign_) {
      *this = LogNumber();
      return *this;
    }
    const bool this_larger = log_abs_ >= o.log_abs_;
    const double hi = this_larger ? log_abs_ : o.log_abs_;
    const double lo = this_larger ? o.log_abs_ : log_abs_;
    const int hi_sign = this_larger ? sign_ : o.sign_;
    const double d = std::exp(lo - hi);
    if (sign_ == o.sign_) {
      log_abs_ = hi + std::log1p(d);
    } else {
      log_abs_ = hi + std::log1p(-d);
      sign_ = hi_sign;
    }
    return *this;
  }

  LogNumber& operator-=(const LogNumber& o) { return *this += -o; }

  friend LogNumber operator*(LogNumber a, const LogNumber& b) { return a *= b; }
  friend LogNumber operator/(LogNumber a, const LogNumber& b) { return a /= b; }
  friend LogNumber operator+(LogNumber a, const LogNumber& b) { return a += b; }
  friend LogNumber operator-(LogNumber a, const LogNumber& b) { return a -= b; }

  // |a| <=> |b| on the log scale.
  friend bool abs_less(const LogNumber& a, const LogNumber& b) {
    if (a.sign_ == 0) return b.sign_ != 0;
    if (b.sign_ == 0) return false;
    return a.log_abs_ < b.log_abs_;
  }

  LogNumber pow_int(long n) const {
    if (n == 0) return one();
    if (sign_ == 0) {
      if (n < 0) throw numeric_error("LogNumber zero to negative power");
      return LogNumber();
    }
    LogNumber r;
    r.sign_ = (sign_ == -1 && (n % 2 != 0)) ? -1 : 1;
    r.log_abs_ = log_abs_ * static_cast<double>(n);
    return r;
  }

 private:
  int sign_;
  double log_abs_;
};

// Neumaier-compensated accumulator for sums of doubles (used for sums of
// log-factors over momentum grids and for linear-domain reductions).
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double result() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace cm

#endif
