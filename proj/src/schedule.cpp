#include "rmab/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rmab/errors.hpp"

namespace rmab {

namespace {

void require_index(std::int64_t i) {
  if (i < 1) {
    std::ostringstream os;
    os << "schedule index " << i << " out of range (indices are 1-based)";
    throw UsageError(os.str());
  }
}

std::int64_t log_value(std::int64_t i) {
  return static_cast<std::int64_t>(std::ceil(std::log(static_cast<double>(i) + 1.0))) + 1;
}

}  // namespace

StepSchedule StepSchedule::constant(std::int64_t b) {
  if (b < 1) throw ConfigError("constant schedule requires a step length >= 1");
  StepSchedule s;
  s.kind_ = Kind::Constant;
  s.constant_ = b;
  return s;
}

StepSchedule StepSchedule::logarithmic() {
  StepSchedule s;
  s.kind_ = Kind::Logarithmic;
  return s;
}

StepSchedule StepSchedule::custom(std::vector<std::int64_t> prefix,
                                  bool divergence_attested) {
  if (prefix.empty()) throw ConfigError("custom schedule requires a nonempty prefix");
  if (!divergence_attested)
    throw ConfigError(
        "custom schedule requires a divergence attestation; use a constant "
        "schedule for eventually-constant step lengths");
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (prefix[i] < 1) {
      std::ostringstream os;
      os << "custom schedule entry " << i + 1 << " = " << prefix[i] << " is not >= 1";
      throw ConfigError(os.str());
    }
    if (i > 0 && prefix[i] < prefix[i - 1]) {
      std::ostringstream os;
      os << "custom schedule decreases at entry " << i + 1 << " (" << prefix[i - 1]
         << " -> " << prefix[i] << ")";
      throw ConfigError(os.str());
    }
  }
  StepSchedule s;
  s.kind_ = Kind::Custom;
  s.attested_ = divergence_attested;
  s.prefix_ = std::move(prefix);
  s.prefix_cumulative_.reserve(s.prefix_.size());
  std::int64_t acc = 0;
  for (std::int64_t b : s.prefix_) {
    acc += b;
    s.prefix_cumulative_.push_back(acc);
  }
  return s;
}

std::int64_t StepSchedule::constant_value() const {
  if (kind_ != Kind::Constant)
    throw UsageError("constant_value called on a non-constant schedule");
  return constant_;
}

std::int64_t StepSchedule::at(std::int64_t i) const {
  require_index(i);
  switch (kind_) {
    case Kind::Constant:
      return constant_;
    case Kind::Logarithmic:
      return log_value(i);
    case Kind::Custom:
      if (i > static_cast<std::int64_t>(prefix_.size())) {
        std::ostringstream os;
        os << "custom schedule prefix exhausted: step " << i << " requested, "
           << prefix_.size() << " specified";
        throw UsageError(os.str());
      }
      return prefix_[static_cast<std::size_t>(i - 1)];
  }
  return constant_;
}

std::int64_t StepSchedule::cumulative(std::int64_t i) const {
  require_index(i);
  switch (kind_) {
    case Kind::Constant:
      return constant_ * i;
    case Kind::Logarithmic: {
      std::int64_t acc = 0;
      for (std::int64_t k = 1; k <= i; ++k) acc += log_value(k);
      return acc;
    }
    case Kind::Custom:
      if (i > static_cast<std::int64_t>(prefix_.size())) {
        std::ostringstream os;
        os << "custom schedule prefix exhausted: cumulative(" << i << ") requested, "
           << prefix_.size() << " entries specified";
        throw UsageError(os.str());
      }
      return prefix_cumulative_[static_cast<std::size_t>(i - 1)];
  }
  return 0;
}

std::int64_t StepSchedule::step_holding(std::int64_t n) const {
  if (n < 1) throw UsageError("step_holding requires a slot count >= 1");
  switch (kind_) {
    case Kind::Constant:
      return (n + constant_ - 1) / constant_;
    case Kind::Logarithmic: {
      std::int64_t acc = 0;
      for (std::int64_t k = 1;; ++k) {
        acc += log_value(k);
        if (acc >= n) return k;
      }
    }
    case Kind::Custom: {
      const auto it = std::lower_bound(prefix_cumulative_.begin(),
                                       prefix_cumulative_.end(), n);
      if (it == prefix_cumulative_.end()) {
        std::ostringstream os;
        os << "custom schedule prefix exhausted: covers "
           << prefix_cumulative_.back() << " slots, " << n << " requested";
        throw UsageError(os.str());
      }
      return static_cast<std::int64_t>(it - prefix_cumulative_.begin()) + 1;
    }
  }
  return 1;
}

std::int64_t StepSchedule::value_at_slot(std::int64_t n) const {
  return at(step_holding(n));
}

std::int64_t StepSchedule::first_index_at_least(std::int64_t value) const {
  switch (kind_) {
    case Kind::Constant:
      return constant_ >= value ? 1 : -1;
    case Kind::Logarithmic: {
      if (log_value(1) >= value) return 1;
      // ceil(ln(i+1)) + 1 >= value iff ln(i+1) > value - 2.
      const double target = std::exp(static_cast<double>(value) - 2.0);
      if (target >= 9.0e18) {
        std::ostringstream os;
        os << "logarithmic schedule reaches step length " << value
           << " only beyond representable step indices";
        throw NumericError(os.str());
      }
      std::int64_t i = std::max<std::int64_t>(static_cast<std::int64_t>(target) - 2, 1);
      while (log_value(i) >= value) --i;
      while (log_value(i) < value) ++i;
      return i;
    }
    case Kind::Custom: {
      const auto it = std::lower_bound(prefix_.begin(), prefix_.end(), value);
      if (it == prefix_.end()) {
        std::ostringstream os;
        os << "custom schedule prefix never reaches step length " << value
           << " (largest specified is " << prefix_.back() << "); extend the prefix";
        throw UsageError(os.str());
      }
      return static_cast<std::int64_t>(it - prefix_.begin()) + 1;
    }
  }
  return -1;
}

}  // namespace rmab
