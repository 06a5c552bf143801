#ifndef MIXKIT_LOGSUM_HPP
#define MIXKIT_LOGSUM_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "mixkit/errors.hpp"

namespace mixkit {

// A LogValue is a double holding log(magnitude), magnitude >= 0.
// -infinity encodes magnitude zero; NaN is never a valid LogValue.
using LogValue = double;

inline constexpr LogValue kLogZero = -std::numeric_limits<double>::infinity();

inline bool is_log_value(LogValue v) { return !std::isnan(v) && v < std::numeric_limits<double>::infinity(); }

// log(sum_i exp(terms[i])), stable under large negative magnitudes.
// Returns -inf iff every term is -inf.
inline LogValue log_sum_exp(std::span<const LogValue> terms) {
    if (terms.empty()) throw UsageError("log_sum_exp: empty term list");
    const LogValue m = *std::max_element(terms.begin(), terms.end());
    if (m == kLogZero) return kLogZero;
    double acc = 0.0;
    for (LogValue t : terms) acc += std::exp(t - m);
    return m + std::log(acc);
}

inline LogValue log_sum_exp(const std::vector<LogValue>& terms) {
    return log_sum_exp(std::span<const LogValue>(terms));
}

inline LogValue log_add(LogValue a, LogValue b) {
    if (a == kLogZero) return b;
    if (b == kLogZero) return a;
    const LogValue m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// Incremental accumulator for log-space sums with a running maximum.
class LogSumAccumulator {
public:
    void add(LogValue t) { terms_.push_back(t); }
    LogValue total() const { return terms_.empty() ? kLogZero : log_sum_exp(terms_); }
    std::size_t count() const { return terms_.size(); }
    const std::vector<LogValue>& terms() const { return terms_; }

private:
    std::vector<LogValue> terms_;
};

}  // namespace mixkit

#endif
