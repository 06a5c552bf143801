#include "mixkit/rng.hpp"

#include <cmath>
#include <numeric>

#include "mixkit/errors.hpp"
#include "mixkit/logsum.hpp"

namespace mixkit {

std::uint64_t RngStream::uniform_int(std::uint64_t n) {
    if (n == 0) throw UsageError("uniform_int: n must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do { x = engine_(); } while (x >= limit);
    return x % n;
}

double RngStream::normal() {
    if (have_cached_normal_) {
        have_cached_normal_ = false;
        return cached_normal_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    cached_normal_ = v * f;
    have_cached_normal_ = true;
    return u * f;
}

double RngStream::exponential(double rate) {
    if (rate <= 0.0) throw ValidationError("exponential: rate must be positive");
    return -std::log(uniform_pos()) / rate;
}

double RngStream::gamma(double shape, double rate) {
    if (shape <= 0.0 || rate <= 0.0) throw ValidationError("gamma: shape and rate must be positive");
    if (shape < 1.0) {
        // Boost: X ~ Gamma(a+1) * U^{1/a}
        const double u = uniform_pos();
        return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform_pos();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
    }
}

double RngStream::inverse_gamma(double shape, double rate) {
    return rate == 0.0 ? throw ValidationError("inverse_gamma: rate must be positive")
                       : 1.0 / gamma(shape, rate);
}

double RngStream::beta(double a, double b) {
    const double x = gamma(a, 1.0);
    const double y = gamma(b, 1.0);
    return x / (x + y);
}

double RngStream::student_t(double dof, double loc, double scale) {
    if (dof <= 0.0 || scale <= 0.0) throw ValidationError("student_t: dof and scale must be positive");
    const double z = normal();
    const double w = gamma(0.5 * dof, 0.5 * dof);
    return loc + scale * z / std::sqrt(w);
}

std::vector<double> RngStream::dirichlet(const std::vector<double>& alpha) {
    if (alpha.empty()) throw UsageError("dirichlet: empty alpha");
    std::vector<double> out(alpha.size());
    double total = 0.0;
    for (std::size_t j = 0; j < alpha.size(); ++j) {
        out[j] = gamma(alpha[j], 1.0);
        total += out[j];
    }
    for (double& v : out) v /= total;
    return out;
}

int RngStream::poisson(double lambda) {
    if (lambda < 0.0) throw ValidationError("poisson: lambda must be nonnegative");
    if (lambda == 0.0) return 0;
    // Knuth's product method, run in log space so large means stay exact.
    int k = 0;
    double acc = 0.0;
    for (;;) {
        acc += std::log(uniform_pos());
        if (acc < -lambda) return k;
        ++k;
    }
}

int RngStream::binomial(int n, double p) {
    if (n < 0 || p < 0.0 || p > 1.0) throw ValidationError("binomial: invalid parameters");
    int k = 0;
    for (int i = 0; i < n; ++i) k += bernoulli(p);
    return k;
}

int RngStream::categorical_from_log(const std::vector<double>& log_weights) {
    const double norm = log_sum_exp(log_weights);
    if (norm == kLogZero) throw NumericalError("categorical_from_log: all weights are zero");
    const double u = uniform();
    double cum = 0.0;
    for (std::size_t j = 0; j < log_weights.size(); ++j) {
        cum += std::exp(log_weights[j] - norm);
        if (u < cum) return static_cast<int>(j);
    }
    return static_cast<int>(log_weights.size()) - 1;
}

int RngStream::categorical(const std::vector<double>& probs) {
    const double u = uniform();
    double cum = 0.0;
    for (std::size_t j = 0; j < probs.size(); ++j) {
        cum += probs[j];
        if (u < cum) return static_cast<int>(j);
    }
    return static_cast<int>(probs.size()) - 1;
}

std::vector<int> RngStream::multinomial(int total, const std::vector<double>& probs) {
    std::vector<int> counts(probs.size(), 0);
    for (int i = 0; i < total; ++i) ++counts[static_cast<std::size_t>(categorical(probs))];
    return counts;
}

std::vector<int> RngStream::permutation(int n) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = n - 1; i > 0; --i) {
        const auto j = static_cast<int>(uniform_int(static_cast<std::uint64_t>(i) + 1));
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    return idx;
}

}  // namespace mixkit
