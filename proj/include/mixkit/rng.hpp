#ifndef MIXKIT_RNG_HPP
#define MIXKIT_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace mixkit {

// Seeded random stream with a fixed, documented generator.
//
// The engine is std::mt19937_64, whose output sequence is pinned by the
// C++ standard, and every variate below is derived from it by explicit
// arithmetic (no std::*_distribution, whose algorithms are
// implementation-defined). Equal seeds therefore give bitwise-equal draw
// sequences on every platform.
//
// A stream is single-owner mutable state; never share one across threads.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_bits() { return engine_(); }

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1); rejects exact zeros so logs stay finite.
    double uniform_pos() {
        double u;
        do { u = uniform(); } while (u <= 0.0);
        return u;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t uniform_int(std::uint64_t n);  // uniform on {0,...,n-1}, unbiased

    double normal();                         // standard normal (polar method)
    double normal(double mean, double sd) { return mean + sd * normal(); }

    double exponential(double rate);
    double gamma(double shape, double rate);       // Marsaglia-Tsang
    double inverse_gamma(double shape, double rate);
    double chi_square(double dof) { return gamma(0.5 * dof, 0.5); }
    double beta(double a, double b);
    double student_t(double dof, double loc, double scale);

    std::vector<double> dirichlet(const std::vector<double>& alpha);

    int poisson(double lambda);
    int bernoulli(double p) { return uniform() < p ? 1 : 0; }
    int binomial(int n, double p);

    // Index draw from unnormalised log weights.
    int categorical_from_log(const std::vector<double>& log_weights);
    int categorical(const std::vector<double>& probs);

    // Counts of `total` categorical draws over `probs`.
    std::vector<int> multinomial(int total, const std::vector<double>& probs);

    // Uniformly random permutation of {0,...,n-1} (Fisher-Yates).
    std::vector<int> permutation(int n);

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    bool have_cached_normal_ = false;
    double cached_normal_ = 0.0;
};

}  // namespace mixkit

#endif
