#include "mixkit/distributions.hpp"

#include <cmath>

#include "mixkit/errors.hpp"

namespace mixkit {

namespace {
constexpr double kLogTwoPi = 1.8378770664093454836;

void require(bool ok, const char* msg) {
    if (!ok) throw ValidationError(msg);
}

bool is_simplex(const std::vector<double>& q, double tol = 1e-9) {
    double s = 0.0;
    for (double v : q) {
        if (!(v >= 0.0) || v > 1.0) return false;
        s += v;
    }
    return std::abs(s - 1.0) <= tol;
}
}  // namespace

double log_beta_fn(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double log_choose(long long n, long long k) {
    if (k < 0 || k > n) return kLogZero;
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

LogValue log_poisson_pmf(long long x, double lambda) {
    require(lambda > 0.0 && std::isfinite(lambda), "poisson: lambda must be positive");
    if (x < 0) return kLogZero;
    const double k = static_cast<double>(x);
    return k * std::log(lambda) - lambda - std::lgamma(k + 1.0);
}

LogValue log_bernoulli_pmf(int x, double p) {
    require(p >= 0.0 && p <= 1.0, "bernoulli: p must be in [0,1]");
    if (x == 1) return p > 0.0 ? std::log(p) : kLogZero;
    if (x == 0) return p < 1.0 ? std::log1p(-p) : kLogZero;
    return kLogZero;
}

LogValue log_multinomial_pmf(const std::vector<long long>& counts, const std::vector<double>& probs) {
    require(counts.size() == probs.size(), "multinomial: counts/probs size mismatch");
    require(is_simplex(probs), "multinomial: probabilities must lie on the simplex");
    long long total = 0;
    for (long long c : counts) {
        if (c < 0) return kLogZero;
        total += c;
    }
    double lp = std::lgamma(static_cast<double>(total) + 1.0);
    for (std::size_t v = 0; v < counts.size(); ++v) {
        const double c = static_cast<double>(counts[v]);
        lp -= std::lgamma(c + 1.0);
        if (counts[v] > 0) {
            if (probs[v] <= 0.0) return kLogZero;
            lp += c * std::log(probs[v]);
        }
    }
    return lp;
}

LogValue log_normal_pdf(double x, double mean, double variance) {
    require(variance > 0.0 && std::isfinite(variance), "normal: variance must be positive");
    const double d = x - mean;
    return -0.5 * (kLogTwoPi + std::log(variance)) - 0.5 * d * d / variance;
}

LogValue log_student_t_pdf(double x, double dof, double loc, double variance) {
    require(dof > 0.0, "student_t: dof must be positive");
    require(variance > 0.0 && std::isfinite(variance), "student_t: variance must be positive");
    const double z2 = (x - loc) * (x - loc) / variance;
    return std::lgamma(0.5 * (dof + 1.0)) - std::lgamma(0.5 * dof) -
           0.5 * std::log(dof * M_PI * variance) -
           0.5 * (dof + 1.0) * std::log1p(z2 / dof);
}

LogValue log_gamma_pdf(double x, double shape, double rate) {
    require(shape > 0.0 && rate > 0.0, "gamma: shape and rate must be positive");
    if (x <= 0.0) return kLogZero;
    return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

LogValue log_inverse_gamma_pdf(double x, double shape, double rate) {
    require(shape > 0.0 && rate > 0.0, "inverse_gamma: shape and rate must be positive");
    if (x <= 0.0) return kLogZero;
    return shape * std::log(rate) - std::lgamma(shape) - (shape + 1.0) * std::log(x) - rate / x;
}

LogValue log_beta_pdf(double x, double a, double b) {
    require(a > 0.0 && b > 0.0, "beta: parameters must be positive");
    if (x <= 0.0 || x >= 1.0) {
        // Boundary atoms only when the exponent vanishes.
        if ((x == 0.0 && a < 1.0) || (x == 1.0 && b < 1.0)) return std::numeric_limits<double>::infinity();
        return kLogZero;
    }
    return (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - log_beta_fn(a, b);
}

LogValue log_dirichlet_pdf(const std::vector<double>& x, const std::vector<double>& alpha) {
    require(!alpha.empty() && x.size() == alpha.size(), "dirichlet: dimension mismatch");
    double alpha_sum = 0.0;
    for (double a : alpha) {
        require(a > 0.0 && std::isfinite(a), "dirichlet: alphas must be positive");
        alpha_sum += a;
    }
    if (!is_simplex(x)) return kLogZero;
    double lp = std::lgamma(alpha_sum);
    for (std::size_t j = 0; j < x.size(); ++j) {
        lp -= std::lgamma(alpha[j]);
        if (x[j] <= 0.0) return alpha[j] < 1.0 ? std::numeric_limits<double>::infinity() : kLogZero;
        lp += (alpha[j] - 1.0) * std::log(x[j]);
    }
    return lp;
}

LogValue log_scaled_inv_chisq_pdf(double x, double dof, double scale2) {
    require(dof > 0.0 && scale2 > 0.0, "scaled_inv_chisq: dof and scale must be positive");
    // Equivalent to InverseGamma(dof/2, dof*scale2/2).
    return log_inverse_gamma_pdf(x, 0.5 * dof, 0.5 * dof * scale2);
}

LogValue log_density(Dist family, const std::vector<double>& params, const std::vector<double>& x) {
    switch (family) {
        case Dist::Poisson:
            require(params.size() == 1 && x.size() == 1, "poisson: expects 1 parameter and 1 value");
            return log_poisson_pmf(static_cast<long long>(std::llround(x[0])), params[0]);
        case Dist::Bernoulli:
            require(params.size() == 1 && x.size() == 1, "bernoulli: expects 1 parameter and 1 value");
            return log_bernoulli_pmf(static_cast<int>(std::llround(x[0])), params[0]);
        case Dist::Multinomial: {
            require(x.size() == params.size(), "multinomial: dimension mismatch");
            std::vector<long long> counts(x.size());
            for (std::size_t v = 0; v < x.size(); ++v) counts[v] = static_cast<long long>(std::llround(x[v]));
            return log_multinomial_pmf(counts, params);
        }
        case Dist::Normal:
            require(params.size() == 2 && x.size() == 1, "normal: expects 2 parameters and 1 value");
            return log_normal_pdf(x[0], params[0], params[1]);
        case Dist::StudentT:
            require(params.size() == 3 && x.size() == 1, "student_t: expects 3 parameters and 1 value");
            return log_student_t_pdf(x[0], params[0], params[1], params[2]);
        case Dist::Gamma:
            require(params.size() == 2 && x.size() == 1, "gamma: expects 2 parameters and 1 value");
            return log_gamma_pdf(x[0], params[0], params[1]);
        case Dist::InverseGamma:
            require(params.size() == 2 && x.size() == 1, "inverse_gamma: expects 2 parameters and 1 value");
            return log_inverse_gamma_pdf(x[0], params[0], params[1]);
        case Dist::Beta:
            require(params.size() == 2 && x.size() == 1, "beta: expects 2 parameters and 1 value");
            return log_beta_pdf(x[0], params[0], params[1]);
        case Dist::Dirichlet:
            return log_dirichlet_pdf(x, params);
        case Dist::ScaledInvChiSq:
            require(params.size() == 2 && x.size() == 1, "scaled_inv_chisq: expects 2 parameters and 1 value");
            return log_scaled_inv_chisq_pdf(x[0], params[0], params[1]);
    }
    throw ValidationError("log_density: unknown family");
}

std::vector<double> sample_distribution(Dist family, const std::vector<double>& params, RngStream& rng) {
    switch (family) {
        case Dist::Poisson:
            require(params.size() == 1 && params[0] > 0.0, "poisson: invalid lambda");
            return {static_cast<double>(rng.poisson(params[0]))};
        case Dist::Bernoulli:
            require(params.size() == 1 && params[0] >= 0.0 && params[0] <= 1.0, "bernoulli: invalid p");
            return {static_cast<double>(rng.bernoulli(params[0]))};
        case Dist::Multinomial: {
            require(is_simplex(params), "multinomial: probabilities must lie on the simplex");
            // One categorical trial; callers wanting totals > 1 accumulate.
            const auto counts = rng.multinomial(1, params);
            std::vector<double> out(counts.size());
            for (std::size_t v = 0; v < counts.size(); ++v) out[v] = counts[v];
            return out;
        }
        case Dist::Normal:
            require(params.size() == 2 && params[1] > 0.0, "normal: invalid variance");
            return {rng.normal(params[0], std::sqrt(params[1]))};
        case Dist::StudentT:
            require(params.size() == 3, "student_t: expects 3 parameters");
            return {rng.student_t(params[0], params[1], std::sqrt(params[2]))};
        case Dist::Gamma:
            require(params.size() == 2, "gamma: expects 2 parameters");
            return {rng.gamma(params[0], params[1])};
        case Dist::InverseGamma:
            require(params.size() == 2, "inverse_gamma: expects 2 parameters");
            return {rng.inverse_gamma(params[0], params[1])};
        case Dist::Beta:
            require(params.size() == 2, "beta: expects 2 parameters");
            return {rng.beta(params[0], params[1])};
        case Dist::Dirichlet:
            return rng.dirichlet(params);
        case Dist::ScaledInvChiSq:
            require(params.size() == 2, "scaled_inv_chisq: expects 2 parameters");
            return {rng.inverse_gamma(0.5 * params[0], 0.5 * params[0] * params[1])};
    }
    throw ValidationError("sample_distribution: unknown family");
}

}  // namespace mixkit
