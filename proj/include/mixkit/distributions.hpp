#ifndef MIXKIT_DISTRIBUTIONS_HPP
#define MIXKIT_DISTRIBUTIONS_HPP

#include <vector>

#include "mixkit/logsum.hpp"
#include "mixkit/rng.hpp"

namespace mixkit {

// Log densities / masses of the standard families, each with respect to
// its usual dominating measure. Invalid parameters raise ValidationError;
// points outside the support return -inf.

LogValue log_poisson_pmf(long long x, double lambda);
LogValue log_bernoulli_pmf(int x, double p);
// Includes the multinomial coefficient; `counts` length = probs length.
LogValue log_multinomial_pmf(const std::vector<long long>& counts, const std::vector<double>& probs);
LogValue log_normal_pdf(double x, double mean, double variance);
LogValue log_student_t_pdf(double x, double dof, double loc, double variance);
LogValue log_gamma_pdf(double x, double shape, double rate);
LogValue log_inverse_gamma_pdf(double x, double shape, double rate);
LogValue log_beta_pdf(double x, double a, double b);
LogValue log_dirichlet_pdf(const std::vector<double>& x, const std::vector<double>& alpha);
// x such that dof*scale2/x ~ chi^2_dof.
LogValue log_scaled_inv_chisq_pdf(double x, double dof, double scale2);

// log Beta function and log binomial coefficient, via lgamma.
double log_beta_fn(double a, double b);
double log_choose(long long n, long long k);

// Generic distribution id for the dispatch API (and the python surface).
enum class Dist {
    Poisson,        // params {lambda},           x {k}
    Bernoulli,      // params {p},                x {0|1}
    Multinomial,    // params {q_1..q_m},         x {counts_1..counts_m}
    Normal,         // params {mean, variance},   x {v}
    StudentT,       // params {dof, loc, variance}, x {v}
    Gamma,          // params {shape, rate},      x {v}
    InverseGamma,   // params {shape, rate},      x {v}
    Beta,           // params {a, b},             x {v}
    Dirichlet,      // params {alpha_1..alpha_J}, x {simplex point}
    ScaledInvChiSq, // params {dof, scale2},      x {v}
};

LogValue log_density(Dist family, const std::vector<double>& params, const std::vector<double>& x);
std::vector<double> sample_distribution(Dist family, const std::vector<double>& params, RngStream& rng);

}  // namespace mixkit

#endif
