#ifndef MIXKIT_MCMC_HPP
#define MIXKIT_MCMC_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mixkit/dataset.hpp"
#include "mixkit/model.hpp"
#include "mixkit/rng.hpp"

namespace mixkit {

struct ChainConfig {
    long long iterations = 10'000;
    long long burnin = -1;  // -1 selects iterations/10
    long long thin = 1;
    std::uint64_t seed = 1;
    double rw_scale_params = 0.1;  // random-walk scale on unconstrained coordinates
    double rw_scale_nu = 5.0;      // random-walk scale on log(nu)
    bool store_allocations = false;
    bool store_latent_scales = false;

    long long effective_burnin() const { return burnin >= 0 ? burnin : iterations / 10; }
    void validate() const;
};

// Ordered retained draws plus per-draw observed log-likelihood; optional
// allocations and latent scale variables; per-block acceptance fractions.
struct Trace {
    ComponentFamily family;
    ChainConfig config;
    std::vector<MixtureParams> draws;
    std::vector<LogValue> log_lik;
    std::vector<Allocation> allocations;
    std::vector<std::vector<double>> latent_scales;
    std::map<std::string, double> acceptance_rates;
    bool relabeled = false;

    std::size_t size() const { return draws.size(); }
    bool has_allocations() const { return !allocations.empty(); }
};

// One conditional allocation pass: z_i ~ categorical with
// P(z_i = j) proportional to p_j f(x_i|theta_j).
Allocation sample_allocations(const ComponentFamily& family, const MixtureParams& params,
                              const Dataset& data, RngStream& rng);

// Gibbs sampler for the shared-variance normal mixture: allocations, then
// the precision from its mean-marginalised conditional, then each mean
// given the variance.
Trace gibbs_normal_mixture(const Dataset& data, int J, const PriorSpec& prior,
                           const ChainConfig& config);

// Gibbs sampler for the t mixture via per-observation latent scales V_i.
// When `nu_known` is absent the degrees of freedom are updated each sweep
// by nu_metropolis_step.
Trace gibbs_t_mixture(const Dataset& data, int J, const PriorSpec& prior,
                      const std::optional<std::vector<double>>& nu_known,
                      const ChainConfig& config);

// Unnormalised log full-conditional of one component's degrees of freedom
// given the latent scales of its observations.
LogValue nu_log_target(double nu, const std::vector<double>& component_scales,
                       const PriorSpec& prior);

// One Metropolis update per component of the degrees-of-freedom vector,
// random walk on log(nu) with scale `config`-style rw_scale_nu; returns
// per-component acceptance flags.
std::vector<bool> nu_metropolis_step(std::vector<double>& nu, const Dataset& data,
                                     const std::vector<double>& latent_scales, const Allocation& z,
                                     const PriorSpec& prior, double rw_scale_nu, RngStream& rng);

// Gibbs sampler for discrete conjugate mixtures (Poisson, multinomial
// profiles, Bernoulli products): allocations, weights, then all component
// parameters from their conjugate conditionals.
Trace gibbs_conjugate_mixture(const Dataset& data, int J, const ComponentFamily& family,
                              const PriorSpec& prior, const ChainConfig& config);

// Latent class front end (binary data): Beta/Dirichlet conditionals on the
// weights and the per-variable probabilities.
Trace gibbs_latent_class(const Dataset& data, int J, const PriorSpec& prior,
                         const ChainConfig& config);

// Random-walk Metropolis-Hastings on unconstrained coordinates (means,
// log scales, log nu, log w with overparameterised weights); all
// change-of-variable Jacobians are part of the target.
Trace mh_mixture(const Dataset& data, int J, const ComponentFamily& family, const PriorSpec& prior,
                 const ChainConfig& config);

// Per-component occupancy and running moments used by the conjugate
// conditionals and the Rao-Blackwell densities.
struct ComponentMoments {
    std::vector<int> counts;            // n_j
    std::vector<double> sums;           // sum of x_i (or weighted sums)
    std::vector<double> sum_squares;    // sum of squared deviations support
};

ComponentMoments component_moments(const Dataset& data, const Allocation& z, int J);

}  // namespace mixkit

#endif
