#ifndef MIXKIT_MODEL_HPP
#define MIXKIT_MODEL_HPP

#include <string>
#include <vector>

#include "mixkit/dataset.hpp"
#include "mixkit/logsum.hpp"

namespace mixkit {

enum class FamilyTag { Poisson, MultinomialProfile, BernoulliProduct, Normal, StudentT };

// Mixture component family. For MultinomialProfile, `modalities` is the
// number of cell categories; for BernoulliProduct, `variables` is the
// number of binary variables; for Normal, `shared_variance` selects one
// common variance across components.
struct ComponentFamily {
    FamilyTag tag = FamilyTag::Poisson;
    int modalities = 0;
    int variables = 0;
    bool shared_variance = true;

    static ComponentFamily poisson() { return {FamilyTag::Poisson, 0, 0, true}; }
    static ComponentFamily multinomial_profile(int m);
    static ComponentFamily bernoulli_product(int d);
    static ComponentFamily normal(bool shared_variance = true) {
        return {FamilyTag::Normal, 0, 0, shared_variance};
    }
    static ComponentFamily student_t() { return {FamilyTag::StudentT, 0, 0, false}; }

    // Length of one component's parameter vector.
    int param_dim() const;
    // Dimension of the per-observation statistic R(x); 0 for families
    // without an exact conjugate sufficient-statistic representation.
    int stat_dim() const;
    bool is_discrete_conjugate() const {
        return tag == FamilyTag::Poisson || tag == FamilyTag::MultinomialProfile ||
               tag == FamilyTag::BernoulliProduct;
    }
    DataKind expected_kind() const;
    std::string name() const;
};

ComponentFamily family_from_name(const std::string& name, int columns = 0, bool shared_variance = true);

// Weights on the simplex plus per-component parameter vectors.
// Component layouts: Poisson {lambda}; MultinomialProfile {q_1..q_m};
// BernoulliProduct {q_1..q_d}; Normal {mu, sigma2}; StudentT {mu, sigma2, nu}.
struct MixtureParams {
    std::vector<double> weights;
    std::vector<std::vector<double>> components;

    int component_count() const { return static_cast<int>(weights.size()); }
    // Applies a component permutation: result.weights[j] = weights[perm[j]].
    MixtureParams permuted(const std::vector<int>& perm) const;
};

// Throws ValidationError on violated invariants (weights off the simplex,
// nonpositive scales, dimension mismatches).
void validate_params(const ComponentFamily& family, const MixtureParams& params,
                     double simplex_tol = 1e-12);
bool params_valid(const ComponentFamily& family, const MixtureParams& params,
                  double simplex_tol = 1e-12);

// Conjugate hyperparameters per family. All entries must be positive and
// finite; improper (non-integrable) settings are rejected at validation.
struct PriorSpec {
    std::vector<double> dirichlet_alpha;  // weight prior; length J

    std::vector<double> poisson_rate;     // Exp(tau_j) priors on the Poisson rates
    double categorical_alpha = 0.5;       // symmetric Dirichlet/Beta parameter on profiles

    // Normal mixture: mu_j ~ N(mean, ratio*sigma2), sigma^{-2} ~ Exp(precision_rate).
    double normal_mean = 0.0;
    double normal_variance_ratio = 10.0;
    double normal_precision_rate = 0.5;

    // Student-t mixture: mu_j ~ N(mu0, 2*sigma0sq), sigma2_j ~ InvGamma(a_sigma, b_sigma),
    // nu_j ~ Gamma(a_nu, b_nu).
    double t_mu0 = 0.0;
    double t_sigma0sq = 1.0;
    double t_a_sigma = 1.0;
    double t_b_sigma = 1.0;
    // Shape 5, rate 1/2: prior mean 10, weakly informative over the usual
    // degrees-of-freedom range.
    double t_a_nu = 5.0;
    double t_b_nu = 0.5;

    static PriorSpec default_for(const ComponentFamily& family, int J, const Dataset& data);
};

void validate_prior(const PriorSpec& prior, const ComponentFamily& family, int J);

// Latent component labels z_1..z_n, stored 0-based.
struct Allocation {
    std::vector<int> labels;

    std::size_t size() const { return labels.size(); }
    std::vector<int> counts(int J) const;
};

// log f(x_i | theta_j) for one observation.
LogValue component_log_density(const ComponentFamily& family, const std::vector<double>& theta,
                               const Dataset& data, std::size_t i);

// sum_i log sum_j p_j f(x_i|theta_j), inner sums via log_sum_exp.
LogValue observed_log_likelihood(const ComponentFamily& family, const MixtureParams& params,
                                 const Dataset& data);

// sum_i [log p_{z_i} + log f(x_i|theta_{z_i})].
LogValue complete_log_likelihood(const ComponentFamily& family, const MixtureParams& params,
                                 const Dataset& data, const Allocation& z);

// log Dirichlet(weights) + sum_j log conjugate prior(theta_j); -inf outside support.
LogValue log_prior(const PriorSpec& prior, const ComponentFamily& family,
                   const MixtureParams& params);

// Draw (weights, components) from the prior.
MixtureParams sample_prior(const PriorSpec& prior, const ComponentFamily& family, int J,
                           class RngStream& rng);

}  // namespace mixkit

#endif
