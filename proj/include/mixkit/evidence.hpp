#ifndef MIXKIT_EVIDENCE_HPP
#define MIXKIT_EVIDENCE_HPP

#include <optional>
#include <string>
#include <vector>

#include "mixkit/dataset.hpp"
#include "mixkit/logsum.hpp"
#include "mixkit/mcmc.hpp"
#include "mixkit/model.hpp"
#include "mixkit/rng.hpp"

namespace mixkit {

enum class EvidenceMethod { ChibPlain, ChibSymmetrized, GelfandDey, PriorMc, Exact };

std::string evidence_method_name(EvidenceMethod m);

struct EvidenceResult {
    LogValue log_marginal = kLogZero;
    EvidenceMethod method = EvidenceMethod::Exact;
    long long permutations_used = 1;
    std::optional<double> mc_std_err;
    std::optional<double> mixing_discrepancy;  // plain minus symmetrized, when both were run
    bool variance_warning = false;
};

// Log of the complete-data posterior density at `params` given one
// allocation, factorised exactly as the Gibbs sampler blocks it: weights
// given counts, then each component parameter from its conjugate
// conditional (for the shared-variance normal model the variance comes
// from its mean-marginalised conditional, then means given the variance).
// Supports discrete conjugate families and the shared-variance normal.
LogValue rb_conditional_log_density(const ComponentFamily& family, const MixtureParams& params,
                                    const Allocation& z, const Dataset& data,
                                    const PriorSpec& prior);

// Candidate-point marginal likelihood: log m = log f(x|lambda*) +
// log pi(lambda*) - log pihat(lambda*|x), where pihat averages the
// conditional density over the stored allocations. With `symmetrize` the
// average additionally runs over component permutations applied to
// lambda*; all J! permutations when J! <= 720, otherwise the identity
// plus random distinct permutations (default 100 total). `perm_sample`
// overrides the permutation count.
EvidenceResult chib_estimate(const Trace& trace, const MixtureParams& lambda_star,
                             const Dataset& data, const PriorSpec& prior, bool symmetrize,
                             std::optional<long long> perm_sample, RngStream& rng);

// Auxiliary density for the reciprocal importance-sampling estimator.
// Fitted: moment-matched product of natural-parameter densities
// (Dirichlet weights, Gamma rates, Normal means, Beta probabilities,
// log-normal scales). Gaussian: independent normals on unconstrained
// transforms of every coordinate, Jacobians included.
struct AuxiliaryDensity {
    enum class Kind { Fitted, Gaussian } kind = Kind::Gaussian;
    ComponentFamily family;
    // Fitted: natural hyperparameters. Gaussian: per-coordinate means/sds.
    std::vector<double> weight_alpha;
    std::vector<std::vector<double>> component_a;
    std::vector<std::vector<double>> component_b;
    std::vector<double> coord_mean;
    std::vector<double> coord_sd;
};

AuxiliaryDensity fit_auxiliary(const Trace& trace, AuxiliaryDensity::Kind kind);
LogValue auxiliary_log_density(const AuxiliaryDensity& aux, const MixtureParams& params);

// Reciprocal importance sampling: log m = -log mean over draws of
// g(lambda)/(f(x|lambda) pi(lambda)). Always carries a variance warning;
// a draw with zero prior or likelihood raises a numerical error naming it.
EvidenceResult gelfand_dey(const Trace& trace, const AuxiliaryDensity& aux, const Dataset& data,
                           const PriorSpec& prior);

// Average likelihood over prior draws; standard error on the log scale by
// the delta method.
EvidenceResult prior_monte_carlo(const Dataset& data, int J, const ComponentFamily& family,
                                 const PriorSpec& prior, long long draws, RngStream& rng);

struct MixingDiagnostic {
    double delta = 0.0;  // symmetrized minus plain
    double log_j_factorial = 0.0;
    std::string verdict;  // "single-mode", "mixed", or "partial"
};

MixingDiagnostic mixing_diagnostic(const EvidenceResult& plain, const EvidenceResult& symmetrized,
                                   int J);

// Closed-form or enumerated marginal likelihood, on the same scale as the
// stochastic estimators (data constants included). Discrete conjugate
// families for any feasible J; the shared-variance normal model for J=1.
EvidenceResult exact_evidence(const Dataset& data, int J, const ComponentFamily& family,
                              const PriorSpec& prior);

}  // namespace mixkit

#endif
