#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "mixkit/errors.hpp"
#include "mixkit/mcmc.hpp"
#include "mixkit/model.hpp"
#include "mixkit/relabel.hpp"

using namespace mixkit;

namespace {

// A hand-built two-component normal trace whose labels flip on every odd
// draw: the identified posterior is (mu near 0, mu near 5) throughout.
Trace switching_trace(const Dataset& data, int draws) {
    Trace trace;
    trace.family = ComponentFamily::normal(true);
    trace.config.iterations = draws;
    trace.config.burnin = 0;
    for (int t = 0; t < draws; ++t) {
        const double jitter = 0.01 * (t % 7);
        MixtureParams p;
        if (t % 2 == 0) {
            p.weights = {0.3, 0.7};
            p.components = {{0.0 + jitter, 1.0}, {5.0 - jitter, 1.0}};
        } else {
            p.weights = {0.7, 0.3};
            p.components = {{5.0 - jitter, 1.0}, {0.0 + jitter, 1.0}};
        }
        trace.draws.push_back(p);
        trace.log_lik.push_back(observed_log_likelihood(trace.family, p, data));
        Allocation z;
        for (std::size_t i = 0; i < data.size(); ++i) {
            const int near_zero = data.reals[i] < 2.5;
            z.labels.push_back(t % 2 == 0 ? (near_zero ? 0 : 1) : (near_zero ? 1 : 0));
        }
        trace.allocations.push_back(z);
    }
    return trace;
}

}  // namespace

TEST_CASE("approximate MAP selection") {
    const auto fam = ComponentFamily::poisson();
    const auto data = Dataset::univariate_count({0, 1, 2, 3});
    const auto prior = PriorSpec::default_for(fam, 2, data);

    Trace trace;
    trace.family = fam;
    auto add = [&](double p1, double l1, double l2) {
        MixtureParams mp;
        mp.weights = {p1, 1.0 - p1};
        mp.components = {{l1}, {l2}};
        trace.draws.push_back(mp);
        trace.log_lik.push_back(observed_log_likelihood(fam, mp, data));
    };

    SUBCASE("empty trace is a usage error") {
        CHECK_THROWS_AS(approximate_map(trace, prior), UsageError);
    }
    SUBCASE("single draw") {
        add(0.5, 1.0, 3.0);
        CHECK(approximate_map(trace, prior) == 0);
    }
    SUBCASE("planted maximum is recovered") {
        add(0.5, 10.0, 20.0);   // awful fit
        add(0.45, 0.7, 2.6);    // near the data
        add(0.5, 15.0, 0.01);   // awful fit
        CHECK(approximate_map(trace, prior) == 1);
    }
    SUBCASE("ties resolve to the first occurrence") {
        add(0.5, 10.0, 20.0);
        add(0.45, 0.7, 2.6);
        add(0.45, 0.7, 2.6);
        CHECK(approximate_map(trace, prior) == 1);
    }
}

TEST_CASE("coordinate map puts scale parameters on the log scale") {
    MixtureParams p;
    p.weights = {0.4, 0.6};
    p.components = {{1.0, 4.0, 9.0}, {2.0, 0.25, 16.0}};
    const auto coords = relabel_coordinates(ComponentFamily::student_t(), p);
    // Layout: weights, then (mu, log sigma2, log nu) per component.
    REQUIRE(coords.size() == 8);
    CHECK(coords[0] == 0.4);
    CHECK(coords[2] == 1.0);
    CHECK(coords[3] == doctest::Approx(std::log(4.0)));
    CHECK(coords[4] == doctest::Approx(std::log(9.0)));
    CHECK(coords[6] == doctest::Approx(std::log(0.25)));
}

TEST_CASE("best permutation maps an exact permutation back onto the reference") {
    const auto fam = ComponentFamily::normal(false);
    MixtureParams ref;
    ref.weights = {0.2, 0.3, 0.5};
    ref.components = {{0.0, 1.0}, {3.0, 0.5}, {7.0, 2.0}};
    const std::vector<int> shuffle = {2, 0, 1};
    const auto moved = ref.permuted(shuffle);
    const auto perm = best_permutation(fam, moved, ref);
    const auto back = moved.permuted(perm);
    CHECK(back.weights == ref.weights);
    CHECK(back.components == ref.components);
    CHECK(relabel_distance(fam, moved, perm, ref) == doctest::Approx(0.0));
}

TEST_CASE("reordering a switching trace") {
    const auto data = Dataset::univariate_real({-0.5, 0.2, 0.4, 4.6, 5.1, 5.3, 4.9});
    const auto prior = PriorSpec::default_for(ComponentFamily::normal(true), 2, data);
    const auto trace = switching_trace(data, 40);
    const auto fixed = reorder_trace(trace, prior);
    REQUIRE(fixed.size() == trace.size());
    CHECK(fixed.relabeled);

    SUBCASE("per-draw likelihood is preserved exactly") {
        for (std::size_t t = 0; t < trace.size(); ++t) {
            CHECK(fixed.log_lik[t] == trace.log_lik[t]);
            CHECK(observed_log_likelihood(trace.family, fixed.draws[t], data) ==
                  doctest::Approx(trace.log_lik[t]).epsilon(1e-13));
        }
    }
    SUBCASE("component one is unimodal after reordering") {
        for (const auto& d : fixed.draws) {
            CHECK(d.components[0][0] < 2.5);
            CHECK(d.components[1][0] > 2.5);
        }
    }
    SUBCASE("the multiset of (weight, parameters) pairs is unchanged") {
        for (std::size_t t = 0; t < trace.size(); ++t) {
            std::multimap<double, std::vector<double>> before, after;
            for (int j = 0; j < 2; ++j) {
                before.emplace(trace.draws[t].weights[static_cast<std::size_t>(j)],
                               trace.draws[t].components[static_cast<std::size_t>(j)]);
                after.emplace(fixed.draws[t].weights[static_cast<std::size_t>(j)],
                              fixed.draws[t].components[static_cast<std::size_t>(j)]);
            }
            CHECK(before == after);
        }
    }
    SUBCASE("allocations are relabeled consistently with the draws") {
        for (std::size_t t = 0; t < trace.size(); ++t) {
            const double before = complete_log_likelihood(trace.family, trace.draws[t], data,
                                                          trace.allocations[t]);
            const double after = complete_log_likelihood(trace.family, fixed.draws[t], data,
                                                         fixed.allocations[t]);
            CHECK(after == doctest::Approx(before).epsilon(1e-13));
        }
    }
    SUBCASE("idempotence") {
        const auto twice = reorder_trace(fixed, prior);
        for (std::size_t t = 0; t < fixed.size(); ++t) {
            CHECK(twice.draws[t].weights == fixed.draws[t].weights);
            CHECK(twice.draws[t].components == fixed.draws[t].components);
        }
    }
}

TEST_CASE("point estimates") {
    Trace trace;
    trace.family = ComponentFamily::poisson();
    SUBCASE("empty trace is a usage error") { CHECK_THROWS_AS(point_estimates(trace), UsageError); }
    SUBCASE("constant trace has zero spread") {
        MixtureParams p;
        p.weights = {0.25, 0.75};
        p.components = {{1.5}, {4.0}};
        trace.draws = {p, p, p};
        trace.log_lik = {0.0, 0.0, 0.0};
        const auto est = point_estimates(trace);
        CHECK(est.mean.weights == p.weights);
        CHECK(est.mean.components == p.components);
        CHECK(est.stddev.weights == std::vector<double>{0.0, 0.0});
        CHECK(est.stddev.components[0][0] == 0.0);
    }
    SUBCASE("two draws average to the midpoint") {
        MixtureParams a, b;
        a.weights = {0.2, 0.8};
        a.components = {{1.0}, {3.0}};
        b.weights = {0.4, 0.6};
        b.components = {{2.0}, {5.0}};
        trace.draws = {a, b};
        trace.log_lik = {0.0, 0.0};
        const auto est = point_estimates(trace);
        CHECK(est.mean.weights[0] == doctest::Approx(0.3));
        CHECK(est.mean.components[0][0] == doctest::Approx(1.5));
        CHECK(est.mean.components[1][0] == doctest::Approx(4.0));
    }
}

TEST_CASE("too many components for exhaustive matching") {
    MixtureParams big;
    const int J = 9;
    for (int j = 0; j < J; ++j) {
        big.weights.push_back(1.0 / J);
        big.components.push_back({static_cast<double>(j)});
    }
    CHECK_THROWS_AS(best_permutation(ComponentFamily::poisson(), big, big), ResourceError);
}
