#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "mixkit/distributions.hpp"
#include "mixkit/errors.hpp"
#include "mixkit/exact.hpp"
#include "mixkit/rng.hpp"
#include "oracles.hpp"

using namespace mixkit;

namespace {

PriorSpec poisson_prior(int J) {
    return PriorSpec::default_for(ComponentFamily::poisson(), J, Dataset::univariate_count({0}));
}

}  // namespace

TEST_CASE("partition class count") {
    CHECK(partition_class_count(0, 1) == 1);
    CHECK(partition_class_count(17, 1) == 1);
    CHECK(partition_class_count(10, 2) == 11);
    CHECK(partition_class_count(10, 3) == 66);
    CHECK(partition_class_count(10, 4) == 286);
    CHECK(partition_class_count(20, 4) == 1771);
    // Value above 2^64, exercised through the big-integer path.
    CHECK(partition_class_count(100, 20) == BigInt("4910371215196105953021"));
}

namespace {
// Exact small binomial coefficient via Pascal's rule, independent of the
// library's big-integer code.
long long pascal_choose(int n, int k) {
    std::vector<std::vector<long long>> c(static_cast<std::size_t>(n + 1),
                                          std::vector<long long>(static_cast<std::size_t>(n + 1), 0));
    for (int i = 0; i <= n; ++i) {
        c[static_cast<std::size_t>(i)][0] = 1;
        for (int j = 1; j <= i; ++j)
            c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] +
                c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)];
    }
    return c[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}
}  // namespace

TEST_CASE("recursion base: one observation yields J unit entries") {
    const auto data = Dataset::univariate_count({3});
    for (int J : {1, 2, 5}) {
        const auto table = enumerate_stats(data, J, ComponentFamily::poisson());
        CHECK(table.entries.size() == static_cast<std::size_t>(J));
        for (const auto& [stat, mult] : table.entries) CHECK(mult == 1);
        CHECK(table.total_multiplicity() == J);
    }
}

TEST_CASE("all-zero sample of ten: binomial structure") {
    const auto data = Dataset::univariate_count(std::vector<long long>(10, 0));
    const auto table = enumerate_stats(data, 2, ComponentFamily::poisson());
    REQUIRE(table.entries.size() == 11);
    CHECK(table.total_multiplicity() == 1024);
    for (const auto& [stat, mult] : table.entries) {
        const int n1 = stat.counts[0];
        CHECK(stat.stats == std::vector<long long>{0, 0});
        CHECK(mult == pascal_choose(10, n1));
    }
    CHECK(enumerate_stats(data, 3, ComponentFamily::poisson()).entries.size() == 66);
    CHECK(enumerate_stats(data, 4, ComponentFamily::poisson()).entries.size() == 286);
}

TEST_CASE("recursion equals exhaustive enumeration on random small samples") {
    RngStream rng(2024);
    for (int rep = 0; rep < 8; ++rep) {
        const int n = 4 + static_cast<int>(rng.uniform_int(5));
        const int J = 2 + static_cast<int>(rng.uniform_int(2));
        std::vector<long long> xs(static_cast<std::size_t>(n));
        for (auto& x : xs) x = static_cast<long long>(rng.poisson(2.0));
        const auto data = Dataset::univariate_count(xs);
        const auto fam = ComponentFamily::poisson();

        const auto table = enumerate_stats(data, J, fam);
        const auto brute = oracles::brute_force_table(data, J, fam);
        REQUIRE(table.entries.size() == brute.size());
        for (const auto& [stat, mult] : brute) {
            auto it = table.entries.find(stat);
            REQUIRE(it != table.entries.end());
            CHECK(it->second == mult);
        }
        BigInt expect = 1;
        for (int i = 0; i < n; ++i) expect *= J;
        CHECK(table.total_multiplicity() == expect);
    }
}

TEST_CASE("enumeration is order invariant") {
    const auto fam = ComponentFamily::poisson();
    const auto a = enumerate_stats(Dataset::univariate_count({0, 1, 1, 2, 4, 0}), 3, fam);
    const auto b = enumerate_stats(Dataset::univariate_count({4, 0, 1, 2, 0, 1}), 3, fam);
    CHECK(a.entries == b.entries);
}

TEST_CASE("binary data enumeration matches brute force") {
    const auto fam = ComponentFamily::bernoulli_product(2);
    const auto data = Dataset::binary_matrix({{1, 0}, {0, 0}, {1, 1}, {1, 0}, {0, 1}}, 2);
    const auto table = enumerate_stats(data, 2, fam);
    const auto brute = oracles::brute_force_table(data, 2, fam);
    REQUIRE(table.entries.size() == brute.size());
    for (const auto& [stat, mult] : brute) CHECK(table.entries.at(stat) == mult);
}

TEST_CASE("entry cap raises a resource error carrying the cap") {
    const auto data = Dataset::univariate_count({1, 2, 3, 4, 5, 6, 7, 8});
    try {
        enumerate_stats(data, 3, ComponentFamily::poisson(), 10);
        FAIL("expected ResourceError");
    } catch (const ResourceError& e) {
        CHECK(e.entry_cap == 10);
    }
}

TEST_CASE("continuous families are refused") {
    CHECK_THROWS_AS(enumerate_stats(Dataset::univariate_real({0.0}), 2, ComponentFamily::normal()),
                    UnsupportedFamilyError);
}

TEST_CASE("exact log marginal matches the exhaustive-allocation oracle") {
    SUBCASE("poisson J=2") {
        const auto fam = ComponentFamily::poisson();
        const auto data = Dataset::univariate_count({0, 0, 1, 2, 2, 4, 7, 1});
        PriorSpec prior = poisson_prior(2);
        prior.poisson_rate = {1.0, 2.5};
        prior.dirichlet_alpha = {1.0, 1.5};
        const double exact = exact_log_marginal(data, 2, fam, prior) +
                             log_data_constant(fam, data);
        const double brute = oracles::brute_force_log_marginal(data, 2, fam, prior);
        CHECK(std::abs(exact - brute) < 1e-9);
    }
    SUBCASE("latent class J=2") {
        const auto fam = ComponentFamily::bernoulli_product(3);
        const auto data = Dataset::binary_matrix(
            {{1, 0, 1}, {0, 0, 0}, {1, 1, 1}, {0, 1, 0}, {1, 0, 0}, {1, 1, 0}}, 3);
        const auto prior = PriorSpec::default_for(fam, 2, data);
        const double exact = exact_log_marginal(data, 2, fam, prior) +
                             log_data_constant(fam, data);
        const double brute = oracles::brute_force_log_marginal(data, 2, fam, prior);
        CHECK(std::abs(exact - brute) < 1e-9);
    }
    SUBCASE("multinomial rows J=2") {
        const auto fam = ComponentFamily::multinomial_profile(3);
        const auto data = Dataset::multinomial_rows({{2, 0, 1}, {0, 3, 0}, {1, 1, 1}, {4, 0, 0}}, 3);
        const auto prior = PriorSpec::default_for(fam, 2, data);
        const double exact = exact_log_marginal(data, 2, fam, prior) +
                             log_data_constant(fam, data);
        const double brute = oracles::brute_force_log_marginal(data, 2, fam, prior);
        CHECK(std::abs(exact - brute) < 1e-9);
    }
}

TEST_CASE("single-component poisson marginal has the conjugate closed form") {
    const auto fam = ComponentFamily::poisson();
    const auto data = Dataset::univariate_count({3, 1, 4, 1, 5});
    PriorSpec prior = poisson_prior(1);
    prior.poisson_rate = {2.0};
    const double n = 5.0, S = 14.0, tau = 2.0;
    const double closed = std::log(tau) + std::lgamma(S + 1.0) - (S + 1.0) * std::log(n + tau);
    CHECK(exact_log_marginal(data, 1, fam, prior) == doctest::Approx(closed).epsilon(1e-12));
}

TEST_CASE("partition weights") {
    PriorSpec prior = poisson_prior(2);
    SUBCASE("empty component contributes a unit factor") {
        // With tau=1 the single-component factor for (n, S) is
        // n! S! / (1+n)^{S+1}; an empty component contributes 0!0!/1 = 1,
        // so the two-against-none weight equals the J=1 weight up to the
        // Dirichlet occupancy ratio.
        SufficientStat both{{0, 2}, {0, 3}};
        const double w = partition_log_weight(ComponentFamily::poisson(), both, prior);
        // Dirichlet(1,1) occupancy ratio Gamma(2)/Gamma(2+n) * prod Gamma(1+n_j),
        // empty component factor tau Gamma(1)/1 = 1, occupied factor
        // tau Gamma(S+1)/(n+tau)^{S+1} = Gamma(4)/3^4.
        const double occupancy = std::lgamma(2.0) - std::lgamma(4.0) + std::lgamma(1.0) +
                                 std::lgamma(3.0);
        const double single = std::lgamma(4.0) - 4.0 * std::log(3.0);
        CHECK(w == doctest::Approx(occupancy + single).epsilon(1e-12));
    }
    SUBCASE("label-swapped statistics have equal weight under exchangeable priors") {
        SufficientStat s{{1, 3}, {2, 5}};
        SufficientStat mirror{{3, 1}, {5, 2}};
        CHECK(partition_log_weight(ComponentFamily::poisson(), s, prior) ==
              doctest::Approx(partition_log_weight(ComponentFamily::poisson(), mirror, prior))
                  .epsilon(1e-13));
        const auto lc = ComponentFamily::bernoulli_product(2);
        const auto lcp = PriorSpec::default_for(lc, 2, Dataset::binary_matrix({{0, 0}}, 2));
        SufficientStat t{{2, 3}, {1, 0, 2, 2}};
        SufficientStat tm{{3, 2}, {2, 2, 1, 0}};
        CHECK(partition_log_weight(lc, t, lcp) ==
              doctest::Approx(partition_log_weight(lc, tm, lcp)).epsilon(1e-13));
    }
    SUBCASE("normalised weights equal quadrature posterior allocation probabilities") {
        // x = (0, 1), J = 2, tau = (1, 1): integrate out (p, lambda_1,
        // lambda_2) for each of the four allocations.
        const auto data = Dataset::univariate_count({0, 1});
        const auto fam = ComponentFamily::poisson();
        auto alloc_integral = [&](int z0, int z1) {
            // p-part: int p^{n_1} (1-p)^{n_2} dp = B(n_1+1, n_2+1).
            const int n1 = (z0 == 0) + (z1 == 0);
            const int n2 = 2 - n1;
            double v = std::exp(std::lgamma(n1 + 1.0) + std::lgamma(n2 + 1.0) - std::lgamma(4.0));
            for (int j = 0; j < 2; ++j) {
                const int nj = j == 0 ? n1 : n2;
                long long Sj = 0;
                if (z0 == j) Sj += 0;
                if (z1 == j) Sj += 1;
                v *= oracles::integrate(
                    [&](double lam) {
                        return std::exp(-nj * lam) * std::pow(lam, static_cast<double>(Sj)) *
                               std::exp(-lam);
                    },
                    0.0, 60.0, 1e-12);
            }
            return v;
        };
        double total = 0.0;
        std::vector<double> probs;
        for (int z0 = 0; z0 < 2; ++z0)
            for (int z1 = 0; z1 < 2; ++z1) {
                probs.push_back(alloc_integral(z0, z1));
                total += probs.back();
            }
        for (auto& p : probs) p /= total;

        const auto table = enumerate_stats(data, 2, fam);
        std::vector<double> log_w;
        for (const auto& [stat, mult] : table.entries) {
            log_w.push_back(partition_log_weight(fam, stat, prior) + log_big(mult));
        }
        const double norm = log_sum_exp(log_w);
        // The (z0,z1) loop visits (0,0),(0,1),(1,0),(1,1); match each to its
        // statistic in the table.
        auto weight_of = [&](std::vector<int> counts, std::vector<long long> stats) {
            SufficientStat s{std::move(counts), std::move(stats)};
            return std::exp(partition_log_weight(fam, s, prior) - norm);
        };
        CHECK(weight_of({2, 0}, {1, 0}) == doctest::Approx(probs[0]).epsilon(1e-8));
        CHECK(weight_of({1, 1}, {0, 1}) == doctest::Approx(probs[1]).epsilon(1e-8));
        CHECK(weight_of({1, 1}, {1, 0}) == doctest::Approx(probs[2]).epsilon(1e-8));
        CHECK(weight_of({0, 2}, {0, 1}) == doctest::Approx(probs[3]).epsilon(1e-8));
    }
}

TEST_CASE("exact weight posterior") {
    const auto fam = ComponentFamily::poisson();
    const auto data = Dataset::univariate_count({0, 0, 1, 3, 5});
    std::vector<double> grid;
    for (int i = 1; i < 400; ++i) grid.push_back(i / 400.0);

    SUBCASE("symmetric prior gives a symmetric density") {
        const auto prior = poisson_prior(2);
        const auto dens = exact_weight_posterior(data, fam, prior, grid);
        double integral = 0.0;
        for (std::size_t i = 1; i < grid.size(); ++i)
            integral += 0.5 * (dens[i] + dens[i - 1]) * (grid[i] - grid[i - 1]);
        CHECK(integral == doctest::Approx(1.0).epsilon(2e-3));
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK(dens[i] == doctest::Approx(dens[grid.size() - 1 - i]).epsilon(1e-10));
    }
    SUBCASE("asymmetric weight prior shifts the mean") {
        auto mean_under = [&](std::vector<double> alpha) {
            PriorSpec prior = poisson_prior(2);
            prior.dirichlet_alpha = std::move(alpha);
            const auto dens = exact_weight_posterior(data, fam, prior, grid);
            double m = 0.0, mass = 0.0;
            for (std::size_t i = 1; i < grid.size(); ++i) {
                const double seg = 0.5 * (dens[i] + dens[i - 1]) * (grid[i] - grid[i - 1]);
                m += seg * 0.5 * (grid[i] + grid[i - 1]);
                mass += seg;
            }
            return m / mass;
        };
        CHECK(mean_under({0.01, 100.0}) < mean_under({1.0, 1.0}));
    }
    SUBCASE("only two-component priors are accepted") {
        CHECK_THROWS_AS(exact_weight_posterior(data, fam, poisson_prior(3), grid),
                        ValidationError);
    }
}

TEST_CASE("top partitions") {
    const auto fam = ComponentFamily::poisson();
    SUBCASE("singleton ties resolve lexicographically") {
        const auto data = Dataset::univariate_count({2});
        const auto top = top_partitions(data, 2, fam, poisson_prior(2), 2);
        REQUIRE(top.size() == 2);
        CHECK(top[0].stat.counts == std::vector<int>{0, 1});
        CHECK(top[1].stat.counts == std::vector<int>{1, 0});
        CHECK(top[0].log_weight == doctest::Approx(top[1].log_weight).epsilon(1e-13));
    }
    SUBCASE("ranking matches the exhaustive weights") {
        const auto data = Dataset::univariate_count({0, 4});
        const auto prior = poisson_prior(2);
        const auto table = enumerate_stats(data, 2, fam);
        double best = -1e300;
        SufficientStat best_stat;
        for (const auto& [stat, mult] : table.entries) {
            const double w = partition_log_weight(fam, stat, prior);
            if (w > best + 1e-13 || (std::abs(w - best) <= 1e-13 && stat < best_stat)) {
                best = w;
                best_stat = stat;
            }
        }
        const auto top = top_partitions(data, 2, fam, prior, 1);
        REQUIRE(top.size() == 1);
        CHECK(top[0].stat == best_stat);
        // Masses over the full table sum to one.
        const auto all = top_partitions(data, 2, fam, prior, table.entries.size());
        double mass = 0.0;
        for (const auto& r : all) mass += std::exp(r.log_posterior_mass);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("mirror statistics tie under exchangeable priors") {
        const auto lc = ComponentFamily::bernoulli_product(2);
        const auto data = Dataset::binary_matrix({{1, 1}, {1, 0}, {0, 0}, {0, 1}, {1, 1}}, 2);
        const auto prior = PriorSpec::default_for(lc, 2, data);
        const auto top = top_partitions(data, 2, lc, prior, 2);
        REQUIRE(top.size() == 2);
        CHECK(top[0].log_weight == doctest::Approx(top[1].log_weight).epsilon(1e-12));
        // The runner-up is the label-swapped mirror of the winner.
        SufficientStat mirror;
        mirror.counts = {top[0].stat.counts[1], top[0].stat.counts[0]};
        mirror.stats = {top[0].stat.stats[2], top[0].stat.stats[3], top[0].stat.stats[0],
                        top[0].stat.stats[1]};
        CHECK(top[1].stat == mirror);
    }
}

TEST_CASE("exact component marginal") {
    const auto fam = ComponentFamily::poisson();
    const auto data = Dataset::univariate_count({0, 1, 5, 6});
    const auto prior = poisson_prior(2);
    std::vector<double> grid;
    for (int i = 1; i <= 600; ++i) grid.push_back(i * 0.02);

    const auto d1 = exact_component_marginal(data, fam, prior, 1, grid);
    const auto d2 = exact_component_marginal(data, fam, prior, 2, grid);
    double integral = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i)
        integral += 0.5 * (d1[i] + d1[i - 1]) * (grid[i] - grid[i - 1]);
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-3));
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(d1[i] == doctest::Approx(d2[i]).epsilon(1e-10));

    // Exhaustive oracle: the marginal is the allocation-probability-weighted
    // mixture of Gamma(S_1+1, n_1+tau) densities.
    std::vector<double> weights;
    std::vector<std::pair<double, double>> gammas;
    oracles::for_each_allocation(4, 2, [&](const std::vector<int>& z) {
        std::vector<std::vector<int>> members(2);
        for (int i = 0; i < 4; ++i) members[static_cast<std::size_t>(z[static_cast<std::size_t>(i)])].push_back(i);
        double lw = std::lgamma(2.0) - std::lgamma(6.0);
        long long S1 = 0;
        for (int j = 0; j < 2; ++j) {
            lw += std::lgamma(1.0 + members[static_cast<std::size_t>(j)].size());
            lw += oracles::subset_log_marginal(data, members[static_cast<std::size_t>(j)], fam, prior, j);
        }
        for (int i : members[0]) S1 += data.counts[static_cast<std::size_t>(i)];
        weights.push_back(lw);
        gammas.emplace_back(static_cast<double>(S1) + 1.0,
                            static_cast<double>(members[0].size()) + 1.0);
    });
    const double norm = log_sum_exp(weights);
    for (std::size_t g = 0; g < grid.size(); g += 40) {
        double dens = 0.0;
        for (std::size_t a = 0; a < weights.size(); ++a)
            dens += std::exp(weights[a] - norm) *
                    std::exp(log_gamma_pdf(grid[g], gammas[a].first, gammas[a].second));
        CHECK(d1[g] == doctest::Approx(dens).epsilon(5e-3));
    }
    CHECK_THROWS_AS(
        exact_component_marginal(Dataset::binary_matrix({{1}}, 1),
                                 ComponentFamily::bernoulli_product(1),
                                 PriorSpec::default_for(ComponentFamily::bernoulli_product(1), 2,
                                                        Dataset::binary_matrix({{1}}, 1)),
                                 1, grid),
        UnsupportedFamilyError);
}

TEST_CASE("stat table CSV export") {
    const auto data = Dataset::univariate_count({0, 2});
    const auto table = enumerate_stats(data, 2, ComponentFamily::poisson());
    const auto csv = stat_table_csv(table, poisson_prior(2));
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "n_1,n_2,S_1_1,S_2_1,multiplicity,log_weight");
    std::size_t rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == table.entries.size());
}
