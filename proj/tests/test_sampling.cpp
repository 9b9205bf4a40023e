#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "cpmc/alias_table.hpp"
#include "cpmc/carpenter.hpp"
#include "cpmc/numerics.hpp"
#include "cpmc/selection_weights.hpp"
#include "support/oracles.hpp"

using namespace cpmc;

namespace {

std::vector<std::uint64_t> alias_draw_counts(const AliasTable& table, std::size_t draws,
                                             Rng& rng) {
    std::vector<std::uint64_t> counts(table.size(), 0);
    for (std::size_t i = 0; i < draws; ++i) ++counts[table.sample(rng)];
    return counts;
}

}  // namespace

TEST_CASE("alias table reproduces simple weight vectors exactly") {
    const AliasTable uniform(std::vector<double>{1.0, 1.0, 1.0});
    for (double p : uniform.category_probs()) CHECK(p == doctest::Approx(1.0 / 3).epsilon(1e-15));

    const AliasTable skewed(std::vector<double>{1.0, 3.0});
    const auto probs = skewed.category_probs();
    CHECK(probs[0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(probs[1] == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("alias construction rejects bad weights") {
    CHECK_THROWS_AS(AliasTable(std::vector<double>{}), DataError);
    CHECK_THROWS_AS(AliasTable(std::vector<double>{1.0, 0.0}), DataError);
    CHECK_THROWS_AS(AliasTable(std::vector<double>{1.0, -2.0}), DataError);
    CHECK_THROWS_AS(AliasTable(std::vector<double>{1.0, std::nan("")}), DataError);
}

TEST_CASE("alias construction exactness on random tables") {
    Rng rng(17);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t m = 1 + rng.uniform_int(1000);
        std::vector<double> w(m);
        double total = 0.0;
        for (auto& v : w) {
            v = std::exp(6.0 * (rng.uniform() - 0.5));
            total += v;
        }
        const auto probs = AliasTable(w).category_probs();
        for (std::size_t i = 0; i < m; ++i)
            CHECK(std::abs(probs[i] - w[i] / total) <= 1e-12);
    }
}

TEST_CASE("alias sampling passes goodness of fit" * doctest::timeout(120)) {
    Rng rng(23);
    const std::vector<double> w{0.1, 0.2, 0.3, 0.4};
    const AliasTable table(w);
    const std::size_t draws = 10'000'000;
    const auto counts = alias_draw_counts(table, draws, rng);

    // 4 sigma per-category band.
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double mean = draws * w[i];
        const double sd = std::sqrt(draws * w[i] * (1.0 - w[i]));
        CHECK(std::abs(static_cast<double>(counts[i]) - mean) <= 4.0 * sd);
    }
    CHECK(oracle::chi2_statistic(counts, w, draws) <=
          oracle::chi2_quantile_9999(static_cast<int>(w.size()) - 1));

    // A larger random table at the same significance.
    std::vector<double> big(1000);
    double total = 0.0;
    for (auto& v : big) {
        v = 0.1 + rng.uniform();
        total += v;
    }
    for (auto& v : big) v /= total;
    const auto big_counts = alias_draw_counts(AliasTable(big), draws, rng);
    CHECK(oracle::chi2_statistic(big_counts, big, draws) <=
          oracle::chi2_quantile_9999(static_cast<int>(big.size()) - 1));
}

TEST_CASE("carpenter draws follow the categorical law") {
    Rng rng(29);

    SUBCASE("single category") {
        const auto draws = carpenter_sample(std::vector<double>{0.0}, 1000, rng);
        for (auto d : draws) CHECK(d == 0);
    }

    SUBCASE("binomial count within 4 sigma") {
        const std::vector<double> logp{std::log(0.5), std::log(0.5)};
        const std::size_t n = 1'000'000;
        const auto draws = carpenter_sample(logp, n, rng);
        std::size_t zeros = 0;
        for (auto d : draws) zeros += d == 0;
        const double sd = std::sqrt(n * 0.25);
        CHECK(std::abs(static_cast<double>(zeros) - n * 0.5) <= 4.0 * sd);
    }

    SUBCASE("degenerate distribution raises") {
        CHECK_THROWS_AS(carpenter_sample(std::vector<double>{kNegInf, kNegInf}, 10, rng),
                        DataError);
        CHECK_THROWS_AS(carpenter_sample(std::vector<double>{0.0}, 0, rng), DataError);
    }

    SUBCASE("matches the inverse-CDF reference sampler") {
        for (int rep = 0; rep < 3; ++rep) {
            const std::size_t m = rep == 0 ? 5 : 100;
            std::vector<double> probs(m);
            double total = 0.0;
            for (auto& p : probs) {
                p = 0.05 + rng.uniform();
                total += p;
            }
            for (auto& p : probs) p /= total;
            std::vector<double> logp(m);
            for (std::size_t i = 0; i < m; ++i) logp[i] = std::log(probs[i]);

            const std::size_t draws = 400'000;
            std::vector<std::uint64_t> carp(m, 0), ref(m, 0);
            for (auto d : carpenter_sample(logp, draws, rng)) ++carp[d];
            for (std::size_t i = 0; i < draws; ++i) ++ref[oracle::inverse_cdf_sample(probs, rng)];

            // Two-sample Pearson statistic on the pooled estimate.
            double stat = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                const double pooled =
                    static_cast<double>(carp[i] + ref[i]) / (2.0 * draws);
                const double e = draws * pooled;
                if (e < 1e-9) continue;
                stat += (carp[i] - e) * (carp[i] - e) / e + (ref[i] - e) * (ref[i] - e) / e;
            }
            CHECK(stat <= oracle::chi2_quantile_9999(static_cast<int>(m) - 1));
        }
    }
}

TEST_CASE("add-position sampling follows the selection weights") {
    SUBCASE("uniform weights are uniform over free positions") {
        Rng rng(3);
        ChangepointState st(6, {2});
        SelectionWeights w(st, {});
        std::map<int, int> counts;
        const int draws = 200'000;
        for (int i = 0; i < draws; ++i) ++counts[w.sample_add_position(st, rng).position];
        CHECK(counts.size() == 4);  // positions {1,3,4,5}
        for (const auto& [pos, c] : counts) {
            CHECK(pos != 2);
            CHECK(std::abs(c - draws / 4.0) <= 4.0 * std::sqrt(draws * 0.25 * 0.75));
        }
    }

    SUBCASE("weights 2:1:1 give the heavy position half the mass") {
        Rng rng(5);
        ChangepointState st(4);
        SelectionWeights w(st, {});
        w.set_log_a(1, std::log(2.0), st);
        CHECK(std::exp(w.log_add_proposal_prob(st, 1)) == doctest::Approx(0.5).epsilon(1e-12));
        const int draws = 200'000;
        int hits = 0;
        for (int i = 0; i < draws; ++i) hits += w.sample_add_position(st, rng).position == 1;
        CHECK(std::abs(hits - draws * 0.5) <= 4.0 * std::sqrt(draws * 0.25));
    }

    SUBCASE("thresholded two-group mass") {
        Rng rng(7);
        ChangepointState st(4);
        WeightConfig cfg;
        cfg.thresholding = true;
        SelectionWeights w(st, cfg);
        w.set_log_a(2, std::log(10.0), st);  // crosses the e-cutoff: active
        CHECK(w.is_active(2));
        CHECK(!w.is_active(1));
        // P(2) = 10 / (10 + 1 + 1)
        CHECK(std::exp(w.log_add_proposal_prob(st, 2)) ==
              doctest::Approx(10.0 / 12.0).epsilon(1e-12));
        CHECK(w.add_mass() == doctest::Approx(12.0).epsilon(1e-12));
        const int draws = 120'000;
        int hits = 0;
        for (int i = 0; i < draws; ++i) hits += w.sample_add_position(st, rng).position == 2;
        const double p = 10.0 / 12.0;
        CHECK(std::abs(hits - draws * p) <= 4.0 * std::sqrt(draws * p * (1 - p)));
    }
}

TEST_CASE("delete-position sampling follows the d-weights") {
    Rng rng(9);

    SUBCASE("single changepoint is certain") {
        ChangepointState st(8, {5});
        SelectionWeights w(st, {});
        for (int i = 0; i < 10; ++i) {
            const auto prop = w.sample_delete_position(st, rng);
            CHECK(prop.position == 5);
            CHECK(prop.log_q_fwd == doctest::Approx(0.0).epsilon(1e-12));
        }
    }

    SUBCASE("1:2:3 weights") {
        ChangepointState st(10, {2, 5, 8});
        SelectionWeights w(st, {});
        w.set_log_d(5, std::log(2.0), st);
        w.set_log_d(8, std::log(3.0), st);
        std::map<int, int> counts;
        const int draws = 600'000;
        for (int i = 0; i < draws; ++i) ++counts[w.sample_delete_position(st, rng).position];
        const std::vector<std::pair<int, double>> expect{{2, 1.0 / 6}, {5, 2.0 / 6}, {8, 3.0 / 6}};
        for (const auto& [pos, p] : expect)
            CHECK(std::abs(counts[pos] - draws * p) <= 4.0 * std::sqrt(draws * p * (1 - p)));
    }

    SUBCASE("empty configuration raises") {
        ChangepointState st(8);
        SelectionWeights w(st, {});
        CHECK_THROWS_AS(w.sample_delete_position(st, rng), StateError);
    }
}

TEST_CASE("thresholded proposal equals the two-group formula exhaustively") {
    Rng rng(13);
    for (int rep = 0; rep < 40; ++rep) {
        const int n = 4 + static_cast<int>(rng.uniform_int(7));  // n in [4, 10]
        const auto mask = static_cast<std::uint32_t>(rng.uniform_int(1u << (n - 1)));
        ChangepointState st(n, oracle::mask_to_positions(mask, n));
        if (st.k() == n - 1) continue;

        WeightConfig cfg;
        cfg.thresholding = true;
        SelectionWeights w(st, cfg);
        for (int pos = 1; pos <= n - 1; ++pos)
            w.set_log_a(pos, 6.0 * (rng.uniform() - 0.5), st);

        // Direct evaluation of the two-group law.
        double active_mass = 0.0;
        int inact = 0;
        for (int pos = 1; pos <= n - 1; ++pos) {
            if (st.is_changepoint(pos)) continue;
            if (w.is_active(pos))
                active_mass += w.a(pos);
            else
                ++inact;
        }
        const double total = active_mass + cfg.a_inactive * inact;
        for (int pos = 1; pos <= n - 1; ++pos) {
            if (st.is_changepoint(pos)) continue;
            const double ahat = w.is_active(pos) ? w.a(pos) : cfg.a_inactive;
            CHECK(w.log_add_proposal_prob(st, pos) ==
                  doctest::Approx(std::log(ahat / total)).epsilon(1e-12));
        }
        // Active membership is exactly the cutoff rule.
        for (int pos = 1; pos <= n - 1; ++pos)
            CHECK(w.is_active(pos) == (w.a(pos) > cfg.a_cutoff));
    }
}

TEST_CASE("weights stay inside the clamp under any adaptation sequence") {
    Rng rng(19);
    ChangepointState st(30, {10, 20});
    WeightConfig cfg;
    cfg.thresholding = true;
    cfg.log_floor = -4.0;
    cfg.log_ceil = 4.0;
    cfg.a_cutoff = 1.5;
    SelectionWeights w(st, cfg);
    for (int step = 0; step < 20000; ++step) {
        const int pos = 1 + static_cast<int>(rng.uniform_int(29));
        const double jump = 12.0 * (rng.uniform() - 0.5);
        if (rng.uniform() < 0.5)
            w.set_log_a(pos, w.log_a(pos) + jump, st);
        else
            w.set_log_d(pos, w.log_d(pos) + jump, st);
    }
    for (int pos = 1; pos <= 29; ++pos) {
        CHECK(w.a(pos) >= std::exp(cfg.log_floor) * (1 - 1e-12));
        CHECK(w.a(pos) <= std::exp(cfg.log_ceil) * (1 + 1e-12));
        CHECK(w.d(pos) >= std::exp(cfg.log_floor) * (1 - 1e-12));
        CHECK(w.d(pos) <= std::exp(cfg.log_ceil) * (1 + 1e-12));
        CHECK(w.is_active(pos) == (w.a(pos) > cfg.a_cutoff));
    }

    // Maintained masses should agree with a fresh recomputation.
    const double mass_before = w.add_mass();
    const double dmass_before = w.delete_mass();
    w.recompute_sums(st);
    CHECK(w.add_mass() == doctest::Approx(mass_before).epsilon(1e-9));
    CHECK(w.delete_mass() == doctest::Approx(dmass_before).epsilon(1e-9));
}
