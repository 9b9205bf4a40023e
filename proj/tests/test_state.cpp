#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "cpmc/changepoint_state.hpp"
#include "cpmc/sampler.hpp"
#include "support/oracles.hpp"

using namespace cpmc;

TEST_CASE("neighbors bracket a position") {
    ChangepointState empty(10);
    CHECK(empty.neighbors(5) == std::pair<int, int>{0, 10});

    ChangepointState st(10, {3, 7});
    CHECK(st.neighbors(5) == std::pair<int, int>{3, 7});
    // Strict brackets: querying an existing changepoint gives the segment the
    // deletion would merge, here (1, 7).
    CHECK(st.neighbors(3) == std::pair<int, int>{0, 7});
    CHECK(st.neighbors(7) == std::pair<int, int>{3, 10});
    CHECK(st.neighbors(9) == std::pair<int, int>{7, 10});
    CHECK_THROWS_AS(st.neighbors(0), StateError);
    CHECK_THROWS_AS(st.neighbors(10), StateError);
}

TEST_CASE("neighbors property: a < i < b and segment contains i") {
    Rng rng(11);
    for (int rep = 0; rep < 50; ++rep) {
        const int n = 5 + static_cast<int>(rng.uniform_int(20));
        const auto mask = static_cast<std::uint32_t>(rng.uniform_int(1u << (n - 1)));
        ChangepointState st(n, oracle::mask_to_positions(mask, n));
        for (int pos = 1; pos <= n - 1; ++pos) {
            const auto [a, b] = st.neighbors(pos);
            CHECK(a < pos);
            CHECK(pos < b);
            CHECK(a >= 0);
            CHECK(b <= n);
        }
    }
}

TEST_CASE("bad initial configurations raise") {
    CHECK_THROWS_AS(ChangepointState(1), StateError);
    CHECK_THROWS_AS(ChangepointState(10, {0}), StateError);
    CHECK_THROWS_AS(ChangepointState(10, {10}), StateError);
    CHECK_THROWS_AS(ChangepointState(10, {4, 4}), StateError);
    CHECK_THROWS_AS(ChangepointState(10, {7, 3}), StateError);
}

TEST_CASE("log_posterior composes prior and segment marginals") {
    Rng rng(21);
    const auto inst = oracle::random_instance(ModelKind::PoissonGamma, 3, rng);
    const auto cache = build_cache(inst.y, inst.model);

    ChangepointState flat(2);
    const auto inst2 = oracle::random_instance(ModelKind::GaussianMean, 2, rng);
    const auto cache2 = build_cache(inst2.y, inst2.model);
    CHECK(log_posterior(flat, cache2, inst2.model, inst2.prior) ==
          doctest::Approx(inst2.prior.log_prior_z(std::vector<int>{}, 2) +
                          inst2.model.log_marginal(cache2, 1, 2)).epsilon(1e-12));

    ChangepointState st(3, {1});
    CHECK(log_posterior(st, cache, inst.model, inst.prior) ==
          doctest::Approx(inst.prior.log_prior_z(std::vector<int>{1}, 3) +
                          inst.model.log_marginal(cache, 1, 1) +
                          inst.model.log_marginal(cache, 2, 3)).epsilon(1e-12));
}

TEST_CASE("posterior over random states matches enumeration") {
    Rng rng(31);
    for (const auto kind : {ModelKind::PoissonGamma, ModelKind::GaussianPrecision}) {
        const int n = 8 + 4 * static_cast<int>(rng.uniform_int(2));  // 8 or 12
        const auto inst = oracle::random_instance(kind, n, rng);
        const auto cache = build_cache(inst.y, inst.model);
        const auto enumr = oracle::enumerate_posterior(inst.y, inst.model, inst.prior);
        for (int rep = 0; rep < 40; ++rep) {
            const auto mask = static_cast<std::uint32_t>(rng.uniform_int(1u << (n - 1)));
            ChangepointState st(n, oracle::mask_to_positions(mask, n));
            const double lp = log_posterior(st, cache, inst.model, inst.prior);
            CHECK(std::exp(lp - enumr.log_evidence) ==
                  doctest::Approx(enumr.probs[mask]).epsilon(1e-9));
        }
    }
}

TEST_CASE("toggle updates k and is an involution") {
    ChangepointState st(10, {4});
    st.apply_toggle(7, 1.25);
    CHECK(st.k() == 2);
    CHECK(st.is_changepoint(7));
    CHECK(st.positions() == std::vector<int>{4, 7});
    CHECK(st.log_post() == doctest::Approx(1.25));
    st.apply_toggle(7, -1.25);
    CHECK(st.k() == 1);
    CHECK(!st.is_changepoint(7));
    CHECK(st.positions() == std::vector<int>{4});
    CHECK(st.log_post() == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("cached log posterior stays coherent over many random toggles") {
    Rng rng(41);
    const int n = 40;
    const auto inst = oracle::random_instance(ModelKind::GaussianMean, n, rng);
    const auto cache = build_cache(inst.y, inst.model);

    ChangepointState st(n);
    st.set_log_post(log_posterior(st, cache, inst.model, inst.prior));
    for (int rep = 0; rep < 100000; ++rep) {
        const int pos = 1 + static_cast<int>(rng.uniform_int(n - 1));
        const auto [a, b] = st.neighbors(pos);
        const double split = split_delta_log_prior(inst.prior, a, pos, b, n) +
                             split_delta_log_marginal(cache, inst.model, a, pos, b);
        st.apply_toggle(pos, st.is_changepoint(pos) ? -split : split);
    }
    const double fresh = log_posterior(st, cache, inst.model, inst.prior);
    CHECK(std::abs(st.log_post() - fresh) <= 1e-6);
}

TEST_CASE("shift moves a changepoint within its segment") {
    ChangepointState st(12, {3, 8});
    st.apply_shift(3, 5, 0.5);
    CHECK(st.positions() == std::vector<int>{5, 8});
    CHECK(st.is_changepoint(5));
    CHECK(!st.is_changepoint(3));
    CHECK(st.log_post() == doctest::Approx(0.5));
    CHECK_THROWS_AS(st.apply_shift(4, 6, 0.0), StateError);
    CHECK_THROWS_AS(st.apply_shift(5, 8, 0.0), StateError);
}
