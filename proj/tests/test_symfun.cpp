#include "mixhess/errors.hpp"
#include "mixhess/identities.hpp"
#include "mixhess/symfun.hpp"

#include <doctest.h>

#include <random>

using namespace mixhess;
using doctest::Approx;

TEST_CASE("sigma small cases") {
    CHECK(sigma(0, Spectrum{5, -3}) == 1.0);
    CHECK(sigma(1, Spectrum{2, 3, 4}) == Approx(9.0));
    CHECK(sigma(2, Spectrum{1, 2, 3}) == Approx(11.0));
    CHECK(sigma(3, Spectrum{1, 2, 3}) == Approx(6.0));
    CHECK_THROWS_AS(sigma(4, Spectrum{1, 2, 3}), ArgumentError);
    CHECK_THROWS_AS(sigma(-1, Spectrum{1, 2, 3}), ArgumentError);
}

TEST_CASE("sigma agrees with subset enumeration") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    for (int n = 1; n <= 7; ++n) {
        std::vector<double> l(n);
        for (auto& x : l) x = nd(rng);
        const auto all = sigma_all(l);
        REQUIRE(static_cast<int>(all.size()) == n + 1);
        for (int m = 0; m <= n; ++m) {
            CHECK(sigma(m, Spectrum(l)) == Approx(sigma_brute_force(m, l)).epsilon(1e-12));
            CHECK(all[m] == Approx(sigma_brute_force(m, l)).epsilon(1e-12));
        }
    }
}

TEST_CASE("sigma_reduced") {
    // indices are 0-based
    const Spectrum l{1, 2, 3};
    CHECK(sigma_reduced(1, l, {1}) == Approx(4.0));
    CHECK(sigma_reduced(2, l, {0}) == Approx(6.0));
    CHECK(sigma_reduced(1, l, {0}) == Approx(5.0));
    CHECK(sigma_reduced(2, l, {0}) + l[0] * sigma_reduced(1, l, {0}) == Approx(sigma(2, l)));
    CHECK(sigma_reduced(1, l, {0, 2}) == Approx(2.0));
    CHECK(sigma_reduced(2, l, {}) == Approx(11.0));
    CHECK_THROWS_AS(sigma_reduced(1, l, {1, 1}), ArgumentError);
    CHECK_THROWS_AS(sigma_reduced(1, l, {3}), ArgumentError);
    CHECK_THROWS_AS(sigma_reduced(1, l, {0, 1, 2}), ArgumentError);
}

TEST_CASE("cone membership") {
    CHECK(in_cone(3, Spectrum{1, 1, 1}).member);
    const auto c = in_cone(2, Spectrum{3, 1, -1});
    CHECK_FALSE(c.member);
    REQUIRE(c.sigmas.size() == 2);
    CHECK(c.sigmas[1] == Approx(-1.0));
    CHECK_FALSE(in_cone(2, Spectrum{2, 2, -1}).member);
    CHECK(cone_margin(2, std::vector<double>{1, 1}) == Approx(1.0));
    CHECK_THROWS_AS(in_cone(4, Spectrum{1, 1, 1}), ArgumentError);
}

TEST_CASE("sample_cone") {
    CHECK(sample_cone(2, 3, 1, 0).empty());
    const auto a = sample_cone(2, 4, 9, 2);
    const auto b = sample_cone(2, 4, 9, 2);
    REQUIRE(a.size() == 2);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(in_cone(2, a[i]).member);
        CHECK(std::equal(a[i].values().begin(), a[i].values().end(), b[i].values().begin()));
    }
    for (const auto& l : sample_cone(3, 5, 2, 200)) CHECK(in_cone(3, l).member);
}

TEST_CASE("binomial") {
    CHECK(binomial(4, 2) == 6.0);
    CHECK(binomial(5, 0) == 1.0);
    CHECK(binomial(3, -1) == 0.0);
    CHECK(binomial(3, 4) == 0.0);
}
