#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "srw/rate_function.hpp"

using namespace srw;

namespace {

// independent minimizer for the oracle values: coarse scan + golden section
double minimize_w(const RateFunction& rf, double lo, double hi) {
    double best = 1e300, arg = lo;
    for (int i = 0; i <= 40000; ++i) {
        const double u = lo + (hi - lo) * i / 40000.0;
        if (rf.w(u) < best) { best = rf.w(u); arg = u; }
    }
    double a = arg - 1e-3, b = arg + 1e-3;
    for (int it = 0; it < 200; ++it) {
        const double m1 = a + 0.382 * (b - a), m2 = a + 0.618 * (b - a);
        if (rf.w(m1) < rf.w(m2)) b = m2; else a = m1;
    }
    return rf.w(0.5 * (a + b));
}

} // namespace

TEST_CASE("constant rate walk evaluates to gamma") {
    const auto rf = RateFunction::simple_walk(1.0);
    CHECK(evaluate_rate(rf, 5.0) == 1.0);
    CHECK(evaluate_rate(rf, -17.25) == 1.0);
}

TEST_CASE("gaussian-mode rate evaluates by direct arithmetic") {
    const auto rf = RateFunction::gaussian_mode(1.0, 0.25);
    CHECK_THAT(evaluate_rate(rf, 1.0), Catch::Matchers::WithinAbs(2.25, 1e-15));
}

TEST_CASE("global minimum of gaussian-mode w is 0.25 at u=-1") {
    const auto rf = RateFunction::gaussian_mode(1.0, 0.25);
    // oracle: minimize gamma + 0.25 u^4 + u independently; stationarity at u^3 = -1
    const double w_min_oracle = minimize_w(rf, -5.0, 5.0);
    CHECK_THAT(w_min_oracle, Catch::Matchers::WithinAbs(0.25, 1e-10));
    const auto rep = check_conditions(rf);
    CHECK_THAT(rep.w_min, Catch::Matchers::WithinAbs(w_min_oracle, 1e-9));
    CHECK_THAT(rep.w_argmin, Catch::Matchers::WithinAbs(-1.0, 1e-6));
    CHECK(rep.w_min > 0.0);
}

TEST_CASE("gaussian preset passes all four conditions") {
    auto rf = RateFunction::gaussian_mode(1.0, 0.25);
    rf.c = 0.9;
    const auto rep = check_conditions(rf);
    CHECK(rep.ellipticity);
    CHECK(rep.convexity);
    CHECK(rep.gaussian_domination);
    CHECK(rep.r_entire);
    CHECK(rep.all_pass());
    CHECK_THAT(rep.entire_sum, Catch::Matchers::WithinAbs(std::sqrt(2.0 / 0.9), 1e-12));
    CHECK_THAT(rep.entire_sum, Catch::Matchers::WithinRel(1.4907, 1e-4));
}

TEST_CASE("sinh-like entire r: convexity passes, entire sum diverges") {
    RateFunction rf;
    rf.gamma = 1.0;
    rf.s_coeffs = {0.0, 0.0, 0.25};
    rf.r_mode = RateFunction::RMode::entire;
    // unit odd derivatives at every order, as for sinh
    rf.r_derivs = {1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
    rf.r_tail_ratio = 1.0;
    rf.c = 0.9;
    const auto rep = check_conditions(rf);
    CHECK(rep.convexity); // inf r' = cosh-partial-sum minimum = 1 > 0.9
    CHECK(rep.entire_sum_divergent);
    CHECK_FALSE(rep.r_entire);
    CHECK(std::isinf(rep.entire_sum));
}

TEST_CASE("pure drift r=u without s fails ellipticity") {
    RateFunction rf;
    rf.gamma = 1.0;
    rf.s_coeffs = {};
    rf.r_derivs = {1.0};
    const auto rep = check_conditions(rf);
    CHECK_FALSE(rep.ellipticity);
    CHECK(rf.w(-2.0) == -1.0);
}

TEST_CASE("even/odd decomposition identities on a corpus") {
    const std::vector<RateFunction> corpus = {
        RateFunction::simple_walk(2.0),
        RateFunction::gaussian_mode(1.0, 0.25),
        RateFunction::gaussian_mode(1.0, 0.1, 0.1),
        RateFunction::gaussian_mode(10.0, 0.05),
    };
    for (const auto& rf : corpus) {
        for (double u : {0.0, 0.3, -0.7, 1.9, -4.4, 11.0}) {
            const double sum = evaluate_rate(rf, u) + evaluate_rate(rf, -u) - 2.0 * rf.gamma;
            const double diff = evaluate_rate(rf, u) - evaluate_rate(rf, -u);
            const double scale = std::max(1.0, std::fabs(rf.w(u)) + std::fabs(rf.w(-u)));
            CHECK(std::fabs(sum - 2.0 * rf.s(u)) <= 8e-16 * scale);
            CHECK(std::fabs(diff - 2.0 * rf.r(u)) <= 8e-16 * scale);
        }
    }
}

TEST_CASE("domination fit is monotone in s4") {
    auto base = RateFunction::gaussian_mode(1.0, 0.25);
    double prev = 0.0;
    for (double s4 : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        auto rf = base;
        rf.s_coeffs[2] = s4;
        const auto rep = check_conditions(rf);
        CHECK(rep.c_dom_min >= prev);
        prev = rep.c_dom_min;
    }
    // failing at some C stays failing when s4 grows
    auto rf_small = base;
    rf_small.c_dom = 0.5; // below the fitted minimum ~0.846
    CHECK_FALSE(check_conditions(rf_small).gaussian_domination);
    auto rf_big = rf_small;
    rf_big.s_coeffs[2] = 1.0;
    CHECK_FALSE(check_conditions(rf_big).gaussian_domination);
}

TEST_CASE("fitted minimal domination constant for the gaussian preset") {
    auto rf = RateFunction::gaussian_mode(1.0, 0.25); // c=0.9, eps=0.1
    const auto rep = check_conditions(rf);
    // oracle: sup of 0.25 u^4 exp(-0.4 u^2) at u^2 = 5
    const double oracle = 0.25 * 25.0 * std::exp(-2.0);
    CHECK_THAT(rep.c_dom_min, Catch::Matchers::WithinRel(oracle, 1e-6));
}

TEST_CASE("antiderivatives differentiate back to the integrands") {
    const auto rf = RateFunction::gaussian_mode(1.3, 0.2, 0.05, 0.01);
    const double h = 1e-6;
    for (double u : {-2.0, -0.5, 0.0, 0.9, 3.1}) {
        const double dw = (rf.w_antiderivative(u + h) - rf.w_antiderivative(u - h)) / (2 * h);
        CHECK_THAT(dw, Catch::Matchers::WithinRel(rf.w(u), 1e-7));
    }
    CHECK(rf.r_antiderivative(0.0) == 0.0);
    CHECK(rf.r_antiderivative(1.5) == rf.r_antiderivative(-1.5)); // R even
}

TEST_CASE("field validation rejects malformed parameters") {
    RateFunction rf = RateFunction::gaussian_mode(1.0, 0.25);
    rf.eps = 1.5; // >= c
    CHECK_THROWS_AS(check_conditions(rf), std::invalid_argument);
    rf = RateFunction::gaussian_mode(1.0, 0.25);
    rf.gamma = 0.0;
    CHECK_THROWS_AS(check_conditions(rf), std::invalid_argument);
    rf = RateFunction::gaussian_mode(1.0, 0.25);
    rf.r_derivs = {1.0, 0.5}; // linear mode with two coefficients
    CHECK_THROWS_AS(check_conditions(rf), std::invalid_argument);
}

TEST_CASE("rate function json round trip") {
    auto rf = RateFunction::gaussian_mode(2.0, 0.1, 0.2, 0.3);
    rf.r_mode = RateFunction::RMode::entire;
    rf.r_derivs = {1.0, 0.25};
    rf.r_tail_ratio = 0.1;
    nlohmann::json j = rf;
    const RateFunction back = j.get<RateFunction>();
    CHECK(nlohmann::json(back) == j);
}
