#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cyltree/statistics.hpp"

using namespace cyltree;

TEST_CASE("bound constants") {
    const BoundConstants c3 = bound_constants(3);
    CHECK(c3.theta == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(c3.C0 == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(c3.delta == doctest::Approx(std::pow(0.75, 1.0 / 25.0)).epsilon(1e-12));

    const BoundConstants c4 = bound_constants(4);
    CHECK(c4.theta == doctest::Approx(std::sqrt(15.0) / 4.0).epsilon(1e-12));
    CHECK(c4.C0 == doctest::Approx(16.0 / 15.0).epsilon(1e-12));
    CHECK(c4.delta == doctest::Approx(std::pow(c4.theta, 1.0 / 33.0)).epsilon(1e-12));

    // theta never decreases in n (it steps up at even n, since only
    // floor(n/2) enters the formula).
    double prev = 0;
    for (std::uint32_t n = 3; n <= 20; ++n) {
        const double theta = bound_constants(n).theta;
        CHECK(theta >= prev);
        CHECK(theta < 1.0);
        prev = theta;
    }
    CHECK(bound_constants(20).theta > bound_constants(3).theta);

    CHECK_THROWS_AS(bound_constants(2), std::invalid_argument);
}

TEST_CASE("histogram merge is exact and order-independent") {
    Histogram a, b, c;
    a.add(1, 10);
    a.add(2, 5);
    a.replicas = 1;
    b.add(2, 7);
    b.add(9, 1);
    b.replicas = 1;
    c.add(1, 3);
    c.replicas = 1;

    Histogram left = a;
    left.merge(b);
    left.merge(c);
    Histogram right = c;
    right.merge(b);
    right.merge(a);
    CHECK(left.counts == right.counts);
    CHECK(left.total == right.total);
    CHECK(left.replicas == 3);
    CHECK(left.total == 26);
    CHECK(left.max_value() == 9);
}

TEST_CASE("histogram csv round trip") {
    Histogram h;
    h.add(0, 12);
    h.add(3, 4);
    h.add(17, 1);
    std::stringstream ss;
    h.write_csv(ss);
    const Histogram back = Histogram::read_csv(ss);
    CHECK(back.counts == h.counts);
    CHECK(back.total == h.total);
}

TEST_CASE("exponential fit recovers a synthetic rate") {
    // counts = round(1000 e^{-0.5 l}), l = 0..10; qualifying bins are 1..9.
    Histogram h;
    for (int l = 0; l <= 10; ++l)
        h.add(l, static_cast<std::uint64_t>(
                     std::llround(1000.0 * std::exp(-0.5 * l))));
    const ExpFit fit = fit_exponential(h);
    CHECK(fit.lambda == doctest::Approx(0.5).epsilon(0.02));
    CHECK(std::fabs(fit.lambda - 0.5) < 0.01);
    CHECK(fit.r_squared > 0.999);
    CHECK(fit.fit_min == 1);
    CHECK(fit.fit_max == 9);
    CHECK(fit.bins_used == 9);
}

TEST_CASE("exponential fit is exact on unrounded data") {
    Histogram h;
    const double lambda = 1.37, A = 80000;
    for (int l = 1; l <= 8; ++l)
        h.add(l, static_cast<std::uint64_t>(A * std::exp(-lambda * l)));
    const ExpFit fit = fit_exponential(h);
    CHECK(fit.lambda == doctest::Approx(lambda).epsilon(0.02));
}

TEST_CASE("fit errors") {
    Histogram h;
    h.add(1, 100);
    h.add(2, 50);
    CHECK_THROWS_AS(fit_exponential(h), std::runtime_error);  // two bins only

    Histogram rising;
    for (int l = 1; l <= 6; ++l) rising.add(l, 100 * l);
    CHECK_THROWS_AS(fit_exponential(rising), std::runtime_error);

    Histogram sparse;
    sparse.add(1, 4);
    sparse.add(2, 3);
    sparse.add(3, 2);
    CHECK_THROWS_AS(fit_exponential(sparse), std::runtime_error);  // min_count
    CHECK_NOTHROW(fit_exponential(sparse, 1));
}

TEST_CASE("fit range restriction") {
    Histogram h;
    h.add(0, 100000);  // spike outside the decay
    for (int l = 1; l <= 8; ++l)
        h.add(l, static_cast<std::uint64_t>(5000.0 * std::exp(-0.8 * l)));
    const ExpFit fit =
        fit_exponential(h, 10, std::pair<std::int64_t, std::int64_t>{2, 6});
    CHECK(fit.fit_min == 2);
    CHECK(fit.fit_max == 6);
    CHECK(fit.lambda == doctest::Approx(0.8).epsilon(0.02));
}

TEST_CASE("empirical tail from per-replica maxima") {
    Histogram maxima;
    maxima.add(2, 3);
    maxima.add(5, 1);
    maxima.replicas = 4;

    const TailCurve tail = empirical_tail(maxima);
    REQUIRE(tail.p.size() == 7);  // l = 0..6
    CHECK(tail.p[0] == 1.0);
    CHECK(tail.p[1] == 1.0);
    CHECK(tail.p[2] == 1.0);
    CHECK(tail.p[3] == 0.25);
    CHECK(tail.p[5] == 0.25);
    CHECK(tail.p[6] == 0.0);
    for (std::size_t l = 0; l + 1 < tail.p.size(); ++l)
        CHECK(tail.p[l] >= tail.p[l + 1]);

    const TailCurve strict = empirical_tail(maxima, /*strict=*/true);
    CHECK(strict.p[1] == 1.0);
    CHECK(strict.p[2] == 0.25);  // P(X > 2)
    CHECK(strict.p[5] == 0.0);

    Histogram bad;
    bad.add(1, 2);
    bad.replicas = 5;  // total != replicas
    CHECK_THROWS_AS(empirical_tail(bad), std::invalid_argument);
}

TEST_CASE("bound check flags slow decay and passes theorem-shaped tails") {
    const BoundConstants c = bound_constants(3);

    SUBCASE("a tail decaying slower than theta is eventually flagged") {
        // p[l] = 0.9^l with huge replica count (tiny standard errors) vs
        // bound 2.667 * 0.75^l: the ratio crosses 1 at l = 6.
        TailCurve tail;
        tail.replicas = 1000000000;
        for (int l = 0; l <= 12; ++l) tail.p.push_back(std::pow(0.9, l));
        const BoundReport report = bound_check(tail, c, 1, BoundKind::branch);
        CHECK(!report.ok);
        CHECK(report.first_violation == 6);
    }

    SUBCASE("a fast tail passes") {
        TailCurve tail;
        tail.replicas = 100;
        for (int l = 0; l <= 12; ++l) tail.p.push_back(std::pow(0.3, l));
        const BoundReport report = bound_check(tail, c, 50, BoundKind::branch);
        CHECK(report.ok);
        CHECK(report.first_violation == -1);
        CHECK(report.prefactor == doctest::Approx((4.0 / 3.0) * 50 * 2));
    }

    SUBCASE("slash kind uses delta and the geometric-series prefactor") {
        TailCurve tail;
        tail.replicas = 1000;
        tail.strict = true;
        for (int l = 0; l <= 30; ++l) tail.p.push_back(std::pow(0.25, l));
        const BoundReport report = bound_check(tail, c, 200, BoundKind::slash);
        CHECK(report.ok);
        CHECK(report.prefactor == doctest::Approx(c.C0 / (1.0 - c.theta)));
        CHECK(report.rate == doctest::Approx(c.delta));
    }
}
