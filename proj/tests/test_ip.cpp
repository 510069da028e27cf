#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "noregret/ip.hpp"
#include "noregret/rng.hpp"
#include "support/oracles.hpp"
#include "support/trace_family.hpp"

using namespace noregret;

namespace {

std::optional<Index> oracle_witness(const SequenceTrace& trace, const IpQuery& query) {
    return oracles::brute_force_witness(
        trace, [&](double s) { return query.target.distance(s); }, query.epsilon,
        query.duration, query.start);
}

SequenceTrace reciprocal_trace(Index length) {
    SequenceTrace trace(length);
    for (Index t = 1; t <= length; ++t) {
        trace[t - 1] = 1.0 / static_cast<double>(t);
    }
    return trace;
}

}  // namespace

TEST_CASE("example1 sequence matches its defining cases") {
    const SequenceTrace q = example1_sequence(16);
    CHECK(q[0] == 1.0);                         // t = 1 = 2^0
    CHECK(q[2] == doctest::Approx(1.0 / 9.0));  // t = 3
    CHECK(q[3] == 1.0);                         // t = 4
    CHECK(q[4] == doctest::Approx(1.0 / 25.0));
    CHECK(q[7] == 1.0);
    CHECK(q[15] == 1.0);
}

TEST_CASE("witness on a constant-zero trace is the earliest admissible start") {
    const SequenceTrace zeros = SequenceTrace::Zero(100);
    for (Index start : {Index(1), Index(7), Index(50)}) {
        const IpQuery query{0.05, 10, start, IpTarget::point(0.0)};
        CHECK(ip_witness(zeros, query) == start);
    }
}

TEST_CASE("witness exists on the excursion sequence despite recurring spikes") {
    const SequenceTrace q = example1_sequence(100000);
    const IpQuery query{0.1, 10, 100, IpTarget::point(0.0)};
    const auto witness = ip_witness(q, query);
    REQUIRE(witness.has_value());
    CHECK(*witness == 100);  // the window 101..110 holds no power of two
    CHECK(witness == oracle_witness(q, query));
}

TEST_CASE("witness absence is reported, not thrown, when windows exist") {
    const SequenceTrace ones = SequenceTrace::Ones(50);
    CHECK_FALSE(ip_witness(ones, IpQuery{0.5, 5, 1, IpTarget::point(0.0)}).has_value());
}

TEST_CASE("queries with no admissible window are infeasible errors") {
    const SequenceTrace zeros = SequenceTrace::Zero(10);
    CHECK_THROWS_AS(ip_witness(zeros, IpQuery{0.5, 8, 5, IpTarget::point(0.0)}),
                    std::invalid_argument);
}

TEST_CASE("witness minimality against the brute-force rescan") {
    CounterRng rng(0x1D);
    for (int k = 0; k < 50; ++k) {
        const Index length = 200 + static_cast<Index>(rng.next_u64() % 9800);
        SequenceTrace trace(length);
        for (Index i = 0; i < length; ++i) {
            // mostly-small values with occasional unit spikes
            trace[i] = rng.next_double() < 0.05 ? rng.uniform(0.5, 1.0) : rng.uniform(0.0, 0.05);
        }
        const Index duration = 1 + static_cast<Index>(rng.next_u64() % 20);
        const Index start = 1 + static_cast<Index>(rng.next_u64() % (length / 2));
        const IpQuery query{0.1, duration, start, IpTarget::point(0.0)};
        CHECK(ip_witness(trace, query) == oracle_witness(trace, query));
    }
}

TEST_CASE("profile of a monotone decaying trace is consistent") {
    const IpReport report =
        ip_profile(reciprocal_trace(10000), IpTarget::point(0.0), {{0.1, 10}, {0.01, 100}});
    CHECK(report.consistent);
    for (const auto& entry : report.entries) {
        CHECK_FALSE(entry.infeasible);
        CHECK(entry.witness.has_value());
    }
}

TEST_CASE("profile separates ip-consistency from classical convergence") {
    const SequenceTrace q = example1_sequence(10000);
    const IpReport report = ip_profile(q, IpTarget::point(0.0), {{0.1, 10}});
    CHECK(report.consistent);
    CHECK_FALSE(classical_tail_check(q, 0.0, 0.1).index.has_value());
}

TEST_CASE("infeasible ladder rungs do not break consistency") {
    // at T = 30 the start ladder is {1, 10, 15}; N = 15 leaves no window of
    // length 20, which counts as infeasible rather than as a failure
    const SequenceTrace zeros = SequenceTrace::Zero(30);
    const IpReport report = ip_profile(zeros, IpTarget::point(0.0), {{0.5, 20}});
    CHECK(report.consistent);
    bool saw_infeasible = false;
    for (const auto& entry : report.entries) {
        saw_infeasible = saw_infeasible || entry.infeasible;
        if (entry.infeasible) {
            CHECK_FALSE(entry.witness.has_value());
        }
    }
    CHECK(saw_infeasible);
}

TEST_CASE("profile flags the alternating trace as inconsistent") {
    SequenceTrace alternating(1000);
    for (Index t = 0; t < alternating.size(); ++t) {
        alternating[t] = (t % 2 == 0) ? 0.0 : 1.0;
    }
    const IpReport report = ip_profile(alternating, IpTarget::point(0.0), {{0.4, 2}});
    CHECK_FALSE(report.consistent);
}

TEST_CASE("classical tail check finds the tail of 1/t") {
    const TailCheck check = classical_tail_check(reciprocal_trace(10000), 0.0, 0.01);
    REQUIRE(check.index.has_value());
    CHECK(*check.index == 100);
}

TEST_CASE("classical tail check refuses the growing-gap excursion tail") {
    // Horizon just below the next expected excursion at 2^14: the quiet tail
    // after the spike at 2^13 is not yet evidence of convergence.
    const SequenceTrace q = example1_sequence((1 << 14) - 1);
    const TailCheck check = classical_tail_check(q, 0.0, 0.5);
    CHECK_FALSE(check.index.has_value());
    REQUIRE(check.last_exceedance.has_value());
    CHECK(*check.last_exceedance == (1 << 13));
}

TEST_CASE("classical tail check on a constant trace starts at 1") {
    const TailCheck check = classical_tail_check(SequenceTrace::Zero(10), 0.0, 0.25);
    REQUIRE(check.index.has_value());
    CHECK(*check.index == 1);
}

TEST_CASE("cesaro averages on short traces") {
    SequenceTrace ones = SequenceTrace::Ones(3);
    CHECK(cesaro_averages(ones) == ones);
    SequenceTrace ramp(3);
    ramp << 0.0, 2.0, 4.0;
    SequenceTrace expected(3);
    expected << 0.0, 1.0, 2.0;
    CHECK(cesaro_averages(ramp) == expected);
}

TEST_CASE("cesaro mean of the excursion sequence vanishes") {
    const SequenceTrace q = example1_sequence(10000);
    const SequenceTrace averages = cesaro_averages(q);
    CHECK(averages[9999] < 0.01);
    // direct-summation oracle
    double plain = 0.0;
    for (Index t = 0; t < q.size(); ++t) {
        plain += q[t];
    }
    CHECK(averages[9999] == doctest::Approx(plain / 10000.0).epsilon(1e-12));
}

TEST_CASE("distance to the interval target") {
    const IpTarget target = IpTarget::interval(0.2);
    CHECK(target.distance(0.0) == 0.0);
    CHECK(target.distance(0.2) == 0.0);
    CHECK(target.distance(0.15) == 0.0);
    CHECK(target.distance(0.5) == doctest::Approx(0.3));
    CHECK(target.distance(-0.1) == doctest::Approx(0.1));
    CounterRng rng(0xD157);
    for (int k = 0; k < 200; ++k) {
        const double s = rng.uniform(0.0, 1.0);
        const double expected = (s <= 0.2) ? 0.0 : s - 0.2;
        CHECK(target.distance(s) == doctest::Approx(expected).epsilon(1e-15));
    }
}

TEST_CASE("a certified classical tail implies witnesses everywhere past it") {
    CounterRng rng(0xC1A5);
    for (int k = 0; k < 20; ++k) {
        const Index length = 2000;
        SequenceTrace trace(length);
        for (Index t = 1; t <= length; ++t) {
            trace[t - 1] = rng.uniform(0.0, 2.0) / static_cast<double>(t);
        }
        const double epsilon = 0.05;
        const TailCheck tail = classical_tail_check(trace, 0.0, epsilon);
        if (!tail.index.has_value()) {
            continue;
        }
        for (Index duration : {Index(1), Index(10), Index(100)}) {
            for (Index start : {*tail.index, *tail.index + 7, Index(length / 2)}) {
                if (start + duration > length || start < *tail.index) {
                    continue;
                }
                const IpQuery query{epsilon, duration, start, IpTarget::point(0.0)};
                CHECK(ip_witness(trace, query).has_value());
            }
        }
    }
}

TEST_CASE("vanishing cesaro means yield witnesses on sparse-spike traces") {
    CounterRng rng(0x5B1CE);
    const double epsilon = 0.1;
    for (int k = 0; k < 10; ++k) {
        const SequenceTrace trace = trace_family::sparse_spike_trace(rng, 10000);
        const double mean = cesaro_averages(trace)[9999];
        REQUIRE(mean <= epsilon * 0.01);  // hypothesis: S_T <= eps * delta
        for (Index duration : {Index(10), Index(100)}) {
            for (Index start : {Index(1), Index(10), Index(100), Index(1000)}) {
                const IpQuery query{epsilon, duration, start, IpTarget::point(0.0)};
                CHECK(ip_witness(trace, query).has_value());
            }
        }
    }
}

TEST_CASE("non-finite traces are rejected") {
    SequenceTrace bad(3);
    bad << 0.0, std::nan(""), 1.0;
    CHECK_THROWS_AS(ip_witness(bad, IpQuery{0.1, 1, 1, IpTarget::point(0.0)}),
                    std::invalid_argument);
    CHECK_THROWS_AS(cesaro_averages(bad), std::invalid_argument);
}
