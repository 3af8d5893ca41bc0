#include <doctest.h>

#include <rollup/games.hpp>
#include <rollup/montecarlo.hpp>

#include <cmath>
#include <numeric>

using namespace rollup;

namespace {

ProtocolParams reference_params() {
    ProtocolParams p;
    p.f = 1.0;
    p.w = 0.5;
    p.s_A = 1.0;
    p.s_V = 1.0;
    p.x = 1.0 / 24.0;
    p.z = 24.0;
    return p;
}

MixPoint reference_mix() { return {0.2, 0.8, 67.0 / 96.0}; }

}  // namespace

TEST_CASE("the generator reproduces its published output sequence") {
    SplitMix64 rng{0};
    CHECK(rng.next() == 0xe220a8397b1dcdafull);
    CHECK(rng.next() == 0x6e789e6aa1b965f4ull);
    CHECK(rng.next() == 0x06c45d188009454full);

    SplitMix64 rng42{42};
    CHECK(rng42.next() == 0xbdd732262feb6e95ull);
    CHECK(rng42.next() == 0x28efe333b266f103ull);
    CHECK(rng42.next() == 0x47526757130f9f52ull);
}

TEST_CASE("unit draws stay inside the half-open interval") {
    SplitMix64 rng{123};
    for (int i = 0; i < 10000; ++i) {
        double u = rng.next_unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("per-round streams decorrelate neighbouring rounds and seeds") {
    auto a = round_stream(7, 0);
    auto b = round_stream(7, 1);
    auto c = round_stream(8, 0);
    std::uint64_t a0 = a.next(), b0 = b.next(), c0 = c.next();
    CHECK(a0 != b0);
    CHECK(a0 != c0);
    CHECK(b0 != c0);

    auto again = round_stream(7, 0);
    CHECK(again.next() == a0);
}

TEST_CASE("leaf counts merge exactly across round batches") {
    ProtocolParams p = reference_params();
    GameTree g2 = build_game2(p);
    StrategyProfile prof = game2_profile({0.3, 0.6, 0.5});

    auto whole = sample_leaf_counts(g2, prof, 99, 0, 1000);
    auto first = sample_leaf_counts(g2, prof, 99, 0, 400);
    auto rest = sample_leaf_counts(g2, prof, 99, 400, 600);
    REQUIRE(whole.size() == first.size());
    for (std::size_t i = 0; i < whole.size(); ++i)
        CHECK(whole[i] == first[i] + rest[i]);

    std::uint64_t total = std::accumulate(whole.begin(), whole.end(), 0ull);
    CHECK(total == 1000);
}

TEST_CASE("simulation reports are bit-identical across reruns") {
    ProtocolParams p = reference_params();
    SimulationReport one = simulate_game2(p, reference_mix(), 20000, 7);
    SimulationReport two = simulate_game2(p, reference_mix(), 20000, 7);
    CHECK(one == two);
    CHECK(report_to_json(one) == report_to_json(two));

    SimulationReport other_seed = simulate_game2(p, reference_mix(), 20000, 8);
    CHECK(one.leaf_counts != other_seed.leaf_counts);
}

TEST_CASE("simulation reports round-trip through JSON") {
    ProtocolParams p = reference_params();
    SimulationReport report = simulate_game2(p, {0.5, 0.25, 0.75}, 5000, 3);
    SimulationReport back = report_from_json(report_to_json(report));
    CHECK(back == report);
}

TEST_CASE("degenerate mixes hit a single leaf with zero spread") {
    ProtocolParams p = reference_params();

    SimulationReport honest = simulate_game2(p, {1.0, 0.0, 1.0}, 10, 42);
    CHECK(honest.mean == std::vector<double>{0.0, 0.0});
    CHECK(honest.std_error == std::vector<double>{0.0, 0.0});
    CHECK(honest.leaf_counts[1] == 10);
    CHECK(honest.burned_total == 0.0);

    SimulationReport caught = simulate_game2(p, {1.0, 1.0, 0.0}, 10, 42);
    CHECK(caught.mean == std::vector<double>{-1.0, 0.5});
    CHECK(caught.std_error == std::vector<double>{0.0, 0.0});
    CHECK(caught.leaf_counts[2] == 10);
    CHECK(caught.burned_total == 10 * 0.5 * p.s_A);
}

TEST_CASE("zero-probability leaves are never sampled") {
    ProtocolParams p = reference_params();
    SimulationReport report = simulate_game2(p, reference_mix(), 50000, 11);
    REQUIRE(report.leaf_counts.size() == 8);
    CHECK(report.leaf_counts[4] == 0);  // searching then challenging honesty
    CHECK(report.leaf_counts[7] == 0);  // searching then ignoring fraud
    std::uint64_t total =
        std::accumulate(report.leaf_counts.begin(), report.leaf_counts.end(), 0ull);
    CHECK(total == 50000);
}

TEST_CASE("sampled means land within four standard errors of the closed forms") {
    ProtocolParams p = reference_params();
    MixPoint m = reference_mix();
    SimulationReport report = simulate_game2(p, m, 200000, 11);
    std::vector<double> analytic = {aggregator_utility(p, m), validator_utility(p, m)};
    ConvergenceCheck check = convergence_check(report, analytic);
    CHECK(check.all_pass);
    CHECK_FALSE(check.exact_mismatch);

    SplitMix64 rng{5150};
    for (int trial = 0; trial < 20; ++trial) {
        MixPoint mix{rng.next_unit(), rng.next_unit(), rng.next_unit()};
        SimulationReport r = simulate_game2(p, mix, 50000, 1000 + trial);
        ConvergenceCheck c = convergence_check(
            r, {aggregator_utility(p, mix), validator_utility(p, mix)});
        CAPTURE(trial);
        CHECK(c.all_pass);
    }
}

TEST_CASE("the burn ledger tracks slashed stakes") {
    ProtocolParams p = reference_params();
    SimulationReport report = simulate_game2(p, reference_mix(), 100000, 13);
    double expected =
        0.5 * p.s_A * static_cast<double>(report.leaf_counts[2] + report.leaf_counts[6]);
    CHECK(report.burned_total == expected);
}

TEST_CASE("the random-check simulation handles interior and edge probabilities") {
    ProtocolParams p = reference_params();
    p.p = 0.5;

    SimulationReport mid = simulate_game3(p, 0.0, 100000, 21);
    REQUIRE(mid.players == std::vector<std::string>{"A", "C"});
    ConvergenceCheck c = convergence_check(mid, {11.5, 0.0});
    CHECK(c.all_pass);
    CHECK(mid.leaf_counts[0] == 0);
    CHECK(mid.leaf_counts[1] == 0);

    ProtocolParams certain = reference_params();
    certain.p = 1.0;
    SimulationReport caught = simulate_game3(certain, 0.0, 1000, 21);
    CHECK(caught.mean[0] == -1.0);
    CHECK(caught.std_error[0] == 0.0);
    CHECK(caught.burned_total == 1000.0 * certain.s_A);

    ProtocolParams never = reference_params();
    never.p = 0.0;
    SimulationReport stole = simulate_game3(never, 0.0, 1000, 21);
    CHECK(stole.mean[0] == 24.0);
    CHECK(stole.burned_total == 0.0);

    SimulationReport honest = simulate_game3(p, 1.0, 1000, 21);
    CHECK(honest.mean == std::vector<double>{0.0, 0.0});
}

TEST_CASE("the random-check simulation validates its inputs") {
    ProtocolParams p = reference_params();
    CHECK_THROWS_AS(simulate_game3(p, 0.5, 100, 1), ValidationError);  // no p set
    p.p = 0.5;
    CHECK_THROWS_AS(simulate_game3(p, -0.1, 100, 1), ValidationError);
    CHECK_THROWS_AS(simulate_game3(p, 1.1, 100, 1), ValidationError);
    CHECK_THROWS_AS(simulate_game3(p, 0.5, 0, 1), ValidationError);
}

TEST_CASE("convergence checks insist on enough rounds") {
    ProtocolParams p = reference_params();
    SimulationReport tiny = simulate_game2(p, reference_mix(), 50, 1);
    CHECK_THROWS_AS(convergence_check(tiny, {0.0, 0.0}), ValidationError);
}

TEST_CASE("convergence checks flag exact mismatches at zero spread") {
    ProtocolParams p = reference_params();
    SimulationReport frozen = simulate_game2(p, {1.0, 0.0, 1.0}, 200, 1);
    ConvergenceCheck ok = convergence_check(frozen, {0.0, 0.0});
    CHECK(ok.all_pass);

    ConvergenceCheck bad = convergence_check(frozen, {0.1, 0.0});
    CHECK_FALSE(bad.all_pass);
    CHECK(bad.exact_mismatch);
    CHECK_FALSE(bad.pass[0]);
    CHECK(bad.pass[1]);

    CHECK_THROWS_AS(convergence_check(frozen, {0.0}), ValidationError);
}

TEST_CASE("reports expose the sampled tree's leaf labels") {
    ProtocolParams p = reference_params();
    SimulationReport report = simulate_game2(p, reference_mix(), 200, 5);
    REQUIRE(report.leaf_labels.size() == 8);
    CHECK(report.leaf_labels[0] == "NoSearch/Honest/Challenge");
    CHECK(report.leaf_labels[7] == "Search/Dishonest/No");
    CHECK(report.game == "game2");
    CHECK(report.generator == "splitmix64-counter");
    CHECK(report.seed == 5);
    CHECK(report.rounds == 200);
}
