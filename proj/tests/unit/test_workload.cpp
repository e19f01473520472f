#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "pcnsim/workload.hpp"

using namespace pcnsim;

namespace {

WorkloadConfig small(double horizon = 10.0) {
    WorkloadConfig w;
    w.horizon = horizon;
    return w;
}

}  // namespace

TEST_CASE("deadlines follow the table") {
    auto w = small();
    auto txs = generate_workload(w, 50, 1);
    REQUIRE(!txs.empty());
    const auto table = w.effective_deadlines();
    std::size_t with = 0;
    for (const auto& t : txs) {
        if (!t.has_deadline) continue;
        ++with;
        CHECK(t.deadline == table.at(t.amount));
    }
    CHECK(with == txs.size());
    CHECK(table.at(150) == 1.1);

    w.deadline_scale = 0.5;
    CHECK(w.effective_deadlines().at(150) == doctest::Approx(0.55));
    for (const auto& t : generate_workload(w, 50, 1))
        CHECK(t.deadline == w.effective_deadlines().at(t.amount));
}

TEST_CASE("zero deadline fraction") {
    auto w = small();
    w.deadline_fraction = 0;
    for (auto mode : {DeadlineMode::Stratified, DeadlineMode::Coin}) {
        w.deadline_mode = mode;
        for (const auto& t : generate_workload(w, 20, 3)) CHECK_FALSE(t.has_deadline);
    }
}

TEST_CASE("arrival process") {
    // One sender, ~10^4 inter-arrival gaps.
    WorkloadConfig w;
    w.horizon = 340;
    w.receivers_per_host = 1;
    auto txs = generate_workload(w, 2, 5);
    std::vector<double> gaps;
    double last = 0;
    for (const auto& t : txs)
        if (t.sender == 0) {
            gaps.push_back(t.created_at - last);
            last = t.created_at;
        }
    REQUIRE(gaps.size() > 9000);
    double mean = 0;
    for (double g : gaps) mean += g;
    mean /= gaps.size();
    CHECK(std::abs(mean - 1.0 / 30) < 0.05 / 30);
}

TEST_CASE("stream is sorted, deterministic and well formed") {
    auto w = small(5);
    auto a = generate_workload(w, 30, 8);
    CHECK(a.size() > 0);
    CHECK(std::is_sorted(a.begin(), a.end(),
                         [](const auto& x, const auto& y) { return x.created_at < y.created_at; }));
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].id == i);
        CHECK(a[i].sender != a[i].receiver);
        CHECK(a[i].receiver < 30);
        CHECK(a[i].created_at < w.horizon);
    }
    CHECK(dump_workload(a) == dump_workload(generate_workload(w, 30, 8)));
    CHECK(dump_workload(a) != dump_workload(generate_workload(w, 30, 9)));

    std::map<NodeId, std::set<NodeId>> peers;
    for (const auto& t : a) peers[t.sender].insert(t.receiver);
    for (const auto& [s, rs] : peers) CHECK(rs.size() <= w.receivers_per_host);
}

TEST_CASE("size histogram matches the weights") {
    WorkloadConfig w;
    w.horizon = 70;
    auto txs = generate_workload(w, 50, 2);
    REQUIRE(txs.size() >= 100000);
    std::map<Amount, double> hist;
    for (const auto& t : txs) hist[t.amount] += 1;
    for (auto [size, weight] : w.size_weights)
        CHECK(std::abs(hist[size] / txs.size() - weight) < 0.01);
}

TEST_CASE("stratified deadline-free share") {
    std::vector<Transaction> txs;
    for (int i = 0; i < 100; ++i) {
        Transaction t;
        t.id = i;
        t.amount = 30;
        t.has_deadline = true;
        t.deadline = 0.8;
        txs.push_back(t);
    }
    Transaction lone;
    lone.id = 100;
    lone.amount = 1000;
    lone.has_deadline = true;
    lone.deadline = 2.0;
    txs.push_back(lone);

    auto a = txs, b = txs;
    stratify_deadlines(a, 0.2, 4);
    stratify_deadlines(b, 0.2, 4);
    int free30 = 0;
    for (int i = 0; i < 100; ++i) free30 += !a[i].has_deadline;
    CHECK(free30 == 20);
    CHECK(a[100].has_deadline);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].has_deadline == b[i].has_deadline);

    for (double frac : {0.6, 0.8, 1.0}) {
        auto w = small(5);
        w.deadline_fraction = frac;
        auto gen = generate_workload(w, 30, 6);
        std::map<Amount, std::pair<std::size_t, std::size_t>> per;  // (count, free)
        for (const auto& t : gen) {
            per[t.amount].first++;
            per[t.amount].second += !t.has_deadline;
        }
        for (auto [size, cf] : per)
            CHECK(cf.second == static_cast<std::size_t>((1 - frac) * cf.first + 1e-9));
    }
}

TEST_CASE("dump round trip") {
    auto w = small(3);
    w.deadline_fraction = 0.5;
    auto a = generate_workload(w, 12, 3);
    auto b = parse_workload(dump_workload(a));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].created_at == b[i].created_at);
        CHECK(a[i].sender == b[i].sender);
        CHECK(a[i].receiver == b[i].receiver);
        CHECK(a[i].amount == b[i].amount);
        CHECK(a[i].has_deadline == b[i].has_deadline);
        CHECK(a[i].deadline == b[i].deadline);
    }
    CHECK(dump_workload(b) == dump_workload(a));
    CHECK_THROWS_AS(parse_workload("{\"t\": 1.0}\n"), InputError);
}

TEST_CASE("workload validation") {
    WorkloadConfig w;
    CHECK_THROWS_AS(w.validate(5), InputError);
    w.receivers_per_host = 4;
    CHECK_NOTHROW(w.validate(5));
    w.rate_per_host = 0;
    CHECK_THROWS_AS(w.validate(5), InputError);
    w = {};
    w.size_weights[0].second = 0.9;
    CHECK_THROWS_AS(w.validate(50), InputError);
    w = {};
    w.deadline_fraction = 1.5;
    CHECK_THROWS_AS(w.validate(50), InputError);
}
