#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rbn/network.hpp"
#include "rbn/state.hpp"

using namespace rbn;

namespace {

// x0' = x1, x1' = x0
BooleanNetwork swap_network() {
    return BooleanNetwork(2, 1, {{{1}, {0, 1}}, {{0}, {0, 1}}});
}

BooleanNetwork identity_network(std::size_t n) {
    std::vector<NodeFunction> nodes;
    for (std::uint32_t i = 0; i < n; ++i)
        nodes.push_back({{i}, {0, 1}});
    return BooleanNetwork(n, 1, std::move(nodes));
}

}  // namespace

TEST_CASE("state string round trip and bit access", "[state]") {
    const auto s = NetworkState::from_string("0110");
    CHECK(s.size() == 4);
    CHECK_FALSE(s.get(0));
    CHECK(s.get(1));
    CHECK(s.get(2));
    CHECK_FALSE(s.get(3));
    CHECK(s.to_string() == "0110");
    CHECK(s.popcount() == 2);
    CHECK_THROWS_AS(NetworkState::from_string("01x"), std::invalid_argument);
}

TEST_CASE("state ordering is lexicographic with bit 0 most significant",
          "[state]") {
    CHECK(NetworkState::from_string("01") < NetworkState::from_string("10"));
    CHECK(NetworkState::from_string("001") < NetworkState::from_string("010"));
    CHECK(NetworkState::from_string("10") == NetworkState::from_string("10"));

    // order must agree with string order, also across the word boundary
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = random_state(70, rng);
        const auto b = random_state(70, rng);
        CHECK((a < b) == (a.to_string() < b.to_string()));
    }
}

TEST_CASE("random states keep tail bits clear", "[state]") {
    Rng rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        const auto s = random_state(70, rng);
        CHECK((s.words()[1] & ~NetworkState::tail_mask(70)) == 0);
        CHECK(s.to_string().size() == 70);
    }
}

TEST_CASE("hamming distance", "[state]") {
    const auto z = NetworkState::from_string("000");
    CHECK(hamming(z, z) == 0);
    CHECK(hamming(z, NetworkState::from_string("111")) == 3);
    CHECK(hamming(NetworkState::from_string("0110"),
                  NetworkState::from_string("0011")) == 2);
    CHECK_THROWS_AS(hamming(z, NetworkState::from_string("0000")),
                    std::invalid_argument);
}

TEST_CASE("eval_node looks up the truth table by input bits", "[network]") {
    // XOR of inputs (a, b): table index = a + 2b
    const NodeFunction xor_node{{0, 1}, {0, 1, 1, 0}};
    CHECK(eval_node(xor_node, NetworkState::from_string("10")) == true);
    CHECK(eval_node(xor_node, NetworkState::from_string("01")) == true);
    CHECK(eval_node(xor_node, NetworkState::from_string("11")) == false);
    CHECK(eval_node(xor_node, NetworkState::from_string("00")) == false);

    const NodeFunction zero{{0, 1}, {0, 0, 0, 0}};
    CHECK(eval_node(zero, NetworkState::from_string("11")) == false);

    const NodeFunction ident{{0}, {0, 1}};
    CHECK(eval_node(ident, NetworkState::from_string("1")) == true);

    CHECK_THROWS_AS(eval_node(NodeFunction{{5}, {0, 1}},
                              NetworkState::from_string("01")),
                    std::invalid_argument);
}

TEST_CASE("step applies all node functions synchronously", "[network]") {
    const auto ident = identity_network(4);
    const auto s = NetworkState::from_string("0110");
    CHECK(ident.step(s) == s);

    const BooleanNetwork not_net(1, 1, {{{0}, {1, 0}}});
    CHECK(not_net.step(NetworkState::from_string("0")).to_string() == "1");

    const auto swap = swap_network();
    const auto before = NetworkState::from_string("01");
    CHECK(swap.step(before).to_string() == "10");
    CHECK(before.to_string() == "01");  // input untouched

    CHECK_THROWS_AS(swap.step(NetworkState::from_string("011")),
                    std::invalid_argument);
}

TEST_CASE("step agrees with per-node eval_node", "[network]") {
    const auto net = generate_rbn({40, 3, 0.6, 99});
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = random_state(40, rng);
        const auto next = net.step(s);
        for (std::size_t i = 0; i < net.n(); ++i)
            REQUIRE(next.get(i) == eval_node(net.node(i), s));
    }
}

TEST_CASE("constant nodes ignore the input state", "[network]") {
    // two constant nodes: always 1, always 0
    const BooleanNetwork net(2, 1, {{{1}, {1, 1}}, {{0}, {0, 0}}});
    CHECK(net.step(NetworkState::from_string("00")).to_string() == "10");
    CHECK(net.step(NetworkState::from_string("11")).to_string() == "10");
}

TEST_CASE("generate_rbn honors its parameter contract", "[network]") {
    SECTION("bias 1 forces all-ones tables") {
        const auto net = generate_rbn({3, 3, 1.0, 77});
        for (const auto& node : net.nodes())
            for (auto entry : node.table)
                CHECK(entry == 1);
    }
    SECTION("identical params give identical networks") {
        const GenerationParams p{70, 3, 0.788675, 123456};
        CHECK(generate_rbn(p) == generate_rbn(p));
    }
    SECTION("structure invariants") {
        const auto net = generate_rbn({25, 4, 0.3, 5});
        REQUIRE(net.nodes().size() == 25);
        for (const auto& node : net.nodes()) {
            REQUIRE(node.inputs.size() == 4);
            REQUIRE(node.table.size() == 16);
            std::set<std::uint32_t> distinct(node.inputs.begin(),
                                             node.inputs.end());
            REQUIRE(distinct.size() == 4);
            for (auto in : node.inputs)
                REQUIRE(in < 25);
        }
    }
    SECTION("invalid parameters are rejected") {
        CHECK_THROWS_AS(generate_rbn({3, 4, 0.5, 0}), std::invalid_argument);
        CHECK_THROWS_AS(generate_rbn({3, 0, 0.5, 0}), std::invalid_argument);
        CHECK_THROWS_AS(generate_rbn({0, 0, 0.5, 0}), std::invalid_argument);
        CHECK_THROWS_AS(generate_rbn({3, 2, 1.5, 0}), std::invalid_argument);
        CHECK_THROWS_AS(generate_rbn({3, 2, -0.1, 0}), std::invalid_argument);
        CHECK_THROWS_AS(generate_rbn({30, 25, 0.5, 0}), std::invalid_argument);
    }
}

TEST_CASE("table entry frequency matches the bias", "[network]") {
    // Monte Carlo against the binomial expectation: 1000 networks of
    // n=10, k=2 give 40000 entries, so 0.5 +/- 0.02 is a ~8 sigma window.
    std::size_t ones = 0, total = 0;
    for (std::uint32_t i = 0; i < 1000; ++i) {
        const auto net = generate_rbn({10, 2, 0.5, derive_seed(31337, 0, i)});
        for (const auto& node : net.nodes())
            for (auto entry : node.table) {
                ones += entry;
                ++total;
            }
    }
    const double fraction = static_cast<double>(ones) / static_cast<double>(total);
    CHECK(total == 40000);
    CHECK(fraction == Catch::Approx(0.5).margin(0.02));
}

TEST_CASE("network construction validates node functions", "[network]") {
    CHECK_THROWS_AS(BooleanNetwork(2, 2, {{{0, 0}, {0, 1, 1, 0}},
                                          {{0, 1}, {0, 1, 1, 0}}}),
                    std::invalid_argument);  // duplicate inputs
    CHECK_THROWS_AS(BooleanNetwork(2, 1, {{{0}, {0, 1, 1}}, {{1}, {0, 1}}}),
                    std::invalid_argument);  // wrong table size
    CHECK_THROWS_AS(BooleanNetwork(2, 1, {{{3}, {0, 1}}, {{1}, {0, 1}}}),
                    std::invalid_argument);  // input out of range
    CHECK_THROWS_AS(BooleanNetwork(2, 1, {{{0}, {0, 2}}, {{1}, {0, 1}}}),
                    std::invalid_argument);  // non-Boolean entry
    CHECK_THROWS_AS(BooleanNetwork(2, 1, {{{0}, {0, 1}}}),
                    std::invalid_argument);  // missing node
}

TEST_CASE("critical bias solves 2p(1-p) = 1/k", "[network]") {
    CHECK(critical_bias(3) == Catch::Approx(0.788675).margin(1e-6));
    CHECK(critical_bias(2) == Catch::Approx(0.5).margin(1e-12));
    CHECK(critical_bias(4) == Catch::Approx(0.8535533905932737).margin(1e-12));
    CHECK_THROWS_AS(critical_bias(1), std::domain_error);
    CHECK_THROWS_AS(critical_bias(0), std::domain_error);
    for (std::size_t k = 2; k <= 64; ++k) {
        const double p = critical_bias(k);
        REQUIRE(p >= 0.5);
        REQUIRE(std::abs(2.0 * p * (1.0 - p) - 1.0 / static_cast<double>(k)) <=
                1e-9);
    }
}
