#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "rlqas/ansatz.hpp"

using namespace rlqas;

namespace {

constexpr double kPi = std::numbers::pi;

// Statevector oracle for the EE block: (H x I) CRX(2 pi theta) (H x I) |00>,
// built from explicit 4x4 matrices, independent of the circuit machinery.
PureState ee_on_zero_oracle(double theta) {
    const double a = 2.0 * kPi * theta;
    ComplexMatrix h_i(4, 4);  // H on qubit 0
    const double s = 1.0 / std::sqrt(2.0);
    h_i(0, 0) = s;
    h_i(0, 2) = s;
    h_i(2, 0) = s;
    h_i(2, 2) = -s;
    h_i(1, 1) = s;
    h_i(1, 3) = s;
    h_i(3, 1) = s;
    h_i(3, 3) = -s;
    ComplexMatrix crx = ComplexMatrix::identity(4);
    crx(2, 2) = std::cos(a / 2.0);
    crx(2, 3) = cplx(0.0, -std::sin(a / 2.0));
    crx(3, 2) = cplx(0.0, -std::sin(a / 2.0));
    crx(3, 3) = std::cos(a / 2.0);
    const ComplexMatrix u = h_i * crx * h_i;
    std::vector<cplx> zero = {1.0, 0.0, 0.0, 0.0};
    return apply_unitary(PureState(2, zero), u);
}

Circuit circuit_from_actions(const std::vector<std::size_t>& actions) {
    Circuit c;
    c.n_qubits = 2;
    for (std::size_t a : actions) c = append_action(c, a);
    return c;
}

}  // namespace

TEST_CASE("action space ordering and size") {
    const std::vector<Action> space = action_space(2);
    REQUIRE(space.size() == 8);
    CHECK(space[0].kind == GateKind::RX);
    CHECK(space[0].q0 == 0);
    CHECK(space[5].kind == GateKind::RZ);
    CHECK(space[5].q0 == 1);
    CHECK(space[6].kind == GateKind::CX);
    CHECK(space[6].q0 == 0);
    CHECK(space[6].q1 == 1);
    CHECK(space[7].q0 == 1);
    CHECK(space[7].q1 == 0);

    // 3n rotations + n(n-1) entanglers.
    CHECK(action_space(3).size() == 15);

    for (std::size_t i = 0; i < space.size(); ++i) {
        GateOp op;
        op.kind = space[i].kind;
        op.q0 = space[i].q0;
        op.q1 = space[i].q1;
        op.param_slot = op.is_rotation() ? 0 : -1;
        CHECK(action_index_of(op, 2) == i);
    }
}

TEST_CASE("append_action builds dense parameter slots") {
    Circuit c = circuit_from_actions({0, 6, 4});
    REQUIRE(c.ops.size() == 3);
    CHECK(c.ops[0].kind == GateKind::RX);
    CHECK(c.ops[0].param_slot == 0);
    CHECK(c.ops[1].kind == GateKind::CX);
    CHECK(c.ops[1].param_slot == -1);
    CHECK(c.ops[2].kind == GateKind::RY);
    CHECK(c.ops[2].param_slot == 1);
    CHECK(c.params == std::vector<double>{0.0, 0.0});
    CHECK_THROWS_AS(append_action(c, 8), BadActionError);
}

TEST_CASE("to_unitary: empty, fresh params, CX") {
    const Circuit empty = circuit_from_actions({});
    CHECK(to_unitary(empty).max_abs_diff(ComplexMatrix::identity(4)) == 0.0);

    // All-zero rotation parameters stay the identity.
    const Circuit rots = circuit_from_actions({0, 1, 2, 3, 4, 5});
    CHECK(to_unitary(rots).max_abs_diff(ComplexMatrix::identity(4)) < 1e-12);

    ComplexMatrix cx(4, 4);
    cx(0, 0) = 1.0;
    cx(1, 1) = 1.0;
    cx(2, 3) = 1.0;
    cx(3, 2) = 1.0;
    CHECK(to_unitary(circuit_from_actions({6})).max_abs_diff(cx) == 0.0);
}

TEST_CASE("to_unitary rotation conventions") {
    // RX(pi) on qubit 0 equals -i (X x I): exp(-i pi X / 2).
    Circuit c = circuit_from_actions({0});
    c.params[0] = kPi;
    const ComplexMatrix u = to_unitary(c);
    ComplexMatrix want(4, 4);
    want(0, 2) = cplx(0.0, -1.0);
    want(2, 0) = cplx(0.0, -1.0);
    want(1, 3) = cplx(0.0, -1.0);
    want(3, 1) = cplx(0.0, -1.0);
    CHECK(u.max_abs_diff(want) < 1e-12);

    // RZ(pi) then RY(pi/2) on one qubit is a Hadamard up to global phase -i.
    Circuit h = circuit_from_actions({2, 1});
    h.params[0] = kPi;
    h.params[1] = kPi / 2.0;
    const ComplexMatrix uh = to_unitary(h);
    const double s = 1.0 / std::sqrt(2.0);
    ComplexMatrix hw(4, 4);  // -i * (H x I)
    const cplx mi(0.0, -1.0);
    hw(0, 0) = mi * s;
    hw(0, 2) = mi * s;
    hw(2, 0) = mi * s;
    hw(2, 2) = -mi * s;
    hw(1, 1) = mi * s;
    hw(1, 3) = mi * s;
    hw(3, 1) = mi * s;
    hw(3, 3) = -mi * s;
    CHECK(uh.max_abs_diff(hw) < 1e-12);
}

TEST_CASE("to_unitary is unitary for random circuits up to 40 ops") {
    SplitMix64 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        Circuit c;
        c.n_qubits = 2;
        const std::size_t len = 1 + rng.uniform_below(40);
        for (std::size_t i = 0; i < len; ++i) c = append_action(c, rng.uniform_below(8));
        for (double& p : c.params) p = rng.uniform(-kPi, kPi);
        CHECK(to_unitary(c).is_unitary(1e-10));
    }
}

TEST_CASE("encode: shape, one-hot blocks, injectivity over 2-op circuits") {
    const Circuit empty = circuit_from_actions({});
    const Observation zeros = encode(empty, 40);
    REQUIRE(zeros.size() == 320);
    for (double v : zeros) CHECK(v == 0.0);

    const Observation one = encode(circuit_from_actions({0}), 40);
    CHECK(one[0] == 1.0);
    double total = 0.0;
    for (double v : one) total += v;
    CHECK(total == 1.0);

    // Distinct circuits of equal length get distinct encodings (64 pairs).
    std::set<std::vector<double>> seen;
    for (std::size_t a = 0; a < 8; ++a)
        for (std::size_t b = 0; b < 8; ++b) seen.insert(encode(circuit_from_actions({a, b}), 4));
    CHECK(seen.size() == 64);

    // Decoding the one-hot blocks recovers the gate list.
    const Circuit c = circuit_from_actions({3, 6, 1, 7});
    const Observation obs = encode(c, 10);
    for (std::size_t slot = 0; slot < c.ops.size(); ++slot) {
        std::size_t hot = 99;
        for (std::size_t j = 0; j < 8; ++j)
            if (obs[slot * 8 + j] == 1.0) hot = j;
        CHECK(hot == action_index_of(c.ops[slot], 2));
    }

    CHECK_THROWS_AS(encode(circuit_from_actions({0, 1, 2}), 2), TooDeepError);
}

TEST_CASE("resources: counts and dependency-chain depth") {
    const ResourceCount empty = resources(circuit_from_actions({}));
    CHECK(empty.one_qubit_gates == 0);
    CHECK(empty.two_qubit_gates == 0);
    CHECK(empty.depth == 0);

    // Parallel rotations on different qubits occupy one layer.
    const ResourceCount par = resources(circuit_from_actions({0, 4}));
    CHECK(par.one_qubit_gates == 2);
    CHECK(par.depth == 1);

    // RX(q0), CX, RZ(q1): the chain runs through all three.
    const ResourceCount chain = resources(circuit_from_actions({0, 6, 5}));
    CHECK(chain.one_qubit_gates == 2);
    CHECK(chain.two_qubit_gates == 1);
    CHECK(chain.depth == 3);

    // Gates on a single qubit stack up to the gate count.
    const ResourceCount stacked = resources(circuit_from_actions({0, 1, 2, 0}));
    CHECK(stacked.depth == 4);
}

TEST_CASE("EE block endpoints and the statevector oracle") {
    CHECK(to_unitary(build_ee_block(0.0)).max_abs_diff(ComplexMatrix::identity(4)) < 1e-10);

    std::vector<cplx> zero = {1.0, 0.0, 0.0, 0.0};
    auto ee_concurrence = [&](double theta) {
        const PureState out =
            apply_unitary(PureState(2, zero), to_unitary(build_ee_block(theta)));
        return concurrence_pure(out);
    };

    CHECK(ee_concurrence(0.0) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(ee_concurrence(0.5) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(ee_concurrence(0.25) ==
          doctest::Approx(concurrence_pure(ee_on_zero_oracle(0.25))).epsilon(1e-10));

    // Continuous, non-decreasing over a 101-point grid, matching the oracle
    // in absolute terms (the sqrt amplifies rounding near zero concurrence).
    double prev = -1.0;
    for (int i = 0; i <= 100; ++i) {
        const double theta = 0.5 * i / 100.0;
        const double c = ee_concurrence(theta);
        CHECK(std::abs(c - concurrence_pure(ee_on_zero_oracle(theta))) < 1e-7);
        CHECK(c >= prev - 1e-12);
        prev = c;
    }

    CHECK_THROWS_AS(build_ee_block(-0.1), OutOfRangeError);
    CHECK_THROWS_AS(build_ee_block(0.6), OutOfRangeError);
}

TEST_CASE("circuit json round trip") {
    Circuit c = circuit_from_actions({0, 6, 4, 7});
    c.params[0] = 1.25;
    c.params[1] = -0.5;
    const nlohmann::json j = c;
    const Circuit back = j.get<Circuit>();
    CHECK(back.n_qubits == c.n_qubits);
    REQUIRE(back.ops.size() == c.ops.size());
    CHECK(back.params == c.params);
    CHECK(to_unitary(back).max_abs_diff(to_unitary(c)) == 0.0);
    CHECK(j.at("ops")[0].at("kind") == "rx");
    CHECK(j.at("ops")[1].at("qubits") == nlohmann::json({0, 1}));
}
