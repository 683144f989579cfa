#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rlqas/qcore.hpp"

#include "json.hpp"

namespace rlqas {

struct BadActionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TooDeepError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnboundParamsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct OutOfRangeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class GateKind { RX, RY, RZ, CX };

std::string gate_kind_name(GateKind k);
GateKind gate_kind_from_name(const std::string& name);

// One gate in a circuit. Rotations use q0 as their target and carry a slot
// into the circuit's parameter vector; CX uses (q0=control, q1=target).
struct GateOp {
    GateKind kind;
    std::size_t q0 = 0;
    std::size_t q1 = 0;
    int param_slot = -1;

    bool is_rotation() const { return kind != GateKind::CX; }
};

struct Circuit {
    std::size_t n_qubits = 2;
    std::vector<GateOp> ops;
    std::vector<double> params;  // one entry per rotation op, in slot order
};

// Discrete action: a gate template without its angle.
struct Action {
    GateKind kind;
    std::size_t q0 = 0;
    std::size_t q1 = 0;
};

// Fixed ordering: all rotations of qubit 0 (RX, RY, RZ), then qubit 1, ...,
// then CX for every ordered (control, target) pair. 8 actions for 2 qubits.
std::vector<Action> action_space(std::size_t n_qubits);

// Index of the action that would produce this op; inverse of action_space.
std::size_t action_index_of(const GateOp& op, std::size_t n_qubits);

// Appends the chosen gate; a new rotation parameter starts at 0 (identity).
Circuit append_action(const Circuit& c, std::size_t action);

// Product of the per-gate matrices, first op applied first.
// Rotation convention R_A(theta) = exp(-i theta A / 2).
ComplexMatrix to_unitary(const Circuit& c);

// Flat one-hot observation: for each op slot below d_max, a block of
// action-space size with a single hot entry; empty slots stay zero.
using Observation = std::vector<double>;
Observation encode(const Circuit& c, std::size_t d_max);

struct ResourceCount {
    std::size_t one_qubit_gates = 0;
    std::size_t two_qubit_gates = 0;
    std::size_t depth = 0;
};

// Depth is the longest qubit-wise dependency chain.
ResourceCount resources(const Circuit& c);

// Entanglement-enhancing prefix: H on qubit 0, CRX(2*pi*theta) with qubit 0
// as control, H on qubit 0, expressed over the {RX, RY, RZ, CX} gate set.
// Identity at theta=0; maximal entangler at theta=0.5.
Circuit build_ee_block(double theta);

void to_json(nlohmann::json& j, const Circuit& c);
void from_json(const nlohmann::json& j, Circuit& c);

}  // namespace rlqas
