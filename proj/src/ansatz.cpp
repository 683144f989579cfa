#include "rlqas/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rlqas {

std::string gate_kind_name(GateKind k) {
    switch (k) {
        case GateKind::RX: return "rx";
        case GateKind::RY: return "ry";
        case GateKind::RZ: return "rz";
        case GateKind::CX: return "cx";
    }
    throw BadActionError("unknown gate kind");
}

GateKind gate_kind_from_name(const std::string& name) {
    if (name == "rx") return GateKind::RX;
    if (name == "ry") return GateKind::RY;
    if (name == "rz") return GateKind::RZ;
    if (name == "cx") return GateKind::CX;
    throw BadActionError("unknown gate kind: " + name);
}

std::vector<Action> action_space(std::size_t n_qubits) {
    std::vector<Action> out;
    for (std::size_t q = 0; q < n_qubits; ++q) {
        out.push_back({GateKind::RX, q, 0});
        out.push_back({GateKind::RY, q, 0});
        out.push_back({GateKind::RZ, q, 0});
    }
    for (std::size_t c = 0; c < n_qubits; ++c)
        for (std::size_t t = 0; t < n_qubits; ++t)
            if (c != t) out.push_back({GateKind::CX, c, t});
    return out;
}

std::size_t action_index_of(const GateOp& op, std::size_t n_qubits) {
    if (op.is_rotation()) {
        const std::size_t kind_ofs = op.kind == GateKind::RX ? 0 : op.kind == GateKind::RY ? 1 : 2;
        return op.q0 * 3 + kind_ofs;
    }
    std::size_t idx = 3 * n_qubits;
    for (std::size_t c = 0; c < n_qubits; ++c)
        for (std::size_t t = 0; t < n_qubits; ++t) {
            if (c == t) continue;
            if (c == op.q0 && t == op.q1) return idx;
            ++idx;
        }
    throw BadActionError("action_index_of: op not in action space");
}

Circuit append_action(const Circuit& c, std::size_t action) {
    const std::vector<Action> space = action_space(c.n_qubits);
    if (action >= space.size()) throw BadActionError("append_action: action index out of range");
    const Action& a = space[action];

    Circuit out = c;
    GateOp op;
    op.kind = a.kind;
    op.q0 = a.q0;
    op.q1 = a.q1;
    if (op.is_rotation()) {
        op.param_slot = static_cast<int>(out.params.size());
        out.params.push_back(0.0);
    }
    out.ops.push_back(op);
    return out;
}

namespace {

ComplexMatrix rotation_2x2(GateKind kind, double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    ComplexMatrix m(2, 2);
    switch (kind) {
        case GateKind::RX:
            m(0, 0) = c;
            m(0, 1) = cplx(0.0, -s);
            m(1, 0) = cplx(0.0, -s);
            m(1, 1) = c;
            break;
        case GateKind::RY:
            m(0, 0) = c;
            m(0, 1) = -s;
            m(1, 0) = s;
            m(1, 1) = c;
            break;
        case GateKind::RZ:
            m(0, 0) = cplx(c, -s);
            m(1, 1) = cplx(c, s);
            break;
        default:
            throw BadActionError("rotation_2x2: not a rotation");
    }
    return m;
}

// Apply gate to a dim x dim unitary accumulator in place (gate * acc).
void left_multiply_gate(const GateOp& op, double theta, std::size_t n_qubits,
                        ComplexMatrix& acc) {
    const std::size_t dim = acc.rows();
    if (op.is_rotation()) {
        const ComplexMatrix g = rotation_2x2(op.kind, theta);
        const std::size_t mask = std::size_t(1) << (n_qubits - 1 - op.q0);
        for (std::size_t col = 0; col < dim; ++col) {
            for (std::size_t row = 0; row < dim; ++row) {
                if (row & mask) continue;
                const std::size_t row1 = row | mask;
                const cplx v0 = acc(row, col);
                const cplx v1 = acc(row1, col);
                acc(row, col) = g(0, 0) * v0 + g(0, 1) * v1;
                acc(row1, col) = g(1, 0) * v0 + g(1, 1) * v1;
            }
        }
    } else {
        const std::size_t cmask = std::size_t(1) << (n_qubits - 1 - op.q0);
        const std::size_t tmask = std::size_t(1) << (n_qubits - 1 - op.q1);
        for (std::size_t col = 0; col < dim; ++col) {
            for (std::size_t row = 0; row < dim; ++row) {
                if ((row & cmask) && !(row & tmask)) {
                    const std::size_t row1 = row | tmask;
                    std::swap(acc(row, col), acc(row1, col));
                }
            }
        }
    }
}

}  // namespace

ComplexMatrix to_unitary(const Circuit& c) {
    std::size_t rot_count = 0;
    for (const GateOp& op : c.ops) {
        if (op.is_rotation()) {
            if (op.param_slot < 0 || static_cast<std::size_t>(op.param_slot) >= c.params.size())
                throw UnboundParamsError("to_unitary: rotation without a bound parameter");
            ++rot_count;
        }
    }
    if (rot_count != c.params.size())
        throw UnboundParamsError("to_unitary: parameter count does not match rotations");

    ComplexMatrix u = ComplexMatrix::identity(std::size_t(1) << c.n_qubits);
    for (const GateOp& op : c.ops) {
        const double theta = op.is_rotation() ? c.params[op.param_slot] : 0.0;
        left_multiply_gate(op, theta, c.n_qubits, u);
    }
    return u;
}

Observation encode(const Circuit& c, std::size_t d_max) {
    if (c.ops.size() > d_max) throw TooDeepError("encode: circuit longer than d_max");
    const std::size_t block = action_space(c.n_qubits).size();
    Observation obs(d_max * block, 0.0);
    for (std::size_t i = 0; i < c.ops.size(); ++i)
        obs[i * block + action_index_of(c.ops[i], c.n_qubits)] = 1.0;
    return obs;
}

ResourceCount resources(const Circuit& c) {
    ResourceCount rc;
    std::vector<std::size_t> qubit_depth(c.n_qubits, 0);
    for (const GateOp& op : c.ops) {
        if (op.is_rotation()) {
            ++rc.one_qubit_gates;
            qubit_depth[op.q0] += 1;
        } else {
            ++rc.two_qubit_gates;
            const std::size_t level = std::max(qubit_depth[op.q0], qubit_depth[op.q1]) + 1;
            qubit_depth[op.q0] = level;
            qubit_depth[op.q1] = level;
        }
    }
    rc.depth = *std::max_element(qubit_depth.begin(), qubit_depth.end());
    return rc;
}

Circuit build_ee_block(double theta) {
    if (theta < 0.0 || theta > 0.5)
        throw OutOfRangeError("build_ee_block: theta outside [0, 0.5]");
    const double pi = std::numbers::pi;
    const double angle = 2.0 * pi * theta;

    Circuit c;
    c.n_qubits = 2;
    auto rot = [&c](GateKind kind, std::size_t q, double value) {
        GateOp op;
        op.kind = kind;
        op.q0 = q;
        op.param_slot = static_cast<int>(c.params.size());
        c.ops.push_back(op);
        c.params.push_back(value);
    };
    auto cx01 = [&c]() {
        GateOp op;
        op.kind = GateKind::CX;
        op.q0 = 0;
        op.q1 = 1;
        c.ops.push_back(op);
    };
    // H = (phase) RY(pi/2) RZ(pi); the four Hadamards below cancel the phases.
    auto hadamard = [&](std::size_t q) {
        rot(GateKind::RZ, q, pi);
        rot(GateKind::RY, q, pi / 2.0);
    };

    hadamard(0);
    // CRX(angle) on (control 0, target 1) via H_t CRZ(angle) H_t with
    // CRZ(a) = RZ_t(a/2) CX RZ_t(-a/2) CX.
    hadamard(1);
    rot(GateKind::RZ, 1, angle / 2.0);
    cx01();
    rot(GateKind::RZ, 1, -angle / 2.0);
    cx01();
    hadamard(1);
    hadamard(0);
    return c;
}

void to_json(nlohmann::json& j, const Circuit& c) {
    nlohmann::json ops = nlohmann::json::array();
    for (const GateOp& op : c.ops) {
        nlohmann::json o;
        o["kind"] = gate_kind_name(op.kind);
        if (op.is_rotation()) {
            o["qubits"] = {op.q0};
            o["param"] = c.params[op.param_slot];
        } else {
            o["qubits"] = {op.q0, op.q1};
        }
        ops.push_back(o);
    }
    j = nlohmann::json{{"n_qubits", c.n_qubits}, {"ops", ops}};
}

void from_json(const nlohmann::json& j, Circuit& c) {
    c = Circuit{};
    c.n_qubits = j.at("n_qubits").get<std::size_t>();
    for (const nlohmann::json& o : j.at("ops")) {
        GateOp op;
        op.kind = gate_kind_from_name(o.at("kind").get<std::string>());
        const auto qubits = o.at("qubits").get<std::vector<std::size_t>>();
        if (op.is_rotation()) {
            if (qubits.size() != 1) throw BadActionError("circuit json: rotation needs 1 qubit");
            op.q0 = qubits[0];
            op.param_slot = static_cast<int>(c.params.size());
            c.params.push_back(o.at("param").get<double>());
        } else {
            if (qubits.size() != 2 || qubits[0] == qubits[1])
                throw BadActionError("circuit json: cx needs 2 distinct qubits");
            op.q0 = qubits[0];
            op.q1 = qubits[1];
        }
        c.ops.push_back(op);
    }
}

}  // namespace rlqas
