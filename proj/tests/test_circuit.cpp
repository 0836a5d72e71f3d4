#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <orbit/circuit.hpp>
#include <orbit/instances.hpp>

using namespace orbit;
using CMat = Eigen::MatrixXcd;

namespace {

// exp(-i theta (|b2><b1| + |b1><b2|)) on the data qubits (no ancilla), dense
CMat target_unitary(const std::string& b1, const std::string& b2, double theta) {
    int n = static_cast<int>(b1.size());
    long dim = 1L << n;
    auto idx = [&](const std::string& b) {
        long v = 0;
        for (char c : b) v = v * 2 + (c - '0');
        return v;
    };
    CMat h = CMat::Zero(dim, dim);
    std::complex<double> i1(0, 1);
    if (b1 == b2) {
        CMat u = CMat::Identity(dim, dim);
        u(idx(b1), idx(b1)) = std::exp(-i1 * theta);
        return u;
    }
    h(idx(b2), idx(b1)) = 1;
    h(idx(b1), idx(b2)) = 1;
    CMat u = CMat::Identity(dim, dim);
    // closed form: exp(-i t H) = I + (cos t - 1)(P1+P2) - i sin t * H
    u(idx(b1), idx(b1)) = std::cos(theta);
    u(idx(b2), idx(b2)) = std::cos(theta);
    u(idx(b2), idx(b1)) = -i1 * std::sin(theta);
    u(idx(b1), idx(b2)) = -i1 * std::sin(theta);
    return u;
}

// restriction of the circuit unitary to the ancilla-clean data subspace
CMat data_block(const CircuitIR& c) {
    CMat full = circuit_unitary(c);
    long dim = full.rows() / 2;  // ancilla is the least significant qubit
    CMat out(dim, dim);
    for (long r = 0; r < dim; ++r)
        for (long s = 0; s < dim; ++s) out(r, s) = full(2 * r, 2 * s);
    // the ancilla must return clean: no leakage out of the block
    for (long r = 0; r < dim; ++r)
        for (long s = 0; s < dim; ++s) CHECK(std::abs(full(2 * r + 1, 2 * s)) < 1e-12);
    return out;
}

}  // namespace

TEST_CASE("binary encodings") {
    auto abc = binary_encode(Alphabet{"abc"});
    CHECK(abc.bits_per_symbol == 2);
    CHECK(abc.code == std::vector<std::string>{"00", "01", "10"});
    CHECK(abc.encode_word(Alphabet{"abc"}, "cab") == "100001");

    auto ab = binary_encode(Alphabet{"ab"});
    CHECK(ab.bits_per_symbol == 1);
    CHECK(ab.code == std::vector<std::string>{"0", "1"});
    CHECK(ab.encode_word(Alphabet{"ab"}, "baab") == "1001");
}

TEST_CASE("system encoding preserves rule counts and scales widths") {
    auto sys = window_chain_system();
    int L = 6;
    auto enc = encode_system(sys, L);
    CHECK(enc.alphabet.symbols == "01");
    CHECK(enc.templates.empty());
    CHECK(enc.explicit_rules.size() == instantiate(sys, L).size());
    for (const auto& r : enc.explicit_rules) CHECK(r.width() == 4);  // 1 bit/symbol

    RewriteSystem wide;
    wide.alphabet = Alphabet{"abcd"};
    wide.templates.push_back({"ab", "cd", std::nullopt});
    auto enc4 = encode_system(wide, 2);
    REQUIRE(enc4.explicit_rules.size() == 1);
    CHECK(enc4.explicit_rules[0].width() == 4);  // 2 bits/symbol
}

TEST_CASE("projector-exponential circuit reproduces the target unitary") {
    for (double theta : {0.7, 0.3, -1.1}) {
        CAPTURE(theta);
        auto c = emit_projector_exponential("001", "010", theta);
        CHECK(c.n_qubits == 4);
        CHECK(c.multi_controlled_count() == 2);
        CMat got = data_block(c);
        CMat want = target_unitary("001", "010", theta);
        CHECK((got - want).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("diagonal case: conditional phase") {
    auto c = emit_projector_exponential("011", "011", 0.9);
    CMat got = data_block(c);
    CMat want = target_unitary("011", "011", 0.9);
    CHECK((got - want).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("zero angle gives the identity") {
    auto c = emit_projector_exponential("001", "010", 0.0);
    CMat got = circuit_unitary(c);
    CHECK((got - CMat::Identity(got.rows(), got.cols())).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("multi-bit differences and single-qubit patterns") {
    auto c = emit_projector_exponential("0101", "1010", 0.4);
    CHECK((data_block(c) - target_unitary("0101", "1010", 0.4)).cwiseAbs().maxCoeff() < 1e-10);
    auto one = emit_projector_exponential("0", "1", 0.25);
    CHECK((data_block(one) - target_unitary("0", "1", 0.25)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("QASM emission mentions every gate") {
    auto c = emit_projector_exponential("001", "010", 0.7);
    auto q = to_qasm(c);
    CHECK(q.find("OPENQASM") != std::string::npos);
    CHECK(q.find("qubit[") != std::string::npos);
    long lines = 0;
    for (char ch : q)
        if (ch == '\n') ++lines;
    CHECK(lines >= static_cast<long>(c.gates.size()));
}

TEST_CASE("decomposed gate costs: k-controlled gates cost 2k-1") {
    Gate plain;
    plain.kind = Gate::Kind::X;
    CHECK(decomposed_gate_cost(plain) == 1);
    Gate mcx;
    mcx.kind = Gate::Kind::MCX;
    mcx.controls = {0, 1, 2, 3};
    CHECK(decomposed_gate_cost(mcx) == 7);
    Gate crx;
    crx.kind = Gate::Kind::CRx;
    crx.controls = {0};
    CHECK(decomposed_gate_cost(crx) == 1);
}

TEST_CASE("Trotter resource accounting") {
    auto sys = window_chain_system();
    Word w(10, 'a');
    auto r1 = trotter_resources(sys, w, 1);
    CHECK(r1.steps == 1);
    CHECK(r1.n_r == 2);
    CHECK(r1.w_bits == 4);
    CHECK(r1.L_bits == 10);
    CHECK(r1.operator_count == 5);  // per step: 2 blocks per rule + 1 projector block

    auto r2 = trotter_resources(sys, w, 2);
    CHECK(r2.operator_count == 2 * r1.operator_count);
    CHECK(r2.total_gates_native == 2 * r1.total_gates_native);
    CHECK(r2.total_gates_decomposed == 2 * r1.total_gates_decomposed);
    CHECK(r2.multi_controlled_count == 2 * r1.multi_controlled_count);

    auto r10 = trotter_resources(sys, w, 10);
    CHECK(r10.operator_count == 10 * r1.operator_count);
    CHECK(r10.total_gates_native == 10 * r1.total_gates_native);
}
