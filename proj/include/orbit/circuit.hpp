#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "orbit/srs.hpp"

namespace orbit {

/// Fixed-width binary encoding of an alphabet: symbol i maps to the
/// big-endian bits of i over ceil(log2 d) bits.
struct BinaryEncoding {
    int bits_per_symbol = 1;
    std::vector<std::string> code;  // one bitstring per symbol, alphabet order

    std::string encode_word(const Alphabet& a, const Word& w) const;
};

BinaryEncoding binary_encode(const Alphabet& a);

/// Bit-level rewriting system equivalent to `sys` at word length L: every
/// rule instance re-expressed as an explicit positioned rule over {0,1}.
/// The rule count per instance is unchanged by the encoding.
RewriteSystem encode_system(const RewriteSystem& sys, int L);

struct Gate {
    enum class Kind { X, MCX, Phase, CRx };
    Kind kind = Kind::X;
    std::vector<int> controls;  // empty for plain X / Phase
    int target = 0;
    double theta = 0;  // Phase / CRx parameter
};

struct CircuitIR {
    int n_qubits = 0;  // data qubits + 1 ancilla
    int ancilla = 0;   // index of the ancilla (last qubit)
    std::vector<Gate> gates;

    long multi_controlled_count() const;  // gates with >= 2 controls
};

/// exp(-i theta (|b2><b1| + |b1><b2|)) for b1 != b2, or the conditional
/// phase exp(-i theta) on pattern b1 when b1 == b2. Emitted with exactly two
/// multi-controlled gates and a clean ancilla: CX basis change aligning the
/// differing bits, X-conjugated pattern detection into the ancilla, an
/// ancilla-controlled Rx(2 theta) (or Phase(-theta)), then uncomputation.
CircuitIR emit_projector_exponential(const std::string& b1, const std::string& b2, double theta);

/// Dense unitary of the circuit (guarded to <= 10 qubits), qubit 0 most
/// significant, ancilla least significant.
Eigen::MatrixXcd circuit_unitary(const CircuitIR& c);

std::string to_qasm(const CircuitIR& c);

/// Elementary-gate cost of one gate when k-controlled gates (k >= 2) are
/// decomposed linearly into 2k-1 elementary gates; 1 otherwise.
long decomposed_gate_cost(const Gate& g);

struct ResourceCount {
    int steps = 0;          // N
    int n_r = 0;            // rule count (templates count once each)
    int w_bits = 0;         // widest rule in bits
    int L_bits = 0;         // encoded register width
    long operator_count = 0;            // N * (2 n_r + 1)
    long total_gates_native = 0;        // multi-controlled gates count 1
    long total_gates_decomposed = 0;    // linear decomposition of controls
    long multi_controlled_count = 0;
};

/// Trotter-step resource accounting: per step, each rule contributes one
/// two-directional rotation block plus two diagonal (projector-phase)
/// blocks, and the input-word projector contributes one diagonal block over
/// the whole register. Totals are derived by emission, so the closed form
/// and the emitted-list lengths agree by construction.
ResourceCount trotter_resources(const RewriteSystem& sys, const Word& w, int N);

}  // namespace orbit
