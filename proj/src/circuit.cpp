#include "orbit/circuit.hpp"

#include <cmath>
#include <sstream>

namespace orbit {

namespace {

void check_bits(const std::string& b) {
    if (b.empty()) throw DataError("empty bit pattern");
    for (char c : b)
        if (c != '0' && c != '1') throw DataError("bit patterns must be over {0,1}");
}

}  // namespace

BinaryEncoding binary_encode(const Alphabet& a) {
    int d = a.size();
    int m = 1;
    while ((1 << m) < d) ++m;
    BinaryEncoding e;
    e.bits_per_symbol = m;
    e.code.resize(d);
    for (int i = 0; i < d; ++i) {
        std::string bits(m, '0');
        for (int b = 0; b < m; ++b)
            if (i & (1 << (m - 1 - b))) bits[b] = '1';
        e.code[i] = bits;
    }
    return e;
}

std::string BinaryEncoding::encode_word(const Alphabet& a, const Word& w) const {
    std::string out;
    out.reserve(w.size() * code[0].size());
    for (char c : w) out += code[static_cast<std::size_t>(a.index_of(c))];
    return out;
}

RewriteSystem encode_system(const RewriteSystem& sys, int L) {
    BinaryEncoding e = binary_encode(sys.alphabet);
    int m = e.bits_per_symbol;
    RewriteSystem out;
    out.alphabet.symbols = "01";
    out.name = sys.name.empty() ? "binary-encoded" : sys.name + " (binary-encoded)";
    for (const auto& inst : instantiate(sys, L)) {
        RuleInstance r;
        for (int k = 0; k < inst.width(); ++k) {
            const std::string& lc = e.code[static_cast<std::size_t>(sys.alphabet.index_of(inst.lhs[k]))];
            const std::string& rc = e.code[static_cast<std::size_t>(sys.alphabet.index_of(inst.rhs[k]))];
            for (int b = 0; b < m; ++b) {
                r.positions.push_back(inst.positions[k] * m + b);
                r.lhs += lc[b];
                r.rhs += rc[b];
            }
        }
        out.explicit_rules.push_back(std::move(r));
    }
    return out;
}

long CircuitIR::multi_controlled_count() const {
    long n = 0;
    for (const auto& g : gates)
        if (g.controls.size() >= 2) ++n;
    return n;
}

CircuitIR emit_projector_exponential(const std::string& b1, const std::string& b2, double theta) {
    check_bits(b1);
    check_bits(b2);
    if (b1.size() != b2.size()) throw DataError("bit patterns differ in length");
    int n = static_cast<int>(b1.size());
    CircuitIR c;
    c.n_qubits = n + 1;
    c.ancilla = n;

    if (b1 == b2) {
        // conditional phase exp(-i theta) on pattern b1
        std::vector<int> zeros;
        for (int i = 0; i < n; ++i)
            if (b1[static_cast<std::size_t>(i)] == '0') zeros.push_back(i);
        for (int i : zeros) c.gates.push_back({Gate::Kind::X, {}, i, 0});
        std::vector<int> all(n);
        for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
        c.gates.push_back({Gate::Kind::MCX, all, c.ancilla, 0});
        c.gates.push_back({Gate::Kind::Phase, {}, c.ancilla, -theta});
        c.gates.push_back({Gate::Kind::MCX, all, c.ancilla, 0});
        for (int i : zeros) c.gates.push_back({Gate::Kind::X, {}, i, 0});
        return c;
    }

    // differing bits; q is the rotation axis qubit
    std::vector<int> diff;
    for (int i = 0; i < n; ++i)
        if (b1[static_cast<std::size_t>(i)] != b2[static_cast<std::size_t>(i)]) diff.push_back(i);
    int q = diff[0];

    // basis change: CX(q -> p) folds every other differing bit onto a
    // pattern shared by |b1> and |b2>
    for (std::size_t k = 1; k < diff.size(); ++k)
        c.gates.push_back({Gate::Kind::MCX, {q}, diff[k], 0});

    // common pattern on every qubit except q after the basis change
    std::vector<int> controls, zeros;
    for (int i = 0; i < n; ++i) {
        if (i == q) continue;
        controls.push_back(i);
        char bit = b1[static_cast<std::size_t>(i)];
        bool in_diff = b1[static_cast<std::size_t>(i)] != b2[static_cast<std::size_t>(i)];
        char folded = in_diff ? ((bit != b1[static_cast<std::size_t>(q)]) ? '1' : '0') : bit;
        if (folded == '0') zeros.push_back(i);
    }
    for (int i : zeros) c.gates.push_back({Gate::Kind::X, {}, i, 0});
    c.gates.push_back({Gate::Kind::MCX, controls, c.ancilla, 0});
    c.gates.push_back({Gate::Kind::CRx, {c.ancilla}, q, 2.0 * theta});
    c.gates.push_back({Gate::Kind::MCX, controls, c.ancilla, 0});
    for (int i : zeros) c.gates.push_back({Gate::Kind::X, {}, i, 0});
    for (std::size_t k = diff.size(); k-- > 1;)
        c.gates.push_back({Gate::Kind::MCX, {q}, diff[k], 0});
    return c;
}

Eigen::MatrixXcd circuit_unitary(const CircuitIR& c) {
    if (c.n_qubits > 10) throw BudgetError("dense circuit simulation capped at 10 qubits");
    using Cplx = std::complex<double>;
    long dim = 1L << c.n_qubits;
    auto bit_of = [&](long idx, int qubit) {
        return (idx >> (c.n_qubits - 1 - qubit)) & 1L;
    };
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
    for (const auto& g : c.gates) {
        Eigen::MatrixXcd next(dim, dim);
        for (long col = 0; col < dim; ++col) {
            // apply g to each column of u
            Eigen::VectorXcd v = u.col(col), w = Eigen::VectorXcd::Zero(dim);
            for (long i = 0; i < dim; ++i) {
                bool ctrl = true;
                for (int cq : g.controls)
                    if (!bit_of(i, cq)) ctrl = false;
                if (!ctrl) {
                    w(i) += v(i);
                    continue;
                }
                long mask = 1L << (c.n_qubits - 1 - g.target);
                switch (g.kind) {
                    case Gate::Kind::X:
                    case Gate::Kind::MCX:
                        w(i ^ mask) += v(i);
                        break;
                    case Gate::Kind::Phase:
                        if (bit_of(i, g.target))
                            w(i) += std::exp(Cplx(0, g.theta)) * v(i);
                        else
                            w(i) += v(i);
                        break;
                    case Gate::Kind::CRx: {
                        double ct = std::cos(g.theta / 2), st = std::sin(g.theta / 2);
                        w(i) += ct * v(i);
                        w(i ^ mask) += Cplx(0, -st) * v(i);
                        break;
                    }
                }
            }
            next.col(col) = w;
        }
        u = next;
    }
    return u;
}

std::string to_qasm(const CircuitIR& c) {
    std::ostringstream out;
    out << "OPENQASM 3.0;\n";
    out << "qubit[" << (c.n_qubits - 1) << "] q;\n";
    out << "qubit[1] anc;\n";
    auto name = [&](int i) {
        std::ostringstream s;
        if (i == c.ancilla)
            s << "anc[0]";
        else
            s << "q[" << i << "]";
        return s.str();
    };
    char buf[64];
    for (const auto& g : c.gates) {
        switch (g.kind) {
            case Gate::Kind::X:
                out << "x " << name(g.target) << ";\n";
                break;
            case Gate::Kind::MCX:
                if (g.controls.empty()) {
                    out << "x " << name(g.target) << ";\n";
                } else {
                    if (g.controls.size() > 1) out << "ctrl(" << g.controls.size() << ") @ x ";
                    else out << "ctrl @ x ";
                    for (int cq : g.controls) out << name(cq) << ", ";
                    out << name(g.target) << ";\n";
                }
                break;
            case Gate::Kind::Phase:
                std::snprintf(buf, sizeof buf, "%.12g", g.theta);
                out << "p(" << buf << ") " << name(g.target) << ";\n";
                break;
            case Gate::Kind::CRx:
                std::snprintf(buf, sizeof buf, "%.12g", g.theta);
                out << "ctrl @ rx(" << buf << ") ";
                for (int cq : g.controls) out << name(cq) << ", ";
                out << name(g.target) << ";\n";
                break;
        }
    }
    return out.str();
}

long decomposed_gate_cost(const Gate& g) {
    long k = static_cast<long>(g.controls.size());
    if (k >= 2) return 2 * k - 1;
    return 1;
}

ResourceCount trotter_resources(const RewriteSystem& sys, const Word& w, int N) {
    if (N < 1) throw DataError("step count must be at least 1");
    validate_word(sys, w);
    BinaryEncoding e = binary_encode(sys.alphabet);
    int m = e.bits_per_symbol;

    ResourceCount rc;
    rc.steps = N;
    rc.n_r = static_cast<int>(sys.templates.size() + sys.explicit_rules.size());
    rc.L_bits = static_cast<int>(w.size()) * m;
    rc.operator_count = static_cast<long>(N) * (2L * rc.n_r + 1);

    const double nominal_theta = 0.5;  // counts are structure-only
    auto tally = [&](const CircuitIR& c) {
        rc.total_gates_native += static_cast<long>(c.gates.size());
        for (const auto& g : c.gates) rc.total_gates_decomposed += decomposed_gate_cost(g);
        rc.multi_controlled_count += c.multi_controlled_count();
    };
    auto encode_pattern = [&](const std::string& pat) {
        std::string bits;
        for (char ch : pat) bits += e.code[static_cast<std::size_t>(sys.alphabet.index_of(ch))];
        return bits;
    };

    auto rule_blocks = [&](const std::string& lhs, const std::string& rhs) {
        std::string bl = encode_pattern(lhs), br = encode_pattern(rhs);
        rc.w_bits = std::max(rc.w_bits, static_cast<int>(bl.size()));
        tally(emit_projector_exponential(bl, br, nominal_theta));   // e^{i beta r}
        tally(emit_projector_exponential(bl, bl, nominal_theta));   // e^{-i beta r^2} ...
        tally(emit_projector_exponential(br, br, nominal_theta));   // ... as two phases
    };
    for (const auto& t : sys.templates) rule_blocks(t.lhs, t.rhs);
    for (const auto& r : sys.explicit_rules) rule_blocks(r.lhs, r.rhs);
    tally(emit_projector_exponential(e.encode_word(sys.alphabet, w),
                                     e.encode_word(sys.alphabet, w), nominal_theta));

    rc.total_gates_native *= N;
    rc.total_gates_decomposed *= N;
    rc.multi_controlled_count *= N;
    return rc;
}

}  // namespace orbit
