#include "orbit/hamiltonian.hpp"

#include <unsupported/Eigen/KroneckerProduct>

namespace orbit {

using Mat = Eigen::MatrixXd;

namespace {

// d x d matrix |p><q|
Mat unit_matrix(int d, int p, int q) {
    if (p < 0 || q < 0 || p >= d || q >= d) throw DataError("symbol outside the alphabet");
    Mat m = Mat::Zero(d, d);
    m(p, q) = 1.0;
    return m;
}

ProductTerm transition_term(const Alphabet& a, const RuleInstance& r, bool forward, double coeff) {
    // forward: |rhs><lhs| ; backward: |lhs><rhs|
    ProductTerm t;
    t.coeff = coeff;
    int d = a.size();
    for (int k = 0; k < r.width(); ++k) {
        int u = a.index_of(forward ? r.rhs[k] : r.lhs[k]);
        int v = a.index_of(forward ? r.lhs[k] : r.rhs[k]);
        t.factors[r.positions[k]] = unit_matrix(d, u, v);
    }
    return t;
}

ProductTerm diagonal_term(const Alphabet& a, const RuleInstance& r, bool rhs_side, double coeff) {
    ProductTerm t;
    t.coeff = coeff;
    int d = a.size();
    for (int k = 0; k < r.width(); ++k) {
        int u = a.index_of(rhs_side ? r.rhs[k] : r.lhs[k]);
        t.factors[r.positions[k]] = unit_matrix(d, u, u);
    }
    return t;
}

}  // namespace

OperatorSum rule_operator(const Alphabet& a, const RuleInstance& r, int L) {
    OperatorSum h{L, a.size(), {}};
    h.terms.push_back(transition_term(a, r, true, 1.0));
    h.terms.push_back(transition_term(a, r, false, 1.0));
    return h;
}

OperatorSum rule_laplacian(const Alphabet& a, const RuleInstance& r, int L) {
    OperatorSum h{L, a.size(), {}};
    h.terms.push_back(diagonal_term(a, r, false, 1.0));
    h.terms.push_back(diagonal_term(a, r, true, 1.0));
    h.terms.push_back(transition_term(a, r, true, -1.0));
    h.terms.push_back(transition_term(a, r, false, -1.0));
    return h;
}

OperatorSum laplacian(const RewriteSystem& sys, int L) {
    OperatorSum h{L, sys.alphabet.size(), {}};
    for (const auto& inst : instantiate(sys, L)) {
        OperatorSum part = rule_laplacian(sys.alphabet, inst, L);
        h.terms.insert(h.terms.end(), part.terms.begin(), part.terms.end());
    }
    return h;
}

OperatorSum word_projector(const Alphabet& a, const Word& w) {
    OperatorSum h{static_cast<int>(w.size()), a.size(), {}};
    ProductTerm t;
    for (int i = 0; i < static_cast<int>(w.size()); ++i) {
        int p = a.index_of(w[i]);
        t.factors[i] = unit_matrix(a.size(), p, p);
    }
    h.terms.push_back(std::move(t));
    return h;
}

Eigen::MatrixXd dense_operator(const OperatorSum& h) {
    double dim = std::pow(static_cast<double>(h.d), h.L);
    if (dim > static_cast<double>(1 << 14)) throw BudgetError("dense operator too large");
    long n = static_cast<long>(dim);
    Mat out = Mat::Zero(n, n);
    Mat id = Mat::Identity(h.d, h.d);
    for (const auto& t : h.terms) {
        Mat acc = Mat::Ones(1, 1);
        for (int i = 0; i < h.L; ++i) {
            auto it = t.factors.find(i);
            const Mat& f = (it == t.factors.end()) ? id : it->second;
            acc = Eigen::kroneckerProduct(acc, f).eval();
        }
        out += t.coeff * acc;
    }
    return out;
}

MPO compile_mpo(const OperatorSum& h, double tol) {
    int L = h.L, d = h.d;
    if (L < 1 || d < 1) throw DataError("empty operator");
    Mat id = Mat::Identity(d, d);
    long nt = static_cast<long>(h.terms.size());

    std::vector<int> smin(nt, 0), smax(nt, 0);
    for (long t = 0; t < nt; ++t) {
        const auto& f = h.terms[t].factors;
        if (!f.empty()) {
            smin[t] = f.begin()->first;
            smax[t] = f.rbegin()->first;
            if (smin[t] < 0 || smax[t] >= L) throw DataError("term support outside the chain");
        }
    }

    // FSM states at each bond b: "before" (identity prefix), "after"
    // (identity suffix), plus one lane per term whose support crosses b.
    auto lanes_at = [&](int b) {
        std::vector<long> v;
        if (b > 0 && b < L)
            for (long t = 0; t < nt; ++t)
                if (smin[t] < b && b <= smax[t]) v.push_back(t);
        return v;
    };
    auto width_at = [&](int b) {
        if (b == 0 || b == L) return static_cast<long>(1);
        return static_cast<long>(2 + lanes_at(b).size());
    };

    MPO m;
    m.d = d;
    m.sites.resize(L);
    for (int i = 0; i < L; ++i) {
        std::vector<long> left_lanes = lanes_at(i), right_lanes = lanes_at(i + 1);
        long kl = width_at(i), kr = width_at(i + 1);
        auto lidx = [&](long t) {  // lane index at the left bond
            for (std::size_t k = 0; k < left_lanes.size(); ++k)
                if (left_lanes[k] == t) return 2 + static_cast<long>(k);
            throw DataError("internal: missing left lane");
        };
        auto ridx = [&](long t) {
            for (std::size_t k = 0; k < right_lanes.size(); ++k)
                if (right_lanes[k] == t) return 2 + static_cast<long>(k);
            throw DataError("internal: missing right lane");
        };
        long before_l = 0;
        long after_l = (i == 0) ? -1 : ((i == L) ? 0 : 1);
        long before_r = (i + 1 == L) ? -1 : 0;
        long after_r = (i + 1 == L) ? 0 : 1;

        MpoSite s;
        s.d = d;
        s.kl = static_cast<int>(kl);
        s.kr = static_cast<int>(kr);
        s.v = Eigen::VectorXd::Zero(kl * d * d * kr);
        auto add = [&](long a, long b, const Mat& f, double c) {
            for (int p = 0; p < d; ++p)
                for (int q = 0; q < d; ++q)
                    s.v(((a * d + p) * d + q) * kr + b) += c * f(p, q);
        };
        if (before_r >= 0) add(before_l, before_r, id, 1.0);
        if (after_l >= 0) add(after_l, after_r, id, 1.0);
        for (long t = 0; t < nt; ++t) {
            const auto& term = h.terms[t];
            auto it = term.factors.find(i);
            if (smin[t] == i && smax[t] == i) {
                Mat f = (it == term.factors.end()) ? id : it->second;
                add(before_l, after_r, f, term.coeff);
            } else if (smin[t] == i) {
                add(before_l, ridx(t), it->second, term.coeff);
            } else if (smax[t] == i) {
                add(lidx(t), after_r, it->second, 1.0);
            } else if (smin[t] < i && i < smax[t]) {
                add(lidx(t), ridx(t), (it == term.factors.end()) ? id : it->second, 1.0);
            }
        }
        s.build_cache();
        m.sites[i] = std::move(s);
    }
    // Rank reduction only removes linearly dependent lanes at these
    // tolerances; tol = 0 keeps the raw automaton form.
    if (tol > 0.0) compress_mpo(m, tol);
    return m;
}

MPO annealing_mpo(const MPO& lap, const MPO& proj, double h, double tol) {
    if (h < 0.0 || h > 1.0) throw DataError("interpolation parameter h must lie in [0, 1]");
    MPO m = add_mpo(scale_mpo(lap, 1.0 - h), scale_mpo(proj, -h));
    if (tol > 0.0) compress_mpo(m, tol);
    return m;
}

MPO counting_observable(int L, int d) {
    if (d != 2)
        throw DataError("counting observable is defined for binary alphabets only; "
                        "use the uniform-state fidelity route instead");
    MPO m;
    m.d = d;
    m.sites.resize(L);
    for (auto& s : m.sites) {
        s.kl = s.kr = 1;
        s.d = d;
        s.v = Eigen::VectorXd::Ones(static_cast<long>(d) * d);
        s.build_cache();
    }
    return m;
}

MPO site_filter_mpo(const Alphabet& a, const std::vector<std::vector<char>>& allowed) {
    int d = a.size();
    MPO m;
    m.d = d;
    m.sites.resize(allowed.size());
    for (std::size_t i = 0; i < allowed.size(); ++i) {
        MpoSite s;
        s.kl = s.kr = 1;
        s.d = d;
        s.v = Eigen::VectorXd::Zero(static_cast<long>(d) * d);
        for (char c : allowed[i]) {
            int p = a.index_of(c);
            s.v(static_cast<long>(p) * d + p) = 1.0;
        }
        s.build_cache();
        m.sites[i] = std::move(s);
    }
    return m;
}

}  // namespace orbit
