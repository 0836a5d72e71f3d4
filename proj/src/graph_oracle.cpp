#include "orbit/graph_oracle.hpp"

#include <cmath>
#include <complex>
#include <deque>
#include <random>
#include <unordered_map>
#include <unordered_set>

namespace orbit {

std::uint64_t word_index(const Alphabet& a, const Word& w) {
    std::uint64_t idx = 0;
    for (char c : w) {
        int k = a.index_of(c);
        if (k < 0) throw DataError(std::string("symbol '") + c + "' not in alphabet");
        idx = idx * static_cast<std::uint64_t>(a.size()) + static_cast<std::uint64_t>(k);
    }
    return idx;
}

Word index_word(const Alphabet& a, std::uint64_t idx, int L) {
    Word w(static_cast<std::size_t>(L), a.symbols[0]);
    for (int i = L - 1; i >= 0; --i) {
        w[i] = a.symbols[idx % a.size()];
        idx /= a.size();
    }
    return w;
}

EquivalenceClass enumerate_class(const RewriteSystem& sys, const Word& word,
                                 std::size_t node_limit) {
    validate_word(sys, word);
    if (node_limit < 1) throw DataError("node_limit must be >= 1");
    auto rules = instantiate(sys, static_cast<int>(word.size()));
    EquivalenceClass out;
    out.representative = word;
    std::unordered_set<Word> visited{word};
    std::deque<Word> frontier{word};
    out.members.push_back(word);
    while (!frontier.empty()) {
        Word w = std::move(frontier.front());
        frontier.pop_front();
        for (auto& nb : neighbors(rules, w)) {
            if (visited.insert(nb.word).second) {
                if (visited.size() > node_limit) {
                    out.truncated = true;
                    return out;
                }
                out.members.push_back(nb.word);
                frontier.push_back(std::move(nb.word));
            }
        }
    }
    return out;
}

namespace {

std::uint64_t checked_dim(const RewriteSystem& sys, int L, std::uint64_t cap) {
    if (L < 1) throw DataError("L must be >= 1");
    std::uint64_t dim = 1;
    for (int i = 0; i < L; ++i) {
        dim *= static_cast<std::uint64_t>(sys.alphabet.size());
        if (dim > cap)
            throw BudgetError("d^L = " + std::to_string(sys.alphabet.size()) + "^" +
                              std::to_string(L) + " exceeds the dense dimension cap");
    }
    return dim;
}

}  // namespace

DenseLaplacian build_dense_laplacian(const RewriteSystem& sys, int L, std::uint64_t cap) {
    std::uint64_t dim = checked_dim(sys, L, cap);
    auto rules = instantiate(sys, L);
    DenseLaplacian lap;
    lap.L = L;
    lap.d = sys.alphabet.size();
    lap.matrix = Eigen::MatrixXd::Zero(static_cast<long>(dim), static_cast<long>(dim));
    for (std::uint64_t k = 0; k < dim; ++k) {
        Word w = index_word(sys.alphabet, k, L);
        for (const auto& nb : neighbors(rules, w)) {
            std::uint64_t k2 = word_index(sys.alphabet, nb.word);
            lap.matrix(static_cast<long>(k), static_cast<long>(k)) += 1.0;
            lap.matrix(static_cast<long>(k), static_cast<long>(k2)) -= 1.0;
        }
    }
    return lap;
}

Eigen::VectorXd exact_orbit_state(const RewriteSystem& sys, const Word& word,
                                  std::size_t node_limit) {
    auto cls = enumerate_class(sys, word, node_limit);
    if (cls.truncated) throw BudgetError("equivalence class exceeds the node budget");
    int L = static_cast<int>(word.size());
    std::uint64_t dim = 1;
    for (int i = 0; i < L; ++i) dim *= static_cast<std::uint64_t>(sys.alphabet.size());
    Eigen::VectorXd psi = Eigen::VectorXd::Zero(static_cast<long>(dim));
    double amp = 1.0 / std::sqrt(static_cast<double>(cls.size()));
    for (const auto& m : cls.members)
        psi(static_cast<long>(word_index(sys.alphabet, m))) = amp;
    return psi;
}

namespace {

// Smallest nonzero eigenvalue of the Laplacian of one connected component,
// given as adjacency lists with multiplicities (local vertex ids).
double component_gap(const std::vector<std::vector<int>>& adj) {
    int n = static_cast<int>(adj.size());
    if (n <= 1) throw std::logic_error("component_gap needs >= 2 vertices");
    if (n <= 1024) {
        Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j : adj[i]) {
                lap(i, i) += 1.0;
                lap(i, j) -= 1.0;
            }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lap, Eigen::EigenvaluesOnly);
        const auto& ev = es.eigenvalues();
        double scale = std::max(1.0, std::abs(ev(n - 1)));
        for (int i = 0; i < n; ++i)
            if (ev(i) > 1e-9 * scale) return ev(i);
        throw std::logic_error("connected component with no positive eigenvalue");
    }

    // Deflated Lanczos on c*I - L: the largest eigenvalue orthogonal to the
    // constant vector is c - gap. Full reorthogonalization for stability.
    double max_deg = 0;
    for (int i = 0; i < n; ++i) max_deg = std::max(max_deg, static_cast<double>(adj[i].size()));
    const double c = 2.0 * max_deg + 1.0;
    auto matvec = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd y = c * x;
        for (int i = 0; i < n; ++i) {
            double li = static_cast<double>(adj[i].size()) * x(i);
            for (int j : adj[i]) li -= x(j);
            y(i) -= li;
        }
        return y;
    };
    const Eigen::VectorXd ones = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n)));
    std::mt19937_64 rng(0x5eed1234u);
    std::normal_distribution<double> gauss;
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = gauss(rng);
    v -= ones.dot(v) * ones;
    v.normalize();

    const int max_iter = std::min(n - 1, 600);
    std::vector<Eigen::VectorXd> basis;
    std::vector<double> alpha, beta;
    double prev_ritz = -1.0;
    basis.push_back(v);
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXd w = matvec(basis[it]);
        w -= ones.dot(w) * ones;
        double a = basis[it].dot(w);
        alpha.push_back(a);
        for (const auto& q : basis) w -= q.dot(w) * q;
        for (const auto& q : basis) w -= q.dot(w) * q;  // second pass
        double b = w.norm();
        int m = static_cast<int>(alpha.size());
        if (m >= 2 && (it % 5 == 4 || b < 1e-13 * c)) {
            Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
            for (int i = 0; i < m; ++i) {
                T(i, i) = alpha[i];
                if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T, Eigen::EigenvaluesOnly);
            double ritz = es.eigenvalues()(m - 1);
            if (std::abs(ritz - prev_ritz) < 1e-12 * c) return c - ritz;
            prev_ritz = ritz;
        }
        if (b < 1e-13 * c) break;
        beta.push_back(b);
        basis.push_back(w / b);
    }
    return c - prev_ritz;
}

}  // namespace

GapRecord spectral_gap(const RewriteSystem& sys, int L, std::uint64_t cap) {
    std::uint64_t dim = checked_dim(sys, L, cap);
    auto rules = instantiate(sys, L);
    std::vector<char> seen(dim, 0);
    double gap = std::numeric_limits<double>::infinity();
    bool any_edges = false;
    for (std::uint64_t start = 0; start < dim; ++start) {
        if (seen[start]) continue;
        // BFS this component, assigning local ids.
        std::unordered_map<std::uint64_t, int> local{{start, 0}};
        std::vector<std::uint64_t> order{start};
        std::vector<std::vector<int>> adj(1);
        seen[start] = 1;
        for (std::size_t head = 0; head < order.size(); ++head) {
            Word w = index_word(sys.alphabet, order[head], L);
            for (const auto& nb : neighbors(rules, w)) {
                std::uint64_t gk = word_index(sys.alphabet, nb.word);
                auto [it, inserted] = local.emplace(gk, static_cast<int>(order.size()));
                if (inserted) {
                    order.push_back(gk);
                    adj.emplace_back();
                    seen[gk] = 1;
                }
                adj[head].push_back(it->second);
            }
        }
        if (order.size() >= 2) {
            any_edges = true;
            gap = std::min(gap, component_gap(adj));
        }
    }
    if (!any_edges)
        throw DataError("graph has no edges at L = " + std::to_string(L) + "; gap undefined");
    return GapRecord{L, gap};
}

GapFit fit_gap_scaling(const std::vector<GapRecord>& records) {
    if (records.size() < 4) throw DataError("gap fit needs at least 4 records");
    {
        std::unordered_set<int> ls;
        for (const auto& r : records) {
            if (!(r.gap > 0)) throw DataError("gap fit needs positive gaps");
            if (!ls.insert(r.L).second) throw DataError("gap fit needs distinct L values");
        }
    }
    auto linear_fit = [&](auto xf) {
        // least squares of log(gap) = intercept + slope * xf(L)
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (const auto& r : records) {
            double x = xf(r.L), y = std::log(r.gap);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
        }
        double n = static_cast<double>(records.size());
        double denom = n * sxx - sx * sx;
        if (std::abs(denom) < 1e-30) throw DataError("degenerate gap fit data");
        double slope = (n * sxy - sx * sy) / denom;
        double intercept = (sy - slope * sx) / n;
        double ssr = 0;
        for (const auto& r : records) {
            double resid = std::log(r.gap) - (intercept + slope * xf(r.L));
            ssr += resid * resid;
        }
        return std::tuple{slope, intercept, ssr};
    };
    auto [ps, pi, pr] = linear_fit([](int L) { return std::log(static_cast<double>(L)); });
    auto [es, ei, er] = linear_fit([](int L) { return static_cast<double>(L); });
    GapFit fit;
    fit.poly_exponent = -ps;
    fit.poly_prefactor = std::exp(pi);
    fit.poly_residual = pr;
    fit.exp_rate = -es;
    fit.exp_prefactor = std::exp(ei);
    fit.exp_residual = er;
    return fit;
}

PerturbativeBound perturbative_bound(double h, double gap, double class_size) {
    if (!(h > 0 && h < 1)) throw DataError("perturbative bound needs 0 < h < 1");
    if (!(gap > 0)) throw DataError("perturbative bound needs gap > 0");
    if (!(class_size >= 1)) throw DataError("perturbative bound needs class_size >= 1");
    PerturbativeBound b;
    double om = (1.0 - h) * (1.0 - h) * gap * gap;
    b.loose = h / (om * class_size);
    b.tight = h * h * (1.0 / class_size - 1.0 / (class_size * class_size)) / om;
    b.regime_lhs = h / (1.0 - h);
    b.regime_rhs = gap * gap * class_size;
    b.regime_ok = b.regime_lhs < b.regime_rhs;
    return b;
}

PerturbedGround exact_perturbed_ground(const RewriteSystem& sys, const Word& word, double h,
                                       std::uint64_t cap) {
    validate_word(sys, word);
    if (!(h >= 0 && h < 1)) throw DataError("perturbed ground needs 0 <= h < 1");
    auto lap = build_dense_laplacian(sys, static_cast<int>(word.size()), cap);
    Eigen::MatrixXd ham = (1.0 - h) * lap.matrix;
    long k = static_cast<long>(word_index(sys.alphabet, word));
    ham(k, k) -= h;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ham);
    const auto& ev = es.eigenvalues();
    double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    PerturbedGround out;
    out.degenerate = ev.size() >= 2 && (ev(1) - ev(0)) < 1e-10 * scale;
    out.state = es.eigenvectors().col(0);
    Eigen::VectorXd orbit = exact_orbit_state(sys, word);
    double ov = orbit.dot(out.state);
    out.deformation = std::max(0.0, 1.0 - ov * ov);
    return out;
}

AnnealerFidelityResult simulate_annealer_fidelity(const RewriteSystem& s1, const Word& w1,
                                                  const RewriteSystem& s2, const Word& w2,
                                                  double tau1, double tau2, int steps, int shots,
                                                  std::uint64_t seed, std::uint64_t cap) {
    if (w1.size() != w2.size()) throw DataError("word lengths differ");
    if (s1.alphabet != s2.alphabet) throw DataError("alphabets differ");
    if (!(tau1 > 0 && tau2 > 0)) throw DataError("annealing times must be positive");
    if (steps < 1 || shots < 1) throw DataError("steps and shots must be >= 1");
    int L = static_cast<int>(w1.size());
    auto lap1 = build_dense_laplacian(s1, L, cap);
    auto lap2 = build_dense_laplacian(s2, L, cap);
    long dim = lap1.matrix.rows();
    long k1 = static_cast<long>(word_index(s1.alphabet, w1));
    long k2 = static_cast<long>(word_index(s2.alphabet, w2));

    using VecC = Eigen::VectorXcd;
    const std::complex<double> mi(0.0, -1.0);
    auto rhs = [&](const Eigen::MatrixXd& lap, long proj, double h, const VecC& psi) {
        VecC y = (1.0 - h) * (lap * psi);
        y(proj) -= h * psi(proj);
        return VecC(mi * y);
    };
    auto rk4_leg = [&](VecC& psi, const Eigen::MatrixXd& lap, long proj, double tau,
                       bool h_down) {
        double dt = tau / steps;
        auto h_of = [&](double t) { return h_down ? (tau - t) / tau : t / tau; };
        for (int s = 0; s < steps; ++s) {
            double t = s * dt;
            VecC v1 = rhs(lap, proj, h_of(t), psi);
            VecC v2 = rhs(lap, proj, h_of(t + dt / 2), psi + (dt / 2) * v1);
            VecC v3 = rhs(lap, proj, h_of(t + dt / 2), psi + (dt / 2) * v2);
            VecC v4 = rhs(lap, proj, h_of(t + dt), psi + dt * v3);
            psi += (dt / 6.0) * (v1 + 2.0 * v2 + 2.0 * v3 + v4);
        }
    };

    VecC psi = VecC::Zero(dim);
    psi(k2) = 1.0;
    rk4_leg(psi, lap2.matrix, k2, tau2, /*h_down=*/true);
    rk4_leg(psi, lap1.matrix, k1, tau1, /*h_down=*/false);

    AnnealerFidelityResult out;
    out.norm_drift = std::abs(psi.squaredNorm() - 1.0);
    out.exact = std::norm(psi(k1));

    std::vector<double> probs(static_cast<std::size_t>(dim));
    for (long i = 0; i < dim; ++i) probs[static_cast<std::size_t>(i)] = std::norm(psi(i));
    std::mt19937_64 rng(seed);
    std::discrete_distribution<long> dist(probs.begin(), probs.end());
    long hits = 0;
    for (int s = 0; s < shots; ++s)
        if (dist(rng) == k1) ++hits;
    out.estimate = static_cast<double>(hits) / shots;

    auto c1 = enumerate_class(s1, w1);
    auto c2 = enumerate_class(s2, w2);
    std::unordered_set<Word> set1(c1.members.begin(), c1.members.end());
    std::size_t inter = 0;
    for (const auto& m : c2.members) inter += set1.count(m);
    out.orbit_fidelity = static_cast<double>(inter) * static_cast<double>(inter) /
                         (static_cast<double>(c1.size()) * static_cast<double>(c2.size()));
    out.adiabatic = std::abs(out.exact - out.orbit_fidelity) <= 3.0 / std::sqrt(double(shots));
    return out;
}

}  // namespace orbit
