#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "orbit/srs.hpp"

namespace orbit {

// Canonical basis enumeration: the base-d big-endian reading of the word
// (leftmost character most significant).
std::uint64_t word_index(const Alphabet& a, const Word& w);
Word index_word(const Alphabet& a, std::uint64_t idx, int L);

struct EquivalenceClass {
    Word representative;
    std::vector<Word> members;  // BFS discovery order
    bool truncated = false;     // node budget hit; members holds the partial set

    std::size_t size() const { return members.size(); }
};

/// BFS from `word` over single-step rewrites. Throws nothing on truncation;
/// the caller checks `truncated`.
EquivalenceClass enumerate_class(const RewriteSystem& sys, const Word& word,
                                 std::size_t node_limit = 10'000'000);

struct DenseLaplacian {
    int L = 0;
    int d = 0;
    Eigen::MatrixXd matrix;  // d^L x d^L, canonical basis order
};

constexpr std::uint64_t kDefaultDenseCap = 1u << 20;

/// The graph Laplacian over all words of length L: degrees on the diagonal,
/// minus edge multiplicities off it. Throws BudgetError above the cap.
DenseLaplacian build_dense_laplacian(const RewriteSystem& sys, int L,
                                     std::uint64_t cap = kDefaultDenseCap);

/// Dense orbit state: amplitude 1/sqrt(|X|) on each class member.
Eigen::VectorXd exact_orbit_state(const RewriteSystem& sys, const Word& word,
                                  std::size_t node_limit = 10'000'000);

struct GapRecord {
    int L;
    double gap;  // smallest nonzero Laplacian eigenvalue
};

/// Exact first gap. Works per connected component (dense for small
/// components, deflated Lanczos for large ones), so it scales with the
/// largest class rather than d^L. Throws DataError when the graph has no
/// edges at this L.
GapRecord spectral_gap(const RewriteSystem& sys, int L,
                       std::uint64_t cap = kDefaultDenseCap);

struct GapFit {
    double poly_exponent;    // gap ~ poly_prefactor * L^(-poly_exponent)
    double poly_prefactor;
    double poly_residual;    // sum of squared residuals of log(gap) vs fit
    double exp_rate;         // gap ~ exp_prefactor * exp(-exp_rate * L)
    double exp_prefactor;
    double exp_residual;
};

/// Least-squares fits of gap(L) against a power law and an exponential,
/// both linear in log(gap); residuals are summed in log space.
GapFit fit_gap_scaling(const std::vector<GapRecord>& records);

struct PerturbativeBound {
    double loose;       // h / ((1-h)^2 gap^2 |X|)
    double tight;       // h^2 (1/|X| - 1/|X|^2) / ((1-h)^2 gap^2)
    double regime_lhs;  // h / (1-h)
    double regime_rhs;  // gap^2 |X|
    bool regime_ok;     // regime_lhs < regime_rhs
};

PerturbativeBound perturbative_bound(double h, double gap, double class_size);

struct PerturbedGround {
    Eigen::VectorXd state;
    double deformation;  // 1 - |<orbit|ground>|^2
    bool degenerate;     // perturbed ground space is (numerically) degenerate
};

/// Exact ground state of (1-h) L - h |word><word| by dense diagonalization.
PerturbedGround exact_perturbed_ground(const RewriteSystem& sys, const Word& word, double h,
                                       std::uint64_t cap = kDefaultDenseCap);

struct AnnealerFidelityResult {
    double exact;           // Born probability of w1 after the two-leg schedule
    double estimate;        // shots-based frequency estimate, seeded
    double orbit_fidelity;  // |<X1|X2>|^2 from exact orbit states
    bool adiabatic;         // |exact - orbit_fidelity| <= 3/sqrt(shots)
    double norm_drift;      // integrator self-check
};

/// Statevector simulation of the two-leg annealing schedule: |w2> evolves
/// under H_{S2,w2}(t) for tau2 (h: 1 -> 0), then under H_{S1,w1}(tau1 - t)
/// for tau1 (h: 0 -> 1); the result is measured against |w1>. Fixed-step
/// RK4 with `steps` steps per leg.
AnnealerFidelityResult simulate_annealer_fidelity(const RewriteSystem& s1, const Word& w1,
                                                  const RewriteSystem& s2, const Word& w2,
                                                  double tau1, double tau2, int steps, int shots,
                                                  std::uint64_t seed,
                                                  std::uint64_t cap = kDefaultDenseCap);

}  // namespace orbit
