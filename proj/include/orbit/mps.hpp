#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "orbit/srs.hpp"

namespace orbit {

/// Permute a flat row-major tensor (first index slowest). perm[k] names the
/// old axis placed at new position k.
Eigen::VectorXd permute(const Eigen::VectorXd& v, const std::vector<int>& dims,
                        const std::vector<int>& perm);

/// Reshapes between the two matricizations of a (bl, d, br) tensor:
/// left (bl*d x br, row l*d+p) and right (bl x d*br, column p*br+r).
Eigen::MatrixXd to_right_matricization(const Eigen::MatrixXd& m, int bl, int d, int br);
Eigen::MatrixXd to_left_matricization(const Eigen::MatrixXd& m, int bl, int d, int br);

/// Row-major flattening of a matrix (row index slowest) and its inverse.
Eigen::VectorXd flat_row_major(const Eigen::MatrixXd& m);
Eigen::MatrixXd unflat_row_major(const Eigen::VectorXd& v, long rows, long cols);

struct SvdFactor {
    Eigen::MatrixXd u;       // rows x k, orthonormal columns
    Eigen::VectorXd s;       // kept singular values, nonincreasing
    Eigen::MatrixXd v;       // cols x k, orthonormal columns
    double kept_fraction;    // kept squared weight / total squared weight
};

/// Truncated SVD: keeps at most chi values (chi <= 0 means no cap) above the
/// relative cutoff tol, and always at least one.
SvdFactor svd_split(const Eigen::MatrixXd& m, int chi, double tol);

/// One MPO site: rank-4 tensor (kl, d_out, d_in, kr), flat row-major.
struct MpoSite {
    int kl = 1, d = 1, kr = 1;
    Eigen::VectorXd v;   // ((a*d + p)*d + q)*kr + b, p = output (bra), q = input (ket)
    Eigen::MatrixXd wm;  // cached (kl*d_in) x (d_out*kr): (a*d+q, p*kr+b)

    double at(int a, int p, int q, int b) const {
        return v(((static_cast<long>(a) * d + p) * d + q) * kr + b);
    }
    void build_cache();
};

struct MPO {
    int d = 1;
    std::vector<MpoSite> sites;
    int L() const { return static_cast<int>(sites.size()); }
};

MPO identity_mpo(int L, int d);
MPO scale_mpo(MPO m, double s);
/// Direct-sum addition: bond dimensions add, no compression.
MPO add_mpo(const MPO& a, const MPO& b);
/// SVD compression sweep with relative singular-value cutoff tol.
/// Returns the total squared Frobenius weight fraction discarded.
double compress_mpo(MPO& m, double tol);
Eigen::MatrixXd mpo_dense(const MPO& m);

/// Open-chain matrix product state, real amplitudes. Sites are stored in
/// left matricization: (chi_left * d) x chi_right, row index l*d + p.
/// The represented state is kept at unit norm; norm_log accumulates the log
/// of stripped scale factors (imaginary-time evolution bookkeeping).
struct MPS {
    int d = 1;
    std::vector<Eigen::MatrixXd> sites;
    int center = -1;  // mixed-canonical center, or -1 when unknown
    double norm_log = 0.0;

    int L() const { return static_cast<int>(sites.size()); }
    int bond_dim(int b) const {  // b in [0, L]
        if (b == 0) return 1;
        return static_cast<int>(sites[b - 1].cols());
    }
    int max_bond() const;
};

MPS product_mps(const Alphabet& a, const Word& w);
MPS product_mps(int d, const std::vector<int>& basis);
MPS all_state_mps(int L, int d);

/// Bring to mixed-canonical form with the given center; renormalizes and
/// accumulates norm_log.
void canonicalize(MPS& x, int center);

/// Overlap <a|b> of the represented unit-norm states (norm_log ignored).
double inner(const MPS& a, const MPS& b);

/// <x|H|x> for the represented unit-norm state.
double expectation(const MPS& x, const MPO& h);

struct ApplyResult {
    MPS state;       // normalized
    double norm_sq;  // squared norm of H|x> before renormalization
};

/// Exact MPO application followed by an SVD compression sweep down to the
/// bond cap; norm_sq is measured before the renormalization.
ApplyResult apply_mpo(const MPO& h, const MPS& x, int chi, double tol = 1e-14);

std::vector<Word> sample(const MPS& x, const Alphabet& a, int n, std::uint64_t seed);
std::vector<std::vector<int>> sample_indices(const MPS& x, int n, std::uint64_t seed);

struct SchmidtSpectrum {
    int bond;                    // cut between sites bond-1 and bond, in [1, L-1]
    std::vector<double> values;  // nonincreasing, sum of squares = 1
};

SchmidtSpectrum schmidt_spectrum(const MPS& x, int cut);
double entropy_bits(const SchmidtSpectrum& s);

/// -log2 Tr(rho_region^2) for the contiguous region [first, last] (0-based,
/// inclusive). Boundary regions go through the Schmidt spectrum; interior
/// regions use a four-copy transfer contraction.
double renyi2(const MPS& x, int first, int last);

struct TruncationResult {
    double discarded_weight;
};

/// Sweep with singular-value truncation to bond cap chi; result renormalized.
TruncationResult truncate(MPS& x, int chi, double tol = 1e-14);

/// Enrich every bond basis of x with directions taken from z (typically
/// H|x>), leaving the represented state exactly unchanged (new directions
/// carry zero weight). Needed so a local sweeping integrator can scatter
/// into configurations produced by operators spanning more than two sites.
/// New bond dimensions are capped at chi (0 = no cap). x ends with canonical
/// center 0.
void expand_basis(MPS& x, const MPS& z, int chi);

/// Dense statevector of the represented unit-norm state (guarded to d^L <= 2^22).
Eigen::VectorXd mps_dense(const MPS& x);

void save_mps(const MPS& x, const std::string& path, std::uint64_t seed);
MPS load_mps(const std::string& path, std::uint64_t* seed_out = nullptr);

// ---- contraction environments (shared by expectation and the evolver) ----

/// Environment block E[i, a, j] of <bra| H |ket> at a bond (i = bra bond
/// index, a = MPO bond index, j = ket bond index), flattened (b*k) x b2.
struct Env {
    int b = 1, k = 1, b2 = 1;
    Eigen::MatrixXd m;
    static Env boundary() {
        Env e;
        e.m = Eigen::MatrixXd::Ones(1, 1);
        return e;
    }
};

Env env_update_left(const Env& e, const Eigen::MatrixXd& bra, const MpoSite& w,
                    const Eigen::MatrixXd& ket);
Env env_update_right(const Env& e, const Eigen::MatrixXd& bra, const MpoSite& w,
                     const Eigen::MatrixXd& ket);

/// y = H_eff x for the two-site block (le, w1, w2, re); x flat (bl,d,d,br).
Eigen::VectorXd heff2_matvec(const Env& le, const MpoSite& w1, const MpoSite& w2, const Env& re,
                             const Eigen::VectorXd& x, int bl, int br);
/// y = H_eff x for the one-site block (le, w, re); x flat (bl,d,br).
Eigen::VectorXd heff1_matvec(const Env& le, const MpoSite& w, const Env& re,
                             const Eigen::VectorXd& x, int bl, int br);

}  // namespace orbit
