#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "orbit/hamiltonian.hpp"
#include "orbit/mps.hpp"
#include "orbit/srs.hpp"

namespace orbit {

/// Linear ramp h(t) = 1 - t/tau: the state starts pinned to the input word
/// (h = 1) and ends under the pure Laplacian (h = 0).
struct AnnealSchedule {
    double tau = 50.0;
    double dt = 0.5;
    int chi = 0;  // bond cap; 0 = unconstrained
    std::uint64_t seed = 0;
    double eps_energy = 2e-4;   // residual-energy gate
    double eps_nc = 0.05;       // out-of-class sample-fraction gate
    int n_samples = 1000;       // gate sample count
};

struct TracePoint {
    double t = 0;
    double h = 0;
    double energy = 0;    // <psi| L |psi>
    double norm_log = 0;  // accumulated log of stripped scale factors
    int max_bond = 1;
    double max_entropy = 0;  // bits, max over cuts
};

struct QualityGate {
    double energy = 0;
    double p_nc = 0;  // fraction of gate samples outside the class
    double p_nc_stderr = 0;
    bool energy_ok = false;
    bool samples_ok = false;
    bool accepted = false;
};

struct AnnealResult {
    MPS state;
    std::vector<TracePoint> trace;
    QualityGate gate;
};

/// One symmetric two-site TDVP step of imaginary-time evolution under the
/// (fixed) MPO h: a left-to-right half sweep with dt/2 followed by a
/// right-to-left half sweep with dt/2. The state is renormalized locally and
/// ends with canonical center 0. With `backward = false` the single-site
/// backward (positive-exponent) corrections are skipped; the sweep then acts
/// as a pure local decay toward the ground space, which stays numerically
/// stable for arbitrarily large dt (the backward exponential would overflow).
void tdvp_step(MPS& x, const MPO& h, double dt, int chi, bool backward = true);

/// <x|L|x> clipped at zero against roundoff.
double dirichlet_energy(const MPS& x, const MPO& lap_mpo);

/// Membership test for the input word's equivalence class.
using ClassChecker = std::function<bool(const Word&)>;

/// Default checker: Knuth-Bendix normal forms when completion fits the
/// budget, exhaustive BFS otherwise.
ClassChecker make_class_checker(const RewriteSystem& sys, const Word& w);

QualityGate evaluate_gate(const MPS& x, const MPO& lap_mpo, const RewriteSystem& sys,
                          const ClassChecker& in_class, const AnnealSchedule& sched);

/// Imaginary-time quantum annealing: evolve |w> under
/// H(h) = (1-h) L - h |w><w| along the linear ramp, then relax under the
/// pure Laplacian (h = 0) for up to another tau, stopping early when the
/// residual energy is negligible or stalls. The relaxation generator is
/// block-diagonal over graph components, so it only polishes the state
/// toward the orbit superposition of the input word's own component.
/// Trace checkpoints and the final quality gate are recorded; `checker` may
/// be empty (the default is built).
AnnealResult run_iqa(const RewriteSystem& sys, const Word& w, const AnnealSchedule& sched,
                     ClassChecker checker = {});

}  // namespace orbit
