#include "orbit/evolution.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <memory>
#include <unordered_set>

#include "orbit/graph_oracle.hpp"
#include "orbit/knuth_bendix.hpp"

namespace orbit {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

namespace {

/// exp(a*H) v via a Lanczos Krylov expansion with full reorthogonalization.
Vec lanczos_expm(const std::function<Vec(const Vec&)>& mv, const Vec& v0, double a,
                 double tol = 1e-11, int maxit = 40) {
    double beta0 = v0.norm();
    if (beta0 == 0) return v0;
    long n = v0.size();
    int m = static_cast<int>(std::min<long>(maxit, n));
    std::vector<Vec> basis;
    basis.push_back(v0 / beta0);
    std::vector<double> alpha, beta;
    Vec prev;
    for (int j = 0; j < m; ++j) {
        Vec w = mv(basis[j]);
        double aj = basis[j].dot(w);
        alpha.push_back(aj);
        w -= aj * basis[j];
        if (j > 0) w -= beta[j - 1] * basis[j - 1];
        for (const auto& q : basis) w -= q.dot(w) * q;
        double bj = w.norm();

        int k = j + 1;
        Mat t = Mat::Zero(k, k);
        for (int i = 0; i < k; ++i) {
            t(i, i) = alpha[i];
            if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Mat> es(t);
        Vec expd = (a * es.eigenvalues().array()).exp();
        Vec coef = es.eigenvectors() * expd.cwiseProduct(es.eigenvectors().row(0).transpose());
        Vec res = Vec::Zero(n);
        for (int i = 0; i < k; ++i) res += coef(i) * basis[i];
        res *= beta0;
        if (j > 0 && (res - prev).norm() <= tol * res.norm()) return res;
        prev = std::move(res);
        if (bj < 1e-13 * beta0) break;
        beta.push_back(bj);
        basis.push_back(w / bj);
    }
    return prev;
}

std::vector<double> all_cut_entropies(MPS y) {
    canonicalize(y, 0);
    std::vector<double> out;
    for (int i = 0; i + 1 < y.L(); ++i) {
        auto f = svd_split(y.sites[i], 0, 0.0);
        SchmidtSpectrum sp;
        sp.bond = i + 1;
        double nrm = f.s.norm();
        for (int k = 0; k < f.s.size(); ++k)
            if (f.s(k) > 0) sp.values.push_back(f.s(k) / nrm);
        out.push_back(entropy_bits(sp));
        y.sites[i] = f.u;
        Mat carry = (f.s / nrm).asDiagonal() * f.v.transpose();
        int bl2 = static_cast<int>(carry.cols());
        int br2 = static_cast<int>(y.sites[i + 1].cols());
        Mat right = to_right_matricization(y.sites[i + 1], bl2, y.d, br2);
        y.sites[i + 1] = to_left_matricization(carry * right, static_cast<int>(carry.rows()), y.d, br2);
    }
    return out;
}

}  // namespace

void tdvp_step(MPS& x, const MPO& h, double dt, int chi, bool backward) {
    int L = x.L(), d = x.d;
    if (h.L() != L || h.d != d) throw DataError("state/operator shapes differ");
    canonicalize(x, 0);
    std::vector<Env> le(L + 1), re(L + 1);
    le[0] = Env::boundary();
    re[L] = Env::boundary();
    for (int i = L - 1; i >= 1; --i)
        re[i] = env_update_right(re[i + 1], x.sites[i], h.sites[i], x.sites[i]);
    double half = dt / 2.0;

    auto strip_norm = [&x](Vec& v) {
        double nrm = v.norm();
        if (nrm < 1e-300) throw DataError("evolution annihilated the state");
        x.norm_log += std::log(nrm);
        v /= nrm;
    };

    // left-to-right half sweep
    for (int i = 0; i + 1 < L; ++i) {
        int bl = static_cast<int>(x.sites[i].rows()) / d;
        int bm = static_cast<int>(x.sites[i].cols());
        int br = static_cast<int>(x.sites[i + 1].cols());
        Mat theta = x.sites[i] * to_right_matricization(x.sites[i + 1], bm, d, br);
        Vec t = flat_row_major(theta);
        auto mv2 = [&](const Vec& v) {
            return heff2_matvec(le[i], h.sites[i], h.sites[i + 1], re[i + 2], v, bl, br);
        };
        t = lanczos_expm(mv2, t, -half);
        strip_norm(t);
        auto f = svd_split(unflat_row_major(t, static_cast<long>(bl) * d, static_cast<long>(d) * br),
                           chi, 1e-14);
        int k = static_cast<int>(f.s.size());
        x.sites[i] = f.u;
        Mat c = (f.s / f.s.norm()).asDiagonal() * f.v.transpose();  // k x (d*br)
        Mat center = to_left_matricization(c, k, d, br);
        le[i + 1] = env_update_left(le[i], x.sites[i], h.sites[i], x.sites[i]);
        if (backward && i + 2 < L) {
            Vec cv = flat_row_major(center);
            auto mv1 = [&](const Vec& v) {
                return heff1_matvec(le[i + 1], h.sites[i + 1], re[i + 2], v, k, br);
            };
            cv = lanczos_expm(mv1, cv, +half);
            strip_norm(cv);
            center = unflat_row_major(cv, static_cast<long>(k) * d, br);
        }
        x.sites[i + 1] = center;
    }
    x.center = L - 1;

    // right-to-left half sweep
    for (int i = L - 2; i >= 0; --i) {
        int bl = static_cast<int>(x.sites[i].rows()) / d;
        int bm = static_cast<int>(x.sites[i].cols());
        int br = static_cast<int>(x.sites[i + 1].cols());
        Mat theta = x.sites[i] * to_right_matricization(x.sites[i + 1], bm, d, br);
        Vec t = flat_row_major(theta);
        auto mv2 = [&](const Vec& v) {
            return heff2_matvec(le[i], h.sites[i], h.sites[i + 1], re[i + 2], v, bl, br);
        };
        t = lanczos_expm(mv2, t, -half);
        strip_norm(t);
        auto f = svd_split(unflat_row_major(t, static_cast<long>(bl) * d, static_cast<long>(d) * br),
                           chi, 1e-14);
        int k = static_cast<int>(f.s.size());
        x.sites[i + 1] = to_left_matricization(f.v.transpose(), k, d, br);  // right-isometric
        Mat center = f.u * (f.s / f.s.norm()).asDiagonal();                 // (bl*d) x k
        re[i + 1] = env_update_right(re[i + 2], x.sites[i + 1], h.sites[i + 1], x.sites[i + 1]);
        if (backward && i > 0) {
            Vec cv = flat_row_major(center);
            auto mv1 = [&](const Vec& v) {
                return heff1_matvec(le[i], h.sites[i], re[i + 1], v, bl, k);
            };
            cv = lanczos_expm(mv1, cv, +half);
            strip_norm(cv);
            center = unflat_row_major(cv, static_cast<long>(bl) * d, k);
        }
        x.sites[i] = center;
    }
    x.center = 0;
    double nrm = x.sites[0].norm();
    x.sites[0] /= nrm;
    x.norm_log += std::log(nrm);
}

double dirichlet_energy(const MPS& x, const MPO& lap_mpo) {
    double e = expectation(x, lap_mpo);
    if (e < 0 && e > -1e-9) e = 0;
    return e;
}

ClassChecker make_class_checker(const RewriteSystem& sys, const Word& w) {
    validate_word(sys, w);
    int L = static_cast<int>(w.size());
    TermOrder order{sys.alphabet.symbols};
    try {
        auto [cs, metrics] = complete(sys, order, L);
        (void)metrics;
        auto share = std::make_shared<ConfluentSystem>(std::move(cs));
        Word nf = normal_form(*share, w);
        return [share, nf](const Word& x) { return normal_form(*share, x) == nf; };
    } catch (const std::exception&) {
        // completion out of budget or non-contiguous rules: exhaustive BFS
        auto cls = enumerate_class(sys, w);
        if (cls.truncated) throw BudgetError("class too large for membership checking");
        auto set = std::make_shared<std::unordered_set<Word>>(cls.members.begin(), cls.members.end());
        return [set](const Word& x) { return set->count(x) > 0; };
    }
}

QualityGate evaluate_gate(const MPS& x, const MPO& lap_mpo, const RewriteSystem& sys,
                          const ClassChecker& in_class, const AnnealSchedule& sched) {
    QualityGate g;
    g.energy = dirichlet_energy(x, lap_mpo);
    auto words = sample(x, sys.alphabet, sched.n_samples, sched.seed);
    int bad = 0;
    for (const auto& w : words)
        if (!in_class(w)) ++bad;
    g.p_nc = static_cast<double>(bad) / sched.n_samples;
    g.p_nc_stderr = std::sqrt(g.p_nc * (1.0 - g.p_nc) / sched.n_samples);
    g.energy_ok = g.energy <= sched.eps_energy;
    g.samples_ok = g.p_nc <= sched.eps_nc;
    g.accepted = g.energy_ok && g.samples_ok;
    return g;
}

AnnealResult run_iqa(const RewriteSystem& sys, const Word& w, const AnnealSchedule& sched,
                     ClassChecker checker) {
    validate_word(sys, w);
    int L = static_cast<int>(w.size());
    const Alphabet& a = sys.alphabet;
    MPO lap = compile_mpo(laplacian(sys, L));
    MPO proj = compile_mpo(word_projector(a, w));

    AnnealResult out;
    out.state = product_mps(a, w);
    canonicalize(out.state, 0);

    int nsteps = std::max(1, static_cast<int>(std::lround(sched.tau / sched.dt)));
    int stride = std::max(1, nsteps / 50);
    auto record = [&](double t) {
        TracePoint tp;
        tp.t = t;
        tp.h = std::clamp(1.0 - t / sched.tau, 0.0, 1.0);
        tp.energy = dirichlet_energy(out.state, lap);
        tp.norm_log = out.state.norm_log;
        tp.max_bond = out.state.max_bond();
        double me = 0;
        if (L > 1)
            for (double e : all_cut_entropies(out.state)) me = std::max(me, e);
        tp.max_entropy = me;
        out.trace.push_back(tp);
    };
    // Enrichment is only useful while some interior bond can still grow.
    auto bonds_can_grow = [&]() {
        if (sched.chi <= 0) return true;
        for (int b = 1; b < L; ++b) {
            double full = std::pow(static_cast<double>(a.size()), std::min(b, L - b));
            if (out.state.bond_dim(b) < std::min(static_cast<double>(sched.chi), full))
                return true;
        }
        return false;
    };
    auto evolve_step = [&](const MPO& ham, double dt, bool backward = true) {
        if (bonds_can_grow()) {
            // enrich bond bases with H|psi> so rules wider than the two-site
            // update window can scatter out of low-bond states
            ApplyResult hx = apply_mpo(ham, out.state, sched.chi, 1e-12);
            expand_basis(out.state, hx.state, sched.chi);
        }
        tdvp_step(out.state, ham, dt, sched.chi, backward);
    };

    record(0.0);
    for (int s = 0; s < nsteps; ++s) {
        double t_mid = (s + 0.5) * sched.dt;
        double h = std::clamp(1.0 - t_mid / sched.tau, 0.0, 1.0);
        MPO ham = annealing_mpo(lap, proj, h);
        evolve_step(ham, sched.dt);
        if ((s + 1) % stride == 0 || s + 1 == nsteps) record((s + 1) * sched.dt);
    }
    // Relaxation segment: pure imaginary-time evolution under the Laplacian
    // (h = 0), stopping early once the residual energy is negligible or
    // stops improving. The generator is block-diagonal over graph
    // components, so this only polishes the state toward the orbit
    // superposition inside the input word's component. Because the operator
    // is now fixed, the step size may grow: whenever the per-step energy
    // decay is slow (a small intra-component gap), dt doubles, and the
    // large-dt Lanczos exponential approaches a ground-space projection.
    double e_prev = dirichlet_energy(out.state, lap);
    double dt_relax = sched.dt;
    const double dt_max = 256.0 * sched.dt;
    double t_relax = sched.tau;
    for (int s = 0; s < 4 * nsteps && e_prev > 1e-9; ++s) {
        evolve_step(lap, dt_relax, /*backward=*/dt_relax <= sched.dt);
        double e = dirichlet_energy(out.state, lap);
        t_relax += dt_relax;
        if ((s + 1) % stride == 0) record(t_relax);
        if (e > 0.9995 * e_prev && dt_relax >= dt_max) {
            e_prev = e;
            break;
        }
        if (e > 0.5 * e_prev && dt_relax < dt_max) dt_relax *= 2.0;
        e_prev = e;
    }
    if (!checker) checker = make_class_checker(sys, w);
    out.gate = evaluate_gate(out.state, lap, sys, checker, sched);
    return out;
}

}  // namespace orbit
