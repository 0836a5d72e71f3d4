// End-to-end acceptance runner. Each numbered check prints exactly one
// [PASS] or [FAIL] line; the process exits nonzero when any check fails.

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <orbit/circuit.hpp>
#include <orbit/evolution.hpp>
#include <orbit/experiment.hpp>
#include <orbit/graph_oracle.hpp>
#include <orbit/hamiltonian.hpp>
#include <orbit/instances.hpp>
#include <orbit/knuth_bendix.hpp>
#include <orbit/mps.hpp>
#include <orbit/tasks.hpp>

using namespace orbit;
using Mat = Eigen::MatrixXd;

namespace {

int g_failures = 0;

void report(int number, const std::string& what, bool ok, const std::string& detail = "") {
    std::printf("[%s] %2d. %s%s%s\n", ok ? "PASS" : "FAIL", number, what.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double wall_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- criterion 1

void criterion_1() {
    bool ok = true;
    std::ostringstream note;
    for (const auto& sys : test_corpus()) {
        int d = sys.alphabet.size();
        for (int L = 2; L <= 8; ++L) {
            if (std::pow(static_cast<double>(d), L) > 4096.0) break;  // dense-guard limit
            auto oracle = build_dense_laplacian(sys, L);
            Mat compiled = mpo_dense(compile_mpo(laplacian(sys, L)));
            double err = (compiled - oracle.matrix).cwiseAbs().maxCoeff();
            if (err > 1e-12) {
                ok = false;
                note << sys.name << " L=" << L << " err=" << err << "; ";
            }
            Eigen::SelfAdjointEigenSolver<Mat> es(oracle.matrix, Eigen::EigenvaluesOnly);
            int zeros = 0;
            for (long i = 0; i < es.eigenvalues().size(); ++i)
                if (std::abs(es.eigenvalues()(i)) < 1e-9) ++zeros;
            int classes = 0;
            std::vector<bool> seen(static_cast<std::size_t>(std::lround(std::pow(d, L))), false);
            for (std::size_t w = 0; w < seen.size(); ++w) {
                if (seen[w]) continue;
                ++classes;
                for (const auto& m : enumerate_class(sys, index_word(sys.alphabet, w, L)).members)
                    seen[word_index(sys.alphabet, m)] = true;
            }
            if (zeros != classes) {
                ok = false;
                note << sys.name << " L=" << L << " kernel " << zeros << "!=" << classes << "; ";
            }
        }
    }
    report(1, "compiled operator matches the dense graph Laplacian; kernel = class count", ok,
           note.str());
}

// ---------------------------------------------------------------- criterion 2

void criterion_2() {
    auto sys = window_chain_system();
    bool ok = true;
    std::ostringstream note;
    for (int L : {4, 6, 8}) {
        AnnealSchedule s;
        s.tau = 50;
        s.dt = 0.5;
        s.chi = 0;
        s.seed = 1;
        auto r = run_iqa(sys, Word(L, 'a'), s);
        auto exact = exact_orbit_state(sys, Word(L, 'a'));
        double fid = std::pow(exact.dot(mps_dense(r.state)), 2);
        note << "L=" << L << " fid=" << fid << " E_D=" << r.gate.energy << "; ";
        if (fid < 0.999 || r.gate.energy > 1e-6) ok = false;
    }
    report(2, "annealed orbit states reach fidelity >= 0.999 and E_D <= 1e-6 at tau=50", ok,
           note.str());
}

// ----------------------------------------------------- criteria 3 + 4 + 5 + 9

struct PrepCell {
    int L = 0;
    Word word;
    int set = 0;
    PreparedOrbit prep;
};

std::vector<PrepCell> prepare_level(const RewriteSystem& sys, int L, int per_set,
                                    const std::vector<double>& taus, const std::vector<int>& chis,
                                    std::uint64_t seed) {
    auto inst = generate_instances(sys, L, per_set, seed);
    AnnealSchedule base;
    base.dt = 0.5;
    base.seed = seed;
    std::vector<PrepCell> out;
    for (int side = 0; side < 2; ++side)
        for (const auto& w : (side == 0 ? inst.set1 : inst.set2)) {
            PrepCell c;
            c.L = L;
            c.word = w;
            c.set = side;
            c.prep = prepare_orbit_escalating(sys, w, base, taus, chis);
            out.push_back(std::move(c));
        }
    return out;
}

void criteria_3_4_5(const RewriteSystem& sys, const std::map<int, std::vector<PrepCell>>& levels) {
    bool ok3 = true, ok4 = true, ok5 = true;
    std::ostringstream n3, n4, n5;
    for (const auto& [L, cells] : levels) {
        auto cs = complete(sys, TermOrder{sys.alphabet.symbols}, L).first;
        int accepted = 0;
        for (const auto& c : cells)
            if (c.prep.gate.accepted) ++accepted;
        if (accepted < static_cast<int>(cells.size()))
            n3 << "L=" << L << " only " << accepted << "/" << cells.size() << " accepted; ";

        for (std::size_t a = 0; a < cells.size(); ++a) {
            // quality-gate thresholds honored on accepted runs (criterion 5)
            const auto& g = cells[a].prep.gate;
            if (g.accepted && (g.energy > 2e-4 || g.p_nc > 0.05)) {
                ok5 = false;
                n5 << "L=" << L << " " << cells[a].word << " E_D=" << g.energy
                   << " p_NC=" << g.p_nc << "; ";
            }
            if (!g.accepted) continue;  // rejected runs excluded from 3-4

            // counting routes vs the exact class size (criterion 4)
            auto routes = count_routes(cells[a].prep.state);
            double rel_routes = std::abs(routes.observable - routes.all_fidelity) /
                                std::max(1.0, std::abs(routes.all_fidelity));
            double exact = static_cast<double>(enumerate_class(sys, cells[a].word).size());
            double rel_exact = std::abs(routes.observable - exact) / exact;
            if (rel_routes > 1e-9 || rel_exact > 0.05) {
                ok4 = false;
                n4 << "L=" << L << " " << cells[a].word << " O=" << routes.observable
                   << " F=" << routes.all_fidelity << " exact=" << exact << "; ";
            }

            for (std::size_t b = a + 1; b < cells.size(); ++b) {
                if (!cells[b].prep.gate.accepted) continue;
                double fid = state_fidelity(cells[a].prep.state, cells[b].prep.state);
                bool same = cells[a].set == cells[b].set;
                bool truth = word_problem_kb(cs, cells[a].word, cells[b].word);
                TaskResult r = word_problem(sys, cells[a].prep, cells[b].prep);
                bool verdict_ok = (r.verdict == (truth ? "connected" : "disconnected"));
                bool fid_ok = same ? (fid >= 0.9) : (fid <= 0.1);
                if (same != truth || !verdict_ok || !fid_ok) {
                    ok3 = false;
                    n3 << "L=" << L << " (" << cells[a].word << "," << cells[b].word
                       << ") fid=" << fid << " verdict=" << r.verdict << "; ";
                }
            }
        }
        if (accepted < static_cast<int>(cells.size())) ok3 = false;
    }
    report(3, "word-problem fidelities separate classes and verdicts match completion truth", ok3,
           n3.str());
    report(4, "counting routes agree mutually (1e-9) and with exact class sizes (5%)", ok4,
           n4.str());
    report(5, "accepted runs satisfy E_D <= 2e-4 and p_NC <= 0.05; rejects are excluded", ok5,
           n5.str());
}

void criterion_9(const RewriteSystem& sys, std::uint64_t seed) {
    bool ok = true;
    std::ostringstream note;
    for (int L : {12, 16, 20, 24}) {
        auto inst = generate_instances(sys, L, 1, seed + static_cast<std::uint64_t>(L));
        Word w = inst.set1[0];
        AnnealSchedule base;
        base.dt = 0.5;
        base.seed = seed;
        // high-resolution reference run: bond room beyond the 64 under test
        auto ref = prepare_orbit_escalating(sys, w, base, {50.0}, {80});
        if (!ref.gate.accepted) {
            ok = false;
            note << "L=" << L << " reference run rejected; ";
            continue;
        }
        auto sp = schmidt_spectrum(ref.state, L / 2);
        double discarded = 0;
        for (std::size_t k = 64; k < sp.values.size(); ++k)
            discarded += sp.values[k] * sp.values[k];
        double max_entropy = 0;
        for (int cut = 1; cut < L; ++cut)
            max_entropy = std::max(max_entropy, entropy_bits(schmidt_spectrum(ref.state, cut)));
        note << "L=" << L << " tail=" << discarded << " maxS=" << max_entropy << " bits; ";
        if (discarded > 1e-6) ok = false;
    }
    report(9, "central-cut Schmidt weight beyond bond 64 is <= 1e-6 on accepted states", ok,
           note.str());
}

// ---------------------------------------------------------------- criterion 6

void criterion_6() {
    bool ok = true;
    std::ostringstream note;
    for (const auto& sys : test_corpus()) {
        int d = sys.alphabet.size();
        int L = 1;
        while (std::pow(static_cast<double>(d), L + 1) <= 1024.0 && L < 8) ++L;
        Word w(static_cast<std::size_t>(L), sys.alphabet.symbols[0]);
        double cls = static_cast<double>(enumerate_class(sys, w).size());
        double gap;
        try {
            gap = spectral_gap(sys, L).gap;
        } catch (const DataError&) {
            continue;  // edgeless graph at this length: nothing to perturb against
        }
        for (double h : {0.01, 0.05, 0.1, 0.2}) {
            auto bound = perturbative_bound(h, gap, cls);
            auto g = exact_perturbed_ground(sys, w, h);
            if (g.degenerate) continue;
            if (g.deformation > bound.loose + 1e-12) {
                ok = false;
                note << sys.name << " L=" << L << " h=" << h << " eps=" << g.deformation
                     << " bound=" << bound.loose << "; ";
            }
        }
    }
    report(6, "measured ground-state deformation never exceeds the perturbative bound", ok,
           note.str());
}

// ---------------------------------------------------------------- criterion 7

void criterion_7() {
    auto sys = window_chain_system();
    int L = 6;
    int shots = 10000;
    double tol = std::max(0.02, 3.0 / std::sqrt(static_cast<double>(shots)));
    bool ok = true;
    std::ostringstream note;

    // pick the first connected and first disconnected partner of a^6 by
    // normal form, so the pair labels are ground truth rather than guesses
    auto cs = complete(sys, TermOrder{sys.alphabet.symbols}, L).first;
    Word w1(static_cast<std::size_t>(L), 'a');
    Word same, other;
    for (std::uint64_t i = 1; i < (1ull << L) && (same.empty() || other.empty()); ++i) {
        Word w = index_word(sys.alphabet, i, L);
        bool conn = word_problem_kb(cs, w1, w);
        if (conn && same.empty()) same = w;
        if (!conn && other.empty()) other = w;
    }

    for (const auto& [w2, truth] : {std::pair{same, true}, std::pair{other, false}}) {
        auto r = simulate_annealer_fidelity(sys, w1, sys, w2, 60, 60, 600, shots, 17);
        note << "(" << w1 << "," << w2 << ") orbit=" << r.orbit_fidelity
             << " est=" << r.estimate << "; ";
        if (!r.adiabatic || std::abs(r.estimate - r.orbit_fidelity) > tol) ok = false;
        if (std::abs(r.orbit_fidelity - (truth ? 1.0 : 0.0)) > 1e-9) ok = false;
    }
    report(7, "simulated annealer protocol estimates the orbit-state fidelity within tolerance",
           ok, note.str());
}

// ---------------------------------------------------------------- criterion 8

void criterion_8() {
    bool ok = true;
    std::ostringstream note;
    for (const auto& sys : test_corpus()) {
        int d = sys.alphabet.size();
        for (int L = 2; L <= 10; ++L) {
            double dim = std::pow(static_cast<double>(d), L);
            if (dim > 60000.0) break;
            ConfluentSystem cs;
            try {
                cs = complete(sys, TermOrder{sys.alphabet.symbols}, L).first;
            } catch (const DataError&) {
                continue;  // words shorter than the widest rule: nothing to complete
            }
            long n = std::lround(dim);
            std::vector<int> cls(static_cast<std::size_t>(n), -1);
            int nc = 0;
            for (long i = 0; i < n; ++i) {
                if (cls[static_cast<std::size_t>(i)] >= 0) continue;
                for (const auto& m :
                     enumerate_class(sys, index_word(sys.alphabet, static_cast<std::uint64_t>(i), L))
                         .members)
                    cls[word_index(sys.alphabet, m)] = nc;
                ++nc;
            }
            // same BFS class <=> same normal form, over every pair of words
            std::map<int, Word> class_nf;
            std::map<Word, int> nf_class;
            for (long i = 0; i < n; ++i) {
                Word nf = normal_form(cs, index_word(sys.alphabet, static_cast<std::uint64_t>(i), L));
                int c = cls[static_cast<std::size_t>(i)];
                auto it = class_nf.find(c);
                if (it == class_nf.end())
                    class_nf[c] = nf;
                else if (it->second != nf)
                    ok = false;
                auto jt = nf_class.find(nf);
                if (jt == nf_class.end())
                    nf_class[nf] = c;
                else if (jt->second != c)
                    ok = false;
                if (!ok) {
                    note << sys.name << " L=" << L << " partition mismatch; ";
                    break;
                }
            }
            if (!ok) break;
        }
        if (!ok) break;
    }
    // benchmark metrics monotone nondecreasing over L in {8..24}
    auto rows = benchmark_completion(window_chain_system(), {8, 10, 12, 14, 16, 18, 20, 22, 24},
                                     {TermOrder{"ab"}, TermOrder{"ba"}});
    for (const auto& order : {std::string("ab"), std::string("ba")}) {
        const BenchRow* prev = nullptr;
        for (const auto& r : rows) {
            if (r.order != order) continue;
            if (r.failed) {
                ok = false;
                note << "bench failed at L=" << r.L << "; ";
            }
            if (prev && (r.seconds + 1e-9 < prev->seconds || r.rule_count < prev->rule_count ||
                         r.total_rule_size < prev->total_rule_size)) {
                ok = false;
                note << "non-monotone at L=" << r.L << " order=" << order << "; ";
            }
            prev = &r;
        }
    }
    report(8, "completion-based word problem matches exhaustive search; benchmark is monotone",
           ok, note.str());
}

// --------------------------------------------------------------- criterion 10

void criterion_10() {
    auto sys = window_chain_system();
    std::vector<GapRecord> recs;
    for (int L = 4; L <= 14; ++L) recs.push_back(spectral_gap(sys, L));
    auto fit = fit_gap_scaling(recs);
    std::ostringstream note;
    note << "poly L^-" << fit.poly_exponent << " residual " << fit.poly_residual
         << " vs exp residual " << fit.exp_residual;
    report(10, "gap scaling fits a power law better than an exponential",
           fit.poly_residual < fit.exp_residual, note.str());
}

// --------------------------------------------------------------- criterion 11

void criterion_11() {
    bool ok = true;
    std::ostringstream note;
    // reference instance: dense simulation against the closed-form unitary
    {
        auto c = emit_projector_exponential("001", "010", 0.7);
        Eigen::MatrixXcd full = circuit_unitary(c);
        std::complex<double> i1(0, 1);
        double theta = 0.7;
        Eigen::MatrixXcd want = Eigen::MatrixXcd::Identity(8, 8);
        want(1, 1) = want(2, 2) = std::cos(theta);
        want(1, 2) = want(2, 1) = -i1 * std::sin(theta);
        double err = 0;
        for (long r = 0; r < 8; ++r)
            for (long s = 0; s < 8; ++s) {
                err = std::max(err, std::abs(full(2 * r, 2 * s) - want(r, s)));  // clean ancilla
                err = std::max(err, std::abs(full(2 * r + 1, 2 * s)));           // no leakage
            }
        note << "unitary err=" << err << "; ";
        if (err > 1e-10) ok = false;
    }
    // closed-form gate counts: derived from the pattern structure alone,
    // never from the emitted list, then compared against emitted lengths
    auto closed_native = [](const std::string& b1, const std::string& b2) -> long {
        if (b1 == b2) {
            long z = static_cast<long>(std::count(b1.begin(), b1.end(), '0'));
            return 2 * z + 3;  // X conjugation, two MCX, one phase
        }
        long k = 0;
        for (std::size_t i = 0; i < b1.size(); ++i)
            if (b1[i] != b2[i]) ++k;
        std::size_t q = 0;
        while (b1[q] == b2[q]) ++q;
        long z = 0;
        for (std::size_t i = 0; i < b1.size(); ++i) {
            if (i == q) continue;
            char folded = (b1[i] != b2[i]) ? ((b1[i] != b1[q]) ? '1' : '0') : b1[i];
            if (folded == '0') ++z;
        }
        return 2 * (k - 1) + 2 * z + 2 + 1;  // basis CX pairs, X's, MCX pair, CRx
    };
    auto closed_multi = [](const std::string& b1, const std::string& b2) -> long {
        long n = static_cast<long>(b1.size());
        long controls = (b1 == b2) ? n : n - 1;
        return controls >= 2 ? 2 : 0;
    };
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 20 && ok; ++t) {
        int n = 2 + static_cast<int>(rng() % 7);
        std::string b1, b2;
        for (int i = 0; i < n; ++i) {
            b1 += static_cast<char>('0' + rng() % 2);
            b2 += static_cast<char>('0' + rng() % 2);
        }
        double theta = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
        auto c = emit_projector_exponential(b1, b2, theta);
        if (static_cast<long>(c.gates.size()) != closed_native(b1, b2) ||
            c.multi_controlled_count() != closed_multi(b1, b2)) {
            ok = false;
            note << "t=" << t << " (" << b1 << "," << b2 << ") emitted " << c.gates.size()
                 << " vs closed " << closed_native(b1, b2) << "; ";
        }
    }
    // resource totals re-derived by tallying each block independently
    for (int t = 0; t < 5 && ok; ++t) {
        RewriteSystem sys = random_system(1000 + static_cast<std::uint64_t>(t));
        Word w;
        for (int i = 0; i < 8; ++i)
            w += sys.alphabet.symbols[static_cast<std::size_t>(rng()) % sys.alphabet.symbols.size()];
        int N = 1 + static_cast<int>(rng() % 6);
        auto rc = trotter_resources(sys, w, N);
        long n_r = static_cast<long>(sys.templates.size() + sys.explicit_rules.size());
        auto enc = binary_encode(sys.alphabet);
        long native = 0, decomposed = 0, multi = 0;
        auto tally = [&](const std::string& p1, const std::string& p2) {
            auto c = emit_projector_exponential(p1, p2, 0.5);
            native += static_cast<long>(c.gates.size());
            for (const auto& g : c.gates) decomposed += decomposed_gate_cost(g);
            multi += c.multi_controlled_count();
        };
        auto pat = [&](const std::string& s) {
            std::string bits;
            for (char ch : s) bits += enc.code[static_cast<std::size_t>(sys.alphabet.index_of(ch))];
            return bits;
        };
        auto blocks = [&](const std::string& l, const std::string& r) {
            tally(pat(l), pat(r));
            tally(pat(l), pat(l));
            tally(pat(r), pat(r));
        };
        for (const auto& tmpl : sys.templates) blocks(tmpl.lhs, tmpl.rhs);
        for (const auto& r : sys.explicit_rules) blocks(r.lhs, r.rhs);
        tally(enc.encode_word(sys.alphabet, w), enc.encode_word(sys.alphabet, w));
        if (rc.operator_count != static_cast<long>(N) * (2 * n_r + 1) ||
            rc.total_gates_native != N * native || rc.total_gates_decomposed != N * decomposed ||
            rc.multi_controlled_count != N * multi) {
            ok = false;
            note << "resource mismatch at seed " << 1000 + t << "; ";
        }
    }
    report(11, "emitted circuits match the target unitary; resource counts match emission", ok,
           note.str());
}

// --------------------------------------------------------------- criterion 12

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

void criterion_12() {
    namespace fs = std::filesystem;
    bool ok = true;
    std::ostringstream note;
    fs::path preset = fs::path(PRESET_DIR) / "gap.json";
    if (!fs::exists(preset)) {
        report(12, "rerunning a preset reproduces all data outputs byte-identically", false,
               "preset file missing: " + preset.string());
        return;
    }
    auto cfg = load_config(preset.string());
    fs::path d1 = fs::temp_directory_path() / "orbit_accept_rep1";
    fs::path d2 = fs::temp_directory_path() / "orbit_accept_rep2";
    fs::remove_all(d1);
    fs::remove_all(d2);
    run_experiment(cfg, d1.string());
    run_experiment(cfg, d2.string());
    for (const auto& entry : fs::directory_iterator(d1)) {
        std::string name = entry.path().filename().string();
        if (name == "manifest.json") continue;  // timestamps and wall times live here
        if (slurp(entry.path()) != slurp(d2 / name)) {
            ok = false;
            note << name << " differs; ";
        }
    }
    fs::remove_all(d1);
    fs::remove_all(d2);
    report(12, "rerunning a preset reproduces all data outputs byte-identically", ok, note.str());
}

}  // namespace

int main() {
    auto t0 = std::chrono::steady_clock::now();
    criterion_1();
    criterion_2();

    auto sys = window_chain_system();
    std::map<int, std::vector<PrepCell>> levels;
    for (int L : {10, 12, 16, 20}) {
        // bond grids tuned per length: chi = 32 suffices through L = 12;
        // L >= 16 goes straight to 64 (chi = 32 passes the gate there but
        // leaves ~5% out-of-class weight, which the counting check resolves)
        std::vector<int> chis = L >= 16 ? std::vector<int>{64} : std::vector<int>{32};
        levels[L] = prepare_level(sys, L, 2, {50.0, 100.0}, chis,
                                  static_cast<std::uint64_t>(100 + L));
    }
    criteria_3_4_5(sys, levels);
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9(sys, 7);
    criterion_10();
    criterion_11();
    criterion_12();

    std::printf("%d of 12 checks passed (%.1f s total)\n", 12 - g_failures, wall_since(t0));
    return g_failures == 0 ? 0 : 1;
}
