// Command-line driver: parsing, exact oracles, annealing, queries, the
// Knuth-Bendix baseline, circuit estimation, and batch experiments.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "orbit/circuit.hpp"
#include "orbit/evolution.hpp"
#include "orbit/experiment.hpp"
#include "orbit/graph_oracle.hpp"
#include "orbit/hamiltonian.hpp"
#include "orbit/instances.hpp"
#include "orbit/knuth_bendix.hpp"
#include "orbit/mps.hpp"
#include "orbit/srs.hpp"
#include "orbit/tasks.hpp"

namespace {

using nlohmann::ordered_json;
using namespace orbit;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

ordered_json jnum(double v) {
    if (std::isnan(v)) return nullptr;
    ordered_json j;
    double back = 0;
    std::sscanf(fmt(v).c_str(), "%lf", &back);
    if (back == static_cast<long long>(back) && std::fabs(back) < 9e15)
        return static_cast<long long>(back);
    return back;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DataError("cannot open '" + path + "'");
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

RewriteSystem load_system(const std::string& path) { return parse_system(slurp(path)); }

void write_trace(const std::string& path, const std::vector<TracePoint>& trace) {
    std::ofstream f(path);
    if (!f) throw DataError("cannot write '" + path + "'");
    f << "t,h,E_D,log_norm,max_entropy,max_bond\n";
    for (const auto& p : trace)
        f << fmt(p.t) << "," << fmt(p.h) << "," << fmt(p.energy) << "," << fmt(p.norm_log) << ","
          << fmt(p.max_entropy) << "," << p.max_bond << "\n";
}

// shared annealing options for query subcommands
struct PrepOpts {
    std::string system_path;
    double tau = 50.0;
    double dt = 0.5;
    int chi = 0;
    std::uint64_t seed = 0;
    double eps_energy = 2e-4;
    double eps_nc = 0.05;
    int n_samples = 1000;

    AnnealSchedule schedule() const {
        AnnealSchedule s;
        s.tau = tau;
        s.dt = dt;
        s.chi = chi;
        s.seed = seed;
        s.eps_energy = eps_energy;
        s.eps_nc = eps_nc;
        s.n_samples = n_samples;
        return s;
    }
};

void add_prep_opts(CLI::App* cmd, PrepOpts& o) {
    cmd->add_option("--system", o.system_path, "system description file")->required();
    cmd->add_option("--tau", o.tau, "annealing time");
    cmd->add_option("--dt", o.dt, "time step");
    cmd->add_option("--chi", o.chi, "bond cap (0 = unconstrained)");
    cmd->add_option("--seed", o.seed, "sampling seed")->required();
    cmd->add_option("--eps-energy", o.eps_energy, "residual-energy gate");
    cmd->add_option("--eps-nc", o.eps_nc, "out-of-class sample gate");
    cmd->add_option("--samples", o.n_samples, "gate sample count");
}

ordered_json gate_json(const QualityGate& g) {
    ordered_json j;
    j["E_D"] = jnum(g.energy);
    j["p_NC"] = jnum(g.p_nc);
    j["p_NC_stderr"] = jnum(g.p_nc_stderr);
    j["accepted"] = g.accepted;
    return j;
}

int run(int argc, char** argv) {
    CLI::App app{"orbit: equivalence classes of rewriting systems as annealed tensor-network states"};
    app.require_subcommand(1);

    // ---- parse ----
    std::string parse_path;
    auto* c_parse = app.add_subcommand("parse", "parse a system file and print its canonical form");
    c_parse->add_option("file", parse_path, "system description file")->required();
    c_parse->callback([&]() { std::cout << serialize_system(load_system(parse_path)); });

    // ---- enumerate ----
    std::string en_sys, en_word;
    std::size_t en_limit = 10'000'000;
    auto* c_en = app.add_subcommand("enumerate", "BFS enumeration of a word's equivalence class");
    c_en->add_option("--system", en_sys)->required();
    c_en->add_option("--word", en_word)->required();
    c_en->add_option("--limit", en_limit, "node budget");
    c_en->callback([&]() {
        auto sys = load_system(en_sys);
        validate_word(sys, en_word);
        auto cls = enumerate_class(sys, en_word, en_limit);
        ordered_json j;
        j["system"] = sys.name;
        j["word"] = en_word;
        j["size"] = cls.size();
        j["truncated"] = cls.truncated;
        j["members"] = cls.members;
        std::cout << j.dump() << "\n";
        if (cls.truncated) throw BudgetError("enumeration truncated at the node budget");
    });

    // ---- laplacian ----
    std::string lp_sys;
    int lp_L = 4;
    auto* c_lp = app.add_subcommand("laplacian", "dense graph Laplacian as CSV");
    c_lp->add_option("--system", lp_sys)->required();
    c_lp->add_option("--L", lp_L)->required();
    c_lp->callback([&]() {
        auto lap = build_dense_laplacian(load_system(lp_sys), lp_L);
        for (long i = 0; i < lap.matrix.rows(); ++i) {
            for (long k = 0; k < lap.matrix.cols(); ++k)
                std::cout << (k ? "," : "") << fmt(lap.matrix(i, k));
            std::cout << "\n";
        }
    });

    // ---- ham dump ----
    std::string hd_sys, hd_word;
    int hd_L = 4;
    double hd_h = 0.0;
    bool hd_dense = false;
    auto* c_ham = app.add_subcommand("ham", "compiled-operator inspection");
    auto* c_hd = c_ham->add_subcommand("dump", "dense matrix of the compiled operator as CSV");
    c_hd->set_help_flag("--help", "print help");  // frees -h for the parameter below
    c_hd->add_option("--system", hd_sys)->required();
    c_hd->add_option("--L", hd_L)->required();
    c_hd->add_option("--h", hd_h, "interpolation parameter (needs --word when > 0)");
    c_hd->add_option("--word", hd_word, "pinning word for the h > 0 interpolation");
    c_hd->add_flag("--dense", hd_dense, "emit the dense matrix");
    c_hd->callback([&]() {
        if (!hd_dense) throw DataError("only --dense output is supported");
        if (hd_L > 8) throw BudgetError("dense dump capped at L = 8");
        auto sys = load_system(hd_sys);
        MPO m = compile_mpo(laplacian(sys, hd_L));
        if (hd_h != 0.0) {
            if (hd_word.empty()) throw DataError("--h > 0 requires --word");
            validate_word(sys, hd_word);
            m = annealing_mpo(m, compile_mpo(word_projector(sys.alphabet, hd_word)), hd_h);
        }
        Eigen::MatrixXd dm = mpo_dense(m);
        for (long i = 0; i < dm.rows(); ++i) {
            for (long k = 0; k < dm.cols(); ++k) std::cout << (k ? "," : "") << fmt(dm(i, k));
            std::cout << "\n";
        }
    });

    // ---- gap ----
    std::string gp_sys;
    std::vector<int> gp_L;
    bool gp_fit = false;
    auto* c_gap = app.add_subcommand("gap", "exact spectral gap per L, optional scaling fits");
    c_gap->add_option("--system", gp_sys)->required();
    c_gap->add_option("--L", gp_L, "word lengths")->required();
    c_gap->add_flag("--fit", gp_fit, "print power/exponential fits (needs >= 4 lengths)");
    c_gap->callback([&]() {
        auto sys = load_system(gp_sys);
        std::vector<GapRecord> recs;
        std::cout << "L,gap\n";
        for (int L : gp_L) {
            recs.push_back(spectral_gap(sys, L));
            std::cout << L << "," << fmt(recs.back().gap) << "\n";
        }
        if (gp_fit) {
            GapFit f = fit_gap_scaling(recs);
            ordered_json j;
            j["poly_exponent"] = jnum(f.poly_exponent);
            j["poly_prefactor"] = jnum(f.poly_prefactor);
            j["poly_residual"] = jnum(f.poly_residual);
            j["exp_rate"] = jnum(f.exp_rate);
            j["exp_prefactor"] = jnum(f.exp_prefactor);
            j["exp_residual"] = jnum(f.exp_residual);
            std::cout << j.dump() << "\n";
        }
    });

    // ---- bound ----
    std::string bd_sys, bd_word;
    double bd_h = 0.1;
    bool bd_measure = false;
    auto* c_bd = app.add_subcommand("bound", "perturbative deformation bound (and exact check)");
    c_bd->set_help_flag("--help", "print help");  // frees -h for the parameter below
    c_bd->add_option("--system", bd_sys)->required();
    c_bd->add_option("--word", bd_word)->required();
    c_bd->add_option("--h", bd_h, "perturbation strength in [0, 1)")->required();
    c_bd->add_flag("--measure", bd_measure, "also diagonalize for the exact deformation");
    c_bd->callback([&]() {
        auto sys = load_system(bd_sys);
        validate_word(sys, bd_word);
        int L = static_cast<int>(bd_word.size());
        double gap = spectral_gap(sys, L).gap;
        auto cls = enumerate_class(sys, bd_word);
        if (cls.truncated) throw BudgetError("class too large to enumerate");
        PerturbativeBound b = perturbative_bound(bd_h, gap, static_cast<double>(cls.size()));
        ordered_json j;
        j["h"] = jnum(bd_h);
        j["gap"] = jnum(gap);
        j["class_size"] = cls.size();
        j["bound_loose"] = jnum(b.loose);
        j["bound_tight"] = jnum(b.tight);
        j["regime_ok"] = b.regime_ok;
        if (bd_measure) {
            auto g = exact_perturbed_ground(sys, bd_word, bd_h);
            j["deformation"] = jnum(g.deformation);
            j["degenerate"] = g.degenerate;
        }
        std::cout << j.dump() << "\n";
    });

    // ---- anneal ----
    PrepOpts an;
    std::string an_word, an_save, an_load, an_trace;
    auto* c_an = app.add_subcommand("anneal", "prepare an orbit state by imaginary-time annealing");
    add_prep_opts(c_an, an);
    c_an->add_option("--word", an_word)->required();
    c_an->add_option("--save", an_save, "write the final state snapshot");
    c_an->add_option("--load", an_load, "skip evolution; gate a saved snapshot");
    c_an->add_option("--trace", an_trace, "write the trace CSV");
    c_an->callback([&]() {
        auto sys = load_system(an.system_path);
        validate_word(sys, an_word);
        ordered_json j;
        j["task"] = "anneal";
        j["system"] = sys.name;
        j["word"] = an_word;
        j["L"] = an_word.size();
        j["tau"] = jnum(an.tau);
        j["chi"] = an.chi;
        if (!an_load.empty()) {
            MPS x = load_mps(an_load);
            MPO lap = compile_mpo(laplacian(sys, x.L()));
            QualityGate g =
                evaluate_gate(x, lap, sys, make_class_checker(sys, an_word), an.schedule());
            j["gate"] = gate_json(g);
            j["max_bond"] = x.max_bond();
            if (!an_save.empty()) save_mps(x, an_save, an.seed);
        } else {
            AnnealResult r = run_iqa(sys, an_word, an.schedule());
            j["gate"] = gate_json(r.gate);
            j["max_bond"] = r.state.max_bond();
            if (!an_trace.empty()) write_trace(an_trace, r.trace);
            if (!an_save.empty()) save_mps(r.state, an_save, an.seed);
        }
        j["seed"] = an.seed;
        std::cout << j.dump() << "\n";
    });

    // ---- word ----
    PrepOpts wd;
    std::string wd_w1, wd_w2;
    auto* c_wd = app.add_subcommand("word", "word problem via orbit-state fidelity");
    add_prep_opts(c_wd, wd);
    c_wd->add_option("--w1", wd_w1)->required();
    c_wd->add_option("--w2", wd_w2)->required();
    c_wd->callback([&]() {
        auto sys = load_system(wd.system_path);
        auto a = prepare_orbit(sys, wd_w1, wd.schedule());
        auto b = prepare_orbit(sys, wd_w2, wd.schedule());
        TaskResult r = word_problem(sys, a, b);
        r.seed = wd.seed;
        std::cout << r.to_json() << "\n";
    });

    // ---- count ----
    PrepOpts ct;
    std::string ct_word;
    auto* c_ct = app.add_subcommand("count", "class size via the two counting routes");
    add_prep_opts(c_ct, ct);
    c_ct->add_option("--word", ct_word)->required();
    c_ct->callback([&]() {
        auto sys = load_system(ct.system_path);
        auto p = prepare_orbit(sys, ct_word, ct.schedule());
        TaskResult r = count_class(sys, p);
        r.seed = ct.seed;
        std::cout << r.to_json() << "\n";
    });

    // ---- overlap ----
    PrepOpts ov;
    std::string ov_sys2, ov_w1, ov_w2;
    auto* c_ov = app.add_subcommand("overlap", "grammar overlap between two systems' orbit states");
    add_prep_opts(c_ov, ov);
    c_ov->add_option("--system2", ov_sys2, "second system description file")->required();
    c_ov->add_option("--w1", ov_w1, "word annealed under the first system")->required();
    c_ov->add_option("--w2", ov_w2, "word annealed under the second system")->required();
    c_ov->callback([&]() {
        auto s1 = load_system(ov.system_path);
        auto s2 = load_system(ov_sys2);
        auto a = prepare_orbit(s1, ov_w1, ov.schedule());
        auto b = prepare_orbit(s2, ov_w2, ov.schedule());
        TaskResult r = grammar_overlap(s1, a, s2, b);
        r.seed = ov.seed;
        std::cout << r.to_json() << "\n";
    });

    // ---- filter ----
    PrepOpts fl;
    std::string fl_word;
    std::vector<std::string> fl_allow;
    int fl_draws = 0;
    auto* c_fl = app.add_subcommand("filter", "project the class onto per-site symbol constraints");
    add_prep_opts(c_fl, fl);
    c_fl->add_option("--word", fl_word)->required();
    c_fl->add_option("--allow", fl_allow,
                     "constraint SITE:SYMBOLS (1-based site), repeatable")->required();
    c_fl->add_option("--draws", fl_draws, "sample this many members of the filtered state");
    c_fl->callback([&]() {
        auto sys = load_system(fl.system_path);
        auto p = prepare_orbit(sys, fl_word, fl.schedule());
        int L = static_cast<int>(fl_word.size());
        std::vector<std::vector<char>> allowed(static_cast<std::size_t>(L));
        for (auto& a : allowed) a.assign(sys.alphabet.symbols.begin(), sys.alphabet.symbols.end());
        for (const auto& spec : fl_allow) {
            auto colon = spec.find(':');
            if (colon == std::string::npos) throw DataError("--allow expects SITE:SYMBOLS");
            int site = std::stoi(spec.substr(0, colon));
            if (site < 1 || site > L) throw DataError("--allow site out of range");
            std::string syms = spec.substr(colon + 1);
            for (char c : syms)
                if (!sys.alphabet.contains(c)) throw DataError("--allow symbol outside the alphabet");
            allowed[static_cast<std::size_t>(site - 1)].assign(syms.begin(), syms.end());
        }
        FilterOutcome out = filter_class(p.state, sys.alphabet, allowed);
        ordered_json j;
        j["task"] = "filter";
        j["system"] = sys.name;
        j["word"] = fl_word;
        j["p1"] = jnum(out.p1);
        j["accepted"] = p.gate.accepted;
        if (fl_draws > 0) j["draws"] = sample(out.state, sys.alphabet, fl_draws, fl.seed + 1);
        j["seed"] = fl.seed;
        std::cout << j.dump() << "\n";
    });

    // ---- stats ----
    PrepOpts st;
    std::string st_word, st_pattern;
    int st_pos = 1, st_n = 1000;
    auto* c_st = app.add_subcommand("stats", "substring frequency over the class");
    add_prep_opts(c_st, st);
    c_st->add_option("--word", st_word)->required();
    c_st->add_option("--pos", st_pos, "1-based window start")->required();
    c_st->add_option("--pattern", st_pattern)->required();
    c_st->add_option("--n", st_n, "sample draws");
    c_st->callback([&]() {
        auto sys = load_system(st.system_path);
        auto p = prepare_orbit(sys, st_word, st.schedule());
        StatEstimate e =
            substring_frequency(p.state, sys.alphabet, st_pos - 1, st_pattern, st_n, st.seed + 1);
        ordered_json j;
        j["task"] = "stats";
        j["system"] = sys.name;
        j["word"] = st_word;
        j["pattern"] = st_pattern;
        j["pos"] = st_pos;
        j["estimate"] = jnum(e.estimate);
        j["stderr"] = jnum(e.stderr_value);
        j["exact"] = jnum(e.exact);
        j["accepted"] = p.gate.accepted;
        j["seed"] = st.seed;
        std::cout << j.dump() << "\n";
    });

    // ---- entropy ----
    PrepOpts et;
    std::string et_word;
    auto* c_et = app.add_subcommand("entropy", "bipartition entropies of the annealed state");
    add_prep_opts(c_et, et);
    c_et->add_option("--word", et_word)->required();
    c_et->callback([&]() {
        auto sys = load_system(et.system_path);
        auto p = prepare_orbit(sys, et_word, et.schedule());
        std::cout << "cut,entropy_bits\n";
        for (int cut = 1; cut < p.state.L(); ++cut)
            std::cout << cut << "," << fmt(entropy_bits(schmidt_spectrum(p.state, cut))) << "\n";
    });

    // ---- kb ----
    auto* c_kb = app.add_subcommand("kb", "Knuth-Bendix baseline");
    std::string kb_sys, kb_word, kb_w1, kb_w2, kb_orders;
    int kb_len = 0;
    std::vector<int> kb_Ls;

    auto* c_kbc = c_kb->add_subcommand("complete", "length-bounded completion; oriented rules");
    c_kbc->add_option("--system", kb_sys)->required();
    c_kbc->add_option("--max-len", kb_len, "rule-length bound")->required();
    c_kbc->callback([&]() {
        auto sys = load_system(kb_sys);
        auto [cs, metrics] = complete(sys, TermOrder{sys.alphabet.symbols}, kb_len);
        for (const auto& r : cs.rules) std::cout << r.lhs << " -> " << r.rhs << "\n";
        std::cerr << "rules=" << metrics.rule_count << " total_size=" << metrics.total_rule_size
                  << "\n";
    });

    auto* c_kbn = c_kb->add_subcommand("nf", "normal form of a word");
    c_kbn->add_option("--system", kb_sys)->required();
    c_kbn->add_option("--word", kb_word)->required();
    c_kbn->add_option("--max-len", kb_len, "rule-length bound (default: the word length)");
    c_kbn->callback([&]() {
        auto sys = load_system(kb_sys);
        validate_word(sys, kb_word);
        int bound = kb_len > 0 ? kb_len : static_cast<int>(kb_word.size());
        auto [cs, metrics] = complete(sys, TermOrder{sys.alphabet.symbols}, bound);
        (void)metrics;
        std::cout << normal_form(cs, kb_word) << "\n";
    });

    auto* c_kbw = c_kb->add_subcommand("word", "word problem by normal forms");
    c_kbw->add_option("--system", kb_sys)->required();
    c_kbw->add_option("--w1", kb_w1)->required();
    c_kbw->add_option("--w2", kb_w2)->required();
    c_kbw->callback([&]() {
        auto sys = load_system(kb_sys);
        validate_word(sys, kb_w1);
        validate_word(sys, kb_w2);
        if (kb_w1.size() != kb_w2.size()) throw DataError("word lengths differ");
        auto [cs, metrics] = complete(sys, TermOrder{sys.alphabet.symbols},
                                      static_cast<int>(kb_w1.size()));
        (void)metrics;
        std::cout << (word_problem_kb(cs, kb_w1, kb_w2) ? "connected" : "disconnected") << "\n";
    });

    auto* c_kbb = c_kb->add_subcommand("bench", "completion benchmark CSV");
    c_kbb->add_option("--system", kb_sys)->required();
    c_kbb->add_option("--L", kb_Ls, "rule-length bounds")->required();
    c_kbb->add_option("--orders", kb_orders, "comma-separated alphabet permutations");
    c_kbb->callback([&]() {
        auto sys = load_system(kb_sys);
        std::vector<TermOrder> orders;
        if (kb_orders.empty()) {
            orders.push_back(TermOrder{sys.alphabet.symbols});
        } else {
            std::stringstream ss(kb_orders);
            std::string tok;
            while (std::getline(ss, tok, ',')) orders.push_back(TermOrder{tok});
        }
        std::cout << benchmark_csv(benchmark_completion(sys, kb_Ls, orders));
    });

    // ---- circuit ----
    auto* c_cir = app.add_subcommand("circuit", "gate-model estimator");
    std::string cir_b1, cir_b2, cir_sys, cir_word;
    double cir_theta = 0.5;
    int cir_L = 0, cir_steps = 1;

    auto* c_ce = c_cir->add_subcommand("emit", "projector-exponential circuit as OpenQASM 3");
    c_ce->add_option("--b1", cir_b1)->required();
    c_ce->add_option("--b2", cir_b2)->required();
    c_ce->add_option("--theta", cir_theta)->required();
    c_ce->callback(
        [&]() { std::cout << to_qasm(emit_projector_exponential(cir_b1, cir_b2, cir_theta)); });

    auto* c_cc = c_cir->add_subcommand("cost", "Trotter-step resource accounting");
    c_cc->add_option("--system", cir_sys)->required();
    c_cc->add_option("--L", cir_L)->required();
    c_cc->add_option("--steps", cir_steps)->required();
    c_cc->add_option("--word", cir_word, "input word (default: first symbol repeated)");
    c_cc->callback([&]() {
        auto sys = load_system(cir_sys);
        Word w = cir_word.empty()
                     ? Word(static_cast<std::size_t>(cir_L), sys.alphabet.symbols[0])
                     : cir_word;
        if (static_cast<int>(w.size()) != cir_L) throw DataError("--word length must equal --L");
        ResourceCount rc = trotter_resources(sys, w, cir_steps);
        ordered_json j;
        j["steps"] = rc.steps;
        j["n_r"] = rc.n_r;
        j["w_bits"] = rc.w_bits;
        j["L_bits"] = rc.L_bits;
        j["operator_count"] = rc.operator_count;
        j["total_gates_native"] = rc.total_gates_native;
        j["total_gates_decomposed"] = rc.total_gates_decomposed;
        j["multi_controlled_count"] = rc.multi_controlled_count;
        std::cout << j.dump() << "\n";
    });

    // ---- annealer-fidelity ----
    std::string af_s1, af_s2, af_w1, af_w2;
    double af_tau1 = 20, af_tau2 = 20;
    int af_steps = 2000, af_shots = 10000;
    std::uint64_t af_seed = 0;
    auto* c_af = app.add_subcommand("annealer-fidelity",
                                    "two-leg real-time protocol against exact orbit fidelity");
    c_af->add_option("--system1", af_s1)->required();
    c_af->add_option("--w1", af_w1)->required();
    c_af->add_option("--system2", af_s2)->required();
    c_af->add_option("--w2", af_w2)->required();
    c_af->add_option("--tau1", af_tau1);
    c_af->add_option("--tau2", af_tau2);
    c_af->add_option("--steps", af_steps, "RK4 steps per leg");
    c_af->add_option("--shots", af_shots);
    c_af->add_option("--seed", af_seed)->required();
    c_af->callback([&]() {
        auto s1 = load_system(af_s1);
        auto s2 = load_system(af_s2);
        auto r = simulate_annealer_fidelity(s1, af_w1, s2, af_w2, af_tau1, af_tau2, af_steps,
                                            af_shots, af_seed);
        ordered_json j;
        j["exact"] = jnum(r.exact);
        j["estimate"] = jnum(r.estimate);
        j["orbit_fidelity"] = jnum(r.orbit_fidelity);
        j["adiabatic"] = r.adiabatic;
        j["norm_drift"] = jnum(r.norm_drift);
        j["seed"] = af_seed;
        std::cout << j.dump() << "\n";
    });

    // ---- experiment ----
    auto* c_ex = app.add_subcommand("experiment", "batch sweeps from preset files");
    std::string ex_preset, ex_out = "out";
    auto* c_exr = c_ex->add_subcommand("run", "run a preset");
    c_exr->add_option("preset", ex_preset, "preset JSON file")->required();
    c_exr->add_option("--out", ex_out, "output directory");
    c_exr->callback([&]() { run_experiment(load_config(ex_preset), ex_out); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);  // prints help / usage message
        return code == 0 ? 0 : 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const orbit::BudgetError& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return 3;
    } catch (const orbit::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
