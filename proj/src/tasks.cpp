#include "orbit/tasks.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "orbit/hamiltonian.hpp"

#include <json.hpp>

namespace orbit {

namespace {

// fixed "%.12g" formatting so reruns are byte-identical
nlohmann::ordered_json num(double v) {
    if (std::isnan(v)) return nullptr;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    double back = 0;
    std::sscanf(buf, "%lf", &back);
    if (back == static_cast<long long>(back) && std::fabs(back) < 9e15)
        return static_cast<long long>(back);
    return back;
}

}  // namespace

std::string TaskResult::to_json() const {
    nlohmann::ordered_json j;
    j["task"] = task;
    j["system"] = system;
    j["words"] = words;
    j["L"] = L;
    j["chi"] = chi;
    j["tau"] = num(tau);
    j["value"] = num(value);
    if (value2) j["value2"] = num(*value2);
    if (stderr_value) j["stderr"] = num(*stderr_value);
    j["verdict"] = verdict;
    if (energy) j["E_D"] = num(*energy);
    if (p_nc) j["p_NC"] = num(*p_nc);
    j["seed"] = seed;
    j["wall_s"] = num(wall_s);
    return j.dump();
}

PreparedOrbit prepare_orbit(const RewriteSystem& sys, const Word& w, const AnnealSchedule& sched,
                            ClassChecker checker) {
    AnnealResult r = run_iqa(sys, w, sched, std::move(checker));
    return PreparedOrbit{std::move(r.state), r.gate, w, sched.tau, sched.chi};
}

PreparedOrbit prepare_orbit_escalating(const RewriteSystem& sys, const Word& w,
                                       AnnealSchedule base, const std::vector<double>& taus,
                                       const std::vector<int>& chis, ClassChecker checker) {
    if (taus.empty() || chis.empty()) throw DataError("empty (tau, chi) grid");
    if (!checker) checker = make_class_checker(sys, w);
    PreparedOrbit last;
    bool have = false;
    for (double tau : taus) {
        for (int chi : chis) {
            AnnealSchedule s = base;
            s.tau = tau;
            s.chi = chi;
            last = prepare_orbit(sys, w, s, checker);
            have = true;
            if (last.gate.accepted) return last;
        }
    }
    if (!have) throw DataError("empty (tau, chi) grid");
    return last;
}

double state_fidelity(const MPS& a, const MPS& b) {
    double v = inner(a, b);
    return v * v;
}

TaskResult word_problem(const RewriteSystem& sys, const PreparedOrbit& a, const PreparedOrbit& b) {
    if (a.word.size() != b.word.size()) throw DataError("word lengths differ");
    auto t0 = std::chrono::steady_clock::now();
    TaskResult r;
    r.task = "word";
    r.system = sys.name;
    r.words = {a.word, b.word};
    r.L = static_cast<int>(a.word.size());
    r.chi = std::max(a.chi, b.chi);
    r.tau = std::max(a.tau, b.tau);
    r.value = state_fidelity(a.state, b.state);
    if (!a.gate.accepted || !b.gate.accepted)
        r.verdict = "inconclusive";
    else
        r.verdict = (r.value >= 0.5) ? "connected" : "disconnected";
    r.energy = std::max(a.gate.energy, b.gate.energy);
    r.p_nc = std::max(a.gate.p_nc, b.gate.p_nc);
    r.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

CountRoutes count_routes(const MPS& x) {
    CountRoutes c;
    int L = x.L();
    c.all_fidelity = std::pow(static_cast<double>(x.d), L) *
                     state_fidelity(all_state_mps(L, x.d), x);
    if (x.d == 2)
        c.observable = expectation(x, counting_observable(L, 2));
    else
        c.observable = std::nan("");
    return c;
}

TaskResult count_class(const RewriteSystem& sys, const PreparedOrbit& p) {
    auto t0 = std::chrono::steady_clock::now();
    CountRoutes c = count_routes(p.state);
    TaskResult r;
    r.task = "count";
    r.system = sys.name;
    r.words = {p.word};
    r.L = static_cast<int>(p.word.size());
    r.chi = p.chi;
    r.tau = p.tau;
    r.value = std::isnan(c.observable) ? c.all_fidelity : c.observable;
    r.value2 = c.all_fidelity;
    r.verdict = p.gate.accepted ? "" : "inconclusive";
    r.energy = p.gate.energy;
    r.p_nc = p.gate.p_nc;
    r.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

TaskResult grammar_overlap(const RewriteSystem& s1, const PreparedOrbit& a,
                           const RewriteSystem& s2, const PreparedOrbit& b) {
    if (s1.alphabet.symbols != s2.alphabet.symbols) throw DataError("alphabets differ");
    if (a.word.size() != b.word.size()) throw DataError("word lengths differ");
    auto t0 = std::chrono::steady_clock::now();
    TaskResult r;
    r.task = "overlap";
    r.system = s1.name + "|" + s2.name;
    r.words = {a.word, b.word};
    r.L = static_cast<int>(a.word.size());
    r.chi = std::max(a.chi, b.chi);
    r.tau = std::max(a.tau, b.tau);
    r.value = state_fidelity(a.state, b.state);
    r.verdict = (a.gate.accepted && b.gate.accepted) ? "" : "inconclusive";
    r.energy = std::max(a.gate.energy, b.gate.energy);
    r.p_nc = std::max(a.gate.p_nc, b.gate.p_nc);
    r.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

FilterOutcome filter_class(const MPS& orbit, const Alphabet& a,
                           const std::vector<std::vector<char>>& allowed) {
    if (static_cast<int>(allowed.size()) != orbit.L())
        throw DataError("one allowed-symbol set per site is required");
    MPO proj = site_filter_mpo(a, allowed);
    double p1 = expectation(orbit, proj);  // diagonal idempotent: <P> = |P psi|^2
    if (p1 < 1e-12) throw DataError("filter removes the whole class (surviving weight < 1e-12)");
    ApplyResult applied = apply_mpo(proj, orbit, 0);
    FilterOutcome out;
    out.state = std::move(applied.state);
    out.p1 = p1;
    return out;
}

StatEstimate substring_frequency(const MPS& orbit, const Alphabet& a, int pos,
                                 const std::string& pattern, int n, std::uint64_t seed) {
    int L = orbit.L();
    if (pattern.empty() || pos < 0 || pos + static_cast<int>(pattern.size()) > L)
        throw DataError("pattern window out of range");
    if (n < 1) throw DataError("sample count must be positive");
    std::vector<std::vector<char>> allowed(L);
    for (int i = 0; i < L; ++i) {
        if (i >= pos && i < pos + static_cast<int>(pattern.size()))
            allowed[i] = {pattern[static_cast<std::size_t>(i - pos)]};
        else
            allowed[i].assign(a.symbols.begin(), a.symbols.end());
    }
    StatEstimate out;
    out.exact = expectation(orbit, site_filter_mpo(a, allowed));
    auto words = sample(orbit, a, n, seed);
    int hits = 0;
    for (const auto& w : words)
        if (w.compare(pos, pattern.size(), pattern) == 0) ++hits;
    out.estimate = static_cast<double>(hits) / n;
    out.stderr_value = std::sqrt(out.estimate * (1.0 - out.estimate) / n);
    return out;
}

}  // namespace orbit
