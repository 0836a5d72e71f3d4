#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orbit/evolution.hpp"
#include "orbit/mps.hpp"
#include "orbit/srs.hpp"

namespace orbit {

/// Flat result record shared by every query; serialized as one JSON object.
struct TaskResult {
    std::string task;
    std::string system;
    std::vector<Word> words;
    int L = 0;
    int chi = 0;
    double tau = 0;
    double value = 0;
    std::optional<double> value2;  // second route where one exists
    std::optional<double> stderr_value;
    std::string verdict;  // "connected" / "disconnected" / "inconclusive" / ""
    std::optional<double> energy;
    std::optional<double> p_nc;
    std::uint64_t seed = 0;
    double wall_s = 0;

    std::string to_json() const;
};

/// An annealed orbit-state approximation together with its gate metrics.
struct PreparedOrbit {
    MPS state;
    QualityGate gate;
    Word word;
    double tau = 0;
    int chi = 0;
};

PreparedOrbit prepare_orbit(const RewriteSystem& sys, const Word& w, const AnnealSchedule& sched,
                            ClassChecker checker = {});

/// Runs the (tau, chi) grid in increasing-cost order and returns the first
/// accepted preparation (i.e. the cheapest state passing the quality gate);
/// falls back to the last attempt, unaccepted, when none passes.
PreparedOrbit prepare_orbit_escalating(const RewriteSystem& sys, const Word& w,
                                       AnnealSchedule base, const std::vector<double>& taus,
                                       const std::vector<int>& chis, ClassChecker checker = {});

double state_fidelity(const MPS& a, const MPS& b);  // |<a|b>|^2

TaskResult word_problem(const RewriteSystem& sys, const PreparedOrbit& a, const PreparedOrbit& b);

struct CountRoutes {
    double observable = 0;    // <psi| O |psi> (d = 2 only; NaN otherwise)
    double all_fidelity = 0;  // d^L |<uniform|psi>|^2
};
CountRoutes count_routes(const MPS& x);

TaskResult count_class(const RewriteSystem& sys, const PreparedOrbit& p);

TaskResult grammar_overlap(const RewriteSystem& s1, const PreparedOrbit& a,
                           const RewriteSystem& s2, const PreparedOrbit& b);

struct FilterOutcome {
    MPS state;       // renormalized projection
    double p1 = 0;   // squared norm before renormalization
};

/// Projects onto per-site allowed symbol sets and renormalizes. Throws when
/// the surviving weight falls below 1e-12.
FilterOutcome filter_class(const MPS& orbit, const Alphabet& a,
                           const std::vector<std::vector<char>>& allowed);

struct StatEstimate {
    double estimate = 0;  // sampled frequency
    double stderr_value = 0;
    double exact = 0;     // diagonal-operator route
};

/// Frequency of `pattern` starting at 0-based position pos over class
/// members, both sampled (n draws) and via the exact diagonal projector.
StatEstimate substring_frequency(const MPS& orbit, const Alphabet& a, int pos,
                                 const std::string& pattern, int n, std::uint64_t seed);

}  // namespace orbit
