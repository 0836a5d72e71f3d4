#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "orbit/mps.hpp"
#include "orbit/srs.hpp"

namespace orbit {

/// coeff * prod_i factors[i], identity on every unlisted site.
struct ProductTerm {
    double coeff = 1.0;
    std::map<int, Eigen::MatrixXd> factors;  // site -> d x d matrix
};

struct OperatorSum {
    int L = 0;
    int d = 0;
    std::vector<ProductTerm> terms;
};

/// Off-diagonal hopping part of one rule instance: |u><v| + |v><u| on the
/// rule's positions (u = lhs, v = rhs). Two product terms.
OperatorSum rule_operator(const Alphabet& a, const RuleInstance& r, int L);

/// Positive-semidefinite rule contribution (|u>-|v>)(<u|-<v|): four terms.
OperatorSum rule_laplacian(const Alphabet& a, const RuleInstance& r, int L);

/// Graph Laplacian of the rewriting graph at length L: the sum of
/// rule_laplacian over every rule instance (four terms per instance).
OperatorSum laplacian(const RewriteSystem& sys, int L);

/// Rank-one projector |w><w| as a single product term.
OperatorSum word_projector(const Alphabet& a, const Word& w);

Eigen::MatrixXd dense_operator(const OperatorSum& h);

/// Finite-state-machine compilation of a sum of product terms into an MPO.
/// The automaton form is exact; tol > 0 additionally runs an SVD rank
/// reduction sweep with relative cutoff tol (the default 1e-12 removes only
/// linearly dependent lanes, so the result is exact to machine precision
/// while the bond dimension drops substantially). tol = 0 keeps the raw
/// automaton form.
MPO compile_mpo(const OperatorSum& h, double tol = 1e-12);

/// (1-h) * lap - h * proj as a direct sum (the projector is bond-1); lap and
/// proj are compiled once and reused across schedule steps. tol > 0 runs the
/// same rank-reduction sweep as compile_mpo.
MPO annealing_mpo(const MPO& lap, const MPO& proj, double h, double tol = 1e-12);

/// Bond-1 product observable (1+sigma_x) on every site (binary alphabets
/// only; throws otherwise); its expectation equals 2^L |<uniform|psi>|^2.
MPO counting_observable(int L, int d);

/// Bond-1 diagonal projector onto per-site allowed symbol sets.
MPO site_filter_mpo(const Alphabet& a, const std::vector<std::vector<char>>& allowed);

}  // namespace orbit
