#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <orbit/graph_oracle.hpp>
#include <orbit/hamiltonian.hpp>
#include <orbit/instances.hpp>
#include <orbit/mps.hpp>

using namespace orbit;
using Mat = Eigen::MatrixXd;

namespace {

RuleInstance swap_at(int i) { return RuleInstance{{i, i + 1}, "ab", "ba"}; }

}  // namespace

TEST_CASE("rule operator: dense action on a two-site chain") {
    Alphabet a{"ab"};
    Mat r = dense_operator(rule_operator(a, swap_at(0), 2));
    // basis order aa, ab, ba, bb
    Mat want = Mat::Zero(4, 4);
    want(1, 2) = want(2, 1) = 1;
    CHECK((r - want).norm() == 0.0);
    CHECK((r - r.transpose()).norm() == 0.0);
    // squared, restricted to matching states, projects onto span{|ab>,|ba>}
    Mat r2 = r * r;
    Mat proj = Mat::Zero(4, 4);
    proj(1, 1) = proj(2, 2) = 1;
    CHECK((r2 - proj).norm() == 0.0);
}

TEST_CASE("rule Laplacian: PSD Gram form with 0/1 diagonal") {
    Alphabet a{"ab"};
    Mat lr = dense_operator(rule_laplacian(a, swap_at(0), 2));
    Mat want(4, 4);
    want << 0, 0, 0, 0,
            0, 1, -1, 0,
            0, -1, 1, 0,
            0, 0, 0, 0;
    CHECK((lr - want).norm() == 0.0);
    Eigen::SelfAdjointEigenSolver<Mat> es(lr);
    CHECK(es.eigenvalues()(0) >= -1e-12);
    for (int i = 0; i < 4; ++i) CHECK((lr(i, i) == 0.0 || lr(i, i) == 1.0));
}

TEST_CASE("operator-sum Laplacian equals the adjacency-based oracle") {
    for (const auto& sys : test_corpus()) {
        CAPTURE(sys.name);
        for (int L = 2; L <= 6; ++L) {
            Mat direct = dense_operator(laplacian(sys, L));
            Mat oracle = build_dense_laplacian(sys, L).matrix;
            CHECK((direct - oracle).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("empty rule set compiles to the zero operator") {
    RewriteSystem sys;
    sys.alphabet = Alphabet{"ab"};
    CHECK(dense_operator(laplacian(sys, 3)).norm() == 0.0);
}

TEST_CASE("compiled MPO equals the dense Laplacian entrywise") {
    for (const auto& sys : test_corpus()) {
        CAPTURE(sys.name);
        int L = 5;
        MPO m = compile_mpo(laplacian(sys, L));
        Mat oracle = build_dense_laplacian(sys, L).matrix;
        CHECK((mpo_dense(m) - oracle).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("word projector expectations") {
    Alphabet a{"ab"};
    Word w = "abba";
    MPO p = compile_mpo(word_projector(a, w));
    CHECK(expectation(product_mps(a, w), p) == doctest::Approx(1).epsilon(1e-12));
    CHECK(expectation(product_mps(a, "abab"), p) == doctest::Approx(0).epsilon(1e-12));
    CHECK(expectation(all_state_mps(4, 2), p) == doctest::Approx(1.0 / 16).epsilon(1e-12));
}

TEST_CASE("annealing interpolation endpoints and midpoint") {
    auto sys = window_chain_system();
    int L = 4;
    MPO lap = compile_mpo(laplacian(sys, L));
    MPO proj = compile_mpo(word_projector(sys.alphabet, "aaaa"));
    Mat dl = mpo_dense(lap), dp = mpo_dense(proj);
    CHECK((mpo_dense(annealing_mpo(lap, proj, 0.0)) - dl).norm() < 1e-10);
    Mat h1 = mpo_dense(annealing_mpo(lap, proj, 1.0));
    CHECK((h1 + dp).norm() < 1e-10);
    Eigen::SelfAdjointEigenSolver<Mat> es(h1);
    CHECK(es.eigenvalues()(0) == doctest::Approx(-1).epsilon(1e-12));
    Mat mid = mpo_dense(annealing_mpo(lap, proj, 0.3));
    CHECK((mid - (0.7 * dl - 0.3 * dp)).norm() < 1e-10);
    CHECK_THROWS_AS(annealing_mpo(lap, proj, 1.5), DataError);
}

TEST_CASE("perturbed ground state overlap beats the deformation bound (dense route)") {
    auto sys = window_chain_system();
    double h = 0.05;
    auto g = exact_perturbed_ground(sys, "aaaa", h);
    auto orbit = exact_orbit_state(sys, "aaaa");
    auto bound = perturbative_bound(h, spectral_gap(sys, 4).gap, 3.0);
    CHECK(std::pow(orbit.dot(g.state), 2) >= 1.0 - bound.loose - 1e-12);
}

TEST_CASE("counting observable") {
    int L = 4;
    MPO o = counting_observable(L, 2);
    Alphabet a{"ab"};
    CHECK(expectation(all_state_mps(L, 2), o) == doctest::Approx(16).epsilon(1e-9));
    CHECK(expectation(product_mps(a, "abba"), o) == doctest::Approx(1).epsilon(1e-9));
    CHECK_THROWS_AS(counting_observable(4, 3), DataError);
}

TEST_CASE("site filter projector") {
    Alphabet a{"ab"};
    // allow everything -> identity
    MPO open = site_filter_mpo(a, {{'a', 'b'}, {'a', 'b'}});
    CHECK((mpo_dense(open) - Mat::Identity(4, 4)).norm() == 0.0);
    // second site pinned to 'b'
    MPO pin = site_filter_mpo(a, {{'a', 'b'}, {'b'}});
    Mat d = mpo_dense(pin);
    CHECK((d.diagonal() - Eigen::Vector4d(0, 1, 0, 1)).norm() == 0.0);
    CHECK((d - Mat(d.diagonal().asDiagonal())).norm() == 0.0);
}
