#include "orbit/mps.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

namespace orbit {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Vec flat_row_major(const Mat& m) {
    RowMat r = m;
    return Eigen::Map<const Vec>(r.data(), r.size());
}

Mat unflat_row_major(const Vec& v, long rows, long cols) {
    return Mat(Eigen::Map<const RowMat>(v.data(), rows, cols));
}

Mat to_right_matricization(const Mat& m, int bl, int d, int br) {
    Mat r(bl, static_cast<long>(d) * br);
    for (int l = 0; l < bl; ++l)
        for (int p = 0; p < d; ++p) r.row(l).segment(static_cast<long>(p) * br, br) = m.row(static_cast<long>(l) * d + p);
    return r;
}

Mat to_left_matricization(const Mat& m, int bl, int d, int br) {
    Mat r(static_cast<long>(bl) * d, br);
    for (int l = 0; l < bl; ++l)
        for (int p = 0; p < d; ++p) r.row(static_cast<long>(l) * d + p) = m.row(l).segment(static_cast<long>(p) * br, br);
    return r;
}

SvdFactor svd_split(const Mat& m, int chi, double tol) {
    Eigen::BDCSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    // Eigen 3.4's divide-and-conquer SVD occasionally returns NaN or a
    // finite but wrong factorization on valid input; detect both (the
    // latter via the reconstruction residual) and fall back to the slower,
    // robust one-sided Jacobi SVD.
    Eigen::JacobiSVD<Mat> jsvd;
    double fro = m.norm();
    bool bad = !svd.singularValues().allFinite() || !svd.matrixU().allFinite() ||
               !svd.matrixV().allFinite() ||
               (m - svd.matrixU() * svd.singularValues().asDiagonal() *
                        svd.matrixV().transpose())
                       .norm() > 1e-10 * std::max(fro, 1e-300);
    if (bad) jsvd.compute(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vec& s = bad ? jsvd.singularValues() : svd.singularValues();
    const Mat& mu = bad ? jsvd.matrixU() : svd.matrixU();
    const Mat& mv = bad ? jsvd.matrixV() : svd.matrixV();
    double smax = s.size() > 0 ? s(0) : 0.0;
    int k = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > tol * smax) ++k;
    if (chi > 0) k = std::min(k, chi);
    k = std::max(k, 1);
    k = std::min<int>(k, static_cast<int>(s.size()));
    double total = s.squaredNorm();
    double kept = s.head(k).squaredNorm();
    SvdFactor out;
    out.u = mu.leftCols(k);
    out.s = s.head(k);
    out.v = mv.leftCols(k);
    out.kept_fraction = total > 0 ? kept / total : 1.0;
    return out;
}

namespace {

// local aliases for readability
inline Vec flat_rm(const Mat& m) { return flat_row_major(m); }
inline Mat unflat_rm(const Vec& v, long rows, long cols) { return unflat_row_major(v, rows, cols); }
inline Mat to_right(const Mat& m, int bl, int d, int br) { return to_right_matricization(m, bl, d, br); }
inline Mat to_left(const Mat& m, int bl, int d, int br) { return to_left_matricization(m, bl, d, br); }
inline SvdFactor svd_trunc(const Mat& m, int chi, double tol) { return svd_split(m, chi, tol); }

// Left-orthonormalize site i, absorbing the triangular factor into site i+1.
void left_orth_step(MPS& x, int i) {
    Mat& a = x.sites[i];
    Eigen::HouseholderQR<Mat> qr(a);
    long k = std::min(a.rows(), a.cols());
    Mat q = qr.householderQ() * Mat::Identity(a.rows(), k);
    Mat r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    int bl2 = static_cast<int>(a.cols());
    a = q;
    Mat& b = x.sites[i + 1];
    int br2 = static_cast<int>(b.cols());
    Mat right = to_right(b, bl2, x.d, br2);
    b = to_left(r * right, static_cast<int>(k), x.d, br2);
}

// Right-orthonormalize site i, absorbing the factor into site i-1.
void right_orth_step(MPS& x, int i) {
    Mat& a = x.sites[i];
    int bl = static_cast<int>(a.rows()) / x.d;
    int br = static_cast<int>(a.cols());
    Mat right = to_right(a, bl, x.d, br);
    Eigen::HouseholderQR<Mat> qr(right.transpose());
    long k = std::min(right.rows(), right.cols());
    Mat q = qr.householderQ() * Mat::Identity(right.cols(), k);
    Mat r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    a = to_left(q.transpose(), static_cast<int>(k), x.d, br);
    x.sites[i - 1] = x.sites[i - 1] * r.transpose();
}

}  // namespace

Vec permute(const Vec& v, const std::vector<int>& dims, const std::vector<int>& perm) {
    int n = static_cast<int>(dims.size());
    std::vector<long> stride(n, 1);
    for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * dims[i + 1];
    std::vector<int> ndims(n);
    for (int i = 0; i < n; ++i) ndims[i] = dims[perm[i]];
    Vec out(v.size());
    std::vector<int> idx(n, 0);
    for (long flat = 0; flat < out.size(); ++flat) {
        long src = 0;
        for (int i = 0; i < n; ++i) src += static_cast<long>(idx[i]) * stride[perm[i]];
        out(flat) = v(src);
        for (int i = n - 1; i >= 0; --i) {
            if (++idx[i] < ndims[i]) break;
            idx[i] = 0;
        }
    }
    return out;
}

void MpoSite::build_cache() {
    wm.resize(static_cast<long>(kl) * d, static_cast<long>(d) * kr);
    for (int a = 0; a < kl; ++a)
        for (int p = 0; p < d; ++p)
            for (int q = 0; q < d; ++q)
                for (int b = 0; b < kr; ++b) wm(static_cast<long>(a) * d + q, static_cast<long>(p) * kr + b) = at(a, p, q, b);
}

MPO identity_mpo(int L, int d) {
    MPO m;
    m.d = d;
    m.sites.resize(L);
    for (auto& s : m.sites) {
        s.kl = s.kr = 1;
        s.d = d;
        s.v = Vec::Zero(static_cast<long>(d) * d);
        for (int p = 0; p < d; ++p) s.v(static_cast<long>(p) * d + p) = 1.0;
        s.build_cache();
    }
    return m;
}

MPO scale_mpo(MPO m, double s) {
    if (!m.sites.empty()) {
        m.sites[0].v *= s;
        m.sites[0].build_cache();
    }
    return m;
}

MPO add_mpo(const MPO& a, const MPO& b) {
    if (a.d != b.d || a.L() != b.L()) throw DataError("operator shapes differ");
    int n = a.L(), d = a.d;
    MPO out;
    out.d = d;
    out.sites.resize(n);
    for (int i = 0; i < n; ++i) {
        const MpoSite& sa = a.sites[i];
        const MpoSite& sb = b.sites[i];
        MpoSite s;
        s.d = d;
        s.kl = (i == 0) ? 1 : sa.kl + sb.kl;
        s.kr = (i == n - 1) ? 1 : sa.kr + sb.kr;
        s.v = Vec::Zero(static_cast<long>(s.kl) * d * d * s.kr);
        auto put = [&](int al, int p, int q, int ar, double val) {
            s.v(((static_cast<long>(al) * d + p) * d + q) * s.kr + ar) += val;
        };
        for (int al = 0; al < sa.kl; ++al)
            for (int p = 0; p < d; ++p)
                for (int q = 0; q < d; ++q)
                    for (int ar = 0; ar < sa.kr; ++ar) put(al, p, q, ar, sa.at(al, p, q, ar));
        int offl = (i == 0) ? 0 : sa.kl;
        int offr = (i == n - 1) ? 0 : sa.kr;
        for (int al = 0; al < sb.kl; ++al)
            for (int p = 0; p < d; ++p)
                for (int q = 0; q < d; ++q)
                    for (int ar = 0; ar < sb.kr; ++ar) put(al + offl, p, q, ar + offr, sb.at(al, p, q, ar));
        s.build_cache();
        out.sites[i] = std::move(s);
    }
    return out;
}

double compress_mpo(MPO& m, double tol) {
    int n = m.L();
    if (n < 2) return 0.0;
    int d = m.d;
    int dd = d * d;
    std::vector<Mat> s(n);
    for (int i = 0; i < n; ++i)
        s[i] = unflat_rm(m.sites[i].v, static_cast<long>(m.sites[i].kl) * dd, m.sites[i].kr);
    // right-orthonormalize, accumulating factors leftward (exact up to the
    // norm balancing, which keeps local magnitudes O(1))
    double log_scale = 0.0;
    for (int i = n - 1; i >= 1; --i) {
        int kl = static_cast<int>(s[i].rows()) / dd;
        int kr = static_cast<int>(s[i].cols());
        Mat right = to_right(s[i], kl, dd, kr);
        Eigen::HouseholderQR<Mat> qr(right.transpose());
        long k = std::min(right.rows(), right.cols());
        Mat q = qr.householderQ() * Mat::Identity(right.cols(), k);
        Mat r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
        s[i] = to_left(q.transpose(), static_cast<int>(k), dd, kr);
        s[i - 1] = s[i - 1] * r.transpose();
        double nrm = s[i - 1].norm();
        if (nrm > 0) {
            s[i - 1] /= nrm;
            log_scale += std::log(nrm);
        }
    }
    // left-to-right truncating sweep
    double kept_total = 1.0;
    for (int i = 0; i + 1 < n; ++i) {
        auto f = svd_trunc(s[i], 0, tol);
        kept_total *= f.kept_fraction;
        s[i] = f.u;
        Mat carry = f.s.asDiagonal() * f.v.transpose();
        double nrm = carry.norm();
        if (nrm > 0) {
            carry /= nrm;
            log_scale += std::log(nrm);
        }
        int bl2 = static_cast<int>(carry.cols());
        int br2 = static_cast<int>(s[i + 1].cols());
        Mat right = to_right(s[i + 1], bl2, dd, br2);
        s[i + 1] = to_left(carry * right, static_cast<int>(carry.rows()), dd, br2);
    }
    s[n - 1] *= std::exp(log_scale);
    for (int i = 0; i < n; ++i) {
        MpoSite& w = m.sites[i];
        w.kl = static_cast<int>(s[i].rows()) / dd;
        w.kr = static_cast<int>(s[i].cols());
        w.v = flat_rm(s[i]);
        w.build_cache();
    }
    return 1.0 - kept_total;
}

Eigen::MatrixXd mpo_dense(const MPO& m) {
    int d = m.d, n = m.L();
    double dim = std::pow(static_cast<double>(d), n);
    if (dim > 4096.0) throw BudgetError("dense operator too large");
    std::vector<Mat> cur{Mat::Ones(1, 1)};
    for (int i = 0; i < n; ++i) {
        const MpoSite& w = m.sites[i];
        long D = cur[0].rows();
        std::vector<Mat> nxt(w.kr, Mat::Zero(D * d, D * d));
        for (int b = 0; b < w.kr; ++b)
            for (int a = 0; a < w.kl; ++a)
                for (int p = 0; p < d; ++p)
                    for (int q = 0; q < d; ++q) {
                        double val = w.at(a, p, q, b);
                        if (val == 0.0) continue;
                        for (long r = 0; r < D; ++r)
                            for (long c = 0; c < D; ++c)
                                nxt[b](r * d + p, c * d + q) += val * cur[a](r, c);
                    }
        cur = std::move(nxt);
    }
    return cur[0];
}

int MPS::max_bond() const {
    int m = 1;
    for (const auto& s : sites) m = std::max(m, static_cast<int>(s.cols()));
    return m;
}

MPS product_mps(int d, const std::vector<int>& basis) {
    MPS x;
    x.d = d;
    x.sites.reserve(basis.size());
    for (int b : basis) {
        if (b < 0 || b >= d) throw DataError("basis index out of range");
        Mat s = Mat::Zero(d, 1);
        s(b, 0) = 1.0;
        x.sites.push_back(std::move(s));
    }
    x.center = static_cast<int>(basis.size()) - 1;
    return x;
}

MPS product_mps(const Alphabet& a, const Word& w) {
    std::vector<int> basis;
    basis.reserve(w.size());
    for (char c : w) basis.push_back(a.index_of(c));
    return product_mps(a.size(), basis);
}

MPS all_state_mps(int L, int d) {
    MPS x;
    x.d = d;
    x.sites.assign(L, Mat::Constant(d, 1, 1.0 / std::sqrt(static_cast<double>(d))));
    x.center = L - 1;
    return x;
}

void canonicalize(MPS& x, int center) {
    int n = x.L();
    if (center < 0 || center >= n) throw DataError("canonical center out of range");
    int lo = (x.center >= 0) ? x.center : 0;
    int hi = (x.center >= 0) ? x.center : n - 1;
    for (int i = hi; i > center; --i) right_orth_step(x, i);
    for (int i = lo; i < center; ++i) left_orth_step(x, i);
    double nrm = x.sites[center].norm();
    if (nrm < 1e-300) throw DataError("zero-norm state");
    x.sites[center] /= nrm;
    x.norm_log += std::log(nrm);
    x.center = center;
}

double inner(const MPS& a, const MPS& b) {
    if (a.d != b.d || a.L() != b.L()) throw DataError("state shapes differ");
    Mat e = Mat::Ones(1, 1);
    for (int i = 0; i < a.L(); ++i) {
        int blb = static_cast<int>(b.sites[i].rows()) / b.d;
        int brb = static_cast<int>(b.sites[i].cols());
        Mat t = e * to_right(b.sites[i], blb, b.d, brb);
        e = a.sites[i].transpose() * to_left(t, static_cast<int>(e.rows()), a.d, brb);
    }
    return e(0, 0);
}

Env env_update_left(const Env& e, const Mat& bra, const MpoSite& w, const Mat& ket) {
    int d = w.d;
    int b = e.b, k = e.k, b2 = e.b2;
    int br = static_cast<int>(bra.cols());
    int b2r = static_cast<int>(ket.cols());
    Mat t1 = e.m * to_right(ket, b2, d, b2r);  // (b*k) x (d*b2r)
    Mat t2 = unflat_rm(permute(flat_rm(t1), {b, k, d, b2r}, {1, 2, 0, 3}),
                       static_cast<long>(k) * d, static_cast<long>(b) * b2r);
    Mat t3 = w.wm.transpose() * t2;  // (d*kr) x (b*b2r)
    Mat t4 = unflat_rm(permute(flat_rm(t3), {d, w.kr, b, b2r}, {2, 0, 1, 3}),
                       static_cast<long>(b) * d, static_cast<long>(w.kr) * b2r);
    Mat ep = bra.transpose() * t4;  // br x (kr*b2r)
    Env out;
    out.b = br;
    out.k = w.kr;
    out.b2 = b2r;
    out.m = unflat_rm(flat_rm(ep), static_cast<long>(br) * w.kr, b2r);
    return out;
}

Env env_update_right(const Env& e, const Mat& bra, const MpoSite& w, const Mat& ket) {
    int d = w.d;
    int br = e.b, k = e.k, br2 = e.b2;
    int bl = static_cast<int>(bra.rows()) / d;
    int bl2 = static_cast<int>(ket.rows()) / d;
    Mat emat = unflat_rm(flat_rm(e.m), br, static_cast<long>(k) * br2);
    Mat t1 = bra * emat;  // (bl*d) x (k*br2)
    Mat t2 = unflat_rm(permute(flat_rm(t1), {bl, d, k, br2}, {1, 2, 0, 3}),
                       static_cast<long>(d) * k, static_cast<long>(bl) * br2);
    Mat t3 = w.wm * t2;  // (kl*d) x (bl*br2)
    Mat t4 = unflat_rm(permute(flat_rm(t3), {w.kl, d, bl, br2}, {2, 0, 1, 3}),
                       static_cast<long>(bl) * w.kl, static_cast<long>(d) * br2);
    Mat ep = t4 * to_right(ket, bl2, d, br2).transpose();  // (bl*kl) x bl2
    Env out;
    out.b = bl;
    out.k = w.kl;
    out.b2 = bl2;
    out.m = ep;
    return out;
}

double expectation(const MPS& x, const MPO& h) {
    if (x.d != h.d || x.L() != h.L()) throw DataError("state/operator shapes differ");
    Env e = Env::boundary();
    for (int i = 0; i < x.L(); ++i) e = env_update_left(e, x.sites[i], h.sites[i], x.sites[i]);
    return e.m(0, 0);
}

Eigen::VectorXd heff2_matvec(const Env& le, const MpoSite& w1, const MpoSite& w2, const Env& re,
                             const Vec& x, int bl, int br) {
    int d = w1.d;
    int k = le.k;
    Mat xm = unflat_rm(x, bl, static_cast<long>(d) * d * br);
    Mat t1 = le.m * xm;  // (bl*k) x (d*d*br)
    Mat t2 = unflat_rm(permute(flat_rm(t1), {bl, k, d, d, br}, {1, 2, 0, 3, 4}),
                       static_cast<long>(k) * d, static_cast<long>(bl) * d * br);
    Mat t3 = w1.wm.transpose() * t2;  // (d*k1r) x (bl*d*br)
    Mat t4 = unflat_rm(permute(flat_rm(t3), {d, w1.kr, bl, d, br}, {1, 3, 2, 0, 4}),
                       static_cast<long>(w1.kr) * d, static_cast<long>(bl) * d * br);
    Mat t5 = w2.wm.transpose() * t4;  // (d*k2r) x (bl*d*br)
    Mat t6 = unflat_rm(permute(flat_rm(t5), {d, w2.kr, bl, d, br}, {2, 3, 0, 1, 4}),
                       static_cast<long>(bl) * d * d, static_cast<long>(w2.kr) * br);
    Mat remat = unflat_rm(flat_rm(re.m), re.b, static_cast<long>(re.k) * re.b2);
    Mat y = t6 * remat.transpose();  // (bl*d*d) x br
    return flat_rm(y);
}

Eigen::VectorXd heff1_matvec(const Env& le, const MpoSite& w, const Env& re, const Vec& x,
                             int bl, int br) {
    int d = w.d;
    int k = le.k;
    Mat xm = unflat_rm(x, bl, static_cast<long>(d) * br);
    Mat t1 = le.m * xm;  // (bl*k) x (d*br)
    Mat t2 = unflat_rm(permute(flat_rm(t1), {bl, k, d, br}, {1, 2, 0, 3}),
                       static_cast<long>(k) * d, static_cast<long>(bl) * br);
    Mat t3 = w.wm.transpose() * t2;  // (d*kr) x (bl*br)
    Mat t4 = unflat_rm(permute(flat_rm(t3), {d, w.kr, bl, br}, {2, 0, 1, 3}),
                       static_cast<long>(bl) * d, static_cast<long>(w.kr) * br);
    Mat remat = unflat_rm(flat_rm(re.m), re.b, static_cast<long>(re.k) * re.b2);
    Mat y = t4 * remat.transpose();  // (bl*d) x br
    return flat_rm(y);
}

ApplyResult apply_mpo(const MPO& h, const MPS& x, int chi, double tol) {
    if (x.d != h.d || x.L() != h.L()) throw DataError("state/operator shapes differ");
    int d = x.d, n = x.L();
    MPS y;
    y.d = d;
    y.sites.resize(n);
    for (int i = 0; i < n; ++i) {
        const Mat& a = x.sites[i];
        const MpoSite& w = h.sites[i];
        int bl = static_cast<int>(a.rows()) / d;
        int br = static_cast<int>(a.cols());
        Mat ny = Mat::Zero(static_cast<long>(w.kl) * bl * d, static_cast<long>(w.kr) * br);
        for (int ai = 0; ai < w.kl; ++ai)
            for (int p = 0; p < d; ++p)
                for (int q = 0; q < d; ++q)
                    for (int b = 0; b < w.kr; ++b) {
                        double val = w.at(ai, p, q, b);
                        if (val == 0.0) continue;
                        for (int l = 0; l < bl; ++l)
                            ny.row((static_cast<long>(ai) * bl + l) * d + p)
                                .segment(static_cast<long>(b) * br, br) +=
                                val * a.row(static_cast<long>(l) * d + q);
                    }
        y.sites[i] = std::move(ny);
    }
    y.center = -1;
    y.norm_log = 0.0;
    canonicalize(y, 0);
    double captured = y.norm_log;
    y.norm_log = x.norm_log + captured;
    truncate(y, chi, tol);
    ApplyResult out;
    out.norm_sq = std::exp(2.0 * captured);
    out.state = std::move(y);
    return out;
}

TruncationResult truncate(MPS& x, int chi, double tol) {
    canonicalize(x, 0);
    int n = x.L();
    double kept_total = 1.0;
    for (int i = 0; i + 1 < n; ++i) {
        auto f = svd_trunc(x.sites[i], chi, tol);
        kept_total *= f.kept_fraction;
        x.sites[i] = f.u;
        Vec s = f.s / f.s.norm();
        Mat carry = s.asDiagonal() * f.v.transpose();
        int bl2 = static_cast<int>(carry.cols());
        int br2 = static_cast<int>(x.sites[i + 1].cols());
        Mat right = to_right(x.sites[i + 1], bl2, x.d, br2);
        x.sites[i + 1] = to_left(carry * right, static_cast<int>(carry.rows()), x.d, br2);
    }
    double nrm = x.sites[n - 1].norm();
    x.sites[n - 1] /= nrm;  // drift only; the discarded weight is reported
    x.center = n - 1;
    return {1.0 - kept_total};
}

void expand_basis(MPS& x, const MPS& z, int chi) {
    if (x.L() != z.L() || x.d != z.d) throw DataError("basis-expansion shapes differ");
    int L = x.L(), d = x.d;
    if (L < 2) return;
    canonicalize(x, 0);
    MPS zz = z;
    canonicalize(zz, 0);
    // D[zr, xr]: overlap of z and x suffix bases at the bond right of site i
    Mat D = Mat::Ones(1, 1);
    for (int i = L - 1; i >= 1; --i) {
        int bxl = static_cast<int>(x.sites[i].rows()) / d;
        int bxr = static_cast<int>(x.sites[i].cols());
        int bzl = static_cast<int>(zz.sites[i].rows()) / d;
        int bzr = static_cast<int>(zz.sites[i].cols());
        Mat mx = to_right(x.sites[i], bxl, d, bxr);   // orthonormal rows
        Mat mz = to_right(zz.sites[i], bzl, d, bzr);
        // z's local suffix candidates expressed over x's (d x suffix) basis
        Mat zloc(bzl, static_cast<long>(d) * bxr);
        for (int p = 0; p < d; ++p)
            zloc.middleCols(static_cast<long>(p) * bxr, bxr) =
                mz.middleCols(static_cast<long>(p) * bzr, bzr) * D;
        int room = (chi > 0) ? std::max(0, chi - bxl) : bzl;
        Mat nbasis(0, zloc.cols());
        if (room > 0 && i > 0) {
            Mat resid = zloc - (zloc * mx.transpose()) * mx;
            auto f = svd_trunc(resid.transpose(), room, 1e-10);
            int keep = 0;
            double smax = f.s.size() ? f.s(0) : 0.0;
            for (int k = 0; k < f.s.size() && keep < room; ++k)
                if (f.s(k) > 1e-10 * std::max(smax, 1e-30)) ++keep;
            if (keep > 0) nbasis = f.u.leftCols(keep).transpose();
        }
        int e = static_cast<int>(nbasis.rows());
        if (e > 0) {
            Mat mx2(bxl + e, mx.cols());
            mx2.topRows(bxl) = mx;
            mx2.bottomRows(e) = nbasis;
            x.sites[i] = to_left(mx2, bxl + e, d, bxr);
            Mat& prev = x.sites[i - 1];
            prev.conservativeResize(Eigen::NoChange, bxl + e);
            prev.rightCols(e).setZero();
        }
        Mat dnext(bzl, bxl + e);
        dnext.leftCols(bxl) = zloc * mx.transpose();
        if (e > 0) dnext.rightCols(e) = zloc * nbasis.transpose();
        D = std::move(dnext);
    }
    x.center = 0;
}

std::vector<std::vector<int>> sample_indices(const MPS& x, int n, std::uint64_t seed) {
    MPS y = x;
    canonicalize(y, 0);
    int L = y.L(), d = y.d;
    std::vector<Mat> right(L);
    for (int i = 0; i < L; ++i) {
        int bl = static_cast<int>(y.sites[i].rows()) / d;
        right[i] = to_right(y.sites[i], bl, d, static_cast<int>(y.sites[i].cols()));
    }
    std::mt19937_64 rng(seed);
    auto uni = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    std::vector<std::vector<int>> out;
    out.reserve(n);
    for (int s = 0; s < n; ++s) {
        Eigen::RowVectorXd v = Eigen::RowVectorXd::Ones(1);
        std::vector<int> word(L);
        for (int i = 0; i < L; ++i) {
            int br = static_cast<int>(y.sites[i].cols());
            Eigen::RowVectorXd w = v * right[i];
            double total = w.squaredNorm();
            double u = uni() * total;
            int pick = d - 1;
            double acc = 0;
            for (int p = 0; p < d; ++p) {
                acc += w.segment(static_cast<long>(p) * br, br).squaredNorm();
                if (u < acc) {
                    pick = p;
                    break;
                }
            }
            word[i] = pick;
            v = w.segment(static_cast<long>(pick) * br, br);
            double nv = v.norm();
            if (nv > 0) v /= nv;
        }
        out.push_back(std::move(word));
    }
    return out;
}

std::vector<Word> sample(const MPS& x, const Alphabet& a, int n, std::uint64_t seed) {
    auto idx = sample_indices(x, n, seed);
    std::vector<Word> out;
    out.reserve(idx.size());
    for (const auto& w : idx) {
        Word s(w.size(), '?');
        for (std::size_t i = 0; i < w.size(); ++i) s[i] = a.symbols[w[i]];
        out.push_back(std::move(s));
    }
    return out;
}

SchmidtSpectrum schmidt_spectrum(const MPS& x, int cut) {
    if (cut < 1 || cut > x.L() - 1) throw DataError("cut out of range");
    MPS y = x;
    canonicalize(y, cut - 1);
    auto f = svd_split(y.sites[cut - 1], 0, 0.0);
    SchmidtSpectrum out;
    out.bond = cut;
    for (int i = 0; i < f.s.size(); ++i) {
        double s = f.s(i);
        if (s > 0) out.values.push_back(s);
    }
    return out;
}

double entropy_bits(const SchmidtSpectrum& s) {
    double h = 0;
    for (double v : s.values) {
        double p = v * v;
        if (p > 1e-300) h -= p * std::log2(p);
    }
    return h;
}

double renyi2(const MPS& x, int first, int last) {
    int L = x.L();
    if (first < 0 || last >= L || first > last) throw DataError("region out of range");
    if (first == 0 && last == L - 1) return 0.0;
    if (first == 0 || last == L - 1) {
        int cut = (first == 0) ? last + 1 : first;
        auto sp = schmidt_spectrum(x, cut);
        double tr = 0;
        for (double v : sp.values) tr += v * v * v * v;
        return -std::log2(std::max(tr, 1e-300));
    }
    MPS y = x;
    canonicalize(y, first);
    int d = y.d;
    int b = y.bond_dim(first);
    {
        double bmax = b;
        for (int i = first; i <= last; ++i) bmax = std::max<double>(bmax, y.bond_dim(i + 1));
        if (bmax * bmax * bmax * bmax * d > 4e7)
            throw BudgetError("interior purity contraction too large at this bond dimension");
    }
    // four-copy transfer: Y[x1,x2,x3,x4], pairs (1,2) and (3,4) closed at the
    // boundaries, copies (1,4) and (2,3) sharing the physical index per site
    Vec yv = Vec::Zero(static_cast<long>(b) * b * b * b);
    for (int i = 0; i < b; ++i)
        for (int j = 0; j < b; ++j)
            yv(((static_cast<long>(i) * b + i) * b + j) * b + j) = 1.0;
    for (int site = first; site <= last; ++site) {
        const Mat& m = y.sites[site];
        int bl = static_cast<int>(m.rows()) / d;
        int br = static_cast<int>(m.cols());
        Mat rt = to_right(m, bl, d, br);
        // c1
        Mat t1 = rt.transpose() * unflat_rm(yv, bl, static_cast<long>(bl) * bl * bl);
        // (d*br) x bl^3 : dims {d,br,bl,bl,bl}
        Vec v2 = permute(flat_rm(t1), {d, br, bl, bl, bl}, {4, 0, 1, 2, 3});
        // c4 shares the physical index with c1
        Mat t3 = m.transpose() * unflat_rm(v2, static_cast<long>(bl) * d,
                                           static_cast<long>(br) * bl * bl);
        // br(y4) x (y1,x2,x3) : dims {br,br,bl,bl}
        Vec v4 = permute(flat_rm(t3), {br, br, bl, bl}, {2, 0, 1, 3});
        Mat t5 = rt.transpose() * unflat_rm(v4, bl, static_cast<long>(br) * br * bl);
        // (d*br)(P',y2) x (y4,y1,x3) : dims {d,br,br,br,bl}
        Vec v6 = permute(flat_rm(t5), {d, br, br, br, bl}, {4, 0, 1, 2, 3});
        Mat t7 = m.transpose() * unflat_rm(v6, static_cast<long>(bl) * d,
                                           static_cast<long>(br) * br * br);
        // br(y3) x (y2,y4,y1) : dims {br,br,br,br} in order (y3,y2,y4,y1)
        yv = permute(flat_rm(t7), {br, br, br, br}, {3, 1, 0, 2});
        b = br;
    }
    double tr = 0;
    for (int i = 0; i < b; ++i)
        for (int j = 0; j < b; ++j) tr += yv(((static_cast<long>(i) * b + i) * b + j) * b + j);
    return -std::log2(std::max(tr, 1e-300));
}

Eigen::VectorXd mps_dense(const MPS& x) {
    double dim = std::pow(static_cast<double>(x.d), x.L());
    if (dim > static_cast<double>(1 << 22)) throw BudgetError("dense statevector too large");
    Mat cur = Mat::Ones(1, 1);
    for (int i = 0; i < x.L(); ++i) {
        int bl = static_cast<int>(x.sites[i].rows()) / x.d;
        int br = static_cast<int>(x.sites[i].cols());
        Mat t = cur * to_right(x.sites[i], bl, x.d, br);
        cur = to_left(t, static_cast<int>(cur.rows()), x.d, br);
    }
    return Vec(cur.col(0));
}

namespace {
template <typename T>
void put(std::ofstream& f, T v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof v);
}
template <typename T>
T get(std::ifstream& f) {
    T v{};
    f.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}
}  // namespace

void save_mps(const MPS& x, const std::string& path, std::uint64_t seed) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open '" + path + "' for writing");
    f.write("OMPS", 4);
    put<std::uint32_t>(f, 1);
    put<std::uint32_t>(f, static_cast<std::uint32_t>(x.L()));
    put<std::uint32_t>(f, static_cast<std::uint32_t>(x.d));
    put<std::uint64_t>(f, seed);
    put<double>(f, x.norm_log);
    put<std::int32_t>(f, x.center);
    for (int b = 0; b <= x.L(); ++b) put<std::uint32_t>(f, static_cast<std::uint32_t>(x.bond_dim(b)));
    for (const auto& s : x.sites) {
        Vec v = flat_rm(s);
        f.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
    }
    if (!f) throw DataError("write to '" + path + "' failed");
}

MPS load_mps(const std::string& path, std::uint64_t* seed_out) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open '" + path + "'");
    char magic[4];
    f.read(magic, 4);
    if (!f || std::memcmp(magic, "OMPS", 4) != 0) throw DataError("bad snapshot magic");
    if (get<std::uint32_t>(f) != 1) throw DataError("unsupported snapshot version");
    int L = static_cast<int>(get<std::uint32_t>(f));
    int d = static_cast<int>(get<std::uint32_t>(f));
    std::uint64_t seed = get<std::uint64_t>(f);
    if (seed_out) *seed_out = seed;
    MPS x;
    x.d = d;
    x.norm_log = get<double>(f);
    x.center = get<std::int32_t>(f);
    std::vector<int> bonds(L + 1);
    for (int b = 0; b <= L; ++b) bonds[b] = static_cast<int>(get<std::uint32_t>(f));
    if (L < 1 || d < 1 || bonds[0] != 1 || bonds[L] != 1) throw DataError("bad snapshot header");
    x.sites.resize(L);
    for (int i = 0; i < L; ++i) {
        long rows = static_cast<long>(bonds[i]) * d, cols = bonds[i + 1];
        Vec v(rows * cols);
        f.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
        if (!f) throw DataError("truncated snapshot payload");
        x.sites[i] = unflat_rm(v, rows, cols);
    }
    return x;
}

}  // namespace orbit
