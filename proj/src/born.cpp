#include "lithoqed/born.hpp"

#include <boost/math/special_functions/detail/bessel_j0.hpp>
#include <boost/math/special_functions/detail/bessel_j1.hpp>

#include <bit>
#include <cmath>
#include <deque>
#include <map>

namespace lithoqed {

const MomentCache::Moments* MomentCache::find(int group, double k, double kp) const {
    auto it = map_.find({std::bit_cast<std::uint64_t>(k), std::bit_cast<std::uint64_t>(kp), group});
    return it == map_.end() ? nullptr : &it->second;
}

void MomentCache::insert(int group, double k, double kp, const Moments& m) {
    map_[{std::bit_cast<std::uint64_t>(k), std::bit_cast<std::uint64_t>(kp), group}] = m;
}

namespace {

struct SubGroup {
    Interval y;
    std::vector<Interval> xs;
    double wmax = 0.0;
};

struct Piece {
    double z0, z1;
    Ordering ord;
};

struct ZGroup {
    Interval z;
    std::vector<SubGroup> subs;
    std::vector<Piece> pieces;
};

std::vector<ZGroup> group_boxes(const DepositionGeometry& geo) {
    std::vector<ZGroup> groups;
    for (const auto& b : geo.boxes) {
        ZGroup* g = nullptr;
        for (auto& cand : groups)
            if (cand.z == b.z) g = &cand;
        if (!g) {
            groups.push_back({b.z, {}, {}});
            g = &groups.back();
        }
        SubGroup* s = nullptr;
        for (auto& cand : g->subs)
            if (cand.y == b.y) s = &cand;
        if (!s) {
            g->subs.push_back({b.y, {}, 0.0});
            s = &g->subs.back();
        }
        s->xs.push_back(b.x);
        s->wmax = std::max(s->wmax, b.x.width());
    }
    return groups;
}

void split_pieces(ZGroup& g, double rz, double rzp) {
    std::vector<double> cuts{g.z.lo, g.z.hi};
    for (double c : {rz, rzp})
        if (c > g.z.lo && c < g.z.hi) cuts.push_back(c);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double m = 0.5 * (cuts[i] + cuts[i + 1]);
        const bool above1 = rz > m, above2 = rzp > m;
        if (above1 != above2)
            throw std::domain_error("field and source points lie on opposite sides of a deposition slab");
        g.pieces.push_back({cuts[i], cuts[i + 1], above1 ? Ordering::greater : Ordering::lesser});
    }
}

double max_corner_distance(const ZGroup& g, double x, double y) {
    double r = 0.0;
    for (const auto& s : g.subs)
        for (const auto& xi : s.xs)
            for (double cx : {xi.lo, xi.hi})
                for (double cy : {s.y.lo, s.y.hi}) r = std::max(r, std::hypot(cx - x, cy - y));
    return r;
}

// Decay exponents of the four term classes over one piece: exp(-kappa a - kappa' b)
struct DecayClass {
    double a, b;
};

std::vector<DecayClass> decay_classes(const std::vector<ZGroup>& groups, double rz, double rzp, bool whole) {
    std::vector<DecayClass> out;
    for (const auto& g : groups)
        for (const auto& p : g.pieces) {
            const bool gt = p.ord == Ordering::greater;
            const double free1 = gt ? rz - p.z1 : p.z0 - rz;
            const double free2 = gt ? rzp - p.z1 : p.z0 - rzp;
            const double refl1 = rz + p.z0, refl2 = rzp + p.z0;
            out.push_back({free1, refl2});
            out.push_back({refl1, free2});
            out.push_back({refl1, refl2});
            if (whole) out.push_back({free1, free2});
        }
    return out;
}

// 5-point trigonometric Lagrange basis: L_b(phi) = sum_m T[b][m] e_m(phi), e = {1, cos, sin, cos 2, sin 2}
struct Lagrange5 {
    double T[5][5];
    double cth[5], sth[5];
    Lagrange5() {
        for (int b = 0; b < 5; ++b) {
            const double t = 2 * pi * b / 5;
            cth[b] = std::cos(t);
            sth[b] = std::sin(t);
            T[b][0] = 0.2;
            T[b][1] = 0.4 * std::cos(t);
            T[b][2] = 0.4 * std::sin(t);
            T[b][3] = 0.4 * std::cos(2 * t);
            T[b][4] = 0.4 * std::sin(2 * t);
        }
    }
};
const Lagrange5 lag;

using AngularMoments = std::array<Complex, 25>;  // Lagrange-basis moments ML_bb'

// G_pq = sum_bb' f_p(k at theta_b) f_q(k' at theta_b') ML_bb': projections of every separable kernel half.
MomentCache::Moments factor_gram(const AngularMoments& ml, double k, double kp) {
    constexpr int F = angular_factor_count;
    double A[5][F], B[5][F];
    for (int b = 0; b < 5; ++b)
        for (int p = 0; p < F; ++p) {
            A[b][p] = angular_factor(AngularFactor(p), k * lag.sth[b], k * lag.cth[b]);
            B[b][p] = angular_factor(AngularFactor(p), kp * lag.sth[b], kp * lag.cth[b]);
        }
    Complex MB[5][F];
    for (int u = 0; u < 5; ++u)
        for (int q = 0; q < F; ++q) {
            Complex s = 0.0;
            for (int v = 0; v < 5; ++v) s += ml[u * 5 + v] * B[v][q];
            MB[u][q] = s;
        }
    MomentCache::Moments g{};
    for (int p = 0; p < F; ++p)
        for (int q = 0; q < F; ++q) {
            Complex s = 0.0;
            for (int u = 0; u < 5; ++u) s += A[u][p] * MB[u][q];
            g[p * F + q] = s;
        }
    return g;
}

inline Complex cis(double x) { return {std::cos(x), std::sin(x)}; }

inline double sinc4(double x) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
}

AngularMoments angular_moments(const ZGroup& g, const Vec3& r, const Vec3& rp, double k, double kp, int N,
                                     int Np) {
    using CMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
    Eigen::VectorXd kx(N), ky(N), pkx(Np), pky(Np);
    CMat E(N, 5), Ep(Np, 5);
    for (int a = 0; a < N; ++a) {
        const double ph = 2 * pi * a / N, c = std::cos(ph), s = std::sin(ph);
        kx[a] = k * s;
        ky[a] = k * c;
        E.row(a) << 1.0, c, s, c * c - s * s, 2 * s * c;
    }
    for (int a = 0; a < Np; ++a) {
        const double ph = 2 * pi * a / Np, c = std::cos(ph), s = std::sin(ph);
        pkx[a] = kp * s;
        pky[a] = kp * c;
        Ep.row(a) << 1.0, c, s, c * c - s * s, 2 * s * c;
    }
    // Each 1-D factor is a difference of edge exponentials, i.e. a low-rank product U V^T divided
    // by the phase; H(a, a') accumulates X * Y over the footprints of the group.
    CMat H = CMat::Zero(N, Np);
    for (const auto& sub : g.subs) {
        const int J = int(sub.xs.size());
        CMat Ux(N, 2 * J), Vx(Np, 2 * J), Uy(N, 2), Vy(Np, 2);
        for (int j = 0; j < J; ++j) {
            const double e[2] = {sub.xs[j].hi, sub.xs[j].lo};
            for (int t = 0; t < 2; ++t) {
                const double sg = t == 0 ? 1.0 : -1.0;
                for (int a = 0; a < N; ++a) Ux(a, 2 * j + t) = sg * cis(kx[a] * (r.x() - e[t]));
                for (int b = 0; b < Np; ++b) Vx(b, 2 * j + t) = cis(-pkx[b] * (rp.x() - e[t]));
            }
        }
        const double ey[2] = {sub.y.hi, sub.y.lo};
        for (int t = 0; t < 2; ++t) {
            const double sg = t == 0 ? 1.0 : -1.0;
            for (int a = 0; a < N; ++a) Uy(a, t) = sg * cis(ky[a] * (r.y() - ey[t]));
            for (int b = 0; b < Np; ++b) Vy(b, t) = cis(-pky[b] * (rp.y() - ey[t]));
        }
        const CMat X = Ux * Vx.transpose(), Y = Uy * Vy.transpose();
        const double ym = sub.y.mid(), wy = sub.y.width();
        for (int b = 0; b < Np; ++b)
            for (int a = 0; a < N; ++a) {
                const double bx = pkx[b] - kx[a], by = pky[b] - ky[a];
                const bool sx = std::abs(bx) * sub.wmax < sinc_threshold, sy = std::abs(by) * wy < sinc_threshold;
                if (!sx && !sy) {
                    H(a, b) -= X(a, b) * Y(a, b) / (bx * by);
                    continue;
                }
                Complex xf = 0.0, yf;
                if (sx) {
                    for (int j = 0; j < J; ++j) {
                        const double w = sub.xs[j].width(), xm = sub.xs[j].mid();
                        xf += cis(kx[a] * (r.x() - xm) - pkx[b] * (rp.x() - xm)) * (w * sinc4(0.5 * bx * w));
                    }
                } else {
                    xf = X(a, b) * Complex(0.0, -1.0 / bx);
                }
                if (sy)
                    yf = cis(ky[a] * (r.y() - ym) - pky[b] * (rp.y() - ym)) * (wy * sinc4(0.5 * by * wy));
                else
                    yf = Y(a, b) * Complex(0.0, -1.0 / by);
                H(a, b) += xf * yf;
            }
    }
    const Eigen::Matrix<Complex, 5, 5> M = E.transpose() * H * Ep;
    const double scale = (2 * pi / N) * (2 * pi / Np);
    AngularMoments out{};
    for (int b = 0; b < 5; ++b)
        for (int bp = 0; bp < 5; ++bp) {
            Complex v = 0.0;
            for (int m = 0; m < 5; ++m)
                for (int n = 0; n < 5; ++n) v += lag.T[b][m] * lag.T[bp][n] * M(m, n);
            out[b * 5 + bp] = v * scale;
        }
    return out;
}

// ---- coincident points: the angular integrals reduce to Bessel functions of k rho, leaving a
// radial integral over arcs of the footprint centred on the field point.

struct GaussRule {
    std::vector<double> x, w;  // on [0, 1]
};

const GaussRule& gauss_rule(int n) {
    thread_local std::map<int, GaussRule> rules;
    auto it = rules.find(n);
    if (it != rules.end()) return it->second;
    // Golub-Welsch
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) J(i, i - 1) = J(i - 1, i) = i / std::sqrt(4.0 * i * i - 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    GaussRule g;
    for (int i = 0; i < n; ++i) {
        g.x.push_back(0.5 * (es.eigenvalues()[i] + 1.0));
        g.w.push_back(es.eigenvectors()(0, i) * es.eigenvectors()(0, i));
    }
    return rules.emplace(n, std::move(g)).first->second;
}

// Arc integrals of {1, cos p t, sin p t} (p = 1..4) over the part of the circle inside a rectangle.
using ArcSums = std::array<double, 9>;

void add_arc(ArcSums& a, double t0, double t1) {
    a[0] += t1 - t0;
    for (int p = 1; p <= 4; ++p) {
        a[2 * p - 1] += (std::sin(p * t1) - std::sin(p * t0)) / p;
        a[2 * p] += (std::cos(p * t0) - std::cos(p * t1)) / p;
    }
}

void arcs_in_rect(ArcSums& a, double X, double Y, double rho, double x0, double x1, double y0, double y1) {
    double t[8];
    int n = 0;
    for (double xe : {x0, x1}) {
        const double c = (xe - X) / rho;
        if (std::abs(c) < 1.0) {
            const double u = std::acos(c);
            t[n++] = u;
            t[n++] = 2 * pi - u;
        }
    }
    for (double ye : {y0, y1}) {
        const double c = (ye - Y) / rho;
        if (std::abs(c) < 1.0) {
            const double u = std::asin(c);
            t[n++] = u < 0 ? u + 2 * pi : u;
            t[n++] = pi - u;
        }
    }
    auto inside = [&](double th) {
        const double x = X + rho * std::cos(th), y = Y + rho * std::sin(th);
        return x >= x0 && x <= x1 && y >= y0 && y <= y1;
    };
    if (n == 0) {
        if (inside(0.0)) add_arc(a, 0.0, 2 * pi);
        return;
    }
    std::sort(t, t + n);
    for (int i = 0; i < n; ++i) {
        const double lo = t[i], hi = i + 1 < n ? t[i + 1] : t[0] + 2 * pi;
        if (hi > lo && inside(0.5 * (lo + hi))) add_arc(a, lo, hi);
    }
}

// t_m t_n in the basis {1, c1, s1, c2, s2, c3, s3, c4, s4} for t = {1, sin, cos, cos 2, sin 2}
double arc_product(const ArcSums& a, int m, int n) {
    if (m > n) std::swap(m, n);
    const double one = a[0], c1 = a[1], s1 = a[2], c2 = a[3], s2 = a[4], c3 = a[5], s3 = a[6], c4 = a[7], s4 = a[8];
    switch (m * 5 + n) {
        case 0: return one;
        case 1: return s1;
        case 2: return c1;
        case 3: return c2;
        case 4: return s2;
        case 6: return 0.5 * (one - c2);
        case 7: return 0.5 * s2;
        case 8: return 0.5 * (s3 - s1);
        case 9: return 0.5 * (c1 - c3);
        case 12: return 0.5 * (one + c2);
        case 13: return 0.5 * (c1 + c3);
        case 14: return 0.5 * (s3 + s1);
        case 18: return 0.5 * (one + c4);
        case 19: return 0.5 * s4;
        case 24: return 0.5 * (one - c4);
    }
    return 0.0;
}

inline void bessel012(double x, double& j0, double& j1, double& j2) {
    j0 = boost::math::detail::bessel_j0(x);
    j1 = boost::math::detail::bessel_j1(x);
    if (x < 0.5) {
        const double x2 = x * x;
        j2 = x2 / 8.0 * (1.0 - x2 / 12.0 + x2 * x2 / 384.0 - x2 * x2 * x2 / 23040.0);
    } else {
        j2 = 2.0 * j1 / x - j0;
    }
}

class PolarMoments {
public:
    PolarMoments(const ZGroup& g, double X, double Y) : X_(X), Y_(Y) {
        for (const auto& sub : g.subs)
            for (const auto& xi : sub.xs) rects_.push_back({xi.lo, xi.hi, sub.y.lo, sub.y.hi});
        std::vector<double> kinks{0.0};
        for (const auto& q : rects_) {
            for (double xe : {q[0], q[1]}) kinks.push_back(std::abs(xe - X));
            for (double ye : {q[2], q[3]}) kinks.push_back(std::abs(ye - Y));
            for (double xe : {q[0], q[1]})
                for (double ye : {q[2], q[3]}) {
                    kinks.push_back(std::hypot(xe - X, ye - Y));
                    rmax_ = std::max(rmax_, kinks.back());
                }
        }
        std::sort(kinks.begin(), kinks.end());
        for (double k : kinks)
            if (k <= rmax_ && (breaks_.empty() || k - breaks_.back() > 1e-12 * (1.0 + rmax_))) breaks_.push_back(k);
        if (breaks_.back() < rmax_) breaks_.push_back(rmax_);
    }

    AngularMoments moments(double k, double kp) {
        const Level& L = level(k + kp);
        const std::size_t Q = L.rho.size();
        if (k != k_last_ || &L != level_last_) fill(L, k, jk_);
        fill(L, kp, jkp_);
        k_last_ = k;
        level_last_ = &L;
        static constexpr int mu[5] = {0, 1, 1, 2, 2};
        static const Complex c[5] = {2 * pi, Complex(0, -2 * pi), Complex(0, -2 * pi), 2 * pi, -2 * pi};
        static const Complex cp[5] = {2 * pi, Complex(0, 2 * pi), Complex(0, 2 * pi), 2 * pi, -2 * pi};
        double S[5][5] = {};
        for (std::size_t q = 0; q < Q; ++q) {
            const double* a = &jk_[3 * q];
            const double* b = &jkp_[3 * q];
            const double* t = &L.arcs[15 * q];
            int idx = 0;
            for (int m = 0; m < 5; ++m)
                for (int n = m; n < 5; ++n, ++idx) {
                    S[m][n] += t[idx] * a[mu[m]] * b[mu[n]];
                    if (n != m) S[n][m] += t[idx] * a[mu[n]] * b[mu[m]];
                }
        }
        Complex M[5][5];
        for (int m = 0; m < 5; ++m)
            for (int n = 0; n < 5; ++n) M[m][n] = c[m] * cp[n] * S[m][n];
        AngularMoments out{};
        for (int b = 0; b < 5; ++b)
            for (int bp = 0; bp < 5; ++bp) {
                Complex v = 0.0;
                for (int m = 0; m < 5; ++m)
                    for (int n = 0; n < 5; ++n) v += lag.T[b][m] * lag.T[bp][n] * M[m][n];
                out[b * 5 + bp] = v;
            }
        return out;
    }

private:
    struct Level {
        double K;
        std::vector<double> rho;   // nodes
        std::vector<double> arcs;  // 15 products per node, times weight * rho
    };

    const Level& level(double K) {
        for (const auto& l : levels_)
            if (l.K >= K) return l;
        double Kl = levels_.empty() ? 4.0 : levels_.back().K;
        while (Kl < K) Kl *= 2.0;
        Level l{Kl, {}, {}};
        constexpr int per = 24;  // largest Gauss rule per sub-interval
        for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) {
            const double a = breaks_[i], b = breaks_[i + 1], len = b - a;
            // cosine map clusters nodes at the kink radii, where the arc length has square-root behaviour
            const int need = int(std::ceil(0.8 * Kl * len)) + 8;
            const int m = (need + per - 1) / per;
            const int n = (need + m - 1) / m;
            const GaussRule& g = gauss_rule(n);
            for (int s = 0; s < m; ++s)
                for (int j = 0; j < n; ++j) {
                    const double u = (s + g.x[j]) / m;
                    const double rho = a + len * 0.5 * (1.0 - std::cos(pi * u));
                    const double wt = g.w[j] / m * len * 0.5 * pi * std::sin(pi * u);
                    ArcSums arc{};
                    for (const auto& q : rects_) arcs_in_rect(arc, X_, Y_, rho, q[0], q[1], q[2], q[3]);
                    l.rho.push_back(rho);
                    for (int mm = 0; mm < 5; ++mm)
                        for (int nn = mm; nn < 5; ++nn) l.arcs.push_back(wt * rho * arc_product(arc, mm, nn));
                }
        }
        levels_.push_back(std::move(l));
        k_last_ = -1.0;
        return levels_.back();
    }

    static void fill(const Level& L, double k, std::vector<double>& out) {
        out.resize(3 * L.rho.size());
        for (std::size_t q = 0; q < L.rho.size(); ++q) bessel012(k * L.rho[q], out[3 * q], out[3 * q + 1], out[3 * q + 2]);
    }

    double X_, Y_, rmax_ = 0.0;
    std::vector<std::array<double, 4>> rects_;
    std::vector<double> breaks_;
    std::deque<Level> levels_;
    std::vector<double> jk_, jkp_;
    double k_last_ = -1.0;
    const Level* level_last_ = nullptr;
};

struct Reflection {
    Complex te, tm;
};

Reflection reflect(const MaterialModel& m, Complex eps, Complex w, double k, Complex k_z) {
    if (m.kind == MaterialKind::perfect_mirror) return {-1.0, 1.0};
    if (m.kind == MaterialKind::vacuum) return {0.0, 0.0};
    const Complex kd = kz_medium(eps, w, k);
    return {(k_z - kd) / (k_z + kd), (eps * k_z - kd) / (eps * k_z + kd)};
}

double kappa_lower(Complex w, double k) {
    if (w.imag() == 0.0) return k > w.real() ? std::sqrt((k - w.real()) * (k + w.real())) : 0.0;
    if (w.real() == 0.0) return k;
    const Complex q = kz(w, k);
    return std::max(0.0, q.imag());
}

double lambda_from_kappa(Complex w, double kappa) {
    const double w2 = (w * w).real();
    return std::sqrt(kappa * kappa + std::max(w2, 0.0));
}

enum TermClass { A = 0, B = 1, Q = 2, V = 3 };

struct Term {
    KernelType tau;
    bool primed;
    TermClass cls;
};

constexpr Term terms[] = {
    {KernelType::TE, false, A},   {KernelType::TE, true, B},    {KernelType::TM, false, A},
    {KernelType::TM, true, B},    {KernelType::TETE, false, Q}, {KernelType::TMTM, false, Q},
    {KernelType::TETM, false, Q}, {KernelType::TETM, true, Q},  {KernelType::VAC, false, V},
};

}  // namespace

void born_angular_radii(const DepositionGeometry& geo, const Vec3& r, const Vec3& rp, std::vector<double>& radius,
                        std::vector<double>& radius_prime) {
    auto groups = group_boxes(geo);
    radius.clear();
    radius_prime.clear();
    for (const auto& g : groups) {
        // padded so that nearby stencil points can reuse the same rule
        radius.push_back(max_corner_distance(g, r.x(), r.y()) + 0.25);
        radius_prime.push_back(max_corner_distance(g, rp.x(), rp.y()) + 0.25);
    }
}

IntegralResultT<Matrix3c> born_correction(const HalfSpaceEnvironment& env, const DepositionGeometry& geo,
                                          const Vec3& r, const Vec3& rp, Complex w, const QuadratureConfig& cfg,
                                          const BornRequest& req, const BornPlan* frozen, BornPlan* record,
                                          MomentCache* cache) {
    IntegralResultT<Matrix3c> out;
    out.value = Matrix3c::Zero();
    if (geo.boxes.empty()) return out;
    if (!(r.z() > 0.0) || !(rp.z() > 0.0)) throw std::domain_error("Born correction needs z > 0");
    if (geo.contains(r) || geo.contains(rp)) throw std::domain_error("field point lies inside the deposition");
    const Complex de = geo.delta_eps(w);
    if (de == 0.0) return out;

    auto groups = group_boxes(geo);
    for (auto& g : groups) split_pieces(g, r.z(), rp.z());
    std::vector<double> R, Rp;
    if (frozen && !frozen->radius.empty()) {
        R = frozen->radius;
        Rp = frozen->radius_prime;
    } else {
        born_angular_radii(geo, r, rp, R, Rp);
    }
    if (record) {
        record->radius = R;
        record->radius_prime = Rp;
    }

    const bool whole = req.variant == BornVariant::whole;
    const auto classes = decay_classes(groups, r.z(), rp.z(), whole);
    const double L = truncation_decay_exponent(cfg);
    const bool fixed = cfg.k_truncation_policy == TruncationPolicy::fixed;
    double amin = 1e300, bmin = 1e300;
    for (const auto& c : classes) {
        amin = std::min(amin, c.a);
        bmin = std::min(bmin, c.b);
    }
    if (!fixed && (amin <= 1e-12 || bmin <= 1e-12))
        throw std::domain_error("field point level with the deposition: automatic k truncation needs a gap; "
                                "use the fixed truncation policy");
    const double lambda = fixed ? cfg.fixed_lambda : lambda_from_kappa(w, L / amin);
    const RadialLine outer = make_radial_line(w, lambda, cfg.split_at_branch_point);
    auto inner_line = [&](const RadialNode& n) {
        if (fixed) return make_radial_line(w, cfg.fixed_lambda, cfg.split_at_branch_point);
        const double kap = kappa_lower(w, n.k);
        double kmax = 0.0;
        for (const auto& c : classes)
            if (kap * c.a < L) kmax = std::max(kmax, (L - kap * c.a) / c.b);
        kmax = std::min(kmax, L / bmin);
        if (kmax <= 0.0) return RadialLine{w, {}};
        return make_radial_line(w, lambda_from_kappa(w, kmax), cfg.split_at_branch_point);
    };

    Complex eps = 1.0;
    const auto& sub = env.substrate;
    if (sub.kind != MaterialKind::perfect_mirror && sub.kind != MaterialKind::vacuum) eps = permittivity(sub, w);
    const bool reflecting = sub.kind != MaterialKind::vacuum;
    const Complex w2 = w * w;
    const Complex pref = -1.0 / (64 * std::pow(pi, 4) * w2);

    std::vector<std::pair<int, int>> entries;
    for (int e = 0; e < 9; ++e)
        if (req.mask[e]) entries.emplace_back(e / 3, e % 3);

    MomentCache local_cache;
    if (!cache) cache = &local_cache;
    std::vector<PolarMoments> polar;
    if (req.angular == AngularRule::automatic && r == rp)
        for (const auto& g : groups) polar.emplace_back(g, r.x(), r.y());

    auto pair = [&](const RadialNode& n1, const RadialNode& n2) -> Matrix3c {
        Matrix3c val = Matrix3c::Zero();
        const double k = n1.k, kp = n2.k;
        if (k == 0.0 || kp == 0.0) return val;
        const Reflection R1 = reflect(sub, eps, w, k, n1.k_z), R2 = reflect(sub, eps, w, kp, n2.k_z);
        const Complex kz = n1.k_z, pz = n2.k_z;
        // term weights: reflection factors per term
        Complex rf[9];
        rf[0] = R2.te;
        rf[1] = R1.te;
        rf[2] = R2.tm;
        rf[3] = R1.tm;
        rf[4] = R1.te * R2.te;
        rf[5] = R1.tm * R2.tm;
        rf[6] = R1.tm * R2.te;
        rf[7] = R1.te * R2.tm;
        rf[8] = 1.0;
        const int nterms = whole ? 9 : 8;
        // projected kernels: sum_bb' K(theta_b, theta_b') ML_bb' per group, entry and term (greater ordering)
        for (int gi = 0; gi < int(groups.size()); ++gi) {
            const ZGroup& g = groups[gi];
            MomentCache::Moments gram;
            const MomentCache::Moments* hit = cache->find(gi, k, kp);
            if (hit) {
                gram = *hit;
                ++cache->hits;
            } else {
                AngularMoments ml;
                if (!polar.empty()) {
                    ml = polar[gi].moments(k, kp);
                } else {
                    const int N = angular_nodes(k * R[gi] + 2.0), Np = angular_nodes(kp * Rp[gi] + 2.0);
                    ml = angular_moments(g, r, rp, k, kp, N, Np);
                }
                gram = factor_gram(ml, k, kp);
                cache->insert(gi, k, kp, gram);
            }
            for (const auto& [i, j] : entries) {
                Complex proj[9];
                for (int t = 0; t < nterms; ++t) {
                    if (!reflecting && t < 8) {
                        proj[t] = 0.0;
                        continue;
                    }
                    const SeparableHalves h = separable_halves(terms[t].tau, i, j, Ordering::greater, k, kz, kp, pz, w);
                    const auto& list = terms[t].primed ? h.primed : h.unprimed;
                    const int n = terms[t].primed ? h.n_primed : h.n_unprimed;
                    Complex sum = 0.0;
                    for (int q = 0; q < n; ++q)
                        sum += list[q].coef * gram[int(list[q].a) * angular_factor_count + int(list[q].b)];
                    proj[t] = sum * rf[t];
                }
                const bool flips = (i == 2) != (j == 2);  // TM xz, zx, yz, zy
                for (const auto& p : g.pieces) {
                    const bool gt = p.ord == Ordering::greater;
                    // exponent c0 + gamma s of each factor
                    const Complex f1c = gt ? kz * r.z() : -kz * r.z(), f1g = gt ? -kz : kz;
                    const Complex f2c = gt ? pz * rp.z() : -pz * rp.z(), f2g = gt ? -pz : pz;
                    const Complex r1c = kz * r.z(), r1g = kz, r2c = pz * rp.z(), r2g = pz;
                    const Complex Z[4] = {
                        phase_integral(f1c + r2c, f1g + r2g, p.z0, p.z1),
                        phase_integral(r1c + f2c, r1g + f2g, p.z0, p.z1),
                        phase_integral(r1c + r2c, r1g + r2g, p.z0, p.z1),
                        whole ? phase_integral(f1c + f2c, f1g + f2g, p.z0, p.z1) : Complex(0.0),
                    };
                    Complex acc = 0.0;
                    for (int t = 0; t < nterms; ++t) {
                        Complex v = proj[t] * Z[terms[t].cls];
                        if (!gt && flips && terms[t].tau == KernelType::TM) v = -v;
                        acc += v;
                    }
                    val(i, j) += acc;
                }
            }
        }
        val *= pref / (k * kp * kz * pz);
        if (req.imag_only) val = I * val.imag().cast<Complex>();
        return val;
    };

    auto res = integrate_radial_pair<Matrix3c>(pair, outer, inner_line, cfg, frozen ? &frozen->quad : nullptr,
                                               record ? &record->quad : nullptr);
    out.value = res.value * de;
    out.error_estimate = res.error_estimate * std::abs(de);
    out.evaluations = res.evaluations;
    out.converged = res.converged;
    return out;
}

}  // namespace lithoqed
