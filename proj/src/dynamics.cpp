#include "bbl/dynamics.hpp"

#include "bbl/errors.hpp"
#include "bbl/lazutkin.hpp"
#include "bbl/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace bbl {

namespace {

// Brent refinement plus a short Newton polish with f'(t) = cross(d, T(s0+t)).
template <class F, class FPrime>
double refine_chord_root(const F& f, const FPrime& fp, double lo, double hi, double flo,
                         double fhi, double xtol) {
    auto root = num::brent(f, lo, hi, flo, fhi, xtol);
    double t = root.x;
    double ft = f(t);
    for (int i = 0; i < 3 && ft != 0.0; ++i) {
        double deriv = fp(t);
        if (std::abs(deriv) < 1e-10) break;
        double t2 = t - ft / deriv;
        if (!(t2 > lo) || !(t2 < hi)) break;
        double f2 = f(t2);
        if (std::abs(f2) >= std::abs(ft)) break;
        t = t2;
        ft = f2;
    }
    return t;
}

double wrap_angle_to_0_pi(double phi) {
    // Reflection angles land in (0, pi) up to roundoff; snap tiny excursions.
    if (phi <= 0.0 && phi > -1e-12) return 1e-15;
    if (phi >= M_PI && phi < M_PI + 1e-12) return M_PI - 1e-15;
    return phi;
}

} // namespace

PhaseState next_bounce(const BilliardTable& table, const PhaseState& state) {
    const double len = table.length();
    if (!(state.phi > 0.0) || !(state.phi < M_PI))
        throw Error("phase angle must lie in (0, pi)");
    const Vec2 p0 = table.point(state.s);
    const double psi = table.theta(state.s) + state.phi;
    const Vec2 d = unit_dir(psi);
    auto f = [&](double t) { return cross(d, table.point(state.s + t) - p0); };
    auto fp = [&](double t) { return cross(d, unit_dir(table.theta(state.s + t))); };

    const double kap = std::max(table.kappa(state.s), 1e-12);
    const double t_pred = std::clamp(2.0 * state.phi / kap, 1e-9 * len, 0.45 * len);
    const double hi_cap = len * (1.0 - 1e-10);
    double lo = 0.5 * t_pred;
    double flo = f(lo);
    for (int i = 0; flo >= 0.0 && i < 120; ++i) {
        lo *= 0.5;
        flo = f(lo);
    }
    if (flo >= 0.0) throw Error("chord bracketing failed near the start point");
    double hi = std::min(2.0 * t_pred, hi_cap);
    double fhi = f(hi);
    for (int i = 0; fhi < 0.0 && i < 200; ++i) {
        hi = hi_cap - 0.4 * (hi_cap - hi);
        fhi = f(hi);
    }
    if (fhi < 0.0) throw Error("chord bracketing failed near the full lap");

    double t = refine_chord_root(f, fp, lo, hi, flo, fhi, kParamTolFactor * len);
    double s1 = state.s + t;
    double phi1 = wrap_angle_to_0_pi(table.theta(s1) - psi);
    if (!(phi1 > 0.0) || !(phi1 < M_PI)) throw Error("reflection left the phase space");
    return PhaseState{s1, phi1};
}

PhaseState next_bounce(const BuildingBlock& block, const PhaseState& state) {
    const double a = block.length();
    if (!(state.phi > 0.0) || !(state.phi < M_PI))
        throw Error("phase angle must lie in (0, pi)");
    const GeometryModel& g = block.geometry();
    const Vec2 p0 = g.point(state.s);
    const double psi = g.theta(state.s) + state.phi;
    const Vec2 d = unit_dir(psi);
    auto f = [&](double sigma) { return cross(d, g.point(sigma) - p0); };
    auto fp = [&](double sigma) { return cross(d, unit_dir(g.theta(sigma))); };

    // The ray leaves the open arc unless the cross product turns positive by
    // the far endpoint.  The exit angle is reported unsigned against the end
    // tangent so a final bounce landing exactly on gamma(a) reads the same as
    // an escape arriving there.
    double f_end = f(a);
    if (f_end <= 0.0) {
        double exit_angle = std::fabs(std::remainder(psi - g.theta(a), 2.0 * M_PI));
        Vec2 exit_point = p0 + d * dot(d, g.endpoint() - p0);
        throw EscapedWall(exit_point.x, exit_point.y, exit_angle);
    }
    const double kap = std::max(block.kappa(state.s), 1e-12);
    const double t_pred = std::clamp(2.0 * state.phi / kap, 1e-9 * a, 0.9 * (a - state.s));
    double lo = state.s + 0.5 * t_pred;
    if (lo >= a) lo = 0.5 * (state.s + a);
    double flo = f(lo);
    for (int i = 0; flo >= 0.0 && i < 120; ++i) {
        lo = state.s + 0.5 * (lo - state.s);
        flo = f(lo);
    }
    if (flo >= 0.0) throw Error("chord bracketing failed inside the block");
    double hi = std::min(state.s + 2.0 * t_pred, a);
    double fhi = f(hi);
    for (int i = 0; fhi < 0.0 && i < 200; ++i) {
        hi = a - 0.4 * (a - hi);
        fhi = f(hi);
        if (hi == a) break;
    }
    if (fhi < 0.0) { hi = a; fhi = f_end; }

    double s1 = refine_chord_root(f, fp, lo, hi, flo, fhi, kParamTolFactor * a);
    double phi1 = wrap_angle_to_0_pi(g.theta(s1) - psi);
    if (!(phi1 > 0.0) || !(phi1 < M_PI)) throw Error("reflection left the phase space");
    return PhaseState{s1, phi1};
}

Orbit trace_orbit(const BilliardTable& table, PhaseState start, int bounces) {
    Orbit orbit;
    orbit.states.reserve(static_cast<std::size_t>(bounces) + 1);
    orbit.states.push_back(start);
    Vec2 prev = table.point(start.s);
    for (int i = 0; i < bounces; ++i) {
        PhaseState nxt = next_bounce(table, orbit.states.back());
        Vec2 p = table.point(nxt.s);
        orbit.chords.push_back((p - prev).norm());
        orbit.perimeter += orbit.chords.back();
        orbit.states.push_back(nxt);
        prev = p;
    }
    orbit.period = bounces;
    return orbit;
}

WallShot shoot_wall(const BuildingBlock& block, double theta) {
    if (!(theta > 0.0) || !(theta < M_PI / 2.0))
        throw Error("wall shot angle must lie in (0, pi/2)");
    WallShot shot;
    PhaseState st{0.0, theta};
    try {
        for (;;) {
            if (static_cast<int>(shot.bounces.size()) >= kWallBounceCap)
                throw IterationCap("wall shot exceeded the bounce cap");
            st = next_bounce(block, st);
            shot.bounces.push_back(st.s);
        }
    } catch (const EscapedWall& esc) {
        shot.escape_index = static_cast<int>(shot.bounces.size());
        shot.exit_angle = esc.exit_angle;
    }
    return shot;
}

MatchInfo is_match(const BuildingBlock& block, double theta, double tol) {
    WallShot shot = shoot_wall(block, theta);
    MatchInfo info;
    if (shot.bounces.empty()) return info;
    const double mid = block.length() / 2.0;
    std::size_t best = 0;
    for (std::size_t j = 1; j < shot.bounces.size(); ++j)
        if (std::abs(shot.bounces[j] - mid) < std::abs(shot.bounces[best] - mid)) best = j;
    info.p = static_cast<int>(best) + 1;
    info.residual = shot.bounces[best] - mid;
    info.matched = std::abs(info.residual) <= tol;
    if (info.matched && std::abs(shot.exit_angle - theta) > 1e-6) {
        if (std::getenv("BBL_DEBUG_MATCH"))
            std::fprintf(stderr,
                         "[match] theta=%.12f exit=%.12f diff=%.3e p=%d residual=%.3e k=%zu\n",
                         theta, shot.exit_angle, shot.exit_angle - theta, info.p, info.residual,
                         shot.bounces.size());
        throw Error("matched shot does not exit at the entry angle");
    }
    return info;
}

double polish_polygon(const BilliardTable& table, std::vector<double>& s) {
    const int n = static_cast<int>(s.size());
    const double len = table.length();
    std::vector<Vec2> pts(static_cast<std::size_t>(n));
    std::vector<Vec2> tans(static_cast<std::size_t>(n));
    std::vector<double> kaps(static_cast<std::size_t>(n));

    auto eval_all = [&](const std::vector<double>& sv) {
        for (int i = 0; i < n; ++i) {
            TableSample smp = table.eval(sv[static_cast<std::size_t>(i)]);
            pts[static_cast<std::size_t>(i)] = smp.point;
            tans[static_cast<std::size_t>(i)] = unit_dir(smp.theta);
            kaps[static_cast<std::size_t>(i)] = smp.kappa;
        }
    };
    auto grad = [&](std::vector<double>& g) {
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            const Vec2& pi = pts[static_cast<std::size_t>(i)];
            const Vec2& pm = pts[static_cast<std::size_t>((i + n - 1) % n)];
            const Vec2& pp = pts[static_cast<std::size_t>((i + 1) % n)];
            Vec2 u = (pi - pm).normalized();
            Vec2 v = (pp - pi).normalized();
            g[static_cast<std::size_t>(i)] = dot(tans[static_cast<std::size_t>(i)], u - v);
            worst = std::max(worst, std::abs(g[static_cast<std::size_t>(i)]));
        }
        return worst;
    };

    eval_all(s);
    std::vector<double> g(static_cast<std::size_t>(n));
    double res = grad(g);
    // Near-circular tables leave the Hessian almost singular along the rigid
    // rotation mode (1,...,1); Levenberg-Marquardt damping keeps the solve
    // well-posed there, and the damping fades as the iteration converges.
    double mu = 0.0;
    for (int iter = 0; iter < 200 && res > 1e-13; ++iter) {
        std::vector<double> lower(static_cast<std::size_t>(n), 0.0);
        std::vector<double> diag(static_cast<std::size_t>(n), 0.0);
        std::vector<double> upper(static_cast<std::size_t>(n), 0.0);
        double corner_lo = 0.0, corner_up = 0.0;
        for (int i = 0; i < n; ++i) {
            const int im = (i + n - 1) % n;
            const int ip = (i + 1) % n;
            const Vec2& pi = pts[static_cast<std::size_t>(i)];
            Vec2 du = pi - pts[static_cast<std::size_t>(im)];
            Vec2 dv = pts[static_cast<std::size_t>(ip)] - pi;
            double li = du.norm(), lp = dv.norm();
            Vec2 u = du / li, v = dv / lp;
            const Vec2& ti = tans[static_cast<std::size_t>(i)];
            const Vec2& tm = tans[static_cast<std::size_t>(im)];
            const Vec2& tp = tans[static_cast<std::size_t>(ip)];
            Vec2 ni{-ti.y, ti.x};
            auto proj = [](const Vec2& w, const Vec2& unit_chord, const Vec2& z) {
                // w . (I - cc^T) z for unit chord c
                return dot(w, z) - dot(w, unit_chord) * dot(unit_chord, z);
            };
            double dm = -proj(ti, u, tm) / li;
            double dc = kaps[static_cast<std::size_t>(i)] * dot(ni, u - v) + proj(ti, u, ti) / li +
                        proj(ti, v, ti) / lp;
            double dp = -proj(ti, v, tp) / lp;
            diag[static_cast<std::size_t>(i)] = dc;
            if (i == 0) corner_up = dm;  // J[0][n-1]
            else lower[static_cast<std::size_t>(i)] = dm;
            if (i == n - 1) corner_lo = dp;  // J[n-1][0]
            else upper[static_cast<std::size_t>(i)] = dp;
        }
        double diag_scale = 0.0;
        for (double d : diag) diag_scale = std::max(diag_scale, std::abs(d));
        if (diag_scale == 0.0) diag_scale = 1.0;

        bool accepted = false;
        for (int attempt = 0; attempt < 14 && !accepted; ++attempt) {
            // The Hessian of a perimeter max is negative semidefinite; shifting
            // by -mu bounds its spectrum away from zero.
            std::vector<double> diag_d = diag;
            for (double& d : diag_d) d -= mu;
            std::vector<double> rhs(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i)
                rhs[static_cast<std::size_t>(i)] = -g[static_cast<std::size_t>(i)];
            if (num::solve_cyclic_tridiag(lower, diag_d, upper, corner_lo, corner_up, rhs)) {
                std::vector<double> trial = s;
                bool ordered = true;
                for (int i = 0; i < n; ++i)
                    trial[static_cast<std::size_t>(i)] += rhs[static_cast<std::size_t>(i)];
                for (int i = 0; i + 1 < n; ++i)
                    if (!(trial[static_cast<std::size_t>(i + 1)] > trial[static_cast<std::size_t>(i)]))
                        ordered = false;
                if (ordered && !(trial[0] + len > trial[static_cast<std::size_t>(n - 1)]))
                    ordered = false;
                if (ordered) {
                    eval_all(trial);
                    std::vector<double> g2(static_cast<std::size_t>(n));
                    double res2 = grad(g2);
                    if (res2 < res) {
                        s = std::move(trial);
                        g = std::move(g2);
                        res = res2;
                        accepted = true;
                        mu *= 0.25;
                        if (mu < 1e-14 * diag_scale) mu = 0.0;
                        break;
                    }
                }
            }
            mu = (mu == 0.0) ? 1e-8 * diag_scale : mu * 8.0;
        }
        if (!accepted) {
            eval_all(s);  // restore cached geometry for the current s
            break;
        }
    }
    return res;
}

namespace {

// One cyclic coordinate-ascent sweep; returns the largest vertex move.
double ascent_sweep(const BilliardTable& table, std::vector<double>& s) {
    const int n = static_cast<int>(s.size());
    const double len = table.length();
    const double margin = 1e-12 * len;
    double max_move = 0.0;
    for (int i = 0; i < n; ++i) {
        const double sm = (i == 0) ? s[static_cast<std::size_t>(n - 1)] - len
                                   : s[static_cast<std::size_t>(i - 1)];
        const double sp = (i == n - 1) ? s[0] + len : s[static_cast<std::size_t>(i + 1)];
        const Vec2 pm = table.point(sm);
        const Vec2 pp = table.point(sp);
        auto g = [&](double si) {
            TableSample smp = table.eval(si);
            Vec2 u = (smp.point - pm).normalized();
            Vec2 v = (pp - smp.point).normalized();
            return dot(unit_dir(smp.theta), u - v);
        };
        double lo = sm + margin, hi = sp - margin;
        if (!(lo < hi)) continue;
        double glo = g(lo), ghi = g(hi);
        if (!(glo > 0.0) || !(ghi < 0.0)) continue;  // degenerate bracket, keep vertex
        auto root = num::brent(g, lo, hi, glo, ghi, margin);
        max_move = std::max(max_move, std::abs(root.x - s[static_cast<std::size_t>(i)]));
        s[static_cast<std::size_t>(i)] = root.x;
    }
    return max_move;
}

Orbit orbit_from_cycle(const BilliardTable& table, std::vector<double> s) {
    const int n = static_cast<int>(s.size());
    const double len = table.length();
    // Canonical start: reduce to [0, len) and rotate the smallest value first.
    int arg = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        double r = s[static_cast<std::size_t>(i)] -
                   std::floor(s[static_cast<std::size_t>(i)] / len) * len;
        if (r < best) { best = r; arg = i; }
    }
    std::vector<double> canon(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double v = s[static_cast<std::size_t>((arg + i) % n)];
        double r = v - std::floor(v / len) * len;
        canon[static_cast<std::size_t>(i)] = r;
    }
    for (int i = 1; i < n; ++i)
        while (canon[static_cast<std::size_t>(i)] < canon[static_cast<std::size_t>(i - 1)])
            canon[static_cast<std::size_t>(i)] += len;

    Orbit orbit;
    orbit.period = n;
    orbit.closed = true;
    std::vector<Vec2> pts(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pts[static_cast<std::size_t>(i)] = table.point(canon[static_cast<std::size_t>(i)]);
    for (int i = 0; i < n; ++i) {
        const Vec2& pi = pts[static_cast<std::size_t>(i)];
        const Vec2& pp = pts[static_cast<std::size_t>((i + 1) % n)];
        Vec2 v = pp - pi;
        double chord = v.norm();
        orbit.chords.push_back(chord);
        orbit.perimeter += chord;
        double th = table.theta(canon[static_cast<std::size_t>(i)]);
        Vec2 t = unit_dir(th);
        double phi = std::atan2(cross(t, v / chord), dot(t, v / chord));
        orbit.states.push_back(PhaseState{canon[static_cast<std::size_t>(i)], phi});
    }
    return orbit;
}

} // namespace

Orbit max_perimeter_ngon(const BilliardTable& table, int n) {
    if (n < 2) throw Error("polygon needs at least 2 vertices");
    const double len = table.length();
    LazutkinChart chart = build_chart(table);

    std::vector<double> best_cycle;
    double best_perimeter = -1.0;
    const double phases[4] = {0.0, 0.25, 0.5, 0.75};
    for (double phase : phases) {
        std::vector<double> s(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            double x = (static_cast<double>(i) + phase) / n;
            s[static_cast<std::size_t>(i)] = chart.s_of_x(x);
        }
        for (int i = 1; i < n; ++i)
            while (s[static_cast<std::size_t>(i)] <= s[static_cast<std::size_t>(i - 1)])
                s[static_cast<std::size_t>(i)] += len;

        // Coordinate ascent globalizes; the damped Newton polish certifies.
        // Certification is on the reflection-stationarity gradient: ascent
        // moves zigzag along the near-flat rotation mode and never settle.
        bool converged = false;
        if (n == 2) {
            for (int sweep = 0; sweep < 10000 && !converged; ++sweep)
                converged = ascent_sweep(table, s) <= 1e-12 * len;
        } else {
            for (int round = 0; round < 12 && !converged; ++round) {
                for (int sweep = 0; sweep < 30; ++sweep)
                    if (ascent_sweep(table, s) <= 1e-9 * len) break;
                converged = polish_polygon(table, s) <= 3e-13;
            }
        }
        if (!converged) continue;  // only certified critical cycles may win
        double p = 0.0;
        for (int i = 0; i < n; ++i) {
            Vec2 a = table.point(s[static_cast<std::size_t>(i)]);
            Vec2 b = table.point(s[static_cast<std::size_t>((i + 1) % n)]);
            p += (b - a).norm();
        }
        if (p > best_perimeter) { best_perimeter = p; best_cycle = s; }
    }
    if (best_cycle.empty())
        throw NoConvergence("polygon ascent did not certify convergence from any start");
    return orbit_from_cycle(table, best_cycle);
}

Orbit closed_orbit_from_match(const BilliardTable& table, double theta) {
    const double len = table.length();
    PhaseState st{0.0, theta};
    std::vector<PhaseState> states{st};
    const int cap = kWallBounceCap;
    double advance = 2.0 * theta / std::max(table.kappa(0.0), 1e-12);
    while (static_cast<int>(states.size()) <= cap) {
        PhaseState nxt = next_bounce(table, states.back());
        advance = nxt.s - states.back().s;
        if (nxt.s > len - 0.5 * advance) {
            states.push_back(nxt);
            break;
        }
        states.push_back(nxt);
    }
    if (static_cast<int>(states.size()) > cap)
        throw IterationCap("closed orbit trace exceeded the bounce cap");

    const PhaseState& last = states.back();
    double residual = std::max(std::abs(last.s - len), std::abs(last.phi - theta));
    if (residual > 1e-9)
        throw ClosureFailure("trajectory did not close after one lap", residual);

    int q = static_cast<int>(states.size()) - 1;
    std::vector<double> cycle(static_cast<std::size_t>(q));
    for (int i = 0; i < q; ++i) cycle[static_cast<std::size_t>(i)] = states[static_cast<std::size_t>(i)].s;
    if (q >= 3) polish_polygon(table, cycle);
    Orbit orbit = orbit_from_cycle(table, cycle);
    orbit.closure_residual = residual;
    return orbit;
}

} // namespace bbl
