#include "bbl/construction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <random>
#include <string>

#include "bbl/dynamics.hpp"
#include "bbl/errors.hpp"
#include "bbl/invariants.hpp"
#include "bbl/lazutkin.hpp"
#include "bbl/numerics.hpp"

namespace bbl {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Sup-norm cap applied by the fingerprint pass. Far below epsilon/4 on
// purpose: the fingerprint only has to separate the blocks pairwise, and any
// excess shows up later as block-to-block scatter of the midpoint residuals
// that every matching round must bridge with a second-order-small reach.
double fingerprint_c0(double epsilon) { return std::min(2e-6, 0.25 * epsilon); }

// Escape count and signed midpoint residual of a wall shot, without the
// matched-exit assertion that is_match performs.
struct ShotReading {
    int k = 0;
    int p = 0;
    double residual = 0.0;
};

ShotReading read_shot(const BuildingBlock& block, double theta) {
    WallShot shot = shoot_wall(block, theta);
    ShotReading r;
    r.k = static_cast<int>(shot.bounces.size());
    if (r.k == 0) return r;
    const double mid = block.length() / 2.0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < r.k; ++i) {
        double d = std::fabs(shot.bounces[static_cast<std::size_t>(i)] - mid);
        if (d < best) {
            best = d;
            r.p = i + 1;
            r.residual = shot.bounces[static_cast<std::size_t>(i)] - mid;
        }
    }
    return r;
}

double profile_sup_distance(const BuildingBlock& b1, const BuildingBlock& b2) {
    const int kGrid = 8192;
    const double len = std::min(b1.length(), b2.length());
    double worst = std::fabs(b1.length() - b2.length());
    for (int i = 0; i <= kGrid; ++i) {
        double s = len * static_cast<double>(i) / kGrid;
        worst = std::max(worst, std::fabs(b1.kappa(s) - b2.kappa(s)));
    }
    return worst;
}

// Widest gap between recorded bounce points in (0, a/2), shrunk by 10% of its
// width on each side.
Interval select_support(const std::vector<double>& records, double a) {
    std::vector<double> pts{0.0, 0.5 * a};
    for (double s : records)
        if (s > 0.0 && s < 0.5 * a) pts.push_back(s);
    std::sort(pts.begin(), pts.end());
    double g_lo = 0.0, g_hi = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i + 1] - pts[i] > g_hi - g_lo) {
            g_lo = pts[i];
            g_hi = pts[i + 1];
        }
    }
    const double w = g_hi - g_lo;
    Interval out{g_lo + 0.1 * w, g_hi - 0.1 * w};
    if (!(out.hi - out.lo >= a * kMinSupportFraction))
        throw SupportExhausted("no gap of the minimum support width is left in (0, a/2)");
    for (double s : records)
        if (s >= out.lo - 1e-15 * a && s <= out.hi + 1e-15 * a)
            throw SupportExhausted("selected support interval touches a recorded bounce point");
    return out;
}

}  // namespace

std::vector<BuildingBlock> init_circle_blocks(int n) {
    if (n < 4) throw Error("the construction needs at least four blocks");
    std::vector<BuildingBlock> blocks;
    blocks.reserve(static_cast<std::size_t>(n));
    const double len = 2.0 * kPi / static_cast<double>(n);
    for (int k = 0; k < n; ++k) blocks.emplace_back(1.0, len);
    return blocks;
}

bool valid_permutation(const std::vector<int>& perm, int n) {
    if (n < 1 || static_cast<int>(perm.size()) != n)
        throw InvalidPermutation("permutation size does not match the block count");
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int v : perm) {
        if (v < 1 || v > n || seen[static_cast<std::size_t>(v - 1)])
            throw InvalidPermutation("permutation is not a bijection on 1..n");
        seen[static_cast<std::size_t>(v - 1)] = true;
    }
    // 0-based: q[i] = perm[i] - 1. Rotations are q[i] = i + a, reflections
    // q[i] = c - i (mod n).
    for (int a = 0; a < n; ++a) {
        bool rot = true;
        for (int i = 0; i < n; ++i)
            if (perm[static_cast<std::size_t>(i)] - 1 != (i + a) % n) {
                rot = false;
                break;
            }
        if (rot) return false;
    }
    for (int c = 0; c < n; ++c) {
        bool refl = true;
        for (int i = 0; i < n; ++i)
            if (perm[static_cast<std::size_t>(i)] - 1 != ((c - i) % n + n) % n) {
                refl = false;
                break;
            }
        if (refl) return false;
    }
    return true;
}

std::vector<BuildingBlock> fingerprint_perturb(const std::vector<BuildingBlock>& blocks,
                                               double epsilon, std::uint64_t seed) {
    if (epsilon < 0.0) throw Error("perturbation budget must be nonnegative");
    if (epsilon == 0.0 || blocks.empty()) return blocks;
    const double a = blocks.front().length();
    // One wide window per block (seeded center placement) plus a per-block
    // driver amplitude: block k gets a deterministic scale from a fixed sign
    // pattern, so the profiles become pairwise distinct both in position and
    // in amplitude while every constraint integral keeps the block valid.
    const double width = 0.30 * a;
    const double c_base = 0.25 * a;
    const double jitter = 0.02 * a;
    const double sep = jitter * std::min(0.25, 2.0 / static_cast<double>(blocks.size()));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> centers;
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        double c = c_base;
        bool placed = false;
        for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
            c = c_base + jitter * uni(rng);
            placed = true;
            for (double prev : centers) placed = placed && std::fabs(prev - c) >= sep;
        }
        if (!placed) throw Error("fingerprint window centers could not be separated");
        centers.push_back(c);
    }
    const double c0_target = fingerprint_c0(epsilon);
    static constexpr double kDriverPattern[4] = {1.0, -0.8, 0.65, -0.5};
    std::vector<BuildingBlock> out;
    out.reserve(blocks.size());
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        const double lo = centers[k] - width / 2.0;
        const double hi = centers[k] + width / 2.0;
        const double drv =
            kDriverPattern[k % 4] * (1.0 + 0.06 * static_cast<double>(k / 4));
        PerturbResult probe = perturb_block(blocks[k], lo, hi, PerturbShape{}, 1e-3);
        if (!(probe.c0_norm > 0.0)) throw ConstraintSolveError("fingerprint probe left the block unchanged");
        double delta = drv * 1e-3 * c0_target / probe.c0_norm;
        PerturbResult fin = perturb_block(blocks[k], lo, hi, PerturbShape{}, delta);
        for (int guard = 0; guard < 40 && fin.c0_norm > 0.25 * epsilon; ++guard) {
            delta *= 0.95;
            fin = perturb_block(blocks[k], lo, hi, PerturbShape{}, delta);
        }
        if (fin.c0_norm > 0.25 * epsilon)
            throw ConstraintSolveError("fingerprint amplitude would not fit the budget");
        out.push_back(fin.block);
    }
    const double floor = 100.0 * kMatchTolFactor * a;
    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t j = i + 1; j < out.size(); ++j)
            if (profile_sup_distance(out[i], out[j]) < floor)
                throw Error("fingerprint failed to separate blocks " + std::to_string(i + 1) +
                            " and " + std::to_string(j + 1));
    return out;
}

MatchOutcome match_angle_to_block(const BuildingBlock& block, double theta,
                                  const Interval& support, double delta_budget) {
    const double a = block.length();
    const double tol = kMatchTolFactor * a;
    if (!(delta_budget > 0.0)) throw Error("perturbation sweep budget must be positive");
    if (!(theta > 0.0) || !(theta < kPi / 2.0))
        throw Error("matching angle must lie in (0, pi/2)");

    MatchCertificate cert;
    cert.theta = theta;
    cert.support = support;

    // An accepted match has 2p >= kMinBouncesPerBlock bounces; the sweep may
    // legitimately start one bounce short of that, on the low side of the jump.
    ShotReading base = read_shot(block, theta);
    if (base.k < kMinBouncesPerBlock - 1)
        throw Error("matching angle too large: the wall shot must make at least 8 bounces");
    if (std::fabs(base.residual) <= tol) {
        is_match(block, theta, tol);  // exit-angle sanity assertion
        cert.delta_star = 0.0;
        cert.p = base.p;
        cert.residual = base.residual;
        return {block, cert, 0.0};
    }

    auto perturbed = [&](double delta) {
        return perturb_block(block, support.lo, support.hi, PerturbShape{}, delta);
    };
    auto k_at = [&](double delta) { return read_shot(perturbed(delta).block, theta).k; };

    const int kGridPoints = 33;
    std::vector<double> deltas(kGridPoints);
    std::vector<int> ks(kGridPoints);
    for (int i = 0; i < kGridPoints; ++i) {
        deltas[static_cast<std::size_t>(i)] =
            -delta_budget + 2.0 * delta_budget * static_cast<double>(i) / (kGridPoints - 1);
        ks[static_cast<std::size_t>(i)] = k_at(deltas[static_cast<std::size_t>(i)]);
    }

    bool any_jump = false;
    for (int i = 0; i + 1 < kGridPoints; ++i) {
        if (ks[static_cast<std::size_t>(i)] == ks[static_cast<std::size_t>(i + 1)]) continue;
        any_jump = true;
        double lo = deltas[static_cast<std::size_t>(i)];
        double hi = deltas[static_cast<std::size_t>(i + 1)];
        const int klo = ks[static_cast<std::size_t>(i)];
        for (int iter = 0; iter < 80 && hi - lo > delta_budget * 1e-14; ++iter) {
            double mid = 0.5 * (lo + hi);
            if (k_at(mid) == klo)
                lo = mid;
            else
                hi = mid;
        }
        PerturbResult res_lo = perturbed(lo);
        PerturbResult res_hi = perturbed(hi);
        ShotReading r_lo = read_shot(res_lo.block, theta);
        ShotReading r_hi = read_shot(res_hi.block, theta);

        double delta_star = lo;
        ShotReading best = r_lo;
        PerturbResult* applied = &res_lo;
        if (std::fabs(r_hi.residual) < std::fabs(r_lo.residual)) {
            delta_star = hi;
            best = r_hi;
            applied = &res_hi;
        }
        PerturbResult polished = *applied;
        if (std::fabs(best.residual) > tol && r_lo.residual * r_hi.residual < 0.0) {
            // The residual is continuous through an odd jump; polish the root.
            auto rfun = [&](double d) { return read_shot(perturbed(d).block, theta).residual; };
            auto root = num::brent(rfun, lo, hi, r_lo.residual, r_hi.residual,
                                   delta_budget * 1e-16);
            polished = perturbed(root.x);
            ShotReading rr = read_shot(polished.block, theta);
            if (std::fabs(rr.residual) < std::fabs(best.residual)) {
                delta_star = root.x;
                best = rr;
                applied = &polished;
            }
        }
        if (std::fabs(best.residual) <= tol) {
            MatchInfo mi = is_match(applied->block, theta, tol);
            if (!mi.matched) throw Error("bisected jump failed the final match verification");
            cert.delta_star = delta_star;
            cert.p = best.p;
            cert.residual = best.residual;
            return {applied->block, cert, applied->c0_norm};
        }
        // Even-parity jump (symmetric mid-chord): move on to the next one.
    }
    if (!any_jump)
        throw NoDiscontinuity("escape count constant over the perturbation sweep");
    throw NoOddJump("every escape-count jump in the sweep had even parity");
}

SchemeResult run_scheme(const SchemeConfig& config) {
    if (config.n < 4) throw Error("the construction needs at least four blocks");
    if (config.rounds < 1) throw Error("the scheme needs at least one matching round");
    if (!(config.epsilon > 0.0)) throw Error("the perturbation budget must be positive");
    if (!(config.theta_seed > 0.0) || !(config.theta_seed < 1.0))
        throw Error("the angle seed must lie in (0, 1)");
    if (!valid_permutation(config.permutation, config.n))
        throw InvalidPermutation("gluing order is a rotation or reflection of the identity");

    std::vector<BuildingBlock> blocks =
        fingerprint_perturb(init_circle_blocks(config.n), config.epsilon, config.seed);
    const std::size_t n = blocks.size();
    const double a = blocks.front().length();

    SchemeReport report;
    std::vector<MatchCertificate> certs;
    std::vector<std::vector<double>> records(n);
    std::vector<double> c0_totals(n, fingerprint_c0(config.epsilon));

    double prev_theta = std::numeric_limits<double>::infinity();
    long prev_p = 0;
    for (int m = 1; m <= config.rounds; ++m) {
        const double c0_budget = config.epsilon / std::pow(2.0, m);

        std::vector<double> x_block(n);
        double xbar = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            x_block[k] = lazutkin_perimeter(blocks[k]);
            xbar += x_block[k];
        }
        xbar /= static_cast<double>(n);

        const double theta_target = (m == 1) ? config.theta_seed : report.thetas.back() / 2.0;
        long p = std::max<long>(4, std::lround(xbar / (4.0 * theta_target)));
        if (m > 1 && p <= prev_p) p = prev_p * 2;

        std::vector<Interval> supports;
        supports.reserve(n);
        for (std::size_t k = 0; k < n; ++k) supports.push_back(select_support(records[k], a));

        // Per-block sweep budget: scale the perturbation parameter until the
        // applied sup-norm exhausts (but never exceeds) this round's share.
        // reach is the largest Lazutkin-perimeter drop available at full
        // budget; it only gates degenerate rounds, the usable response is
        // measured through the midpoint residual below.
        std::vector<double> delta_budgets(n);
        std::vector<double> reach(n);
        std::vector<BuildingBlock> plus_blocks, minus_blocks;
        plus_blocks.reserve(n);
        minus_blocks.reserve(n);
        for (std::size_t k = 0; k < n; ++k) {
            PerturbResult probe =
                perturb_block(blocks[k], supports[k].lo, supports[k].hi, PerturbShape{}, 1e-3);
            if (!(probe.c0_norm > 0.0))
                throw ConstraintSolveError("budget probe left the block unchanged");
            double db = 1e-3 * c0_budget / probe.c0_norm;
            bool fitted = false;
            for (int guard = 0; guard < 60; ++guard) {
                PerturbResult plus =
                    perturb_block(blocks[k], supports[k].lo, supports[k].hi, PerturbShape{}, db);
                PerturbResult minus =
                    perturb_block(blocks[k], supports[k].lo, supports[k].hi, PerturbShape{}, -db);
                if (std::max(plus.c0_norm, minus.c0_norm) <= c0_budget) {
                    reach[k] = x_block[k] - std::min(lazutkin_perimeter(plus.block),
                                                     lazutkin_perimeter(minus.block));
                    plus_blocks.push_back(plus.block);
                    minus_blocks.push_back(minus.block);
                    fitted = true;
                    break;
                }
                db *= 0.97;
            }
            if (!fitted) throw ConstraintSolveError("sweep budget would not fit the round share");
            delta_budgets[k] = db;
        }
        double reach_min = *std::min_element(reach.begin(), reach.end());
        if (std::getenv("BBL_DEBUG_SNAP")) {
            std::fprintf(stderr, "[snap] m=%d p=%ld xbar=%.9f\n", m, p, xbar);
            for (std::size_t k = 0; k < n; ++k)
                std::fprintf(stderr, "[snap]   k=%zu reach=%.3e db=%.3e support=[%.4f,%.4f]\n",
                             k, reach[k], delta_budgets[k], supports[k].lo, supports[k].hi);
        }
        if (!(reach_min > 1e-11))
            throw NoDiscontinuity("round budget cannot move the Lazutkin perimeter");

        // Snap theta by the measured residual band: for each block, shoot the
        // unperturbed block and both full-budget endpoints of the sweep and
        // take the interval the midpoint residual can cover. The secant moves
        // theta until zero sits at the mean band center, so every block's
        // sweep brackets its own matching discontinuity regardless of whether
        // the response is one-sided (fresh blocks: the perimeter can only
        // drop) or two-sided (later rounds: cross terms with earlier bumps).
        std::vector<double> band_lo(n), band_hi(n);
        auto band_center_at = [&](double th) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                double r0 = read_shot(blocks[k], th).residual;
                double rp = read_shot(plus_blocks[k], th).residual;
                double rm = read_shot(minus_blocks[k], th).residual;
                band_lo[k] = std::min({r0, rp, rm});
                band_hi[k] = std::max({r0, rp, rm});
                acc += 0.5 * (band_lo[k] + band_hi[k]);
            }
            return acc / static_cast<double>(n);
        };
        auto mean_width = [&]() {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) acc += band_hi[k] - band_lo[k];
            return acc / static_cast<double>(n);
        };
        double y_need = (xbar / 2.0) / static_cast<double>(p);
        double th0 = 2.0 * std::asin(y_need / 4.0);
        double th1 = th0 * (1.0 + 1e-4);
        double h0 = band_center_at(th0);
        double h1 = band_center_at(th1);
        double wbar = mean_width();
        if (!(wbar > 0.0))
            throw NoDiscontinuity("round budget does not move the midpoint residual");
        for (int iter = 0; iter < 30 && std::fabs(h1) > std::max(0.02 * wbar, 1e-14); ++iter) {
            if (std::fabs(h1 - h0) < 1e-300) break;
            double th2 = th1 - h1 * (th1 - th0) / (h1 - h0);
            th2 = std::min(std::max(th2, 0.7 * th0), 1.3 * th0);
            th0 = th1;
            h0 = h1;
            th1 = th2;
            h1 = band_center_at(th1);
            wbar = mean_width();
        }
        if (std::fabs(h1) > std::max(0.05 * wbar, 1e-13))
            throw NoConvergence("angle snap did not settle on the residual target");
        const double theta = th1;
        if (!(theta > 0.0) || !(theta < prev_theta))
            throw NoConvergence("matched angles must decrease strictly");
        if (std::getenv("BBL_DEBUG_SNAP")) {
            std::fprintf(stderr, "[snap] theta=%.9f h1=%.3e wbar=%.3e\n", theta, h1, wbar);
            for (std::size_t k = 0; k < n; ++k)
                std::fprintf(stderr, "[snap]   k=%zu band=[%.3e, %.3e]\n", k, band_lo[k],
                             band_hi[k]);
        }
        for (std::size_t k = 0; k < n; ++k) {
            const double margin = 0.08 * (band_hi[k] - band_lo[k]);
            if (!(band_lo[k] <= -margin) || !(band_hi[k] >= margin) || !(margin > 0.0))
                throw NoConvergence("block residual outside the reachable band after the snap");
        }
        prev_theta = theta;
        report.thetas.push_back(theta);

        RoundLog log;
        log.round = m;
        log.theta = theta;
        log.c0_budget = c0_budget;
        log.delta_budget_min = *std::min_element(delta_budgets.begin(), delta_budgets.end());
        log.delta_budget_max = *std::max_element(delta_budgets.begin(), delta_budgets.end());
        log.reach_min = reach_min;

        int p_round = 0;
        for (std::size_t k = 0; k < n; ++k) {
            MatchOutcome mo = match_angle_to_block(blocks[k], theta, supports[k], delta_budgets[k]);
            mo.certificate.round = m;
            mo.certificate.block_index = static_cast<int>(k) + 1;
            blocks[k] = mo.block;
            certs.push_back(mo.certificate);
            c0_totals[k] += mo.c0_applied;
            log.c0_used_max = std::max(log.c0_used_max, mo.c0_applied);
            if (k == 0) p_round = mo.certificate.p;
            if (mo.certificate.p != p_round)
                throw NoConvergence("blocks matched at different bounce counts in one round");
        }
        if (m > 1 && p_round <= prev_p)
            throw NoConvergence("matched bounce counts must increase strictly");
        prev_p = p_round;
        log.p = p_round;

        // Re-record every matched trajectory on the updated blocks; the next
        // round's supports must avoid all of these bounce points.
        for (std::size_t k = 0; k < n; ++k) {
            records[k].clear();
            for (double th : report.thetas) {
                WallShot shot = shoot_wall(blocks[k], th);
                records[k].insert(records[k].end(), shot.bounces.begin(), shot.bounces.end());
            }
            std::sort(records[k].begin(), records[k].end());
        }
        report.rounds.push_back(log);
    }

    for (std::size_t j = 0; j < report.thetas.size(); ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            MatchInfo mi = is_match(blocks[k], report.thetas[j], kReverifyTolFactor * a);
            if (!mi.matched)
                throw Error("matched angle " + std::to_string(j + 1) +
                            " no longer verifies on block " + std::to_string(k + 1));
            report.reverify_max_residual =
                std::max(report.reverify_max_residual, std::fabs(mi.residual));
        }
    }

    for (std::size_t k = 0; k < n; ++k) {
        report.c0_total_max = std::max(report.c0_total_max, c0_totals[k]);
        if (!(c0_totals[k] < 2.0 * config.epsilon))
            throw Error("cumulative perturbation exceeded twice the budget");
    }

    std::vector<BuildingBlock> order_b;
    order_b.reserve(n);
    for (int idx : config.permutation) order_b.push_back(blocks[static_cast<std::size_t>(idx - 1)]);
    BilliardTable table_a = close_table(blocks);
    BilliardTable table_b = close_table(order_b);

    report.congruence_dist = congruence_distance(table_a, table_b);
    if (!(report.congruence_dist >= kNonCongruenceFloor))
        throw Error("constructed tables are not measurably non-congruent");

    // Identical block multisets: the summed invariants must agree to
    // reassociation-level roundoff between the two gluing orders.
    MMInvariants ia = mm_quadrature(table_a);
    MMInvariants ib = mm_quadrature(table_b);
    auto rel = [](double x, double y) {
        double sc = std::max(std::fabs(x), std::fabs(y));
        return sc == 0.0 ? 0.0 : std::fabs(x - y) / sc;
    };
    report.invariant_sum_rel_diff = std::max(
        {rel(ia.ell0, ib.ell0), rel(ia.ell1, ib.ell1), rel(ia.ell2, ib.ell2)});
    if (!(report.invariant_sum_rel_diff <= 1e-13))
        throw Error("summed block invariants differ between the gluing orders");

    return SchemeResult{std::move(table_a), std::move(table_b), std::move(blocks),
                        std::move(certs), std::move(report)};
}

}  // namespace bbl
