#include "bbl/profile.hpp"

#include "bbl/errors.hpp"
#include "bbl/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bbl {

CurvatureProfile::CurvatureProfile(std::vector<ProfilePiece> pieces)
    : pieces_(std::move(pieces)) {
    if (pieces_.empty()) throw std::invalid_argument("profile needs at least one piece");
    offsets_.reserve(pieces_.size() + 1);
    turn_at_.reserve(pieces_.size() + 1);
    offsets_.push_back(0.0);
    turn_at_.push_back(0.0);
    for (auto& p : pieces_) {
        if (!(p.length > 0.0)) throw std::invalid_argument("piece length must be positive");
        double turn = p.base * p.length;
        for (auto& b : p.bumps) {
            if (!(b.halfwidth > 0.0)) throw std::invalid_argument("bump halfwidth must be positive");
            if (!(b.center - b.halfwidth > 0.0) || !(b.center + b.halfwidth < p.length))
                throw std::invalid_argument("bump support must lie strictly inside its piece");
            turn += b.amplitude * b.halfwidth * bump_total_integral();
        }
        // Sort by left support edge, not center: bumps of different widths may
        // overlap, and the evaluation loops break on the first edge past s.
        std::sort(p.bumps.begin(), p.bumps.end(), [](const Bump& x, const Bump& y) {
            return x.center - x.halfwidth < y.center - y.halfwidth;
        });
        offsets_.push_back(offsets_.back() + p.length);
        turn_at_.push_back(turn_at_.back() + turn);
    }
}

CurvatureProfile CurvatureProfile::single(double base, double length, std::vector<Bump> bumps) {
    return CurvatureProfile({ProfilePiece{base, length, std::move(bumps)}});
}

std::size_t CurvatureProfile::piece_index(double s) const {
    const double len = offsets_.back();
    if (s < -1e-9 * len || s > len * (1.0 + 1e-9))
        throw std::domain_error("arclength outside profile domain");
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), s);
    std::size_t i = (it == offsets_.begin()) ? 0 : static_cast<std::size_t>(it - offsets_.begin()) - 1;
    if (i >= pieces_.size()) i = pieces_.size() - 1;
    return i;
}

double CurvatureProfile::kappa(double s) const {
    std::size_t i = piece_index(s);
    const ProfilePiece& p = pieces_[i];
    double u = s - offsets_[i];
    double k = p.base;
    for (const Bump& b : p.bumps) {
        if (u <= b.center - b.halfwidth) break;  // bumps sorted by left edge
        k += bump_kappa(b, u);
    }
    return k;
}

double CurvatureProfile::kappa_d1(double s) const {
    std::size_t i = piece_index(s);
    const ProfilePiece& p = pieces_[i];
    double u = s - offsets_[i];
    double k = 0.0;
    for (const Bump& b : p.bumps) {
        if (u <= b.center - b.halfwidth) break;
        k += bump_kappa_d1(b, u);
    }
    return k;
}

double CurvatureProfile::kappa_d2(double s) const {
    std::size_t i = piece_index(s);
    const ProfilePiece& p = pieces_[i];
    double u = s - offsets_[i];
    double k = 0.0;
    for (const Bump& b : p.bumps) {
        if (u <= b.center - b.halfwidth) break;
        k += bump_kappa_d2(b, u);
    }
    return k;
}

double CurvatureProfile::turning(double s) const {
    std::size_t i = piece_index(s);
    const ProfilePiece& p = pieces_[i];
    double u = s - offsets_[i];
    double t = turn_at_[i] + p.base * u;
    for (const Bump& b : p.bumps) {
        if (u <= b.center - b.halfwidth) break;
        t += bump_turning(b, u);
    }
    return t;
}

CurvatureProfile CurvatureProfile::concat(const CurvatureProfile& other) const {
    std::vector<ProfilePiece> pieces = pieces_;
    pieces.insert(pieces.end(), other.pieces_.begin(), other.pieces_.end());
    return CurvatureProfile(std::move(pieces));
}

std::vector<double> CurvatureProfile::knots() const {
    std::vector<double> out{0.0, length()};
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        double off = offsets_[i];
        out.push_back(off);
        for (const Bump& b : pieces_[i].bumps) {
            out.push_back(off + b.center - b.halfwidth);
            out.push_back(off + b.center + b.halfwidth);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double CurvatureProfile::min_kappa() const {
    double best = kappa(0.0);
    double best_s = 0.0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const ProfilePiece& p = pieces_[i];
        // Grid fine enough to resolve the narrowest bump in the piece.
        double min_h = p.length;
        for (const Bump& b : p.bumps) min_h = std::min(min_h, b.halfwidth);
        int n = std::max(256, static_cast<int>(std::ceil(32.0 * p.length / min_h)));
        n = std::min(n, 1 << 20);
        for (int j = 0; j <= n; ++j) {
            double s = offsets_[i] + p.length * (static_cast<double>(j) / n);
            double k = kappa(s);
            if (k < best) { best = k; best_s = s; }
        }
    }
    const double len = offsets_.back();
    double lo = std::max(0.0, best_s - len / 256.0);
    double hi = std::min(len, best_s + len / 256.0);
    double refined = num::golden_min([this](double s) { return kappa(s); }, lo, hi, 1e-12 * len);
    return std::min(best, kappa(refined));
}

} // namespace bbl
