#include "bbl/geometry.hpp"

#include "bbl/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bbl {

namespace {

constexpr double kCheckpointSpacing = 0.05;

} // namespace

Vec2 GeometryModel::chord_integral(double a, double b, double tol) const {
    // Split at smoothness knots so the error estimate of each panel is honest.
    std::vector<double> cuts{a};
    auto lo = std::upper_bound(knots_.begin(), knots_.end(), a);
    for (auto it = lo; it != knots_.end() && *it < b; ++it) cuts.push_back(*it);
    cuts.push_back(b);
    Vec2 acc{0.0, 0.0};
    const double piece_tol = tol / static_cast<double>(cuts.size());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (!(cuts[i + 1] > cuts[i])) continue;
        auto r = num::integrate_n<2>(
            [this](double s, double* out) {
                double th = prof_.turning(s);
                out[0] = std::cos(th);
                out[1] = std::sin(th);
            },
            cuts[i], cuts[i + 1], piece_tol);
        acc = acc + Vec2{r.value[0], r.value[1]};
    }
    return acc;
}

GeometryModel::GeometryModel(CurvatureProfile profile, double tol)
    : prof_(std::move(profile)), tol_(tol), knots_(prof_.knots()) {
    const double len = prof_.length();
    int m = std::max(1, static_cast<int>(std::ceil(len / kCheckpointSpacing)));
    seg_ = len / m;
    checkpoints_.resize(static_cast<std::size_t>(m) + 1);
    checkpoints_[0] = Vec2{0.0, 0.0};
    const double seg_tol = tol_ / (m + 1);
    for (int k = 0; k < m; ++k) {
        double a = k * seg_;
        double b = (k + 1 == m) ? len : (k + 1) * seg_;
        checkpoints_[static_cast<std::size_t>(k) + 1] =
            checkpoints_[static_cast<std::size_t>(k)] + chord_integral(a, b, seg_tol);
    }
}

Vec2 GeometryModel::point(double s) const {
    const double len = prof_.length();
    if (s < -1e-9 * len || s > len * (1.0 + 1e-9))
        throw std::domain_error("arclength outside curve domain");
    s = std::clamp(s, 0.0, len);
    int k = std::min(static_cast<int>(s / seg_), static_cast<int>(checkpoints_.size()) - 2);
    double a = k * seg_;
    if (s == a) return checkpoints_[static_cast<std::size_t>(k)];
    return checkpoints_[static_cast<std::size_t>(k)] +
           chord_integral(a, s, tol_ / static_cast<double>(checkpoints_.size()));
}

GeometrySample GeometryModel::eval(double s) const {
    return GeometrySample{point(s), prof_.turning(s), prof_.kappa(s), prof_.kappa_d1(s)};
}

GeometrySample eval_geometry(const CurvatureProfile& profile, double s) {
    GeometryModel model(profile);
    return model.eval(s);
}

} // namespace bbl
