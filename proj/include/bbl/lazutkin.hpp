#pragma once

// Lazutkin coordinates: x(s) normalized so one lap is [0, 1]; y collapses the
// glancing angle so the billiard map becomes a near-translation x -> x + y.

#include "bbl/dynamics.hpp"
#include "bbl/table.hpp"

#include <memory>
#include <vector>

namespace bbl {

struct LazutkinState {
    double x;
    double y;
};

class LazutkinChart {
  public:
    explicit LazutkinChart(const BilliardTable& table);

    double c_omega() const { return c_; }
    double length() const { return table_->length(); }
    const BilliardTable& table() const { return *table_; }

    double x_of_s(double s) const;  // [0, len] -> [0, 1], lifted outside
    double s_of_x(double x) const;
    double y_of(double s, double phi) const;

  private:
    std::shared_ptr<const BilliardTable> table_;
    double c_;                     // 1 / integral of kappa^{2/3} over one lap
    std::vector<double> knot_f_;   // cumulative integral at uniform s-knots
    double knot_h_;
};

LazutkinChart build_chart(const BilliardTable& table);

LazutkinState to_lazutkin(const LazutkinChart& chart, const PhaseState& state);
PhaseState from_lazutkin(const LazutkinChart& chart, const LazutkinState& state);

// Unnormalized integral of kappa^{2/3} over the block (the Lazutkin length of
// the arc before table normalization).
double lazutkin_perimeter(const BuildingBlock& block);
double lazutkin_perimeter(const CurvatureProfile& profile);

struct GlancingRow {
    double y0;
    int n;        // bounce count ceil(1/y0)
    double d_y;   // max_k |y_k - y_0|
    double d_x;   // max_k |x_k - x_0 - k y_0| on the lifted x
};

struct GlancingReport {
    std::vector<GlancingRow> rows;
    double e_y;   // log-log slope of d_y vs n; +inf sentinel when d_y is flat zero
    double e_x;
};

GlancingReport verify_glancing_estimates(const BilliardTable& table,
                                         const std::vector<double>& y0_list);

} // namespace bbl
