#pragma once

// Text formats: tables, certificates, orbits, reports, and the run config.
// All floating-point fields use 17 significant digits so doubles round-trip
// exactly and serialize -> parse -> serialize is byte-identical.

#include <string>
#include <vector>

#include "bbl/construction.hpp"
#include "bbl/dynamics.hpp"
#include "bbl/invariants.hpp"
#include "bbl/lazutkin.hpp"
#include "bbl/table.hpp"

namespace bbl {

std::string fmt_g17(double v);

std::string serialize_table(const BilliardTable& table);
BilliardTable parse_table(const std::string& text);

std::string serialize_certificates(const std::vector<MatchCertificate>& certs);
std::vector<MatchCertificate> parse_certificates(const std::string& text);

std::string serialize_orbit(const BilliardTable& table, const Orbit& orbit);

std::string serialize_glancing(const GlancingReport& report);

// Structured comparison report plus a human-readable summary table.
std::string serialize_comparison(const ComparisonReport& report);
// Delimited samples: n, L_n of each table, difference.
std::string serialize_samples(const ComparisonReport& report);

struct RunConfig {
    SchemeConfig scheme;
    std::vector<int> n_grid;  // empty = library default grid
    int fit_degree = kDefaultFitDegree;
};

RunConfig parse_config(const std::string& text);
std::string serialize_config(const RunConfig& config);

}  // namespace bbl
