// Command-line surface: construct / verify / invariants / orbits / render.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bbl/construction.hpp"
#include "bbl/dynamics.hpp"
#include "bbl/errors.hpp"
#include "bbl/invariants.hpp"
#include "bbl/lazutkin.hpp"
#include "bbl/serialize.hpp"
#include "bbl/table.hpp"
#include "bbl/version.hpp"

namespace fs = std::filesystem;

namespace {

// Exit codes, one per error class (documented in the README).
enum ExitCode : int {
    kOk = 0,
    kUnexpected = 1,
    kUsage = 2,
    kParse = 3,
    kBadPermutation = 4,
    kClosure = 5,
    kConvexity = 6,
    kConstraintSolve = 7,
    kNoDiscontinuity = 8,
    kNoOddJump = 9,
    kSupportExhausted = 10,
    kIllConditioned = 11,
    kNoConvergence = 12,
    kIterationCap = 13,
    kClosureFailure = 14,
    kEscapedWall = 15,
    kLibraryError = 16,
    kVerifyFailed = 17,
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw bbl::Error("cannot write file: " + path.string());
    out << content;
    if (!out) throw bbl::Error("write failed: " + path.string());
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string run_log_text(const bbl::SchemeConfig& cfg, const bbl::SchemeReport& rep) {
    std::string out = "bbl-runlog v1\n";
    out += "tool_version " + std::string(bbl::kToolVersion) + "\n";
    out += "n " + std::to_string(cfg.n) + "\n";
    out += "rounds " + std::to_string(cfg.rounds) + "\n";
    out += "epsilon " + bbl::fmt_g17(cfg.epsilon) + "\n";
    out += "theta_seed " + bbl::fmt_g17(cfg.theta_seed) + "\n";
    out += "match_tol_factor " + bbl::fmt_g17(bbl::kMatchTolFactor) + "\n";
    out += "reverify_tol_factor " + bbl::fmt_g17(bbl::kReverifyTolFactor) + "\n";
    out += "closure_tol " + bbl::fmt_g17(bbl::kClosureTol) + "\n";
    out += "non_congruence_floor " + bbl::fmt_g17(bbl::kNonCongruenceFloor) + "\n";
    for (const bbl::RoundLog& r : rep.rounds) {
        out += "round " + std::to_string(r.round) + " theta " + bbl::fmt_g17(r.theta) + " p " +
               std::to_string(r.p) + " c0_budget " + bbl::fmt_g17(r.c0_budget) + " c0_used_max " +
               bbl::fmt_g17(r.c0_used_max) + " delta_budget_min " +
               bbl::fmt_g17(r.delta_budget_min) + " delta_budget_max " +
               bbl::fmt_g17(r.delta_budget_max) + " reach_min " + bbl::fmt_g17(r.reach_min) + "\n";
    }
    out += "reverify_max_residual " + bbl::fmt_g17(rep.reverify_max_residual) + "\n";
    out += "congruence_distance " + bbl::fmt_g17(rep.congruence_dist) + "\n";
    out += "c0_total_max " + bbl::fmt_g17(rep.c0_total_max) + "\n";
    out += "invariant_sum_rel_diff " + bbl::fmt_g17(rep.invariant_sum_rel_diff) + "\n";
    return out;
}

int cmd_construct(const std::string& config_path, const std::string& out_dir,
                  bool seed_given, std::uint64_t seed_override) {
    auto t0 = std::chrono::steady_clock::now();
    bbl::RunConfig cfg = bbl::parse_config(read_file(config_path));
    if (seed_given) cfg.scheme.seed = seed_override;

    bbl::SchemeResult result = bbl::run_scheme(cfg.scheme);
    double t_construct = seconds_since(t0);

    auto t1 = std::chrono::steady_clock::now();
    fs::path dir(out_dir);
    fs::create_directories(dir);
    const fs::path p_a = dir / "table_a.txt";
    const fs::path p_b = dir / "table_b.txt";
    const fs::path p_c = dir / "certificates.txt";
    const fs::path p_l = dir / "run_log.txt";
    const fs::path p_m = dir / "manifest.txt";
    write_file(p_a, bbl::serialize_table(result.table_a));
    write_file(p_b, bbl::serialize_table(result.table_b));
    write_file(p_c, bbl::serialize_certificates(result.certificates));
    write_file(p_l, run_log_text(cfg.scheme, result.report));
    double t_serialize = seconds_since(t1);

    // Manifest goes last, after every referenced artifact exists.
    std::string manifest = "bbl-manifest v1\n";
    manifest += "tool_version " + std::string(bbl::kToolVersion) + "\n";
    manifest += "command construct\n";
    manifest += "config_echo_begin\n" + bbl::serialize_config(cfg) + "config_echo_end\n";
    manifest += "tolerance match_tol_factor " + bbl::fmt_g17(bbl::kMatchTolFactor) + "\n";
    manifest += "tolerance reverify_tol_factor " + bbl::fmt_g17(bbl::kReverifyTolFactor) + "\n";
    manifest += "tolerance closure_tol " + bbl::fmt_g17(bbl::kClosureTol) + "\n";
    manifest += "tolerance non_congruence_floor " + bbl::fmt_g17(bbl::kNonCongruenceFloor) + "\n";
    for (const fs::path& p : {p_a, p_b, p_c, p_l}) {
        if (!fs::exists(p)) throw bbl::Error("artifact missing at manifest time: " + p.string());
        manifest += "artifact " + p.filename().string() + "\n";
    }
    manifest += "timing_seconds construct " + bbl::fmt_g17(t_construct) + "\n";
    manifest += "timing_seconds serialize " + bbl::fmt_g17(t_serialize) + "\n";
    write_file(p_m, manifest);

    std::cout << "constructed pair: " << result.table_a.block_count() << " blocks, "
              << result.certificates.size() << " certificates, congruence distance "
              << bbl::fmt_g17(result.report.congruence_dist) << "\n"
              << "artifacts in " << dir.string() << "\n";
    return kOk;
}

struct CheckRow {
    std::string name;
    bool pass = false;
    std::string detail;
};

void print_rows(const std::vector<CheckRow>& rows) {
    for (const CheckRow& r : rows)
        std::printf("%-34s %s  %s\n", r.name.c_str(), r.pass ? "PASS" : "FAIL",
                    r.detail.c_str());
}

int cmd_verify(const std::string& path_a, const std::string& path_b, const std::string& path_c,
               double tol_scale) {
    bbl::BilliardTable table_a = bbl::parse_table(read_file(path_a));
    bbl::BilliardTable table_b = bbl::parse_table(read_file(path_b));
    std::vector<bbl::MatchCertificate> certs = bbl::parse_certificates(read_file(path_c));
    if (certs.empty()) throw bbl::Error("certificate file holds no certificates");

    // One distinct angle per round, in round order.
    std::map<int, double> round_theta;
    for (const bbl::MatchCertificate& c : certs) round_theta[c.round] = c.theta;

    std::vector<CheckRow> rows;
    int prev_period = 0;
    bool periods_increase = true;
    for (const auto& [round, theta] : round_theta) {
        CheckRow row;
        row.name = "orbit round " + std::to_string(round);
        try {
            bbl::Orbit oa = bbl::closed_orbit_from_match(table_a, theta);
            bbl::Orbit ob = bbl::closed_orbit_from_match(table_b, theta);
            double rel = std::fabs(oa.perimeter - ob.perimeter) /
                         std::max(std::fabs(oa.perimeter), std::fabs(ob.perimeter));
            bool period_ok = oa.period == ob.period;
            bool per_ok = rel <= 1e-8 * tol_scale;
            row.pass = period_ok && per_ok;
            row.detail = "theta " + bbl::fmt_g17(theta) + " periods " +
                         std::to_string(oa.period) + "/" + std::to_string(ob.period) +
                         " perimeter rel diff " + bbl::fmt_g17(rel);
            if (oa.period <= prev_period) periods_increase = false;
            prev_period = oa.period;
        } catch (const bbl::ClosureFailure& e) {
            row.pass = false;
            row.detail = "no closed orbit at theta " + bbl::fmt_g17(theta) + " (" + e.what() + ")";
        }
        rows.push_back(row);
    }
    rows.push_back({"periods strictly increase", periods_increase, ""});

    bbl::ComparisonReport rep = bbl::compare_tables(table_a, table_b);
    auto rel_of = [&](const std::string& name) {
        for (const bbl::DiffEntry& d : rep.a.counterpart_diffs)
            if (d.name == name) return d.rel_diff;
        return 0.0;
    };
    for (const char* name : {"ell0", "ell1_quad", "ell2_quad"}) {
        double rel = rel_of(name);
        rows.push_back({std::string("invariant ") + name, rel <= 1e-12 * tol_scale,
                        "rel diff " + bbl::fmt_g17(rel)});
    }
    for (const char* name : {"c_1", "c_2"}) {
        double rel = rel_of(name);
        rows.push_back({std::string("fitted ") + name, rel <= 1e-4 * tol_scale,
                        "rel diff " + bbl::fmt_g17(rel)});
    }

    print_rows(rows);
    if (rep.congruence_dist < 1e-10)
        std::printf("%-34s %s  distance %s\n", "congruence", "INFO",
                    ("congruent - not a counterexample, " + bbl::fmt_g17(rep.congruence_dist))
                        .c_str());
    else
        std::printf("%-34s %s  distance %s\n", "congruence", "INFO",
                    ("non-congruent witness, " + bbl::fmt_g17(rep.congruence_dist)).c_str());

    for (const CheckRow& r : rows)
        if (!r.pass) return kVerifyFailed;
    return kOk;
}

int cmd_invariants(const std::string& path_a, const std::string& path_b,
                   const std::string& out_dir, const std::vector<int>& grid, int degree) {
    bbl::BilliardTable table_a = bbl::parse_table(read_file(path_a));
    const std::vector<int>& n_grid = grid.empty() ? bbl::default_n_grid() : grid;
    if (path_b.empty()) {
        bbl::MMInvariants mm = bbl::mm_quadrature(table_a);
        std::vector<std::pair<int, double>> samples;
        for (int n : n_grid)
            samples.emplace_back(n, bbl::max_perimeter_ngon(table_a, n).perimeter);
        bbl::ExpansionFit fit = bbl::fit_expansion(samples, degree);
        std::cout << "ell0 " << bbl::fmt_g17(mm.ell0) << "\n"
                  << "ell1_quad " << bbl::fmt_g17(mm.ell1) << "\n"
                  << "ell2_quad " << bbl::fmt_g17(mm.ell2) << "\n"
                  << "ell0_fit " << bbl::fmt_g17(fit.ell0_fit) << "\n";
        for (std::size_t k = 0; k < fit.c.size(); ++k)
            std::cout << "c_" << k + 1 << " " << bbl::fmt_g17(fit.c[k]) << "\n";
        std::cout << "fit_residual " << bbl::fmt_g17(fit.residual) << "\n";
        return kOk;
    }
    bbl::BilliardTable table_b = bbl::parse_table(read_file(path_b));
    bbl::ComparisonReport rep = bbl::compare_tables(table_a, table_b, n_grid, degree);
    std::string report_text = bbl::serialize_comparison(rep);
    std::cout << report_text;
    if (!out_dir.empty()) {
        fs::path dir(out_dir);
        fs::create_directories(dir);
        write_file(dir / "invariants.txt", report_text);
        write_file(dir / "samples.txt", bbl::serialize_samples(rep));
        std::cout << "# wrote invariants.txt and samples.txt to " << dir.string() << "\n";
    }
    return kOk;
}

int cmd_orbits(const std::string& table_path, int ngon, double theta,
               const std::string& certs_path, const std::string& out_dir) {
    bbl::BilliardTable table = bbl::parse_table(read_file(table_path));
    fs::path dir(out_dir.empty() ? "." : out_dir);
    fs::create_directories(dir);
    int modes = (ngon > 0 ? 1 : 0) + (theta > 0.0 ? 1 : 0) + (certs_path.empty() ? 0 : 1);
    if (modes != 1)
        throw UsageError("orbits needs exactly one of --ngon, --theta, --certs");
    if (ngon > 0) {
        bbl::Orbit orbit = bbl::max_perimeter_ngon(table, ngon);
        fs::path p = dir / ("orbit_ngon_" + std::to_string(ngon) + ".txt");
        write_file(p, bbl::serialize_orbit(table, orbit));
        std::cout << "n " << ngon << " perimeter " << bbl::fmt_g17(orbit.perimeter) << " -> "
                  << p.string() << "\n";
        return kOk;
    }
    if (theta > 0.0) {
        bbl::Orbit orbit = bbl::closed_orbit_from_match(table, theta);
        fs::path p = dir / "orbit_theta.txt";
        write_file(p, bbl::serialize_orbit(table, orbit));
        std::cout << "theta " << bbl::fmt_g17(theta) << " period " << orbit.period
                  << " perimeter " << bbl::fmt_g17(orbit.perimeter) << " -> " << p.string()
                  << "\n";
        return kOk;
    }
    std::vector<bbl::MatchCertificate> certs = bbl::parse_certificates(read_file(certs_path));
    std::map<int, double> round_theta;
    for (const bbl::MatchCertificate& c : certs) round_theta[c.round] = c.theta;
    for (const auto& [round, th] : round_theta) {
        bbl::Orbit orbit = bbl::closed_orbit_from_match(table, th);
        fs::path p = dir / ("orbit_round_" + std::to_string(round) + ".txt");
        write_file(p, bbl::serialize_orbit(table, orbit));
        std::cout << "round " << round << " theta " << bbl::fmt_g17(th) << " period "
                  << orbit.period << " perimeter " << bbl::fmt_g17(orbit.perimeter) << " -> "
                  << p.string() << "\n";
    }
    return kOk;
}

// Orbit files carry x y in columns 3 and 4 after the 'columns' line.
std::vector<std::pair<double, double>> orbit_points_from_file(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::pair<double, double>> pts;
    bool in_rows = false;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!in_rows) {
            if (line.rfind("columns ", 0) == 0) in_rows = true;
            continue;
        }
        std::istringstream row(line);
        double s, phi, x, y, chord;
        if (row >> s >> phi >> x >> y >> chord) pts.emplace_back(x, y);
    }
    if (pts.empty()) throw bbl::ParseError("orbit file has no bounce rows", line_no, "rows");
    return pts;
}

int cmd_render(const std::string& table_path, const std::string& orbit_path,
               const std::string& out_svg) {
    bbl::BilliardTable table = bbl::parse_table(read_file(table_path));
    const int kSamples = 2048;
    std::vector<std::pair<double, double>> boundary;
    boundary.reserve(kSamples);
    double min_x = 1e300, max_x = -1e300, min_y = 1e300, max_y = -1e300;
    for (int i = 0; i < kSamples; ++i) {
        bbl::Vec2 p = table.point(table.length() * static_cast<double>(i) / kSamples);
        boundary.emplace_back(p.x, p.y);
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    const double canvas = 1000.0, margin = 50.0;
    const double span = std::max(max_x - min_x, max_y - min_y);
    const double scale = (canvas - 2.0 * margin) / span;
    auto tx = [&](double x) { return margin + (x - min_x) * scale; };
    auto ty = [&](double y) { return canvas - margin - (y - min_y) * scale; };
    auto fmt6 = [](double v) {
        char b[32];
        std::snprintf(b, sizeof(b), "%.3f", v);
        return std::string(b);
    };

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 1000\">\n";
    svg += "<rect width=\"1000\" height=\"1000\" fill=\"white\"/>\n";
    svg += "<polygon fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < boundary.size(); ++i) {
        if (i) svg += " ";
        svg += fmt6(tx(boundary[i].first)) + "," + fmt6(ty(boundary[i].second));
    }
    svg += "\"/>\n";
    for (std::size_t k = 0; k < table.block_count(); ++k) {
        bbl::Vec2 j = table.point(table.joints()[k]);
        svg += "<circle cx=\"" + fmt6(tx(j.x)) + "\" cy=\"" + fmt6(ty(j.y)) +
               "\" r=\"5\" fill=\"crimson\"/>\n";
    }
    if (!orbit_path.empty()) {
        auto pts = orbit_points_from_file(read_file(orbit_path));
        svg += "<polygon fill=\"none\" stroke=\"steelblue\" stroke-width=\"1\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) svg += " ";
            svg += fmt6(tx(pts[i].first)) + "," + fmt6(ty(pts[i].second));
        }
        svg += "\"/>\n";
    }
    svg += "</svg>\n";
    write_file(out_svg, svg);
    std::cout << "wrote " << out_svg << "\n";
    return kOk;
}

int mapped_error_exit() {
    try {
        throw;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const bbl::ParseError& e) {
        std::cerr << "parse error (line " << e.line;
        if (!e.key.empty()) std::cerr << ", key '" << e.key << "'";
        std::cerr << "): " << e.what() << "\n";
        return kParse;
    } catch (const bbl::InvalidPermutation& e) {
        std::cerr << "invalid permutation: " << e.what()
                  << " (rotations l -> l + a and reflections l -> a - l mod n are excluded)\n";
        return kBadPermutation;
    } catch (const bbl::ClosureError& e) {
        std::cerr << "closure error: " << e.what() << "\n";
        return kClosure;
    } catch (const bbl::ConvexityError& e) {
        std::cerr << "convexity error: " << e.what() << "\n";
        return kConvexity;
    } catch (const bbl::ConstraintSolveError& e) {
        std::cerr << "constraint solve error: " << e.what() << "\n";
        return kConstraintSolve;
    } catch (const bbl::NoDiscontinuity& e) {
        std::cerr << "no discontinuity: " << e.what() << "\n";
        return kNoDiscontinuity;
    } catch (const bbl::NoOddJump& e) {
        std::cerr << "no odd jump: " << e.what() << "\n";
        return kNoOddJump;
    } catch (const bbl::SupportExhausted& e) {
        std::cerr << "support exhausted: " << e.what() << "\n";
        return kSupportExhausted;
    } catch (const bbl::IllConditioned& e) {
        std::cerr << "ill-conditioned fit (condition " << e.condition << "): " << e.what() << "\n";
        return kIllConditioned;
    } catch (const bbl::NoConvergence& e) {
        std::cerr << "no convergence: " << e.what() << "\n";
        return kNoConvergence;
    } catch (const bbl::IterationCap& e) {
        std::cerr << "iteration cap: " << e.what() << "\n";
        return kIterationCap;
    } catch (const bbl::ClosureFailure& e) {
        std::cerr << "orbit closure failure: " << e.what() << "\n";
        return kClosureFailure;
    } catch (const bbl::EscapedWall& e) {
        std::cerr << "escaped wall: " << e.what() << "\n";
        return kEscapedWall;
    } catch (const bbl::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kLibraryError;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return kUnexpected;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"billiard table pairs with equal length-spectrum invariants"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", tab_a, tab_b, certs_path, orbit_path, out_svg;
    std::string inv_table_a, inv_table_b, inv_out_dir;
    std::string orb_table, orb_certs;
    double tol_scale = 1.0, orb_theta = 0.0;
    int orb_ngon = 0, fit_degree = bbl::kDefaultFitDegree;
    std::vector<int> n_grid;
    std::uint64_t seed_override = 0;

    CLI::App* construct = app.add_subcommand("construct", "run the matching scheme");
    construct->add_option("--config", config_path, "key-value config file")
        ->envname("BBL_CONFIG")
        ->required();
    construct->add_option("--out-dir", out_dir, "output directory")->envname("BBL_OUT_DIR");
    CLI::Option* seed_opt =
        construct->add_option("--seed", seed_override, "override the config seed")
            ->envname("BBL_SEED");

    CLI::App* verify = app.add_subcommand("verify", "re-check a constructed pair");
    verify->add_option("table_a", tab_a, "table A file")->required();
    verify->add_option("table_b", tab_b, "table B file")->required();
    verify->add_option("certificates", certs_path, "certificate file")->required();
    verify->add_option("--tol-scale", tol_scale, "global tolerance multiplier")
        ->envname("BBL_TOL_SCALE");

    CLI::App* invariants = app.add_subcommand("invariants", "invariant report for one or two tables");
    invariants->add_option("table_a", inv_table_a, "table file")->required();
    invariants->add_option("table_b", inv_table_b, "optional second table");
    invariants->add_option("--out-dir", inv_out_dir, "also write report files here")
        ->envname("BBL_OUT_DIR");
    invariants->add_option("--n-grid", n_grid, "comma-separated n grid")->delimiter(',');
    invariants->add_option("--fit-degree", fit_degree, "expansion fit degree");

    CLI::App* orbits = app.add_subcommand("orbits", "export closed orbits");
    orbits->add_option("table", orb_table, "table file")->required();
    orbits->add_option("--ngon", orb_ngon, "maximal-perimeter n-gon");
    orbits->add_option("--theta", orb_theta, "closed orbit from a matched angle");
    orbits->add_option("--certs", orb_certs, "orbit per certificate round");
    orbits->add_option("--out-dir", out_dir, "output directory")->envname("BBL_OUT_DIR");

    CLI::App* render = app.add_subcommand("render", "static SVG drawing");
    render->add_option("table", tab_a, "table file")->required();
    render->add_option("--orbit", orbit_path, "overlay an orbit file");
    render->add_option("--out", out_svg, "output SVG path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (construct->parsed())
            return cmd_construct(config_path, out_dir, seed_opt->count() > 0, seed_override);
        if (verify->parsed()) return cmd_verify(tab_a, tab_b, certs_path, tol_scale);
        if (invariants->parsed())
            return cmd_invariants(inv_table_a, inv_table_b, inv_out_dir, n_grid, fit_degree);
        if (orbits->parsed())
            return cmd_orbits(orb_table, orb_ngon, orb_theta, orb_certs, out_dir);
        if (render->parsed()) return cmd_render(tab_a, orbit_path, out_svg);
    } catch (...) {
        return mapped_error_exit();
    }
    return kUsage;
}
