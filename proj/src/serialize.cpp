#include "bbl/serialize.hpp"

#include <cctype>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "bbl/errors.hpp"

namespace bbl {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

double parse_double(const std::string& tok, long line_no, const std::string& key) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw ParseError("expected a number, got '" + tok + "'", line_no, key);
    return v;
}

long parse_long(const std::string& tok, long line_no, const std::string& key) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    long v = std::strtol(begin, &end, 10);
    if (end == begin || *end != '\0')
        throw ParseError("expected an integer, got '" + tok + "'", line_no, key);
    return v;
}

std::vector<std::string> to_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<int> parse_int_list(const std::string& value, long line_no, const std::string& key) {
    std::vector<int> out;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ParseError("empty entry in integer list", line_no, key);
        out.push_back(static_cast<int>(parse_long(item, line_no, key)));
    }
    if (out.empty()) throw ParseError("empty integer list", line_no, key);
    return out;
}

}  // namespace

std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string serialize_table(const BilliardTable& table) {
    std::string out = "bbl-table v1\n";
    out += "blocks " + std::to_string(table.block_count()) + "\n";
    for (std::size_t k = 0; k < table.block_count(); ++k) {
        const BuildingBlock& b = table.block(k);
        out += "block " + std::to_string(k + 1) + "\n";
        out += "base " + fmt_g17(b.base()) + "\n";
        out += "length " + fmt_g17(b.length()) + "\n";
        const std::vector<Bump>& bumps = b.bumps();
        out += "bumps " + std::to_string(bumps.size()) + "\n";
        for (const Bump& bump : bumps)
            out += "bump " + fmt_g17(bump.center) + " " + fmt_g17(bump.halfwidth) + " " +
                   fmt_g17(bump.amplitude) + "\n";
    }
    return out;
}

BilliardTable parse_table(const std::string& text) {
    std::vector<std::string> lines = to_lines(text);
    if (lines.empty() || trim(lines[0]) != "bbl-table v1")
        throw ParseError("missing 'bbl-table v1' header", 1, "header");
    std::size_t i = 1;
    auto next_tokens = [&](const std::string& expect_key) {
        while (i < lines.size() && trim(lines[i]).empty()) ++i;
        if (i >= lines.size())
            throw ParseError("unexpected end of file, expected '" + expect_key + "'",
                             static_cast<long>(lines.size()), expect_key);
        std::vector<std::string> toks = split_ws(lines[i]);
        if (toks.empty() || toks[0] != expect_key)
            throw ParseError("expected '" + expect_key + "' line", static_cast<long>(i + 1),
                             expect_key);
        ++i;
        return toks;
    };
    std::vector<std::string> toks = next_tokens("blocks");
    if (toks.size() != 2) throw ParseError("malformed 'blocks' line", static_cast<long>(i), "blocks");
    long n = parse_long(toks[1], static_cast<long>(i), "blocks");
    if (n < 1) throw ParseError("table needs at least one block", static_cast<long>(i), "blocks");
    std::vector<BuildingBlock> blocks;
    blocks.reserve(static_cast<std::size_t>(n));
    for (long k = 0; k < n; ++k) {
        next_tokens("block");
        toks = next_tokens("base");
        if (toks.size() != 2) throw ParseError("malformed 'base' line", static_cast<long>(i), "base");
        double base = parse_double(toks[1], static_cast<long>(i), "base");
        toks = next_tokens("length");
        if (toks.size() != 2)
            throw ParseError("malformed 'length' line", static_cast<long>(i), "length");
        double length = parse_double(toks[1], static_cast<long>(i), "length");
        toks = next_tokens("bumps");
        if (toks.size() != 2)
            throw ParseError("malformed 'bumps' line", static_cast<long>(i), "bumps");
        long nb = parse_long(toks[1], static_cast<long>(i), "bumps");
        if (nb < 0) throw ParseError("negative bump count", static_cast<long>(i), "bumps");
        std::vector<Bump> bumps;
        bumps.reserve(static_cast<std::size_t>(nb));
        for (long j = 0; j < nb; ++j) {
            toks = next_tokens("bump");
            if (toks.size() != 4)
                throw ParseError("bump rows need center, halfwidth, amplitude",
                                 static_cast<long>(i), "bump");
            bumps.push_back(Bump{parse_double(toks[1], static_cast<long>(i), "bump"),
                                 parse_double(toks[2], static_cast<long>(i), "bump"),
                                 parse_double(toks[3], static_cast<long>(i), "bump")});
        }
        blocks.emplace_back(base, length, std::move(bumps));
    }
    return close_table(std::move(blocks));
}

std::string serialize_certificates(const std::vector<MatchCertificate>& certs) {
    std::string out = "bbl-certificates v1\n";
    out += "columns round block theta delta_star p residual support_lo support_hi\n";
    for (const MatchCertificate& c : certs) {
        out += std::to_string(c.round) + " " + std::to_string(c.block_index) + " " +
               fmt_g17(c.theta) + " " + fmt_g17(c.delta_star) + " " + std::to_string(c.p) + " " +
               fmt_g17(c.residual) + " " + fmt_g17(c.support.lo) + " " + fmt_g17(c.support.hi) +
               "\n";
    }
    return out;
}

std::vector<MatchCertificate> parse_certificates(const std::string& text) {
    std::vector<std::string> lines = to_lines(text);
    if (lines.empty() || trim(lines[0]) != "bbl-certificates v1")
        throw ParseError("missing 'bbl-certificates v1' header", 1, "header");
    if (lines.size() < 2 || split_ws(lines[1]).empty() || split_ws(lines[1])[0] != "columns")
        throw ParseError("missing 'columns' line", 2, "columns");
    std::vector<MatchCertificate> out;
    for (std::size_t i = 2; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        std::vector<std::string> toks = split_ws(lines[i]);
        if (toks.size() != 8)
            throw ParseError("certificate rows need 8 fields", static_cast<long>(i + 1), "row");
        MatchCertificate c;
        long ln = static_cast<long>(i + 1);
        c.round = static_cast<int>(parse_long(toks[0], ln, "round"));
        c.block_index = static_cast<int>(parse_long(toks[1], ln, "block"));
        c.theta = parse_double(toks[2], ln, "theta");
        c.delta_star = parse_double(toks[3], ln, "delta_star");
        c.p = static_cast<int>(parse_long(toks[4], ln, "p"));
        c.residual = parse_double(toks[5], ln, "residual");
        c.support.lo = parse_double(toks[6], ln, "support_lo");
        c.support.hi = parse_double(toks[7], ln, "support_hi");
        out.push_back(c);
    }
    return out;
}

std::string serialize_orbit(const BilliardTable& table, const Orbit& orbit) {
    std::string out = "bbl-orbit v1\n";
    out += "period " + std::to_string(orbit.period) + "\n";
    out += "perimeter " + fmt_g17(orbit.perimeter) + "\n";
    out += "closed " + std::string(orbit.closed ? "1" : "0") + "\n";
    out += "closure_residual " + fmt_g17(orbit.closure_residual) + "\n";
    out += "columns s phi x y chord\n";
    const double len = table.length();
    for (std::size_t i = 0; i < orbit.states.size() && i < orbit.chords.size(); ++i) {
        double s = std::fmod(orbit.states[i].s, len);
        if (s < 0.0) s += len;
        Vec2 pt = table.point(s);
        out += fmt_g17(s) + " " + fmt_g17(orbit.states[i].phi) + " " + fmt_g17(pt.x) + " " +
               fmt_g17(pt.y) + " " + fmt_g17(orbit.chords[i]) + "\n";
    }
    return out;
}

std::string serialize_glancing(const GlancingReport& report) {
    std::string out = "bbl-glancing v1\n";
    out += "e_y " + fmt_g17(report.e_y) + "\n";
    out += "e_x " + fmt_g17(report.e_x) + "\n";
    out += "columns y0 N D_y D_x\n";
    for (const GlancingRow& r : report.rows)
        out += fmt_g17(r.y0) + " " + std::to_string(r.n) + " " + fmt_g17(r.d_y) + " " +
               fmt_g17(r.d_x) + "\n";
    return out;
}

std::string serialize_comparison(const ComparisonReport& report) {
    std::string out = "bbl-invariants v1\n";
    out += "n_grid";
    for (int n : report.n_grid) out += " " + std::to_string(n);
    out += "\n";
    auto emit_side = [&](const char* tag, const InvariantReport& r) {
        out += std::string(tag) + " ell0 " + fmt_g17(r.ell0) + "\n";
        out += std::string(tag) + " ell1_quad " + fmt_g17(r.ell1_quad) + "\n";
        out += std::string(tag) + " ell2_quad " + fmt_g17(r.ell2_quad) + "\n";
        out += std::string(tag) + " ell0_fit " + fmt_g17(r.ell0_fit) + "\n";
        for (std::size_t k = 0; k < r.fit_c.size(); ++k)
            out += std::string(tag) + " c_" + std::to_string(k + 1) + " " + fmt_g17(r.fit_c[k]) +
                   "\n";
        out += std::string(tag) + " fit_residual " + fmt_g17(r.fit_residual) + "\n";
    };
    emit_side("table_a", report.a);
    emit_side("table_b", report.b);
    for (const DiffEntry& d : report.a.counterpart_diffs)
        out += "diff " + d.name + " " + fmt_g17(d.abs_diff) + " " + fmt_g17(d.rel_diff) + "\n";
    out += "congruence_distance " + fmt_g17(report.congruence_dist) + "\n";

    // Human-readable summary as trailing comments.
    out += "#\n# invariant        table_a                    table_b                    rel_diff\n";
    auto row = [&](const std::string& name, double va, double vb, double rd) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "# %-16s %-26.17g %-26.17g %.3g\n", name.c_str(), va, vb,
                      rd);
        out += buf;
    };
    for (const DiffEntry& d : report.a.counterpart_diffs) {
        double va = 0.0, vb = 0.0;
        if (d.name == "ell0") {
            va = report.a.ell0;
            vb = report.b.ell0;
        } else if (d.name == "ell1_quad") {
            va = report.a.ell1_quad;
            vb = report.b.ell1_quad;
        } else if (d.name == "ell2_quad") {
            va = report.a.ell2_quad;
            vb = report.b.ell2_quad;
        } else if (d.name == "ell0_fit") {
            va = report.a.ell0_fit;
            vb = report.b.ell0_fit;
        } else if (d.name.rfind("c_", 0) == 0) {
            std::size_t k = static_cast<std::size_t>(std::strtol(d.name.c_str() + 2, nullptr, 10));
            if (k >= 1 && k <= report.a.fit_c.size()) {
                va = report.a.fit_c[k - 1];
                vb = report.b.fit_c[k - 1];
            }
        }
        row(d.name, va, vb, d.rel_diff);
    }
    return out;
}

std::string serialize_samples(const ComparisonReport& report) {
    std::string out = "bbl-samples v1\n";
    out += "columns n L_a L_b diff\n";
    for (std::size_t i = 0; i < report.n_grid.size(); ++i)
        out += std::to_string(report.n_grid[i]) + " " + fmt_g17(report.perimeters_a[i]) + " " +
               fmt_g17(report.perimeters_b[i]) + " " +
               fmt_g17(report.perimeters_a[i] - report.perimeters_b[i]) + "\n";
    return out;
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::vector<std::string> lines = to_lines(text);
    std::string section;
    bool saw_permutation = false;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const long ln = static_cast<long>(i + 1);
        std::string line = trim(lines[i]);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError("unterminated section header", ln, line);
            section = line.substr(1, line.size() - 2);
            if (section != "scheme" && section != "invariants")
                throw ParseError("unknown section '" + section + "'", ln, section);
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", ln, line);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) throw ParseError("empty key or value", ln, key);
        if (section == "scheme") {
            if (key == "n") {
                cfg.scheme.n = static_cast<int>(parse_long(value, ln, key));
            } else if (key == "permutation") {
                cfg.scheme.permutation = parse_int_list(value, ln, key);
                saw_permutation = true;
            } else if (key == "rounds") {
                cfg.scheme.rounds = static_cast<int>(parse_long(value, ln, key));
            } else if (key == "epsilon") {
                cfg.scheme.epsilon = parse_double(value, ln, key);
            } else if (key == "theta_seed") {
                cfg.scheme.theta_seed = parse_double(value, ln, key);
            } else if (key == "seed") {
                cfg.scheme.seed = static_cast<std::uint64_t>(
                    std::strtoull(value.c_str(), nullptr, 10));
            } else {
                throw ParseError("unknown key in [scheme]", ln, key);
            }
        } else if (section == "invariants") {
            if (key == "n_grid") {
                cfg.n_grid = parse_int_list(value, ln, key);
            } else if (key == "fit_degree") {
                cfg.fit_degree = static_cast<int>(parse_long(value, ln, key));
            } else {
                throw ParseError("unknown key in [invariants]", ln, key);
            }
        } else {
            throw ParseError("key outside any section", ln, key);
        }
    }
    // Default permutation only fits n = 4; otherwise the file must supply one.
    if (!saw_permutation && cfg.scheme.n != 4)
        throw ParseError("config must set a permutation when n != 4", static_cast<long>(lines.size()),
                         "permutation");
    return cfg;
}

std::string serialize_config(const RunConfig& config) {
    std::string out = "[scheme]\n";
    out += "n = " + std::to_string(config.scheme.n) + "\n";
    out += "permutation = ";
    for (std::size_t i = 0; i < config.scheme.permutation.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(config.scheme.permutation[i]);
    }
    out += "\n";
    out += "rounds = " + std::to_string(config.scheme.rounds) + "\n";
    out += "epsilon = " + fmt_g17(config.scheme.epsilon) + "\n";
    out += "theta_seed = " + fmt_g17(config.scheme.theta_seed) + "\n";
    char seedbuf[32];
    std::snprintf(seedbuf, sizeof(seedbuf), "%" PRIu64, config.scheme.seed);
    out += "seed = " + std::string(seedbuf) + "\n";
    out += "\n[invariants]\n";
    out += "n_grid = ";
    const std::vector<int>& grid = config.n_grid.empty() ? default_n_grid() : config.n_grid;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(grid[i]);
    }
    out += "\n";
    out += "fit_degree = " + std::to_string(config.fit_degree) + "\n";
    return out;
}

}  // namespace bbl
