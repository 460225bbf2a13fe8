#include "iso/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace iso {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s) {
    std::size_t pos = 0;
    double val = 0.0;
    try {
        val = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ParseError("not a number: '" + s + "'");
    }
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) throw ParseError("trailing junk after number: '" + s + "'");
    return val;
}

}  // namespace

std::string format_number(double x) {
    if (x == 0.0) x = 0.0;  // normalize -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string density_csv(const TabulatedDensity& h) {
    std::string out = "x,h\n";
    for (int j = 0; j < h.size(); ++j) {
        out += format_number(h.node(j));
        out += ',';
        out += format_number(h.values()[static_cast<std::size_t>(j)]);
        out += '\n';
    }
    return out;
}

TabulatedDensity parse_density_csv(const std::string& text, double norm_tol) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("density CSV: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "x,h") throw ParseError("density CSV: expected header 'x,h'");

    std::vector<double> xs, hs;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cols = split(line, ',');
        if (cols.size() != 2) throw ParseError("density CSV: expected two columns");
        xs.push_back(parse_double(cols[0]));
        hs.push_back(parse_double(cols[1]));
    }
    if (xs.size() < 3) throw ParseError("density CSV: need at least 3 rows");
    if (xs.front() != 0.0) throw ParseError("density CSV: first x must be 0");
    const double D = xs.back();
    if (!(D > 0.0)) throw ParseError("density CSV: final x must be positive");
    const double dx = D / static_cast<double>(xs.size() - 1);
    for (std::size_t j = 0; j < xs.size(); ++j) {
        if (j > 0 && !(xs[j] > xs[j - 1]))
            throw ParseError("density CSV: x must be strictly increasing");
        if (std::abs(xs[j] - static_cast<double>(j) * dx) > 1e-9 * std::max(1.0, D))
            throw ParseError("density CSV: x values must be uniformly spaced");
    }
    try {
        return TabulatedDensity(D, std::move(hs), norm_tol);
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("density CSV: ") + e.what());
    }
}

std::string profile_csv(const ProfileTable& table) {
    std::string out = "v,a_v,value,d_bar\n";
    for (const auto& row : table.rows) {
        out += format_number(row.v);
        out += ',';
        out += format_number(row.a);
        out += ',';
        out += format_number(row.value);
        out += ',';
        if (row.d_bar) out += format_number(*row.d_bar);
        out += '\n';
    }
    return out;
}

nlohmann::json params_json(const CurvatureParams& p) {
    return {{"K", p.K}, {"N", p.N}, {"D", p.D}};
}

nlohmann::json profile_json(const ProfileTable& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json r = {{"v", row.v}, {"a_v", row.a}, {"value", row.value}};
        if (row.d_bar)
            r["d_bar"] = *row.d_bar;
        else
            r["d_bar"] = nullptr;
        rows.push_back(std::move(r));
    }
    return {{"params", params_json(table.params)},
            {"tolerances",
             {{"quad_tol", table.tol.quad_tol},
              {"root_tol", table.tol.root_tol},
              {"opt_tol", table.tol.opt_tol}}},
            {"mode", table.mode == ProfileMode::restricted ? "restricted" : "sharp"},
            {"rows", std::move(rows)}};
}

nlohmann::json validation_json(const ValidationReport& rep) {
    const char* kind = rep.witness_kind == CheckKind::cd
                           ? "cd"
                           : (rep.witness_kind == CheckKind::mcp_lower ? "mcp_lower"
                                                                       : "mcp_upper");
    nlohmann::json witness = {{"x0", rep.witness_x0}, {"x1", rep.witness_x1}};
    if (rep.witness_kind == CheckKind::cd) witness["xm"] = rep.witness_xm;
    return {{"passed", rep.passed},
            {"worst_violation", rep.worst_violation},
            {"witness", std::move(witness)},
            {"witness_kind", kind},
            {"checks_run", rep.checks_run},
            {"check_tol", rep.check_tol}};
}

nlohmann::json oracle_json(const OracleReport& rep) {
    nlohmann::json witness = nlohmann::json::array();
    for (const auto& iv : rep.witness.intervals())
        witness.push_back({iv.lo, iv.hi});
    return {{"min_perimeter", rep.min_perimeter},
            {"reference", rep.reference},
            {"margin", rep.margin},
            {"model_abs_err", rep.model_abs_err},
            {"witness", std::move(witness)},
            {"trials", rep.trials},
            {"seed", rep.seed},
            {"grid", rep.grid},
            {"tolerances", {{"vol_tol", rep.vol_tol}, {"pass_tol", rep.pass_tol}}},
            {"passed", rep.passed}};
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
        out << content;
        if (!out.flush()) throw std::runtime_error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace iso
