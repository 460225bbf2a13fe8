#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "iso/density.hpp"
#include "iso/io.hpp"
#include "iso/oracle.hpp"
#include "iso/profile.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitNumeric = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitVerdict = 3;

struct Options {
    std::optional<double> K, N, D, a, vol_tol;
    std::vector<double> v;
    std::optional<int> v_count, grid, trials;
    std::optional<std::uint64_t> seed;
    bool sharp = false;
    std::optional<std::string> mode, out, format, config_path;
    std::string input;  // validate: density CSV path
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--K", o.K, "curvature lower bound");
    cmd->add_option("--N", o.N, "dimension upper bound (> 1)");
    cmd->add_option("--D", o.D, "diameter (> 0)");
    cmd->add_option("--v", o.v, "volume fraction(s) in (0, 1)");
    cmd->add_option("--v-count", o.v_count, "number of equally spaced volumes");
    cmd->add_option("--a", o.a, "bending point in (0, D)");
    cmd->add_option("--grid", o.grid, "grid resolution");
    cmd->add_option("--trials", o.trials, "number of random densities");
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_flag("--sharp", o.sharp, "minimize over sub-diameters");
    cmd->add_option("--mode", o.mode, "validation mode: mcp | cd");
    cmd->add_option("--out", o.out, "output path (stdout when absent)");
    cmd->add_option("--format", o.format, "output format: csv | json");
    cmd->add_option("--config", o.config_path, "JSON config file");
    cmd->add_option("--vol-tol", o.vol_tol, "oracle volume window (absolute)");
}

json load_config(const Options& o) {
    std::string path;
    if (o.config_path) {
        path = *o.config_path;
    } else if (const char* env = std::getenv("ISO_PROFILE_CONFIG")) {
        path = env;
    } else {
        return json::object();
    }
    json cfg;
    try {
        cfg = json::parse(iso::read_file(path));
    } catch (const std::exception& e) {
        throw iso::ParseError(std::string("config: ") + e.what());
    }
    if (!cfg.is_object()) throw iso::ParseError("config: expected a JSON object");
    return cfg;
}

template <class T>
T effective(const std::optional<T>& flag, const json& cfg, const char* key, T def) {
    if (flag) return *flag;
    if (cfg.contains(key)) return cfg.at(key).get<T>();
    return def;
}

struct Effective {
    iso::CurvatureParams params;
    iso::Tolerance tol;
    std::vector<double> v;
    int grid;
    int trials;
    std::uint64_t seed;
    bool sharp;
    std::string mode;
    std::string format;
    std::optional<std::string> out;
    std::optional<double> a;
    double vol_tol;
};

Effective resolve(const Options& o, const json& cfg, int default_vcount) {
    const double K = effective(o.K, cfg, "K", 0.0);
    const double N = effective(o.N, cfg, "N", 2.0);
    const double D = effective(o.D, cfg, "D", 1.0);
    iso::Tolerance tol;
    tol.quad_tol = cfg.value("quad_tol", tol.quad_tol);
    tol.root_tol = cfg.value("root_tol", tol.root_tol);
    tol.opt_tol = cfg.value("opt_tol", tol.opt_tol);
    tol.validate();

    std::vector<double> v = o.v;
    if (v.empty() && cfg.contains("v")) v = cfg.at("v").get<std::vector<double>>();
    if (v.empty()) {
        const int count = effective(o.v_count, cfg, "v_count", default_vcount);
        if (count < 0) throw std::invalid_argument("v-count must be >= 0");
        for (int i = 1; i <= count; ++i)
            v.push_back(static_cast<double>(i) / (count + 1));
    }

    Effective e{iso::CurvatureParams(K, N, D),
                tol,
                std::move(v),
                effective(o.grid, cfg, "grid", 0),
                effective(o.trials, cfg, "trials", 20),
                effective(o.seed, cfg, "seed", std::uint64_t{0}),
                o.sharp || cfg.value("sharp", false),
                effective(o.mode, cfg, "mode", std::string("mcp")),
                effective(o.format, cfg, "format", std::string("csv")),
                o.out,
                o.a,
                effective(o.vol_tol, cfg, "vol_tol", 0.0)};
    if (!e.out && cfg.contains("out")) e.out = cfg.at("out").get<std::string>();
    if (!e.a && cfg.contains("a")) e.a = cfg.at("a").get<double>();
    return e;
}

json config_echo(const Effective& e) {
    json j = {{"K", e.params.K},       {"N", e.params.N},
              {"D", e.params.D},       {"grid", e.grid},
              {"trials", e.trials},    {"seed", e.seed},
              {"sharp", e.sharp},      {"mode", e.mode},
              {"format", e.format},    {"v", e.v},
              {"quad_tol", e.tol.quad_tol}, {"root_tol", e.tol.root_tol},
              {"opt_tol", e.tol.opt_tol}};
    if (e.a) j["a"] = *e.a;
    if (e.vol_tol > 0.0) j["vol_tol"] = e.vol_tol;
    return j;
}

void emit(const std::optional<std::string>& out, const std::string& content) {
    if (out)
        iso::write_file_atomic(*out, content);
    else
        std::cout << content;
}

int cmd_profile(const Options& o) {
    const auto e = resolve(o, load_config(o), 9);
    const auto mode = e.sharp ? iso::ProfileMode::sharp : iso::ProfileMode::restricted;
    std::vector<double> vs = e.v;
    std::sort(vs.begin(), vs.end());
    const auto table = iso::profile_table(e.params, vs, mode, e.tol);
    if (e.format == "json") {
        json j = iso::profile_json(table);
        j["config"] = config_echo(e);
        emit(e.out, j.dump(2) + "\n");
    } else if (e.format == "csv") {
        emit(e.out, iso::profile_csv(table));
    } else {
        throw std::invalid_argument("format must be csv or json");
    }
    return kExitOk;
}

int cmd_density(const Options& o) {
    const auto e = resolve(o, load_config(o), 9);
    if (!e.a) throw std::invalid_argument("density: --a is required");
    const int points = e.grid > 0 ? e.grid : 401;
    if (points < 3) throw std::invalid_argument("density: --grid must be >= 3");
    const iso::ModelDensity h(e.params, *e.a, e.tol);
    // exact samples, written verbatim; very coarse grids are allowed even
    // though their trapezoidal mass drifts from 1
    std::string csv = "x,h\n";
    const double dx = e.params.D / (points - 1);
    for (int j = 0; j < points; ++j) {
        const double x = (j + 1 == points) ? e.params.D : j * dx;
        csv += iso::format_number(x);
        csv += ',';
        csv += iso::format_number(h(x));
        csv += '\n';
    }
    emit(e.out, csv);
    return kExitOk;
}

int cmd_validate(const Options& o) {
    const auto e = resolve(o, load_config(o), 9);
    const auto density = iso::parse_density_csv(iso::read_file(o.input));
    iso::ValidationReport rep;
    if (e.mode == "mcp")
        rep = iso::validate_mcp(density, e.params);
    else if (e.mode == "cd")
        rep = iso::validate_cd(density, e.params);
    else
        throw std::invalid_argument("mode must be mcp or cd");
    json j = iso::validation_json(rep);
    j["mode"] = e.mode;
    j["config"] = config_echo(e);
    emit(e.out, j.dump(2) + "\n");
    return rep.passed ? kExitOk : kExitVerdict;
}

int cmd_oracle(const Options& o) {
    const auto e = resolve(o, load_config(o), 0);
    if (e.v.size() != 1)
        throw std::invalid_argument("oracle: provide exactly one --v");
    const int grid = e.grid > 0 ? e.grid : 512;
    iso::SharpnessOptions opts;
    opts.vol_tol = e.vol_tol;
    opts.tol = e.tol;
    const auto rep =
        iso::verify_sharpness(e.params, e.v[0], e.trials, e.seed, grid, opts);
    json j = iso::oracle_json(rep);
    j["v"] = e.v[0];
    j["config"] = config_echo(e);
    emit(e.out, j.dump(2) + "\n");
    return rep.passed ? kExitOk : kExitVerdict;
}

int cmd_compare(const Options& o) {
    const auto e = resolve(o, load_config(o), 0);
    const int points = e.grid > 0 ? e.grid : 401;
    std::vector<double> vs = e.v;
    std::sort(vs.begin(), vs.end());
    std::string out = "v,a_v,value,cd_fails\n";
    for (double v : vs) {
        const auto row = iso::profile_restricted(e.params, v, e.tol);
        const iso::ModelDensity h(e.params, row.a, e.tol);
        const auto tab = iso::TabulatedDensity::sample(
            [&](double x) { return h(x); }, e.params.D, points, 1e-3);
        const auto cd = iso::validate_cd(tab, e.params);
        out += iso::format_number(v);
        out += ',';
        out += iso::format_number(row.a);
        out += ',';
        out += iso::format_number(row.value);
        out += ',';
        out += cd.passed ? "false" : "true";
        out += '\n';
    }
    emit(e.out, out);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sharp isoperimetric profiles for curvature-bounded densities"};
    app.require_subcommand(1);

    Options o;
    auto* profile = app.add_subcommand("profile", "tabulate the isoperimetric profile");
    auto* density = app.add_subcommand("density", "export a model density as CSV");
    auto* validate = app.add_subcommand("validate", "check a density CSV against the ratio or concavity conditions");
    auto* oracle = app.add_subcommand("oracle", "brute-force sharpness certification");
    auto* compare = app.add_subcommand("compare", "profile values with the concavity verdict of the extremal density");
    for (auto* cmd : {profile, density, validate, oracle, compare}) add_common(cmd, o);
    validate->add_option("input", o.input, "density CSV file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitInvalid;
    }

    try {
        if (profile->parsed()) return cmd_profile(o);
        if (density->parsed()) return cmd_density(o);
        if (validate->parsed()) return cmd_validate(o);
        if (oracle->parsed()) return cmd_oracle(o);
        if (compare->parsed()) return cmd_compare(o);
    } catch (const iso::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const iso::NumericsError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitInvalid;
}
