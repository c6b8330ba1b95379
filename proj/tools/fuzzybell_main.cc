// Copyright 2026 The fuzzybell Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// fuzzybell command-line front-end. Everything goes through the C API.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fuzzybell/fuzzybell.h"

namespace {

using json = nlohmann::ordered_json;

struct Options {
    std::string command;
    std::optional<int> n;
    std::optional<double> gain;
    std::string scheme = "dichotomic";
    int k = 0;
    int h = 0;
    bool strict = false;
    double eta = 1.0;
    std::size_t grid = 181;
    double theta_start_deg = 0.0;
    double theta_stop_deg = 180.0;
    bool mc = false;
    std::uint64_t shots = 100'000;
    std::uint64_t seed = 0x5eed;
    int workers = 1;
    double tol = 1e-6;
    int n_cap = 400;
    std::vector<int> thresholds;
    std::string pair = "++";
    int restarts = 16;
    std::string output;
    std::string format = "csv";
};

struct Failure {
    fb_status status;
    std::string message;
};

void check(fb_status status) {
    if (status != FB_OK) throw Failure{status, fb_last_error()};
}

[[noreturn]] void config_error(const std::string &message) { throw Failure{FB_E_CONFIG, message}; }

int exit_code(fb_status status) {
    switch (status) {
        case FB_OK:
            return 0;
        case FB_E_CONFIG:
            return 2;
        case FB_E_SIZE_CAP:
            return 3;
        case FB_E_UNDEFINED_CORRELATION:
        case FB_E_NUMERICAL:
            return 4;
        default:
            return 1;
    }
}

// Shortest text that parses back to the same double.
std::string shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string full_precision(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

int outcome_index(char c) {
    switch (c) {
        case '+':
            return 0;
        case '-':
            return 1;
        case '0':
            return 2;
    }
    config_error("--pair must be two characters from '+', '-', '0'");
}

bool uses_fringe(const std::string &cmd) {
    return cmd == "fringe" || cmd == "spdc-fringe" || cmd == "harmonics" || cmd == "visibility";
}

// ---------------------------------------------------------------------------
// Resolved configuration

fb_state state_of(const Options &o) {
    fb_state s{};
    if (o.n) {
        s.kind = FB_STATE_SINGLET;
        s.n = *o.n;
    } else {
        s.kind = FB_STATE_SPDC;
        s.gain = *o.gain;
        s.truncation_tolerance = o.tol;
    }
    s.pair_cap = o.n_cap;
    return s;
}

fb_scheme scheme_of(const std::string &name, int threshold, bool strict) {
    if (name == "dichotomic") return {FB_SCHEME_DICHOTOMIC, 0, 0};
    if (name == "of") return {FB_SCHEME_ORTHOGONALITY_FILTER, threshold, strict ? 1 : 0};
    if (name == "td") return {FB_SCHEME_THRESHOLD_DETECTOR, threshold, strict ? 1 : 0};
    if (name == "parity") return {FB_SCHEME_PARITY, 0, 0};
    config_error("unknown scheme '" + name + "'");
}

fb_scheme scheme_of(const Options &o) { return scheme_of(o.scheme, o.scheme == "td" ? o.h : o.k, o.strict); }

fb_sampling sampling_of(const Options &o) {
    return fb_sampling{o.mc ? 1 : 0, o.shots, o.seed, o.workers};
}

std::vector<double> grid_of(const Options &o) {
    constexpr double kDegree = std::numbers::pi / 180.0;
    std::vector<double> out(o.grid);
    const double start = o.theta_start_deg * kDegree;
    const double span = (o.theta_stop_deg - o.theta_start_deg) * kDegree;
    for (std::size_t i = 0; i < o.grid; ++i) out[i] = start + span * static_cast<double>(i) / o.grid;
    return out;
}

void validate(const Options &o) {
    if (o.n.has_value() == o.gain.has_value()) config_error("exactly one of --n or --gain must be given");
    if (o.n && *o.n < 0) config_error("--n must be non-negative");
    if (o.gain && !(std::isfinite(*o.gain) && *o.gain >= 0.0)) config_error("--gain must be finite and >= 0");
    if (o.command == "spdc-fringe" && !o.gain) config_error("spdc-fringe needs --gain");
    if (!(o.eta >= 0.0 && o.eta <= 1.0)) config_error("--eta must lie in [0, 1]");
    if (!(o.tol > 0.0 && o.tol < 1.0)) config_error("--tol must lie in (0, 1)");
    if (o.n_cap < 1) config_error("--n-cap must be >= 1");
    if (o.workers < 1) config_error("--workers must be >= 1");
    if (o.mc && o.shots == 0) config_error("--shots must be >= 1");
    if (o.k < 0 || o.h < 0) config_error("thresholds must be non-negative");
    if (o.pair.size() != 2) config_error("--pair must be two characters from '+', '-', '0'");
    outcome_index(o.pair[0]);
    outcome_index(o.pair[1]);
    if (uses_fringe(o.command)) {
        if (o.grid < 2) config_error("--grid must be >= 2");
        if (!(o.theta_stop_deg > o.theta_start_deg)) config_error("--theta-stop must exceed --theta-start");
    }
    if (o.command == "visibility") {
        if (o.scheme != "of" && o.scheme != "td") config_error("visibility needs --scheme of or td");
        if (o.thresholds.empty()) config_error("visibility needs --thresholds");
        for (int t : o.thresholds)
            if (t < 0) config_error("thresholds must be non-negative");
    }
    if (o.command == "chsh" && o.restarts < 0) config_error("--restarts must be >= 0");
    if (o.format != "csv" && o.format != "json") config_error("--format must be csv or json");
    scheme_of(o);
}

// Config block and the command line that reproduces the output.
json resolved_config(const Options &o) {
    json c;
    c["command"] = o.command;
    c["version"] = fb_version();
    if (o.n) {
        c["n"] = *o.n;
    } else {
        c["gain"] = *o.gain;
        c["truncation_tolerance"] = o.tol;
    }
    c["n_cap"] = o.n_cap;
    if (o.command != "visibility") {
        c["scheme"] = o.scheme;
        if (o.scheme == "of") c["k"] = o.k;
        if (o.scheme == "td") c["h"] = o.h;
    } else {
        c["scheme"] = o.scheme;
        c["thresholds"] = o.thresholds;
    }
    c["strict_thresholds"] = o.strict;
    c["eta"] = o.eta;
    if (uses_fringe(o.command)) {
        c["grid"] = o.grid;
        c["theta_start_deg"] = o.theta_start_deg;
        c["theta_stop_deg"] = o.theta_stop_deg;
    }
    if (o.command == "visibility" || o.command == "harmonics") c["pair"] = o.pair;
    if (o.command == "chsh") c["restarts"] = o.restarts;
    c["monte_carlo"] = o.mc;
    if (o.mc) {
        c["shots"] = o.shots;
        c["seed"] = o.seed;
    }
    c["workers"] = o.workers;

    std::ostringstream cmd;
    cmd << "fuzzybell " << o.command;
    if (o.n) {
        cmd << " --n " << *o.n;
    } else {
        cmd << " --gain " << shortest(*o.gain) << " --tol " << shortest(o.tol);
    }
    cmd << " --n-cap " << o.n_cap << " --scheme " << o.scheme;
    if (o.command == "visibility") {
        cmd << " --thresholds ";
        for (std::size_t i = 0; i < o.thresholds.size(); ++i) cmd << (i ? "," : "") << o.thresholds[i];
    } else if (o.scheme == "of") {
        cmd << " --k " << o.k;
    } else if (o.scheme == "td") {
        cmd << " --h " << o.h;
    }
    if (o.strict) cmd << " --strict-thresholds";
    cmd << " --eta " << shortest(o.eta);
    if (uses_fringe(o.command)) {
        cmd << " --grid " << o.grid << " --theta-start " << shortest(o.theta_start_deg) << " --theta-stop "
            << shortest(o.theta_stop_deg);
    }
    if (o.command == "visibility" || o.command == "harmonics") cmd << " --pair " << o.pair;
    if (o.command == "chsh") cmd << " --restarts " << o.restarts;
    if (o.mc) cmd << " --mc --shots " << o.shots << " --seed " << o.seed;
    cmd << " --workers " << o.workers << " --format " << o.format;
    c["reproduce"] = cmd.str();
    return c;
}

// ---------------------------------------------------------------------------
// Tables

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

std::string header_value(const json &v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

void write_csv(std::ostream &out, const json &config, const Table &table) {
    for (const auto &[key, value] : config.items()) out << "# " << key << ": " << header_value(value) << "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << csv_field(table.columns[i]);
    out << "\n";
    for (const auto &row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << full_precision(row[i]);
        out << "\n";
    }
}

void write_json(std::ostream &out, const json &config, const Table &table) {
    json doc;
    doc["config"] = config;
    doc["columns"] = table.columns;
    json rows = json::array();
    for (const auto &row : table.rows) {
        json r;
        for (std::size_t i = 0; i < row.size(); ++i) r[table.columns[i]] = row[i];
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    out << doc.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Commands

struct Fringe {
    fb_fringe *handle = nullptr;
    ~Fringe() { fb_fringe_destroy(handle); }
};

void sweep(const Options &o, const fb_scheme &scheme, const std::vector<double> &thetas, Fringe &out) {
    const fb_state state = state_of(o);
    const fb_sampling sampling = sampling_of(o);
    check(fb_fringe_sweep(&state, &scheme, &scheme, o.eta, thetas.data(), thetas.size(), &sampling, &out.handle));
}

Table run_fringe(const Options &o) {
    static const char *const kCells[9] = {"pp", "pm", "pz", "mp", "mm", "mz", "zp", "zm", "zz"};
    Table t;
    t.columns.push_back("theta_rad");
    for (const char *c : kCells) t.columns.push_back(std::string("p_") + c);
    if (o.mc)
        for (const char *c : kCells) t.columns.push_back(std::string("stderr_") + c);

    Fringe f;
    sweep(o, scheme_of(o), grid_of(o), f);
    for (std::size_t i = 0; i < fb_fringe_size(f.handle); ++i) {
        double theta, probs[9], se[9];
        check(fb_fringe_point_at(f.handle, i, &theta, probs, se));
        std::vector<double> row = {theta};
        row.insert(row.end(), probs, probs + 9);
        if (o.mc) row.insert(row.end(), se, se + 9);
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table run_harmonics(const Options &o) {
    Fringe f;
    sweep(o, scheme_of(o), grid_of(o), f);
    std::size_t count = 0;
    check(fb_fringe_harmonics(f.handle, outcome_index(o.pair[0]), outcome_index(o.pair[1]), nullptr, nullptr, 0,
                              &count));
    std::vector<int> index(count);
    std::vector<double> magnitude(count);
    check(fb_fringe_harmonics(f.handle, outcome_index(o.pair[0]), outcome_index(o.pair[1]), index.data(),
                              magnitude.data(), count, &count));
    Table t{{"index", "magnitude"}, {}};
    for (std::size_t i = 0; i < count; ++i) t.rows.push_back({static_cast<double>(index[i]), magnitude[i]});
    return t;
}

Table run_visibility(const Options &o) {
    const fb_state state = state_of(o);
    const auto thetas = grid_of(o);
    Table t{{"threshold", "visibility", "visibility_stderr", "success_probability"}, {}};
    for (int threshold : o.thresholds) {
        const fb_scheme scheme = scheme_of(o.scheme, threshold, o.strict);
        Fringe f;
        sweep(o, scheme, thetas, f);
        double v = 0.0, se = 0.0, success = 0.0;
        check(fb_fringe_visibility(f.handle, outcome_index(o.pair[0]), outcome_index(o.pair[1]), &v, &se));
        check(fb_success_probability(&state, &scheme, o.eta, &success));
        t.rows.push_back({static_cast<double>(threshold), v, se, success});
    }
    return t;
}

Table run_success(const Options &o) {
    const fb_state state = state_of(o);
    const fb_scheme scheme = scheme_of(o);
    double p = 0.0;
    check(fb_success_probability(&state, &scheme, o.eta, &p));
    return {{"success_probability"}, {{p}}};
}

Table run_chsh(const Options &o) {
    const fb_state state = state_of(o);
    const fb_scheme scheme = scheme_of(o);
    const fb_sampling sampling = sampling_of(o);
    fb_chsh_result r{};
    check(fb_maximize_chsh(&state, &scheme, o.eta, &sampling, o.restarts, &r));
    Table t{{"s", "a_rad", "a_prime_rad", "b_rad", "b_prime_rad", "e_ab", "e_ab_prime", "e_a_prime_b",
             "e_a_prime_b_prime", "conclusive_ab", "conclusive_ab_prime", "conclusive_a_prime_b",
             "conclusive_a_prime_b_prime"},
            {}};
    std::vector<double> row = {r.s_value, r.a, r.a_prime, r.b, r.b_prime};
    row.insert(row.end(), r.correlations, r.correlations + 4);
    row.insert(row.end(), r.conclusive, r.conclusive + 4);
    t.rows.push_back(std::move(row));
    return t;
}

void add_common(CLI::App *sub, Options &o) {
    auto *n = sub->add_option("--n", o.n, "photon-pair number of a singlet state");
    auto *g = sub->add_option("--gain", o.gain, "nonlinear gain of an SPDC state");
    n->excludes(g);
    sub->add_option("--scheme", o.scheme, "dichotomic | of | td | parity")
        ->check(CLI::IsMember({"dichotomic", "of", "td", "parity"}));
    sub->add_option("--k", o.k, "orthogonality-filter threshold");
    sub->add_option("--h", o.h, "threshold-detector threshold");
    sub->add_flag("--strict-thresholds", o.strict, "require the threshold to be exceeded, not just reached");
    sub->add_option("--eta", o.eta, "transmittivity of each arm");
    sub->add_option("--tol", o.tol, "SPDC truncation tolerance");
    sub->add_option("--n-cap", o.n_cap, "largest photon-pair number accepted");
    sub->add_flag("--mc", o.mc, "Monte Carlo loss instead of exact convolution");
    sub->add_option("--shots", o.shots, "Monte Carlo shots per Fock cell");
    sub->add_option("--seed", o.seed, "Monte Carlo seed");
    sub->add_option("--workers", o.workers, "worker threads (default $FUZZYBELL_WORKERS or 1)");
    sub->add_option("--output,-o", o.output, "output file (default stdout)");
    sub->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
}

void add_grid(CLI::App *sub, Options &o) {
    sub->add_option("--grid", o.grid, "number of angles, endpoint excluded");
    sub->add_option("--theta-start", o.theta_start_deg, "first angle in degrees");
    sub->add_option("--theta-stop", o.theta_stop_deg, "end of the angle range in degrees");
}

}  // namespace

int main(int argc, char **argv) {
    Options o;
    if (const char *env = std::getenv("FUZZYBELL_WORKERS")) {
        try {
            o.workers = std::stoi(env);
        } catch (const std::exception &) {
            std::fprintf(stderr, "fuzzybell: error[E_CONFIG]: FUZZYBELL_WORKERS is not an integer\n");
            return 2;
        }
    }

    CLI::App app{"Fuzzy polarization measurements on multi-photon entangled states"};
    // --h is the threshold-detector option, so help is long-form only.
    app.set_help_flag("--help", "print this help and exit");
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(fb_version()));

    auto *fringe = app.add_subcommand("fringe", "joint outcome probabilities over an angle grid");
    add_common(fringe, o);
    add_grid(fringe, o);
    auto *spdc = app.add_subcommand("spdc-fringe", "fringe of the SPDC state (needs --gain)");
    add_common(spdc, o);
    add_grid(spdc, o);
    auto *harmonics = app.add_subcommand("harmonics", "Fourier magnitudes of one fringe");
    add_common(harmonics, o);
    add_grid(harmonics, o);
    harmonics->add_option("--pair", o.pair, "outcome pair, default ++");
    auto *vis = app.add_subcommand("visibility", "visibility and success probability against threshold");
    add_common(vis, o);
    add_grid(vis, o);
    vis->add_option("--thresholds", o.thresholds, "comma-separated thresholds")->delimiter(',');
    vis->add_option("--pair", o.pair, "outcome pair, default ++");
    auto *chsh = app.add_subcommand("chsh", "maximize the CHSH parameter");
    add_common(chsh, o);
    chsh->add_option("--restarts", o.restarts, "random simplex restarts");
    auto *success = app.add_subcommand("success", "single-side conclusive probability");
    add_common(success, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        std::string msg = e.what();
        std::fprintf(stderr, "fuzzybell: error[E_CONFIG]: %s\n", msg.c_str());
        return 2;
    }
    o.command = app.get_subcommands().front()->get_name();

    try {
        validate(o);
        Table table;
        if (o.command == "fringe" || o.command == "spdc-fringe") table = run_fringe(o);
        else if (o.command == "harmonics") table = run_harmonics(o);
        else if (o.command == "visibility") table = run_visibility(o);
        else if (o.command == "success") table = run_success(o);
        else table = run_chsh(o);

        const json config = resolved_config(o);
        std::ostringstream text;
        if (o.format == "csv") write_csv(text, config, table);
        else write_json(text, config, table);

        if (o.output.empty()) {
            std::cout << text.str();
        } else {
            std::ofstream file(o.output, std::ios::binary);
            file << text.str();
            if (!file) config_error("cannot write " + o.output);
        }
        return 0;
    } catch (const Failure &f) {
        std::fprintf(stderr, "fuzzybell: error[%s]: %s\n", fb_status_name(f.status), f.message.c_str());
        return exit_code(f.status);
    } catch (const std::exception &e) {
        std::fprintf(stderr, "fuzzybell: error[E_INTERNAL]: %s\n", e.what());
        return 1;
    }
}
