#pragma once

// Command-line front end. Exit codes: 0 ok, 1 usage, 2 numerical failure.

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "constants.hpp"
#include "discriminant.hpp"
#include "eigenfun.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "io.hpp"
#include "oracle.hpp"
#include "spectrum.hpp"

namespace twoell::cli {

enum exit_code : int { ok = 0, usage = 1, numerical = 2 };

struct run_config {
    std::string command;
    double alpha_sq = 0.25;
    double tol = 1e-9;
    std::string format = "csv";
    std::string output = "-";
    unsigned threads = 0;
    // chart
    double q_max = 10;
    int curves = 9;
    int q_steps = 200;
    bool overlay = false;
    // eigenvalues, eigenfunction, discriminant
    double q1 = 0;
    double lambda_max = 16.5;
    std::string label = "0";
    std::string member = "even";
    int samples = 201;
    double lambda = 0;
    std::string route = "monodromy";
    // grid
    double f1 = 1;
    int n_theta = 16;
    int n_mu = 8;
    double mu_max = 1.5;
};

namespace detail {

inline double alpha_of(const run_config& c) { return std::sqrt(c.alpha_sq); }

/// "3/2" -> 3 (twice the index); "2" -> 4.
inline int parse_label(const std::string& s) {
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return 2 * std::stoi(s);
        if (s.substr(slash + 1) != "2") throw invalid_argument("curve index must be an integer or a half-integer");
        const int num = std::stoi(s.substr(0, slash));
        if (num % 2 == 0) throw invalid_argument("half-integer index needs an odd numerator");
        return num;
    } catch (const std::logic_error&) {
        throw invalid_argument("cannot parse curve index '" + s + "'");
    }
}

/// Output sink: stdout for "-", otherwise a file.
class sink {
public:
    explicit sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
        if (path != "-") {
            file_.open(path, std::ios::binary);
            if (!file_) throw invalid_argument("cannot open output file " + path);
            os_ = &file_;
        }
    }
    std::ostream& get() { return *os_; }

private:
    std::ofstream file_;
    std::ostream* os_;
};

/// Companion path for the alpha = 1 overlay: foo.csv -> foo.overlay.csv.
inline std::string overlay_path(const run_config& c) {
    const std::string ext = c.format == "json" ? ".json" : ".csv";
    if (c.output == "-") return "chart.overlay" + ext;
    std::filesystem::path p(c.output);
    return (p.parent_path() / (p.stem().string() + ".overlay" + p.extension().string())).string();
}

inline void emit_json(std::ostream& os, const run_config& c, const std::string& config_text, io::json body) {
    io::json meta = {{"version", version}, {"command", c.command}, {"config", config_text}};
    io::json doc = {{"meta", std::move(meta)}};
    for (auto& [k, v] : body.items()) doc[k] = v;
    os << doc.dump(1) << '\n';
}

// ---------------------------------------------------------------- validate

struct check_result {
    std::string name;
    double metric = 0;
    double limit = 0;
    bool pass() const { return metric < limit; }
};

inline std::vector<check_result> validation_suite() {
    std::vector<check_result> out;
    std::mt19937_64 rng(20240601);
    auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };

    {  // seam continuity
        const auto cfg = system_config::make(1, 0.5);
        double m = 0;
        for (int i = 0; i < 200; ++i) {
            const double mu = -3 + 6.0 * i / 199;
            for (double t : {half_pi, -half_pi}) {
                const auto l = to_cartesian(angular_coord::on(t, region::left), mu, cfg);
                const auto r = to_cartesian(angular_coord::on(t, region::right), mu, cfg);
                m = std::max({m, std::abs(l.x - r.x), std::abs(l.y - r.y)});
            }
        }
        out.push_back({"geometry.seam_continuity", m, 1e-15});
    }
    {  // orthogonality of the coordinates
        const auto cfg = system_config::make(1, 0.5);
        double m = 0;
        for (int i = 0; i < 50; ++i) {
            const double t = uni(-1.4, 4.5);
            if (std::abs(std::abs(t) - half_pi) < 0.05 || std::abs(t - 3 * half_pi) < 0.05) continue;
            m = std::max(m, orthogonality_residual(angular_coord::at(t), uni(0.1, 2), cfg));
        }
        out.push_back({"geometry.orthogonality", m, 1e-6});
    }
    {  // det P = 1
        double m = 0;
        for (int i = 0; i < 50; ++i) m = std::max(m, static_cast<double>(std::abs(propagate(uni(-5, 20), uni(0, 10), 0, uni(0.1, 1.5)).det() - 1)));
        out.push_back({"hill.determinant", m, 1e-9});
    }
    {  // closed form vs monodromy
        double m = 0;
        for (int i = 0; i < 100; ++i) {
            const double l = uni(-5, 25), q = uni(0, 10), a = uni(0.2, 5);
            const double d = discriminant_precise(l, q, a);
            m = std::max(m, std::abs(discriminant_closed_form_precise(l, q, a).value - d) / std::max(1.0, std::abs(d)));
        }
        out.push_back({"discriminant.route_agreement", m, 1e-9});
    }
    {  // harmonic limit
        double m = 0;
        for (double l : {-1.0, 0.0, 0.25, 0.5, 1.0, 2.25, 7.0}) {
            const double exact = l >= 0 ? std::cos(two_pi * std::sqrt(l)) : std::cosh(two_pi * std::sqrt(-l));
            m = std::max(m, std::abs(discriminant_monodromy(l, 0, 0.5) - exact) / std::max(1.0, std::abs(exact)));
        }
        out.push_back({"discriminant.harmonic_limit", m, 1e-9});
    }
    {  // alpha = 1 against the oracle
        double m = 0;
        for (int k = 0; k < 9; ++k)
            for (parity p : {parity::even, parity::odd}) {
                if (k == 0 && p == parity::odd) continue;
                const auto lab = curve_label::make(k, p);
                const double mine = characteristic_value(lab, 1.0, 1.0, 1e-11);
                const double ref = k % 2 ? oracle::half_order_value(k / 2, 1.0)
                                         : oracle::char_value(k / 2, p == parity::even ? oracle::kind::a : oracle::kind::b, 1.0).value;
                m = std::max(m, std::abs(mine - ref));
            }
        out.push_back({"spectrum.mathieu_reduction", m, 1e-6});
    }
    {  // eigenfunction construction
        double m = 0;
        std::vector<angular_eigenfunction> fs;
        for (const auto& lab : first_labels(6))
            if (lab.br() == branch::plus) fs.push_back(eigenfunction(lab, 2.0, 0.5));
        for (std::size_t i = 0; i < fs.size(); ++i) {
            m = std::max({m, matching_residual(fs[i]), bloch_residual(fs[i])});
            for (std::size_t j = 0; j < i; ++j) m = std::max(m, std::abs(orthogonality_check(fs[i], fs[j])));
        }
        out.push_back({"eigenfun.residuals_and_orthogonality", m, 1e-6});
    }
    {  // radial collapse at alpha = 1
        const state2 r0{1, 0.3, 0};
        const auto l = radial_solve(region::left, 1.5, 0.8, 1.0, r0, 2.0);
        const auto r = radial_solve(region::right, 1.5, 0.8, 1.0, r0, 2.0);
        double m = 0;
        for (std::size_t i = 0; i < l.samples.size(); ++i) m = std::max(m, std::abs(l.samples[i].value - r.samples[i].value));
        out.push_back({"eigenfun.radial_reduction", m, 1e-9});
    }
    return out;
}

}  // namespace detail

/// Runs one command. `argv` follows main's convention.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Two-elliptic coordinates: stability charts, eigenvalues and eigenfunctions"};
    app.set_config("--config", "", "TOML file with option values; flags on the command line take precedence");
    app.require_subcommand(1);
    run_config c;

    auto common = [&](CLI::App* s) {
        s->add_option("--alpha-sq", c.alpha_sq, "scale coefficient squared, alpha^2 > 0")->capture_default_str();
        s->add_option("--tol", c.tol, "root / integration tolerance in (1e-14, 1e-4)")->capture_default_str();
        s->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
        s->add_option("--output,-o", c.output, "output file, - for stdout")->capture_default_str();
    };

    auto* chart_cmd = app.add_subcommand("chart", "trace characteristic curves over [0, q_max]");
    common(chart_cmd);
    chart_cmd->add_option("--q-max", c.q_max)->capture_default_str();
    chart_cmd->add_option("--curves", c.curves, "number of curve indices n = 0, 1/2, 1, ...")->capture_default_str();
    chart_cmd->add_option("--q-steps", c.q_steps)->capture_default_str();
    chart_cmd->add_option("--threads", c.threads, "worker threads, 0 = all cores")->capture_default_str();
    chart_cmd->add_flag("--overlay-mathieu", c.overlay, "also write the alpha = 1 curves a_n, b_n to a companion file");

    auto* ev_cmd = app.add_subcommand("eigenvalues", "characteristic values at fixed q1");
    common(ev_cmd);
    ev_cmd->add_option("--q1", c.q1)->capture_default_str();
    ev_cmd->add_option("--lambda-max", c.lambda_max)->capture_default_str();

    auto* ef_cmd = app.add_subcommand("eigenfunction", "tabulate one stitched angular eigenfunction");
    common(ef_cmd);
    ef_cmd->add_option("--q1", c.q1)->capture_default_str();
    ef_cmd->add_option("--n", c.label, "curve index, e.g. 0, 1/2, 3")->capture_default_str();
    ef_cmd->add_option("--parity", c.member, "even or odd about theta = 0")
        ->check(CLI::IsMember({"even", "odd"}))
        ->capture_default_str();
    ef_cmd->add_option("--samples", c.samples, "table rows over [-pi/2, 3pi/2]")->capture_default_str();

    auto* grid_cmd = app.add_subcommand("grid", "coordinate lines as Cartesian polylines");
    common(grid_cmd);
    grid_cmd->add_option("--f1", c.f1)->capture_default_str();
    grid_cmd->add_option("--n-theta", c.n_theta)->capture_default_str();
    grid_cmd->add_option("--n-mu", c.n_mu)->capture_default_str();
    grid_cmd->add_option("--mu-max", c.mu_max)->capture_default_str();
    grid_cmd->add_option("--samples", c.samples, "points per line")->default_val(65);

    auto* d_cmd = app.add_subcommand("discriminant", "evaluate D(lambda, q1, alpha)");
    common(d_cmd);
    d_cmd->add_option("--lambda", c.lambda)->required();
    d_cmd->add_option("--q1", c.q1)->capture_default_str();
    d_cmd->add_option("--route", c.route)->check(CLI::IsMember({"monodromy", "closed-form"}))->capture_default_str();

    auto* v_cmd = app.add_subcommand("validate", "run the invariant checks and report pass/fail");
    v_cmd->add_option("--output,-o", c.output)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return usage;
    }
    c.command = app.get_subcommands().front()->get_name();

    if (!(c.alpha_sq > 0) || !std::isfinite(c.alpha_sq)) {
        err << "usage error: --alpha-sq must be positive\n";
        return usage;
    }
    if (!(c.tol > 1e-14 && c.tol < 1e-4)) {
        err << "usage error: --tol must lie in (1e-14, 1e-4)\n";
        return usage;
    }
    const std::string config_text = app.get_subcommands().front()->config_to_str(true, false);

    try {
        detail::sink sink(c.output, out);
        std::ostream& os = sink.get();
        const bool as_json = c.format == "json";
        const double alpha = detail::alpha_of(c);

        if (c.command == "chart") {
            trace_options opt;
            opt.tol = c.tol;
            const auto curves = chart(alpha, c.q_max, c.curves, c.q_steps, opt, c.threads);
            if (as_json) {
                detail::emit_json(os, c, config_text, io::chart_json(c.alpha_sq, curves));
            } else {
                io::write_header(os, c.command, config_text);
                io::write_chart_csv(os, c.alpha_sq, curves);
            }
            if (c.overlay) {
                const auto grid_q = uniform_grid(c.q_max, c.q_steps);
                const auto ov = oracle::ince_overlay(grid_q, (c.curves - 1) / 2);
                std::ofstream f(detail::overlay_path(c), std::ios::binary);
                if (!f) throw invalid_argument("cannot open overlay file " + detail::overlay_path(c));
                if (as_json) {
                    detail::emit_json(f, c, config_text, io::overlay_json(ov));
                } else {
                    io::write_header(f, c.command + " overlay (alpha = 1)", config_text);
                    io::write_overlay_csv(f, ov);
                }
            }
            for (const auto& cv : curves)
                if (cv.status != curve_status::complete) {
                    err << "curve " << cv.label.text() << " (" << to_string(cv.label.member) << ") lost: " << cv.note
                        << '\n';
                    return numerical;
                }
        } else if (c.command == "eigenvalues") {
            const auto vals = eigenvalues_at(c.q1, alpha, c.lambda_max, std::min(c.tol, 1e-10));
            if (as_json) {
                detail::emit_json(os, c, config_text, io::eigenvalues_json(c.q1, c.alpha_sq, vals));
            } else {
                io::write_header(os, c.command, config_text);
                io::write_eigenvalues_csv(os, vals);
            }
        } else if (c.command == "eigenfunction") {
            if (c.samples < 2) throw invalid_argument("--samples must be >= 2");
            const auto lab = curve_label::make(detail::parse_label(c.label),
                                               c.member == "even" ? parity::even : parity::odd);
            const auto f = eigenfunction(lab, c.q1, alpha);
            std::vector<double> th(static_cast<std::size_t>(c.samples));
            for (int i = 0; i < c.samples; ++i) th[static_cast<std::size_t>(i)] = -half_pi + two_pi * i / (c.samples - 1);
            const auto rows = sample_angular(f, th);
            if (as_json) {
                detail::emit_json(os, c, config_text, io::eigenfunction_json(f, rows));
            } else {
                io::write_header(os, c.command, config_text + "\nmetadata: " + io::eigenfunction_meta(f).dump());
                io::write_eigenfunction_csv(os, rows);
            }
        } else if (c.command == "grid") {
            const auto cfg = system_config::make(c.f1, alpha);
            const auto lines = grid(cfg, c.n_theta, c.n_mu, c.mu_max, c.samples);
            if (as_json) {
                detail::emit_json(os, c, config_text, {{"polylines", io::grid_json(lines)}});
            } else {
                io::write_header(os, c.command, config_text);
                io::write_grid_csv(os, lines);
            }
        } else if (c.command == "discriminant") {
            const auto via = c.route == "monodromy" ? route::monodromy : route::closed_form;
            const auto s = sample_discriminant(c.lambda, c.q1, alpha, via, std::max(c.tol, 1e-13));
            const auto verdict = classify(c.lambda, c.q1, alpha);
            if (as_json) {
                detail::emit_json(os, c, config_text,
                                  {{"lambda", s.lambda}, {"q1", s.q1}, {"alpha_sq", c.alpha_sq}, {"value", s.value},
                                   {"route", c.route}, {"verdict", to_string(verdict)}});
            } else {
                io::write_header(os, c.command, config_text);
                os << "lambda,q1,alpha_sq,value,route,verdict\n"
                   << io::num(s.lambda) << ',' << io::num(s.q1) << ',' << io::num(c.alpha_sq) << ','
                   << io::num(s.value) << ',' << c.route << ',' << to_string(verdict) << '\n';
            }
        } else {
            const auto results = detail::validation_suite();
            io::write_header(os, c.command, config_text);
            os << "property,metric,limit,status\n";
            bool all = true;
            for (const auto& r : results) {
                os << r.name << ',' << io::num(r.metric) << ',' << io::num(r.limit) << ','
                   << (r.pass() ? "pass" : "fail") << '\n';
                all = all && r.pass();
            }
            if (!all) return numerical;
        }
    } catch (const invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return usage;
    } catch (const error& e) {
        err << "numerical failure: " << e.what() << '\n';
        return numerical;
    }
    return ok;
}

}  // namespace twoell::cli
