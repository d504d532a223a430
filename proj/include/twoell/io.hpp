#pragma once

// CSV and JSON writers. Numbers are printed with %.17g so that identical
// inputs give byte-identical files and values round-trip.

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "constants.hpp"
#include "discriminant.hpp"
#include "eigenfun.hpp"
#include "geometry.hpp"
#include "oracle.hpp"
#include "spectrum.hpp"

namespace twoell::io {

using json = nlohmann::ordered_json;

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// `# `-prefixed header block; every line of `text` gets the prefix.
inline void write_header(std::ostream& os, const std::string& command, const std::string& text) {
    os << "# twoell " << version << "\n# command: " << command << "\n";
    std::size_t start = 0;
    while (start < text.size()) {
        const auto end = text.find('\n', start);
        const auto line = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
        if (!line.empty()) os << "# " << line << "\n";
        if (end == std::string::npos) break;
        start = end + 1;
    }
}

// ---------------------------------------------------------------- geometry

inline void write_grid_csv(std::ostream& os, const std::vector<polyline>& lines) {
    os << "curve_id,coord_label,coord_value,x,y\n";
    for (std::size_t i = 0; i < lines.size(); ++i)
        for (const auto& p : lines[i].points)
            os << i << ',' << lines[i].label << ',' << num(lines[i].value) << ',' << num(p.x) << ',' << num(p.y)
               << '\n';
}

inline json grid_json(const std::vector<polyline>& lines) {
    json out = json::array();
    for (const auto& l : lines) {
        json pts = json::array();
        for (const auto& p : l.points) pts.push_back({p.x, p.y});
        out.push_back({{"label", l.label}, {"value", l.value}, {"points", std::move(pts)}});
    }
    return out;
}

// ---------------------------------------------------------------- charts

inline const char* status_text(curve_status s) { return s == curve_status::complete ? "complete" : "lost"; }

inline void write_chart_csv(std::ostream& os, double alpha_sq, const std::vector<characteristic_curve>& curves) {
    for (const auto& c : curves)
        if (c.status != curve_status::complete)
            os << "# lost: n=" << c.label.text() << " parity=" << to_string(c.label.member) << " after q1="
               << num(c.points.empty() ? 0.0 : c.points.back().q1) << " (" << c.note << ")\n";
    os << "alpha_sq,label_numerator,label_denominator,branch,q1,lambda,parity\n";
    for (const auto& c : curves)
        for (const auto& p : c.points)
            os << num(alpha_sq) << ',' << c.label.numerator() << ',' << c.label.denominator() << ','
               << to_string(c.label.br()) << ',' << num(p.q1) << ',' << num(p.lambda) << ','
               << to_string(c.label.member) << '\n';
}

inline json chart_json(double alpha_sq, const std::vector<characteristic_curve>& curves) {
    json cs = json::array();
    for (const auto& c : curves) {
        json pts = json::array();
        for (const auto& p : c.points) pts.push_back({p.q1, p.lambda});
        json entry = {{"n", c.label.text()},
                      {"branch", to_string(c.label.br())},
                      {"parity", to_string(c.label.member)},
                      {"status", status_text(c.status)},
                      {"points", std::move(pts)}};
        if (!c.note.empty()) entry["note"] = c.note;
        cs.push_back(std::move(entry));
    }
    return {{"alpha_sq", alpha_sq}, {"curves", std::move(cs)}};
}

inline void write_overlay_csv(std::ostream& os, const std::vector<oracle::overlay_curve>& curves) {
    os << "order,kind,q1,lambda\n";
    for (const auto& c : curves)
        for (const auto& [q, v] : c.points)
            os << c.order << ',' << oracle::to_string(c.type) << ',' << num(q) << ',' << num(v) << '\n';
}

inline json overlay_json(const std::vector<oracle::overlay_curve>& curves) {
    json cs = json::array();
    for (const auto& c : curves) {
        json pts = json::array();
        for (const auto& [q, v] : c.points) pts.push_back({q, v});
        cs.push_back({{"order", c.order}, {"kind", oracle::to_string(c.type)}, {"points", std::move(pts)}});
    }
    return {{"alpha_sq", 1.0}, {"curves", std::move(cs)}};
}

// ---------------------------------------------------------------- eigenvalues

inline std::string members_text(const spectral_value& v) {
    std::string s;
    for (const auto& m : v.members) {
        if (!s.empty()) s += ' ';
        s += m.text() + ':' + to_string(m.member);
    }
    return s;
}

inline void write_eigenvalues_csv(std::ostream& os, const std::vector<spectral_value>& vals) {
    os << "lambda,branch,multiplicity,members\n";
    for (const auto& v : vals)
        os << num(v.lambda) << ',' << to_string(v.br) << ',' << v.multiplicity() << ',' << members_text(v) << '\n';
}

inline json eigenvalues_json(double q1, double alpha_sq, const std::vector<spectral_value>& vals) {
    json arr = json::array();
    for (const auto& v : vals) {
        json ms = json::array();
        for (const auto& m : v.members) ms.push_back({{"n", m.text()}, {"parity", to_string(m.member)}});
        arr.push_back({{"lambda", v.lambda}, {"branch", to_string(v.br)}, {"members", std::move(ms)}});
    }
    return {{"q1", q1}, {"alpha_sq", alpha_sq}, {"values", std::move(arr)}};
}

// ---------------------------------------------------------------- eigenfunctions

inline json eigenfunction_meta(const angular_eigenfunction& f) {
    const auto& k = f.coeffs;
    return {{"lambda", f.lambda},
            {"q1", f.q1},
            {"alpha_sq", f.alpha * f.alpha},
            {"n", f.label.text()},
            {"branch", to_string(f.label.br())},
            {"parity", to_string(f.member)},
            {"coeffs", {{"a1", k.a1}, {"b1", k.b1}, {"a2", k.a2}, {"b2", k.b2}}}};
}

inline void write_eigenfunction_csv(std::ostream& os, const std::vector<state2>& samples) {
    os << "theta,value,derivative\n";
    for (const auto& s : samples) os << num(s.at) << ',' << num(s.value) << ',' << num(s.slope) << '\n';
}

inline json eigenfunction_json(const angular_eigenfunction& f, const std::vector<state2>& samples) {
    json rows = json::array();
    for (const auto& s : samples) rows.push_back({s.at, s.value, s.slope});
    return {{"meta", eigenfunction_meta(f)}, {"columns", {"theta", "value", "derivative"}}, {"table", std::move(rows)}};
}

}  // namespace twoell::io
