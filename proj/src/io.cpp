#include "chessflow/io.hpp"

#include <cmath>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace chessflow::io {

using nlohmann::json;

namespace {

json number_or_null(double x) {
    if (std::isfinite(x)) return x;
    return nullptr;
}

json parse_json(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(fmt::format("{}: invalid JSON ({})", what, e.what()));
    }
}

double require_number(const json& obj, const char* key, const char* what) {
    if (!obj.contains(key) || !obj.at(key).is_number()) {
        throw FormatError(fmt::format("{}: missing numeric field '{}'", what, key));
    }
    return obj.at(key).get<double>();
}

double parse_double(const std::string& cell, std::size_t line) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        throw FormatError(fmt::format("line {}: cannot parse number '{}'", line, cell));
    }
    return value;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

EstimateStatus parse_status(const std::string& text, std::size_t line) {
    for (const auto s : {EstimateStatus::converged, EstimateStatus::vertex_hit_truncated,
                         EstimateStatus::missing}) {
        if (text == to_string(s)) return s;
    }
    throw FormatError(fmt::format("line {}: unknown status '{}'", line, text));
}

}  // namespace

std::string num(double x) { return fmt::format("{:.12g}", x); }

DomainSpec parse_domain(const std::string& text) {
    const json doc = parse_json(text, "domain file");
    if (!doc.is_object() || !doc.contains("type") || !doc.at("type").is_string()) {
        throw FormatError("domain file: expected an object with a string 'type'");
    }
    const std::string type = doc.at("type").get<std::string>();
    const char* what = "domain file";
    if (type == "unit_square") return UnitSquareSpec{};
    if (type == "tilted_square") return TiltedSquareSpec{require_number(doc, "angle", what)};
    if (type == "trapezoid") {
        return TrapezoidSpec{require_number(doc, "bottom_width", what), require_number(doc, "top_width", what),
                             require_number(doc, "height", what)};
    }
    if (type == "rounded_square") return RoundedSquareSpec{require_number(doc, "corner_radius", what)};
    if (type == "polygon") {
        if (!doc.contains("vertices") || !doc.at("vertices").is_array()) {
            throw FormatError("domain file: polygon needs a 'vertices' array");
        }
        PolygonSpec spec;
        for (const auto& v : doc.at("vertices")) {
            if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
                throw FormatError("domain file: each vertex must be [x, y]");
            }
            spec.vertices.push_back({v[0].get<double>(), v[1].get<double>()});
        }
        return spec;
    }
    throw FormatError(fmt::format("domain file: unknown type '{}'", type));
}

std::string domain_to_json(const DomainSpec& spec) {
    json doc = std::visit(
        [](const auto& s) -> json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, UnitSquareSpec>) {
                return {{"type", "unit_square"}};
            } else if constexpr (std::is_same_v<T, PolygonSpec>) {
                json verts = json::array();
                for (const auto& v : s.vertices) verts.push_back({v.x, v.y});
                return {{"type", "polygon"}, {"vertices", verts}};
            } else if constexpr (std::is_same_v<T, TiltedSquareSpec>) {
                return {{"type", "tilted_square"}, {"angle", s.angle}};
            } else if constexpr (std::is_same_v<T, TrapezoidSpec>) {
                return {{"type", "trapezoid"},
                        {"bottom_width", s.bottom_width},
                        {"top_width", s.top_width},
                        {"height", s.height}};
            } else {
                return {{"type", "rounded_square"}, {"corner_radius", s.corner_radius}};
            }
        },
        spec);
    return doc.dump();
}

void write_orbit_csv(std::ostream& out, const Orbit& orbit) {
    out << "step,s,x,y,lift\n";
    for (std::size_t i = 0; i < orbit.points.size(); ++i) {
        const auto& p = orbit.points[i];
        out << i << ',' << num(p.s) << ',' << num(p.xy.x) << ',' << num(p.xy.y) << ',' << num(orbit.lift[i])
            << '\n';
    }
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
    out << "lambda,r,n,err_bound,status\n";
    for (std::size_t i = 0; i < sweep.lambdas.size(); ++i) {
        const auto& e = sweep.estimates[i];
        out << num(sweep.lambdas[i]) << ',' << num(e.r) << ',' << e.n << ',' << num(e.error_bound) << ','
            << to_string(e.status) << '\n';
    }
}

SweepResult read_sweep_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("sweep CSV: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "lambda,r,n,err_bound,status") {
        throw FormatError(fmt::format("sweep CSV: unexpected header '{}'", line));
    }
    SweepResult sweep;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto cells = split_csv(line);
        if (cells.size() != 5) throw FormatError(fmt::format("line {}: expected 5 columns", line_no));
        RotationEstimate e;
        e.r = parse_double(cells[1], line_no);
        const double n = parse_double(cells[2], line_no);
        if (!(n >= 0.0) || n != std::floor(n)) throw FormatError(fmt::format("line {}: bad n", line_no));
        e.n = static_cast<std::size_t>(n);
        e.error_bound = parse_double(cells[3], line_no);
        e.status = parse_status(cells[4], line_no);
        sweep.lambdas.push_back(parse_double(cells[0], line_no));
        sweep.estimates.push_back(e);
    }
    return sweep;
}

void write_plateau_json(std::ostream& out, const PlateauReport& report) {
    json list = json::array();
    for (const auto& p : report.plateaus) {
        json entry{{"lambda_lo", p.lambda_lo}, {"lambda_hi", p.lambda_hi}, {"locked_r", p.locked_r}};
        if (p.locked_rational) {
            entry["p"] = p.locked_rational->p;
            entry["q"] = p.locked_rational->q;
        } else {
            entry["p"] = nullptr;
            entry["q"] = nullptr;
        }
        list.push_back(std::move(entry));
    }
    out << list.dump(2) << '\n';
}

FieldFile parse_field(const std::string& text) {
    FieldFile result;
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
        result.empty = true;
        return result;
    }
    const json doc = parse_json(text, "field file");
    if (!doc.is_object()) throw FormatError("field file: expected an object");
    Basis basis = Basis::periodic;
    if (doc.contains("basis")) {
        if (!doc.at("basis").is_string()) throw FormatError("field file: 'basis' must be a string");
        const auto name = doc.at("basis").get<std::string>();
        if (name == "sine") {
            basis = Basis::sine;
        } else if (name != "periodic") {
            throw FormatError(fmt::format("field file: unknown basis '{}'", name));
        }
    }
    const bool has_entries = doc.contains("entries") && doc.at("entries").is_array();
    if (!has_entries || doc.at("entries").empty()) {
        result.field = FourierField(0, basis);
        result.empty = true;
        return result;
    }
    const double K_raw = require_number(doc, "K", "field file");
    if (K_raw < 0 || K_raw != std::floor(K_raw) || K_raw > 4096) {
        throw FormatError("field file: K must be a non-negative integer");
    }
    const int K = static_cast<int>(K_raw);
    result.field = FourierField(K, basis);
    for (const auto& e : doc.at("entries")) {
        const double k1 = require_number(e, "k1", "field entry");
        const double k2 = require_number(e, "k2", "field entry");
        if (k1 != std::floor(k1) || k2 != std::floor(k2)) throw FormatError("field entry: non-integer mode");
        const int i1 = static_cast<int>(k1);
        const int i2 = static_cast<int>(k2);
        if (!result.field.contains(i1, i2)) {
            throw FormatError(fmt::format("field entry ({},{}) outside |k| <= {}", i1, i2, K));
        }
        result.field.at(i1, i2) = {require_number(e, "re", "field entry"), require_number(e, "im", "field entry")};
    }
    return result;
}

void write_field_json(std::ostream& out, const FourierField& field) {
    json entries = json::array();
    field.for_each_mode([&](int k1, int k2, const cplx& c) {
        if (c != cplx{}) entries.push_back({{"k1", k1}, {"k2", k2}, {"re", c.real()}, {"im", c.imag()}});
    });
    json doc{{"K", field.K()},
             {"basis", field.basis() == Basis::sine ? "sine" : "periodic"},
             {"entries", entries}};
    out << doc.dump(2) << '\n';
}

void write_solution_csv(std::ostream& out, const FourierField& field) {
    out << "k1,k2,re,im\n";
    field.for_each_mode([&](int k1, int k2, const cplx& c) {
        if (c != cplx{}) out << k1 << ',' << k2 << ',' << num(c.real()) << ',' << num(c.imag()) << '\n';
    });
}

void write_grid_csv(std::ostream& out, const Grid& grid, Basis basis) {
    out << "# N=" << grid.N << '\n';
    out << "x1,x2,u\n";
    const double offset = basis == Basis::sine ? 0.5 : 0.0;
    for (int i1 = 0; i1 < grid.N; ++i1) {
        for (int i2 = 0; i2 < grid.N; ++i2) {
            out << num((i1 + offset) / grid.N) << ',' << num((i2 + offset) / grid.N) << ','
                << num(grid.at(i1, i2)) << '\n';
        }
    }
}

void write_diophantine_json(std::ostream& out, const DiophantineReport& report) {
    json convs = json::array();
    for (const auto& c : report.convergents) convs.push_back({{"p", c.p}, {"q", c.q}, {"err", c.err}});
    json doc{{"r", report.r},
             {"convergents", convs},
             {"beta_hat", report.beta_hat},
             {"c_hat", number_or_null(report.c_hat)},
             {"q_max", report.q_max}};
    out << doc.dump(2) << '\n';
}

void write_regularity_json(std::ostream& out, const RegularityReport& report, const ResidualReport& residual,
                           double s, double beta) {
    json doc{{"s", s},
             {"beta", beta},
             {"truncations", report.truncations},
             {"f_sums", report.f_sums},
             {"u_sums", report.u_sums},
             {"ratios", report.ratios},
             {"stabilized", report.stabilized},
             {"slack", report.slack},
             {"dominant_mode", {report.dominant_k1, report.dominant_k2}},
             {"dominant_share", report.dominant_share},
             {"min_abs_denominator", report.min_abs_denominator},
             {"residual_max_abs", residual.max_abs},
             {"residual_max_relative", residual.max_relative}};
    out << doc.dump(2) << '\n';
}

void write_analysis_json(std::ostream& out, const StaircaseAnalysis& analysis) {
    json per = json::array();
    for (const auto& r : analysis.per_epsilon) {
        per.push_back({{"eps", r.eps}, {"q", r.q}, {"N", r.N}, {"D", r.D ? json(*r.D) : json(nullptr)}});
    }
    json doc{{"S", analysis.S},
             {"per_epsilon", per},
             {"D_summary", analysis.D_summary},
             {"D_minkowski", analysis.D_minkowski}};
    out << doc.dump(2) << '\n';
}

void write_tilt_csv(std::ostream& out, const TiltStudy& study) {
    out << "angle,D,quadratic_fit_residual\n";
    for (const auto& p : study.points) {
        out << num(p.angle) << ',' << (p.D ? num(*p.D) : std::string("nan")) << ','
            << (p.D ? num(p.fit_residual) : std::string("nan")) << '\n';
    }
}

}  // namespace chessflow::io
